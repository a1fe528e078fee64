#include "rotbif/rt4bp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "rotbif/spectrum.hpp"

namespace rotbif::rt4bp {
namespace {

constexpr double pi = std::numbers::pi;
const double s3 = std::sqrt(3.0);

// angles of the primaries around the origin
constexpr std::array<double, 3> phi = {0.0, 2.0 * pi / 3.0, -2.0 * pi / 3.0};

Eigen::Vector2d unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// cyclic successors: for primary i the "neighbors" are j = i+1, k = i+2
int cyc(int i, int shift) { return (i - 1 + shift) % 3 + 1; }

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double angle_of(const Eigen::Vector2d& v) { return std::atan2(v.y(), v.x()); }

}  // namespace

const double mass_sum = 3.0 * std::sqrt(3.0);

Eigen::Vector2d primary(int i) {
  switch (i) {
    case 1: return {1.0, 0.0};
    case 2: return {-0.5, s3 / 2.0};
    case 3: return {-0.5, -s3 / 2.0};
  }
  throw std::invalid_argument("primary: index must be 1, 2 or 3");
}

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3} {
  for (double m : m_)
    if (!(m > 0.0)) throw std::invalid_argument("MassTriple: masses must be positive");
  if (std::abs(m1 + m2 + m3 - mass_sum) > 1e-12)
    throw std::invalid_argument("MassTriple: masses must sum to 3*sqrt(3)");
}

MassTriple MassTriple::equal() { return {s3, s3, s3}; }

MassTriple MassTriple::normalized(double m1, double m2, double m3) {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !(m3 > 0.0))
    throw std::invalid_argument("MassTriple: masses must be positive");
  double scale = mass_sum / (m1 + m2 + m3);
  return {m1 * scale, m2 * scale, m3 * scale};
}

double MassTriple::m(int i) const {
  if (i < 1 || i > 3) throw std::invalid_argument("MassTriple: index must be 1, 2 or 3");
  return m_[i - 1];
}

Eigen::Vector2d MassTriple::center() const {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (int i = 1; i <= 3; ++i) c += m(i) * primary(i);
  return c / mass_sum;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::T: return "T";
    case Region::O1: return "O1";
    case Region::O2: return "O2";
    case Region::O3: return "O3";
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
  }
  return "?";
}

std::optional<Region> region_from_string(const std::string& name) {
  for (Region r : all_regions)
    if (to_string(r) == name) return r;
  return std::nullopt;
}

BoundaryCurve outline(Region r) {
  if (r == Region::T)
    return BoundaryCurve({Segment{primary(1), primary(2)}, Segment{primary(2), primary(3)},
                          Segment{primary(3), primary(1)}});
  if (r == Region::D1 || r == Region::D2 || r == Region::D3) {
    int i = static_cast<int>(r) - static_cast<int>(Region::D1) + 1;
    Eigen::Vector2d q = primary(i);
    double lo = phi[i - 1] - pi / 6.0, hi = phi[i - 1] + pi / 6.0;
    return BoundaryCurve({Segment{q, q + s3 * unit(lo)}, Arc{q, s3, lo, hi},
                          Segment{q + s3 * unit(hi), q}});
  }
  int i = static_cast<int>(r) - static_cast<int>(Region::O1) + 1;
  Eigen::Vector2d qi = primary(i), qj = primary(cyc(i, 1)), qk = primary(cyc(i, 2));
  Eigen::Vector2d tip = -2.0 * qi;
  return BoundaryCurve({Segment{qk, qj},
                        Arc{qk, s3, angle_of(qj - qk), angle_of(tip - qk)},
                        Arc{qj, s3, angle_of(tip - qj), angle_of(qk - qj)}});
}

bool contains(Region r, const Eigen::Vector2d& q) {
  if (r == Region::T) {
    for (int i = 1; i <= 3; ++i) {
      Eigen::Vector2d a = primary(i), b = primary(cyc(i, 1));
      if (cross2(b - a, q - a) <= 0.0) return false;
    }
    return true;
  }
  if (r == Region::D1 || r == Region::D2 || r == Region::D3) {
    int i = static_cast<int>(r) - static_cast<int>(Region::D1) + 1;
    Eigen::Vector2d d = q - primary(i);
    double rho = d.norm();
    if (rho <= 0.0 || rho >= s3) return false;
    double off = std::remainder(angle_of(d) - phi[i - 1], 2.0 * pi);
    return std::abs(off) < pi / 6.0;
  }
  int i = static_cast<int>(r) - static_cast<int>(Region::O1) + 1;
  if (q.dot(primary(i)) >= -0.5) return false;
  return (q - primary(cyc(i, 1))).norm() < s3 && (q - primary(cyc(i, 2))).norm() < s3;
}

std::optional<Region> locate(const Eigen::Vector2d& q) {
  for (Region r : all_regions)
    if (contains(r, q)) return r;
  return std::nullopt;
}

namespace {

void check_distance(double r) {
  if (r < 1e-9) throw std::domain_error("potential: point too close to a primary");
}

}  // namespace

double potential(const Eigen::Vector2d& q, const MassTriple& m) {
  double v = -0.5 * (q - m.center()).squaredNorm();
  for (int i = 1; i <= 3; ++i) {
    double r = (q - primary(i)).norm();
    check_distance(r);
    v -= m.m(i) / r;
  }
  return v;
}

double potential(const Eigen::Vector3d& q, const MassTriple& m) {
  double v = -0.5 * (q.head<2>() - m.center()).squaredNorm();
  for (int i = 1; i <= 3; ++i) {
    Eigen::Vector3d d = q - (Eigen::Vector3d() << primary(i), 0.0).finished();
    check_distance(d.norm());
    v -= m.m(i) / d.norm();
  }
  return v;
}

std::pair<Eigen::Vector2d, SymMatrix> grad_hess(const Eigen::Vector2d& q, const MassTriple& m) {
  Eigen::Vector2d g = -(q - m.center());
  Eigen::Matrix2d h = -Eigen::Matrix2d::Identity();
  for (int i = 1; i <= 3; ++i) {
    Eigen::Vector2d d = q - primary(i);
    double r = d.norm();
    check_distance(r);
    double r3 = r * r * r;
    g += m.m(i) / r3 * d;
    h += m.m(i) * (Eigen::Matrix2d::Identity() / r3 - 3.0 / (r3 * r * r) * d * d.transpose());
  }
  return {g, SymMatrix::from_dense(h)};
}

std::pair<Eigen::Vector3d, SymMatrix> grad_hess(const Eigen::Vector3d& q, const MassTriple& m) {
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  g.head<2>() = -(q.head<2>() - m.center());
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h.topLeftCorner<2, 2>() = -Eigen::Matrix2d::Identity();
  for (int i = 1; i <= 3; ++i) {
    Eigen::Vector3d d = q - (Eigen::Vector3d() << primary(i), 0.0).finished();
    double r = d.norm();
    check_distance(r);
    double r3 = r * r * r;
    g += m.m(i) / r3 * d;
    h += m.m(i) * (Eigen::Matrix3d::Identity() / r3 - 3.0 / (r3 * r * r) * d * d.transpose());
  }
  return {g, SymMatrix::from_dense(h)};
}

RegionEmpty::RegionEmpty(Region r)
    : std::runtime_error("find_librations: region " + to_string(r) +
                         " lost a zero (contradicts the degree count)"),
      region(r) {}

namespace {

int thread_count() {
  if (const char* env = std::getenv("ROTBIF_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::optional<Eigen::Vector2d> newton(const MassTriple& m, Eigen::Vector2d q) {
  double gnorm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 50; ++iter) {
    for (int i = 1; i <= 3; ++i)
      if ((q - primary(i)).norm() < 1e-6) return std::nullopt;
    auto [g, h] = grad_hess(q, m);
    gnorm = g.norm();
    if (gnorm < 1e-12) return q;
    Eigen::Matrix2d hd = h.dense();
    if (std::abs(hd.determinant()) < 1e-14) return std::nullopt;
    Eigen::Vector2d step = hd.lu().solve(-g);
    double scale = 1.0;
    int halvings = 0;
    while (true) {
      Eigen::Vector2d trial = q + scale * step;
      bool safe = trial.norm() < 5.0;
      for (int i = 1; safe && i <= 3; ++i) safe = (trial - primary(i)).norm() > 1e-6;
      if (safe && grad_hess(trial, m).first.norm() < gnorm) {
        q = trial;
        break;
      }
      if (++halvings > 10) return std::nullopt;
      scale *= 0.5;
    }
  }
  return gnorm < 1e-11 ? std::optional<Eigen::Vector2d>(q) : std::nullopt;
}

}  // namespace

std::vector<LibrationPoint> find_librations(const MassTriple& m) {
  std::vector<Eigen::Vector2d> seeds;
  for (int ix = 0; ix <= 270; ++ix)
    for (int iy = 0; iy <= 270; ++iy) {
      Eigen::Vector2d q(-2.7 + 0.02 * ix, -2.7 + 0.02 * iy);
      if (locate(q)) seeds.push_back(q);
    }

  std::vector<std::optional<Eigen::Vector2d>> hits(seeds.size());
  int nthreads = std::max<int>(1, std::min<int>(thread_count(), static_cast<int>(seeds.size())));
  std::vector<std::thread> pool;
  std::size_t chunk = (seeds.size() + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      std::size_t lo = t * chunk, hi = std::min(seeds.size(), lo + chunk);
      for (std::size_t s = lo; s < hi; ++s) {
        try {
          hits[s] = newton(m, seeds[s]);
        } catch (const std::domain_error&) {
          hits[s] = std::nullopt;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  std::vector<Eigen::Vector2d> zeros;
  for (const auto& h : hits) {
    if (!h) continue;
    bool dup = false;
    for (const Eigen::Vector2d& z : zeros)
      if ((z - *h).norm() < 1e-7) dup = true;
    if (!dup) zeros.push_back(*h);
  }
  std::sort(zeros.begin(), zeros.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });

  std::vector<LibrationPoint> points;
  for (const Eigen::Vector2d& z : zeros) {
    std::optional<Region> reg = locate(z);
    if (!reg)
      throw std::runtime_error("find_librations: converged zero outside the tracked regions");
    Eigen::Vector3d z3(z.x(), z.y(), 0.0);
    auto [g, h] = grad_hess(z3, m);
    if (g.head<2>().norm() >= 1e-11)
      throw std::runtime_error("find_librations: gradient tolerance not met");
    HessianData hd = HessianData::spatial(h);
    double b1 = hd.beta1(), b2 = hd.beta2(), b3 = hd.beta3();
    if (!(b3 > 0.0)) throw std::runtime_error("find_librations: beta3 must be positive");
    bool degenerate = std::abs(b1 * b2) < 1e-8;
    int ib;
    if (degenerate) {
      PlanarField field{
          [&m](const Eigen::Vector2d& p) { return grad_hess(p, m).first; }, 1e-12};
      ib = brouwer_index(field, z, 1e-3);
    } else {
      ib = b1 * b2 > 0.0 ? 1 : -1;
    }
    LibrationPoint pt{z,  *reg, b1, b2, b3, ib, degenerate,
                      gamma3(b1, b2, b3, ib, 2.0 * pi / std::sqrt(b3)),
                      emanation_report(b1, b2, b3, ib)};
    points.push_back(std::move(pt));
  }

  for (Region r : all_regions) {
    bool any = false;
    for (const LibrationPoint& p : points) any = any || p.region == r;
    if (!any) throw RegionEmpty(r);
  }
  return points;
}

Analysis analyze(const MassTriple& m) {
  Analysis a{find_librations(m), {}, 0};
  PlanarField field{[&m](const Eigen::Vector2d& p) { return grad_hess(p, m).first; }, 1e-9};
  for (std::size_t r = 0; r < all_regions.size(); ++r) {
    RegionSummary& sum = a.regions[r];
    sum.region = all_regions[r];
    sum.index_sum = 0;
    BoundaryCurve rim = outline(sum.region);
    double clearance = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < a.points.size(); ++p) {
      if (a.points[p].region != sum.region) continue;
      sum.points.push_back(p);
      sum.index_sum += a.points[p].brouwer_index;
      clearance = std::min(clearance, distance_to_curve(rim, a.points[p].position));
    }
    sum.eps = std::min(0.05, 0.45 * clearance);
    if (!(sum.eps > 1e-4))
      throw std::runtime_error("analyze: a point sits on the boundary of " + to_string(sum.region));
    sum.degree = winding_degree(field, shrunk_boundary(rim, sum.eps));
    if (sum.degree != sum.index_sum)
      throw std::runtime_error("analyze: degree of " + to_string(sum.region) +
                               " disagrees with the index sum");
  }
  for (const LibrationPoint& p : a.points)
    if (p.gamma3_vertical != 0) ++a.nonzero_gamma3;
  return a;
}

}  // namespace rotbif::rt4bp
