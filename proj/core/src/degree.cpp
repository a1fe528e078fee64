#include "rotbif/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace rotbif {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double join_tol = 1e-12;   // junction closure
constexpr double geom_tol = 1e-9;    // intersection detection
constexpr double share_tol = 1e-6;   // how close to a junction a touch may sit

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double wrap_nonneg(double x) {
  double d = std::fmod(x, two_pi);
  return d < 0.0 ? d + two_pi : d;
}

bool angle_in_arc(const Arc& arc, double phi, double tol) {
  double lo = std::min(arc.angle0, arc.angle1);
  double hi = std::max(arc.angle0, arc.angle1);
  return lo - tol + wrap_nonneg(phi - lo + tol) <= hi + tol;
}

void seg_seg(const Segment& s1, const Segment& s2, std::vector<Eigen::Vector2d>& out) {
  Eigen::Vector2d d1 = s1.b - s1.a, d2 = s2.b - s2.a;
  Eigen::Vector2d r = s2.a - s1.a;
  double den = cross2(d1, d2);
  if (std::abs(den) > geom_tol * d1.norm() * d2.norm()) {
    double t = cross2(r, d2) / den;
    double u = cross2(r, d1) / den;
    double tol1 = geom_tol / d1.norm(), tol2 = geom_tol / d2.norm();
    if (t > -tol1 && t < 1.0 + tol1 && u > -tol2 && u < 1.0 + tol2)
      out.push_back(s1.a + t * d1);
    return;
  }
  if (std::abs(cross2(r, d1)) > geom_tol * d1.norm()) return;   // parallel, distinct lines
  double inv = 1.0 / d1.squaredNorm();
  double u0 = (s2.a - s1.a).dot(d1) * inv;
  double u1 = (s2.b - s1.a).dot(d1) * inv;
  double lo = std::max(0.0, std::min(u0, u1));
  double hi = std::min(1.0, std::max(u0, u1));
  if (hi < lo - geom_tol / d1.norm()) return;
  out.push_back(s1.a + lo * d1);
  out.push_back(s1.a + hi * d1);
}

void seg_arc(const Segment& s, const Arc& a, std::vector<Eigen::Vector2d>& out) {
  Eigen::Vector2d d = s.b - s.a;
  Eigen::Vector2d m = s.a - a.center;
  double qa = d.squaredNorm();
  double qb = 2.0 * m.dot(d);
  double qc = m.squaredNorm() - a.radius * a.radius;
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < -8.0 * qa * a.radius * geom_tol) return;
  double sq = std::sqrt(std::max(disc, 0.0));
  double len = std::sqrt(qa);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
    if (t == prev) break;   // tangency, one root
    prev = t;
    if (t < -geom_tol / len || t > 1.0 + geom_tol / len) continue;
    Eigen::Vector2d p = s.a + t * d;
    double phi = std::atan2(p.y() - a.center.y(), p.x() - a.center.x());
    if (angle_in_arc(a, phi, geom_tol / a.radius)) out.push_back(p);
  }
}

void arc_arc(const Arc& a1, const Arc& a2, std::vector<Eigen::Vector2d>& out) {
  Eigen::Vector2d delta = a2.center - a1.center;
  double d = delta.norm();
  double tol1 = geom_tol / a1.radius, tol2 = geom_tol / a2.radius;
  if (d < join_tol) {
    if (std::abs(a1.radius - a2.radius) > geom_tol) return;
    // coincident carrier circles: probe endpoints and midpoint of each arc
    for (const Arc* probe : {&a2, &a1}) {
      const Arc& host = probe == &a2 ? a1 : a2;
      double htol = probe == &a2 ? tol1 : tol2;
      for (double t : {0.0, 0.5, 1.0}) {
        double phi = probe->angle0 + t * (probe->angle1 - probe->angle0);
        if (angle_in_arc(host, phi, htol))
          out.push_back(probe->center + probe->radius *
                                            Eigen::Vector2d(std::cos(phi), std::sin(phi)));
      }
    }
    return;
  }
  if (d > a1.radius + a2.radius + geom_tol) return;
  if (d < std::abs(a1.radius - a2.radius) - geom_tol) return;
  double along = (d * d + a1.radius * a1.radius - a2.radius * a2.radius) / (2.0 * d);
  double h = std::sqrt(std::max(a1.radius * a1.radius - along * along, 0.0));
  Eigen::Vector2d u = delta / d;
  Eigen::Vector2d v(-u.y(), u.x());
  Eigen::Vector2d base = a1.center + along * u;
  for (double side : {1.0, -1.0}) {
    Eigen::Vector2d p = base + side * h * v;
    double p1 = std::atan2(p.y() - a1.center.y(), p.x() - a1.center.x());
    double p2 = std::atan2(p.y() - a2.center.y(), p.x() - a2.center.x());
    if (angle_in_arc(a1, p1, tol1) && angle_in_arc(a2, p2, tol2)) out.push_back(p);
    if (h == 0.0) break;
  }
}

std::vector<Eigen::Vector2d> piece_intersections(const CurvePiece& p, const CurvePiece& q) {
  std::vector<Eigen::Vector2d> out;
  const Segment* ps = std::get_if<Segment>(&p);
  const Segment* qs = std::get_if<Segment>(&q);
  if (ps && qs)
    seg_seg(*ps, *qs, out);
  else if (ps)
    seg_arc(*ps, std::get<Arc>(q), out);
  else if (qs)
    seg_arc(*qs, std::get<Arc>(p), out);
  else
    arc_arc(std::get<Arc>(p), std::get<Arc>(q), out);
  return out;
}

}  // namespace

Eigen::Vector2d piece_point(const CurvePiece& p, double t) {
  if (const Segment* s = std::get_if<Segment>(&p)) return s->a + t * (s->b - s->a);
  const Arc& a = std::get<Arc>(p);
  double phi = a.angle0 + t * (a.angle1 - a.angle0);
  return a.center + a.radius * Eigen::Vector2d(std::cos(phi), std::sin(phi));
}

Eigen::Vector2d piece_start(const CurvePiece& p) { return piece_point(p, 0.0); }
Eigen::Vector2d piece_end(const CurvePiece& p) { return piece_point(p, 1.0); }

BoundaryCurve::BoundaryCurve(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("BoundaryCurve: no pieces");
  for (const CurvePiece& p : pieces_) {
    if (const Segment* s = std::get_if<Segment>(&p)) {
      if ((s->b - s->a).norm() <= join_tol)
        throw std::invalid_argument("BoundaryCurve: degenerate segment");
    } else {
      const Arc& a = std::get<Arc>(p);
      double span = std::abs(a.angle1 - a.angle0);
      if (a.radius <= join_tol || span <= join_tol || span > two_pi + 1e-9)
        throw std::invalid_argument("BoundaryCurve: degenerate arc");
    }
  }
  std::size_t n = pieces_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((piece_end(pieces_[i]) - piece_start(pieces_[(i + 1) % n])).norm() > join_tol)
      throw std::invalid_argument("BoundaryCurve: not closed");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Eigen::Vector2d> shared;
      if (j == i + 1) shared.push_back(piece_start(pieces_[j]));
      if (i == 0 && j == n - 1) shared.push_back(piece_start(pieces_[0]));
      for (const Eigen::Vector2d& p : piece_intersections(pieces_[i], pieces_[j])) {
        bool at_junction = false;
        for (const Eigen::Vector2d& s : shared)
          if ((p - s).norm() <= share_tol) at_junction = true;
        if (!at_junction) throw std::invalid_argument("BoundaryCurve: not simple");
      }
    }
  }
}

BoundaryCurve BoundaryCurve::reversed() const {
  std::vector<CurvePiece> rev;
  rev.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    if (const Segment* s = std::get_if<Segment>(&*it)) {
      rev.push_back(Segment{s->b, s->a});
    } else {
      const Arc& a = std::get<Arc>(*it);
      rev.push_back(Arc{a.center, a.radius, a.angle1, a.angle0});
    }
  }
  return BoundaryCurve(std::move(rev));
}

BoundaryCurve BoundaryCurve::circle(const Eigen::Vector2d& center, double radius) {
  return BoundaryCurve({Arc{center, radius, 0.0, two_pi}});
}

int winding_degree(const PlanarField& f, const BoundaryCurve& curve,
                   int initial_samples_per_piece) {
  if (!f.eval) throw std::invalid_argument("winding_degree: field is not callable");
  if (f.zero_free_margin <= 0.0)
    throw std::invalid_argument("winding_degree: margin must be positive");
  if (initial_samples_per_piece < 1)
    throw std::invalid_argument("winding_degree: need at least one sample per piece");

  long used = 0;
  const long budget = 1L << 20;
  auto sample = [&](const CurvePiece& p, double t) {
    if (++used > budget) throw std::runtime_error("winding_degree: cannot certify winding");
    Eigen::Vector2d v = f.eval(piece_point(p, t));
    if (!(v.norm() >= f.zero_free_margin))
      throw std::runtime_error("winding_degree: zero on contour");
    return v;
  };

  struct Span {
    double t0, t1;
    Eigen::Vector2d v0, v1;
  };
  double total = 0.0;
  for (const CurvePiece& p : curve.pieces()) {
    std::vector<Span> work;
    double step = 1.0 / initial_samples_per_piece;
    Eigen::Vector2d prev = sample(p, 0.0);
    for (int k = 1; k <= initial_samples_per_piece; ++k) {
      double t = k == initial_samples_per_piece ? 1.0 : k * step;
      Eigen::Vector2d cur = sample(p, t);
      work.push_back({(k - 1) * step, t, prev, cur});
      prev = cur;
    }
    while (!work.empty()) {
      Span s = work.back();
      work.pop_back();
      double inc = std::atan2(cross2(s.v0, s.v1), s.v0.dot(s.v1));
      if (std::abs(inc) < 0.5 * pi) {
        total += inc;
        continue;
      }
      double tm = 0.5 * (s.t0 + s.t1);
      Eigen::Vector2d vm = sample(p, tm);
      work.push_back({s.t0, tm, s.v0, vm});
      work.push_back({tm, s.t1, vm, s.v1});
    }
  }
  double w = total / two_pi;
  long k = std::lround(w);
  if (std::abs(w - static_cast<double>(k)) > 1e-6)
    throw std::runtime_error("winding_degree: cannot certify winding");
  return static_cast<int>(k);
}

int brouwer_index(const PlanarField& f, const Eigen::Vector2d& q0, double r) {
  if (r <= 0.0) throw std::invalid_argument("brouwer_index: radius must be positive");
  if (!f.eval) throw std::invalid_argument("brouwer_index: field is not callable");
  for (double frac : {0.25, 0.5, 0.75}) {
    for (int k = 0; k < 64; ++k) {
      double phi = two_pi * k / 64.0;
      Eigen::Vector2d p = q0 + frac * r * Eigen::Vector2d(std::cos(phi), std::sin(phi));
      if (!(f.eval(p).norm() >= f.zero_free_margin))
        throw std::runtime_error("brouwer_index: zero between center and circle");
    }
  }
  return winding_degree(f, BoundaryCurve::circle(q0, r));
}

namespace {

struct LineCarrier {
  Eigen::Vector2d p;
  Eigen::Vector2d u;   // unit direction of travel
};
struct CircleCarrier {
  Eigen::Vector2d c;
  double r;
  int orient;   // +1 counterclockwise travel, -1 clockwise
};
using Carrier = std::variant<LineCarrier, CircleCarrier>;

Carrier offset_carrier(const CurvePiece& piece, double eps) {
  if (const Segment* s = std::get_if<Segment>(&piece)) {
    Eigen::Vector2d u = (s->b - s->a).normalized();
    return LineCarrier{s->a + eps * Eigen::Vector2d(-u.y(), u.x()), u};
  }
  const Arc& a = std::get<Arc>(piece);
  int orient = a.angle1 > a.angle0 ? 1 : -1;
  double r = a.radius - orient * eps;
  if (r <= geom_tol) throw std::invalid_argument("shrunk_boundary: epsilon too large");
  return CircleCarrier{a.center, r, orient};
}

Eigen::Vector2d project_to_carrier(const Carrier& c, const Eigen::Vector2d& q) {
  if (const LineCarrier* l = std::get_if<LineCarrier>(&c))
    return l->p + (q - l->p).dot(l->u) * l->u;
  const CircleCarrier& cc = std::get<CircleCarrier>(c);
  return cc.c + cc.r * (q - cc.c).normalized();
}

std::vector<Eigen::Vector2d> carrier_intersections(const Carrier& c1, const Carrier& c2) {
  std::vector<Eigen::Vector2d> out;
  const LineCarrier* l1 = std::get_if<LineCarrier>(&c1);
  const LineCarrier* l2 = std::get_if<LineCarrier>(&c2);
  if (l1 && l2) {
    double den = cross2(l1->u, l2->u);
    if (std::abs(den) < geom_tol) return out;
    out.push_back(l1->p + cross2(l2->p - l1->p, l2->u) / den * l1->u);
    return out;
  }
  if (l1 || l2) {
    const LineCarrier& l = l1 ? *l1 : *l2;
    const CircleCarrier& cc = l1 ? std::get<CircleCarrier>(c2) : std::get<CircleCarrier>(c1);
    Eigen::Vector2d m = l.p - cc.c;
    double b = m.dot(l.u);
    double disc = b * b - (m.squaredNorm() - cc.r * cc.r);
    if (disc < -geom_tol * cc.r) return out;
    double sq = std::sqrt(std::max(disc, 0.0));
    out.push_back(l.p + (-b - sq) * l.u);
    if (sq > 0.0) out.push_back(l.p + (-b + sq) * l.u);
    return out;
  }
  const CircleCarrier& a = std::get<CircleCarrier>(c1);
  const CircleCarrier& b = std::get<CircleCarrier>(c2);
  Eigen::Vector2d delta = b.c - a.c;
  double d = delta.norm();
  if (d < join_tol) return out;
  if (d > a.r + b.r + geom_tol || d < std::abs(a.r - b.r) - geom_tol) return out;
  double along = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
  double h = std::sqrt(std::max(a.r * a.r - along * along, 0.0));
  Eigen::Vector2d u = delta / d;
  Eigen::Vector2d v(-u.y(), u.x());
  out.push_back(a.c + along * u + h * v);
  if (h > 0.0) out.push_back(a.c + along * u - h * v);
  return out;
}

}  // namespace

BoundaryCurve shrunk_boundary(const BoundaryCurve& outline, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("shrunk_boundary: epsilon must be positive");
  const std::vector<CurvePiece>& pieces = outline.pieces();
  std::size_t n = pieces.size();
  std::vector<Carrier> near(n), far(n);
  for (std::size_t i = 0; i < n; ++i) {
    near[i] = offset_carrier(pieces[i], eps);
    far[i] = offset_carrier(pieces[i], 2.0 * eps);
  }

  std::vector<Eigen::Vector2d> t_end(n), t_start(n);
  std::vector<std::optional<Eigen::Vector2d>> fillet(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    Eigen::Vector2d corner = piece_end(pieces[i]);
    Eigen::Vector2d end_i = project_to_carrier(near[i], corner);
    Eigen::Vector2d start_j = project_to_carrier(near[j], corner);
    if ((end_i - start_j).norm() <= geom_tol) {
      t_end[i] = end_i;   // tangent junction, nothing to round
      t_start[j] = end_i;
      continue;
    }
    std::vector<Eigen::Vector2d> cands = carrier_intersections(far[i], far[j]);
    if (cands.empty()) throw std::invalid_argument("shrunk_boundary: epsilon too large");
    Eigen::Vector2d center = cands[0];
    for (const Eigen::Vector2d& c : cands)
      if ((c - corner).norm() < (center - corner).norm()) center = c;
    fillet[i] = center;
    t_end[i] = project_to_carrier(near[i], center);
    t_start[j] = project_to_carrier(near[j], center);
  }

  std::vector<CurvePiece> out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (const LineCarrier* l = std::get_if<LineCarrier>(&near[i])) {
      if ((t_end[i] - t_start[i]).dot(l->u) <= geom_tol)
        throw std::invalid_argument("shrunk_boundary: epsilon too large");
      out.push_back(Segment{t_start[i], t_end[i]});
    } else {
      const CircleCarrier& cc = std::get<CircleCarrier>(near[i]);
      const Arc& orig = std::get<Arc>(pieces[i]);
      double f0 = std::atan2(t_start[i].y() - cc.c.y(), t_start[i].x() - cc.c.x());
      double raw = std::atan2(t_end[i].y() - cc.c.y(), t_end[i].x() - cc.c.x());
      double span = cc.orient > 0 ? wrap_nonneg(raw - f0) : -wrap_nonneg(f0 - raw);
      double span_orig = orig.angle1 - orig.angle0;
      if (std::abs(span) <= geom_tol && std::abs(span_orig) >= two_pi - 1e-9)
        span = cc.orient * two_pi;   // untouched full circle
      if (std::abs(span) <= geom_tol || std::abs(span) > std::abs(span_orig) + 1e-6)
        throw std::invalid_argument("shrunk_boundary: epsilon too large");
      out.push_back(Arc{cc.c, cc.r, f0, f0 + span});
    }
    if (fillet[i]) {
      std::size_t j = (i + 1) % n;
      Eigen::Vector2d c = *fillet[i];
      double a0 = std::atan2(t_end[i].y() - c.y(), t_end[i].x() - c.x());
      double span = wrap_nonneg(std::atan2(t_start[j].y() - c.y(), t_start[j].x() - c.x()) - a0);
      if (span >= pi) throw std::invalid_argument("shrunk_boundary: corner not convex");
      out.push_back(Arc{c, eps, a0, a0 + span});
    }
  }
  return BoundaryCurve(std::move(out));
}

double distance_to_curve(const BoundaryCurve& curve, const Eigen::Vector2d& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const CurvePiece& piece : curve.pieces()) {
    if (const Segment* s = std::get_if<Segment>(&piece)) {
      Eigen::Vector2d d = s->b - s->a;
      double t = std::clamp((q - s->a).dot(d) / d.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (q - (s->a + t * d)).norm());
    } else {
      const Arc& a = std::get<Arc>(piece);
      Eigen::Vector2d w = q - a.center;
      double phi = std::atan2(w.y(), w.x());
      if (angle_in_arc(a, phi, 0.0))
        best = std::min(best, std::abs(w.norm() - a.radius));
      best = std::min(best, (q - piece_start(piece)).norm());
      best = std::min(best, (q - piece_end(piece)).norm());
    }
  }
  return best;
}

}  // namespace rotbif
