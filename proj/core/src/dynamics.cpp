#include "rotbif/dynamics.hpp"

// The aggregate eigen.hpp adapter pulls in a dispatcher header that is broken
// in this boost release; the algebra and resize pieces are all we need since
// the stepper below names vector_space_algebra explicitly.
#include <boost/numeric/odeint/external/eigen/eigen_algebra.hpp>
#include <boost/numeric/odeint/external/eigen/eigen_resize.hpp>
#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>

#include "rotbif/spectrum.hpp"

namespace rotbif {

namespace {

constexpr double pi = std::numbers::pi;
const double inf = std::numeric_limits<double>::infinity();

void check_config_dim(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("dynamics: dimension must be 2 or 3");
}

int config_dim_of_state(const Eigen::VectorXd& u) {
  if (u.size() == 4) return 2;
  if (u.size() == 6) return 3;
  throw std::invalid_argument("dynamics: state must have 4 or 6 components");
}

// alpha_n q in place: (x, y, z) -> (-y, x, 0)
Eigen::VectorXd alpha_apply(const Eigen::VectorXd& q) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(q.size());
  r[0] = -q[1];
  r[1] = q[0];
  return r;
}

}  // namespace

double HamiltonianSystem::hamiltonian(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * n) throw std::invalid_argument("hamiltonian: wrong state size");
  auto p = u.head(n);
  auto q = u.tail(n);
  double cross = p[1] * q[0] - p[0] * q[1];   // <p, alpha q>
  return 0.5 * p.squaredNorm() + cross + v(q) + 0.5 * (q[0] * q[0] + q[1] * q[1]);
}

void HamiltonianSystem::rhs_into(const Eigen::VectorXd& u, Eigen::VectorXd& du) const {
  du.resize(2 * n);
  Eigen::VectorXd g = grad_v(u.tail(n));
  // p' = alpha p - V'(q) + alpha^2 q, q' = p + alpha q
  du[0] = -u[1] - g[0] - u[n];
  du[1] = u[0] - g[1] - u[n + 1];
  du[n] = u[0] - u[n + 1];
  du[n + 1] = u[1] + u[n];
  if (n == 3) {
    du[2] = -g[2];
    du[5] = u[2];
  }
}

Eigen::VectorXd HamiltonianSystem::rhs(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * n) throw std::invalid_argument("rhs: wrong state size");
  Eigen::VectorXd du;
  rhs_into(u, du);
  return du;
}

Eigen::VectorXd HamiltonianSystem::equilibrium_state(const Eigen::VectorXd& q0) const {
  if (q0.size() != n) throw std::invalid_argument("equilibrium_state: wrong size");
  Eigen::VectorXd u(2 * n);
  u.head(n) = -alpha_apply(q0);
  u.tail(n) = q0;
  return u;
}

Eigen::MatrixXd HamiltonianSystem::hamiltonian_hessian(const Eigen::VectorXd& q0) const {
  if (q0.size() != n) throw std::invalid_argument("hamiltonian_hessian: wrong size");
  Eigen::MatrixXd al = alpha(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  a.topRightCorner(n, n) = al;
  a.bottomLeftCorner(n, n) = al.transpose();
  a.bottomRightCorner(n, n) = hess_v(q0).dense() - al * al;
  return a;
}

HamiltonianSystem quadratic(double beta1, double beta2) {
  HamiltonianSystem s;
  s.n = 2;
  s.v = [beta1, beta2](const Eigen::VectorXd& q) {
    return 0.5 * (beta1 * q[0] * q[0] + beta2 * q[1] * q[1]);
  };
  s.grad_v = [beta1, beta2](const Eigen::VectorXd& q) {
    Eigen::VectorXd g(2);
    g << beta1 * q[0], beta2 * q[1];
    return g;
  };
  s.hess_v = [beta1, beta2](const Eigen::VectorXd&) {
    Eigen::VectorXd d(2);
    d << beta1, beta2;
    return SymMatrix::diagonal(d);
  };
  s.boundary_distance = [](const Eigen::VectorXd&) { return inf; };
  s.equilibria = {Eigen::VectorXd::Zero(2)};
  return s;
}

HamiltonianSystem quadratic(double beta1, double beta2, double beta3) {
  HamiltonianSystem s;
  s.n = 3;
  s.v = [beta1, beta2, beta3](const Eigen::VectorXd& q) {
    return 0.5 * (beta1 * q[0] * q[0] + beta2 * q[1] * q[1] + beta3 * q[2] * q[2]);
  };
  s.grad_v = [beta1, beta2, beta3](const Eigen::VectorXd& q) {
    Eigen::VectorXd g(3);
    g << beta1 * q[0], beta2 * q[1], beta3 * q[2];
    return g;
  };
  s.hess_v = [beta1, beta2, beta3](const Eigen::VectorXd&) {
    Eigen::VectorXd d(3);
    d << beta1, beta2, beta3;
    return SymMatrix::diagonal(d);
  };
  s.boundary_distance = [](const Eigen::VectorXd&) { return inf; };
  s.equilibria = {Eigen::VectorXd::Zero(3)};
  return s;
}

HamiltonianSystem rt4bp_planar(const rt4bp::MassTriple& m) {
  HamiltonianSystem s;
  s.n = 2;
  s.v = [m](const Eigen::VectorXd& q) { return rt4bp::potential(Eigen::Vector2d(q[0], q[1]), m); };
  s.grad_v = [m](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(rt4bp::grad_hess(Eigen::Vector2d(q[0], q[1]), m).first);
  };
  s.hess_v = [m](const Eigen::VectorXd& q) {
    return rt4bp::grad_hess(Eigen::Vector2d(q[0], q[1]), m).second;
  };
  s.boundary_distance = [](const Eigen::VectorXd& q) {
    Eigen::Vector2d p(q[0], q[1]);
    double d = inf;
    for (int i = 1; i <= 3; ++i) d = std::min(d, (p - rt4bp::primary(i)).norm());
    return d;
  };
  for (const rt4bp::LibrationPoint& p : rt4bp::find_librations(m))
    s.equilibria.push_back(Eigen::VectorXd(p.position));
  return s;
}

HamiltonianSystem rt4bp_spatial(const rt4bp::MassTriple& m) {
  HamiltonianSystem s;
  s.n = 3;
  s.v = [m](const Eigen::VectorXd& q) {
    return rt4bp::potential(Eigen::Vector3d(q[0], q[1], q[2]), m);
  };
  s.grad_v = [m](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(rt4bp::grad_hess(Eigen::Vector3d(q[0], q[1], q[2]), m).first);
  };
  s.hess_v = [m](const Eigen::VectorXd& q) {
    return rt4bp::grad_hess(Eigen::Vector3d(q[0], q[1], q[2]), m).second;
  };
  s.boundary_distance = [](const Eigen::VectorXd& q) {
    Eigen::Vector3d p(q[0], q[1], q[2]);
    double d = inf;
    for (int i = 1; i <= 3; ++i) {
      Eigen::Vector3d c;
      c << rt4bp::primary(i), 0.0;
      d = std::min(d, (p - c).norm());
    }
    return d;
  };
  for (const rt4bp::LibrationPoint& p : rt4bp::find_librations(m)) {
    Eigen::VectorXd e(3);
    e << p.position, 0.0;
    s.equilibria.push_back(e);
  }
  return s;
}

HamiltonianSystem no_orbits_fixture() {
  HamiltonianSystem s;
  s.n = 2;
  s.v = [](const Eigen::VectorXd& q) {
    double r2 = q.squaredNorm();
    return -r2 / 2.0 - r2 * r2 / 4.0;
  };
  s.grad_v = [](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(-(1.0 + q.squaredNorm()) * q);
  };
  s.hess_v = [](const Eigen::VectorXd& q) {
    Eigen::Matrix2d h = -(1.0 + q.squaredNorm()) * Eigen::Matrix2d::Identity() -
                        2.0 * Eigen::Vector2d(q) * Eigen::RowVector2d(q.transpose());
    return SymMatrix::from_dense(h);
  };
  s.boundary_distance = [](const Eigen::VectorXd&) { return inf; };
  s.equilibria = {Eigen::VectorXd::Zero(2)};
  return s;
}

Eigen::VectorXd to_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) {
  check_config_dim(static_cast<int>(q.size()));
  if (qdot.size() != q.size()) throw std::invalid_argument("to_hamiltonian: size mismatch");
  int n = static_cast<int>(q.size());
  Eigen::VectorXd u(2 * n);
  u.head(n) = qdot - alpha_apply(q);
  u.tail(n) = q;
  return u;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> from_hamiltonian(const Eigen::VectorXd& u) {
  int n = config_dim_of_state(u);
  Eigen::VectorXd q = u.tail(n);
  return {q, u.head(n) + alpha_apply(q)};
}

DomainExit::DomainExit(double t, Eigen::VectorXd u)
    : std::runtime_error("flow: trajectory reached the domain boundary"),
      time(t),
      state(std::move(u)) {}

namespace odeint = boost::numeric::odeint;
using ErrorStepper = odeint::runge_kutta_fehlberg78<Eigen::VectorXd, double, Eigen::VectorXd,
                                                    double, odeint::vector_space_algebra>;

Trajectory flow(const HamiltonianSystem& sys, const Eigen::VectorXd& u0, double t_final,
                const FlowOptions& opt) {
  if (u0.size() != 2 * sys.n) throw std::invalid_argument("flow: wrong state size");
  if (!(t_final >= 0.0)) throw std::invalid_argument("flow: duration must be nonnegative");

  Trajectory out{u0, 0.0, {}};
  const int m = opt.store_samples;
  if (m > 0) {
    out.samples.reserve(m + 1);
    out.samples.push_back(u0);
  }
  if (t_final == 0.0) {
    for (int k = 1; k <= m; ++k) out.samples.push_back(u0);
    return out;
  }

  const double h0 = sys.hamiltonian(u0);
  const double scale = 1.0 + std::abs(h0);
  auto deriv = [&sys](const Eigen::VectorXd& u, Eigen::VectorXd& du, double) {
    sys.rhs_into(u, du);
  };

  auto ctrl = odeint::make_controlled(opt.abs_tol, opt.rel_tol, ErrorStepper());
  Eigen::VectorXd u = u0;
  double t = 0.0;
  double dt = std::min(1e-2, t_final);
  long steps = 0;

  auto advance_to = [&](double t_stop) {
    while (t_stop - t > 1e-14 * (1.0 + t_stop)) {
      if (++steps > 2'000'000) throw std::runtime_error("flow: step budget exceeded");
      double h = std::min(dt, t_stop - t);
      const Eigen::VectorXd u_prev = u;
      const double t_prev = t, h_in = h;
      if (ctrl.try_step(deriv, u, t, h) == odeint::fail) {
        dt = h;   // try_step shrinks h on rejection
        if (dt < 1e-14 * (1.0 + t_stop)) throw std::runtime_error("flow: step size underflow");
        continue;
      }
      double drift = std::abs(sys.hamiltonian(u) - h0) / scale;
      if (drift > opt.energy_tol) {
        u = u_prev;
        t = t_prev;
        dt = h_in / 2.0;
        if (dt < 1e-14 * (1.0 + t_stop)) throw std::runtime_error("flow: step size underflow");
        continue;
      }
      out.energy_drift = std::max(out.energy_drift, drift);
      dt = h;   // accepted: h holds the suggested next step
      if (sys.boundary_distance(u.tail(sys.n)) <= opt.boundary_clearance) throw DomainExit(t, u);
    }
  };

  if (m > 0) {
    for (int k = 1; k <= m; ++k) {
      advance_to(t_final * k / m);
      out.samples.push_back(u);
    }
  } else {
    advance_to(t_final);
  }
  out.u = u;
  return out;
}

namespace {

struct OrbitFit {
  Eigen::VectorXd u;
  double period;
  double residual;
  int iterations;
};

// Newton on (flow_T(u) - u, <x - x_ref, c>) = 0 for x = (u, T), with a central
// finite-difference Jacobian and Levenberg-Marquardt damping. The closure map
// is exactly singular along the time translation; finite differencing lifts
// that null direction to the integration-noise scale, where a raw pseudoinverse
// would amplify residual projections into large spurious steps. Damping at or
// above the noise scale suppresses them without touching the well-conditioned
// directions, so the quadratic phase survives.
std::optional<OrbitFit> newton_orbit(const HamiltonianSystem& sys, Eigen::VectorXd x,
                                     const Eigen::VectorXd& x_ref, const Eigen::VectorXd& c,
                                     const ShootOptions& opt) {
  const int d = static_cast<int>(x.size());
  FlowOptions fopt = opt.flow;
  fopt.store_samples = 0;

  auto residual = [&](const Eigen::VectorXd& y, Eigen::VectorXd& f) {
    if (!(y[d - 1] > 0.0)) return false;
    Trajectory tr = flow(sys, y.head(d - 1), y[d - 1], fopt);
    f.resize(d);
    f.head(d - 1) = tr.u - y.head(d - 1);
    f[d - 1] = (y - x_ref).dot(c);
    return true;
  };

  static const bool dbg = std::getenv("ROTBIF_DEBUG_NEWTON") != nullptr;
  static constexpr double mu_ladder[] = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  Eigen::VectorXd f(d), ft(d), fm(d), fp(d);
  if (!residual(x, f)) return std::nullopt;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    double nf = f.norm();
    if (dbg)
      std::fprintf(stderr, "  newton it=%d |f|=%.3e T=%.8f |u-ref|=%.3e\n", iter, nf,
                   x[d - 1], (x.head(d - 1) - x_ref.head(d - 1)).norm());
    if (nf < opt.closure_tol) return OrbitFit{x.head(d - 1), x[d - 1], f.head(d - 1).norm(), iter};

    Eigen::MatrixXd jac(d, d);
    for (int j = 0; j < d; ++j) {
      double h = opt.fd_step * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x;
      xp[j] += h;
      if (!residual(xp, fp)) return std::nullopt;
      xp[j] = x[j] - h;
      if (!residual(xp, fm)) return std::nullopt;
      jac.col(j) = (fp - fm) / (2.0 * h);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd rhs = svd.matrixU().transpose() * (-f);

    bool moved = false;
    for (double mu : mu_ladder) {
      Eigen::VectorXd scaled = rhs;
      for (int k = 0; k < d; ++k) {
        double s = svd.singularValues()[k];
        scaled[k] *= s / (s * s + mu * mu);
      }
      Eigen::VectorXd xn = x + svd.matrixV() * scaled;
      if (!residual(xn, ft)) continue;
      if (ft.norm() < nf * 0.75 || ft.norm() < opt.closure_tol) {
        x = xn;
        f = ft;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (dbg) std::fprintf(stderr, "  newton stall it=%d |f|=%.3e\n", iter, nf);
      return std::nullopt;
    }
  }
  if (f.norm() < opt.closure_tol)
    return OrbitFit{x.head(d - 1), x[d - 1], f.head(d - 1).norm(), opt.max_iterations};
  return std::nullopt;
}

ClosedOrbit build_orbit(const HamiltonianSystem& sys, const OrbitFit& fit,
                        const ShootOptions& opt) {
  FlowOptions fopt = opt.flow;
  fopt.store_samples = std::max(1, opt.loop_samples);
  Trajectory tr = flow(sys, fit.u, fit.period, fopt);

  const int n = sys.n;
  ClosedOrbit orb{fit.period, fit.u, std::move(tr.samples), 0.0, 0.0, 0.0};
  orb.closure_residual = (orb.states.back() - orb.states.front()).norm();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  std::size_t count = orb.states.size() - 1;   // last sample repeats the first
  for (std::size_t k = 0; k < count; ++k) mean += orb.states[k].tail(n);
  mean /= static_cast<double>(count);
  for (const Eigen::VectorXd& s : orb.states) {
    orb.amplitude = std::max(orb.amplitude, (s.tail(n) - mean).norm());
    if (n == 3) orb.max_abs_z = std::max(orb.max_abs_z, std::abs(s[2 * n - 1]));
  }
  return orb;
}

}  // namespace

ClosedOrbit shoot_periodic(const HamiltonianSystem& sys, const Eigen::VectorXd& seed,
                           double t_guess, const ShootOptions& opt) {
  if (seed.size() != 2 * sys.n) throw std::invalid_argument("shoot_periodic: wrong seed size");
  if (!(t_guess > 0.0)) throw std::invalid_argument("shoot_periodic: period guess must be positive");

  Eigen::VectorXd f0 = sys.rhs(seed);
  if (f0.norm() < 1e-13)
    throw std::invalid_argument("shoot_periodic: seed velocity vanishes, no phase anchor");

  // anchor along J f0 = -H'(seed): being symplectically orthogonal to the flow
  // direction it leaves the time translation to the pseudoinverse, while
  // blocking the drift along the orbit family that would shrink the amplitude
  const int d = 2 * sys.n + 1;
  Eigen::VectorXd jf0(2 * sys.n);
  jf0.head(sys.n) = -f0.tail(sys.n);
  jf0.tail(sys.n) = f0.head(sys.n);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c.head(d - 1) = jf0.normalized();
  Eigen::VectorXd x(d);
  x.head(d - 1) = seed;
  x[d - 1] = t_guess;

  std::optional<OrbitFit> fit = newton_orbit(sys, x, x, c, opt);
  if (!fit) throw std::runtime_error("shoot_periodic: no orbit found");
  ClosedOrbit orb = build_orbit(sys, *fit, opt);
  if (orb.amplitude < opt.amplitude_floor)
    throw std::runtime_error("shoot_periodic: no orbit found");
  return orb;
}

const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::Unbounded: return "unbounded";
    case BranchStatus::ReachesBoundary: return "reaches_boundary";
    case BranchStatus::CompactTwoTrivial: return "compact_two_trivial";
    case BranchStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

namespace {

// Definition-style termination test for one computed orbit, in the shared
// priority order: boundary contact, escape beyond the bounds, then return to
// a trivial orbit distinct from the origin.
std::optional<std::pair<BranchStatus, std::string>> orbit_verdict(
    const HamiltonianSystem& sys, const ClosedOrbit& o, const Eigen::VectorXd& q0, double t0,
    const ContinuationOptions& opt) {
  double near_boundary = inf;
  for (const Eigen::VectorXd& s : o.states)
    near_boundary = std::min(near_boundary, sys.boundary_distance(s.tail(sys.n)));
  if (near_boundary <= opt.shoot.flow.boundary_clearance)
    return std::pair{BranchStatus::ReachesBoundary,
                     "loop within " + std::to_string(near_boundary) + " of the boundary"};

  if (o.amplitude > opt.max_amplitude)
    return std::pair{BranchStatus::Unbounded,
                     "amplitude " + std::to_string(o.amplitude) + " exceeds the bound"};
  if (o.period > opt.max_period)
    return std::pair{BranchStatus::Unbounded, "period " + std::to_string(o.period) +
                                                  " exceeds the bound (blue sky candidate)"};

  for (const Eigen::VectorXd& e : sys.equilibria) {
    Eigen::VectorXd ue = sys.equilibrium_state(e);
    double sup = 0.0;
    for (const Eigen::VectorXd& s : o.states) sup = std::max(sup, (s - ue).norm());
    if (sup >= opt.trivial_radius) continue;
    bool same_equilibrium = (e - q0).norm() <= opt.trivial_radius;
    if (!same_equilibrium || std::abs(o.period - t0) > 1e-3)
      return std::pair{BranchStatus::CompactTwoTrivial,
                       "loop collapsed onto a second trivial orbit at period " +
                           std::to_string(o.period)};
  }
  return std::nullopt;
}

}  // namespace

Branch continue_branch(const HamiltonianSystem& sys, const Eigen::VectorXd& q0, double t0,
                       const ContinuationOptions& opt) {
  if (q0.size() != sys.n) throw std::invalid_argument("continue_branch: wrong equilibrium size");
  if (!(t0 > 0.0)) throw std::invalid_argument("continue_branch: period must be positive");

  Branch br{q0, t0, {}, BranchStatus::BudgetExhausted, ""};
  const int d = 2 * sys.n;
  Eigen::VectorXd u0 = sys.equilibrium_state(q0);

  // linear mode at frequency 2 pi / t0
  Eigen::MatrixXd lin = symplectic_j(sys.n) * sys.hamiltonian_hessian(q0);
  double w = 2.0 * pi / t0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(lin);
  int best = -1;
  double best_err = inf;
  for (int i = 0; i < d; ++i) {
    std::complex<double> lam = es.eigenvalues()[i];
    double err = std::abs(lam.imag() - w) + std::abs(lam.real());
    if (err < best_err) {
      best_err = err;
      best = i;
    }
  }
  if (best < 0 || best_err > 1e-6 * (1.0 + w))
    throw std::invalid_argument("continue_branch: no linear mode at the requested period");
  Eigen::VectorXd re = es.eigenvectors().col(best).real();
  Eigen::VectorXd im = es.eigenvectors().col(best).imag();
  double peak = 0.0;
  for (int k = 0; k < 64; ++k) {
    double phi = 2.0 * pi * k / 64;
    peak = std::max(peak,
                    (std::cos(phi) * re.tail(sys.n) - std::sin(phi) * im.tail(sys.n)).norm());
  }
  if (peak < 1e-12) throw std::runtime_error("continue_branch: degenerate linear mode");
  Eigen::VectorXd mode = re / peak;

  try {
    br.orbits.push_back(shoot_periodic(sys, u0 + opt.first_amplitude * mode, t0, opt.shoot));
    br.orbits.push_back(shoot_periodic(sys, u0 + 2.0 * opt.first_amplitude * mode,
                                       br.orbits[0].period, opt.shoot));
  } catch (const DomainExit& e) {
    br.status = BranchStatus::ReachesBoundary;
    br.evidence = "integration left the domain at t = " + std::to_string(e.time);
    return br;
  }

  for (const ClosedOrbit& o : br.orbits)
    if (auto verdict = orbit_verdict(sys, o, q0, t0, opt)) {
      br.status = verdict->first;
      br.evidence = verdict->second;
      return br;
    }

  auto pack = [d](const ClosedOrbit& o) {
    Eigen::VectorXd x(d + 1);
    x.head(d) = o.u0;
    x[d] = o.period;
    return x;
  };

  double ds = opt.ds;
  while (static_cast<int>(br.orbits.size()) < opt.max_steps) {
    Eigen::VectorXd x_prev = pack(br.orbits[br.orbits.size() - 2]);
    Eigen::VectorXd x_cur = pack(br.orbits.back());
    Eigen::VectorXd tangent = x_cur - x_prev;
    if (tangent.norm() < 1e-13) {
      br.evidence = "continuation stalled: consecutive orbits coincide";
      return br;
    }
    tangent.normalize();

    std::optional<OrbitFit> fit;
    try {
      for (int halving = 0; halving <= 5 && ds >= opt.ds_min; ++halving) {
        Eigen::VectorXd pred = x_cur + ds * tangent;
        fit = newton_orbit(sys, pred, pred, tangent, opt.shoot);
        if (fit) break;
        ds /= 2.0;
      }
      if (!fit) {
        br.evidence = "corrector failed at step " + std::to_string(br.orbits.size());
        return br;
      }
      br.orbits.push_back(build_orbit(sys, *fit, opt.shoot));
    } catch (const DomainExit& e) {
      br.status = BranchStatus::ReachesBoundary;
      br.evidence = "integration left the domain at t = " + std::to_string(e.time);
      return br;
    }

    if (auto verdict = orbit_verdict(sys, br.orbits.back(), q0, t0, opt)) {
      br.status = verdict->first;
      br.evidence = verdict->second;
      return br;
    }
    if (fit->iterations <= 4) ds = std::min(1.4 * ds, opt.ds_max);
  }
  br.evidence = "step budget of " + std::to_string(opt.max_steps) + " orbits exhausted";
  return br;
}

StatusEvidence branch_status(const HamiltonianSystem& sys, const Branch& b,
                             const ContinuationOptions& opt) {
  if (b.orbits.empty()) throw std::invalid_argument("branch_status: empty branch");
  StatusEvidence ev{BranchStatus::BudgetExhausted, 0.0, 0.0, inf, {}, false};
  double sup_amplitude = 0.0;
  for (const ClosedOrbit& o : b.orbits) {
    ev.sup_period = std::max(ev.sup_period, o.period);
    sup_amplitude = std::max(sup_amplitude, o.amplitude);
    for (const Eigen::VectorXd& s : o.states) {
      ev.sup_loop = std::max(ev.sup_loop, s.tail(sys.n).norm());
      ev.min_boundary = std::min(ev.min_boundary, sys.boundary_distance(s.tail(sys.n)));
    }
    for (std::size_t i = 0; i < sys.equilibria.size(); ++i) {
      Eigen::VectorXd ue = sys.equilibrium_state(sys.equilibria[i]);
      double sup = 0.0;
      for (const Eigen::VectorXd& s : o.states) sup = std::max(sup, (s - ue).norm());
      if (sup < opt.trivial_radius) ev.trivial_hits.emplace_back(o.period, static_cast<int>(i));
    }
  }

  bool over_amplitude = sup_amplitude > opt.max_amplitude;
  bool over_period = ev.sup_period > opt.max_period;
  ev.blue_sky = over_period && !over_amplitude;

  bool second_trivial = false;
  for (const auto& [period, idx] : ev.trivial_hits) {
    bool same_equilibrium = (sys.equilibria[idx] - b.origin).norm() <= opt.trivial_radius;
    if (!same_equilibrium || std::abs(period - b.origin_period) > 1e-3) second_trivial = true;
  }

  if (ev.min_boundary <= opt.shoot.flow.boundary_clearance)
    ev.status = BranchStatus::ReachesBoundary;
  else if (over_amplitude || over_period)
    ev.status = BranchStatus::Unbounded;
  else if (second_trivial)
    ev.status = BranchStatus::CompactTwoTrivial;
  return ev;
}

}  // namespace rotbif
