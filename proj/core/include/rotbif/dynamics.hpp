#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotbif/rt4bp.hpp"
#include "rotbif/sym_matrix.hpp"

namespace rotbif {

// Second-order system q'' - 2 alpha_N q' + V'(q) = 0 in Hamiltonian form:
// u = (p, q) with p = q' - alpha_N q, H = |p|^2/2 + <p, alpha_N q> + W(q),
// W = V + (x^2 + y^2)/2, and u' = J H'(u).
struct HamiltonianSystem {
  int n;   // configuration dimension, 2 or 3
  std::function<double(const Eigen::VectorXd&)> v;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_v;
  std::function<SymMatrix(const Eigen::VectorXd&)> hess_v;
  // Distance from q to the complement of the domain; infinity on all of R^n.
  std::function<double(const Eigen::VectorXd&)> boundary_distance;
  std::vector<Eigen::VectorXd> equilibria;   // critical points of V

  double hamiltonian(const Eigen::VectorXd& u) const;
  void rhs_into(const Eigen::VectorXd& u, Eigen::VectorXd& du) const;
  Eigen::VectorXd rhs(const Eigen::VectorXd& u) const;
  Eigen::VectorXd equilibrium_state(const Eigen::VectorXd& q0) const;   // (-alpha q0, q0)
  Eigen::MatrixXd hamiltonian_hessian(const Eigen::VectorXd& q0) const;  // H'' at the state
};

HamiltonianSystem quadratic(double beta1, double beta2);
HamiltonianSystem quadratic(double beta1, double beta2, double beta3);
HamiltonianSystem rt4bp_planar(const rt4bp::MassTriple& m);
HamiltonianSystem rt4bp_spatial(const rt4bp::MassTriple& m);
// V = -|q|^2/2 - |q|^4/4 on the plane: the equilibrium at the origin is the
// only periodic solution, since (|q|^2/2)'' = |p|^2 + |q|^4 > 0 along any other.
HamiltonianSystem no_orbits_fixture();

// Change of variables u = (p, q), p = qdot - alpha_n q, and its inverse.
Eigen::VectorXd to_hamiltonian(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot);
std::pair<Eigen::VectorXd, Eigen::VectorXd> from_hamiltonian(const Eigen::VectorXd& u);

struct DomainExit : std::runtime_error {
  DomainExit(double t, Eigen::VectorXd u);
  double time;
  Eigen::VectorXd state;
};

struct FlowOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double boundary_clearance = 1e-3;   // closer approaches raise DomainExit
  double energy_tol = 1e-9;           // relative drift bound, enforced per accepted step
  int store_samples = 0;              // when M > 0 record M+1 states uniform in time
};

struct Trajectory {
  Eigen::VectorXd u;                      // final state
  double energy_drift;                    // max |H - H(u0)| / (1 + |H(u0)|) seen
  std::vector<Eigen::VectorXd> samples;   // uniform samples incl. both endpoints
};

// Adaptive embedded Runge-Kutta (Fehlberg 7(8)) with the energy drift as an
// independent accept/reject monitor. Throws DomainExit when the trajectory
// comes within boundary_clearance of the domain boundary, std::runtime_error
// on step underflow (singularity) or step budget exhaustion.
Trajectory flow(const HamiltonianSystem& sys, const Eigen::VectorXd& u0, double t_final,
                const FlowOptions& opt = {});

struct ShootOptions {
  double closure_tol = 1e-9;
  double amplitude_floor = 1e-7;   // converging below this means the trivial solution
  int max_iterations = 30;
  double fd_step = 1e-5;           // central differences, so noise beats truncation
  int loop_samples = 256;
  // tighter than the general default: Newton stalls once the residual reaches
  // the integration noise, so the floor must sit below closure_tol
  FlowOptions flow{.rel_tol = 1e-12, .abs_tol = 1e-13};
};

struct ClosedOrbit {
  double period;
  Eigen::VectorXd u0;                      // anchor state on the orbit
  std::vector<Eigen::VectorXd> states;     // loop_samples+1 uniform states over [0, T]
  double closure_residual;                 // |flow_T(u0) - u0|
  double amplitude;                        // max_k |q_k - mean q|
  double max_abs_z;                        // 0 in the planar case
};

// Newton on (flow_T(u) - u, <u - seed, J rhs(seed)>) = 0 with a central-difference
// Jacobian and Levenberg-Marquardt damping (the closure map is rank-deficient
// along the time translation, which the damped step leaves alone; the J-rotated
// anchor blocks sliding along the orbit family instead of fixing the phase).
// Throws std::runtime_error("shoot_periodic: no orbit found") when Newton
// stalls or lands on the trivial solution; DomainExit propagates.
ClosedOrbit shoot_periodic(const HamiltonianSystem& sys, const Eigen::VectorXd& seed,
                           double t_guess, const ShootOptions& opt = {});

enum class BranchStatus { Unbounded, ReachesBoundary, CompactTwoTrivial, BudgetExhausted };
const char* to_string(BranchStatus s);

struct ContinuationOptions {
  int max_steps = 50;
  double first_amplitude = 1e-3;
  double ds = 0.02;          // initial pseudo-arclength step
  double ds_min = 1e-5;
  double ds_max = 0.1;
  double max_amplitude = 5.0;
  double max_period = 100.0;
  double trivial_radius = 1e-6;
  ShootOptions shoot;
};

struct Branch {
  Eigen::VectorXd origin;   // equilibrium q0
  double origin_period;     // emanation period T0
  std::vector<ClosedOrbit> orbits;
  BranchStatus status;
  std::string evidence;
};

// Emanating family from the trivial closed orbit (t0, q0): the linear mode of
// J H''(u0) at frequency 2 pi / t0 seeds two amplitude-pinned orbits, then a
// secant pseudo-arclength predictor-corrector in (u, T) extends the family
// until a Definition-style termination: amplitude or period beyond bounds
// ("unbounded"), domain exit ("reaches boundary"), return to a different
// trivial orbit ("compact two trivial"), or the step budget.
Branch continue_branch(const HamiltonianSystem& sys, const Eigen::VectorXd& q0, double t0,
                       const ContinuationOptions& opt = {});

struct StatusEvidence {
  BranchStatus status;
  double sup_period;                      // largest period on the branch
  double sup_loop;                        // largest |q| over all loops
  double min_boundary;                    // smallest boundary distance over all loops
  std::vector<std::pair<double, int>> trivial_hits;   // (period, equilibrium index)
  bool blue_sky;                          // period past the bound at bounded amplitude
};

// Re-derives the status from the stored orbits alone.
StatusEvidence branch_status(const HamiltonianSystem& sys, const Branch& b,
                             const ContinuationOptions& opt = {});

}  // namespace rotbif
