#pragma once

#include <span>
#include <vector>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/contact/contact.hpp"
#include "herglotz/lie/lie.hpp"
#include "herglotz/numerics/trajectory.hpp"

namespace herglotz {

/// Velocity Hessian of L pushed into the frame {X_i, E~_a}, and
/// B^a_i = g^{ba} g_{ib}.
struct HessianBlocks {
  DenseMatrix g_ij;  // m x m
  DenseMatrix g_ib;  // m x d
  DenseMatrix g_ab;  // d x d
  DenseMatrix B;     // d x m, entry (a, i)

  /// Full matrix in the ordered basis {E~_a, X_i}.
  [[nodiscard]] DenseMatrix assembled() const;
};

/// Throws NonGRegularAtState when g_ab is singular.
HessianBlocks hessian_blocks(const ContactLagrangian& L,
                             const BundleChart& chart, const NaturalState& x);
HessianBlocks hessian_blocks(const ContactLagrangian& L,
                             const BundleChart& chart, const FullState& x);

/// Omega at x applied to a tangent vector (dq, du, ds) of TQ x R, as
/// algebra coordinates.
std::vector<double> connection_form(const ContactLagrangian& L,
                                    const BundleChart& chart,
                                    const NaturalState& x,
                                    std::span<const double> tangent);

struct ConnectionAxiomReport {
  double vertical = 0.0;     // Omega(X_i^V), Omega(E~_a^V), Omega(d/ds)
  double horizontal = 0.0;   // Omega(X_i^C - B^a_i E~_a^C)
  double fundamental = 0.0;  // Omega(E~_a^C) - E_a
  double invariant = 0.0;    // Omega(E^_a^C) - A^b_a E_b
  [[nodiscard]] double max() const;
};
ConnectionAxiomReport connection_axioms_check(const ContactLagrangian& L,
                                              const BundleChart& chart,
                                              const NaturalState& x);

/// max |E~_a^C(B^d_i) - B^b_i C^d_ab| at x (five-point differences along
/// the complete lift).
double equivariance_check(const ContactLagrangian& L, const BundleChart& chart,
                          const NaturalState& x);

/// Horizontal lift of a reduced trajectory (columns q_base, v, w, s) from
/// `start`.  Returns columns q (base then fiber), v, w, s and diagnostics
/// xi0.. holding A w + B v at each sample.
Trajectory horizontal_lift(const Trajectory& reduced, const BundleChart& chart,
                           const ContactLagrangian& L, const FullState& start);

struct GroupSample {
  double t = 0.0;
  GroupElement g;
};

enum class GroupStepper { kMidpoint, kMagnus4 };

/// Solves dg/dt = g xi(t), g(0) = e, with xi read from the lift's
/// diagnostics and interpolated cubically between samples.
std::vector<GroupSample> reconstruction_ode(
    const Trajectory& lift, const BundleChart& chart,
    GroupStepper stepper = GroupStepper::kMagnus4);

struct ReconstructionResult {
  Trajectory horizontal_lift;
  std::vector<GroupSample> group_curve;
  Trajectory full_trajectory;  // columns q, v, w, s
};

ReconstructionResult reconstruct(const Trajectory& reduced,
                                 const BundleChart& chart,
                                 const ContactLagrangian& L,
                                 const FullState& start,
                                 GroupStepper stepper = GroupStepper::kMagnus4);

/// Natural-coordinate trajectory (q, u, s) rewritten in (q, v, w, s).
Trajectory to_quasi_trajectory(const Trajectory& natural,
                               const BundleChart& chart);

/// Drops the fiber coordinates of a (q, v, w, s) trajectory.
Trajectory project_trajectory(const Trajectory& quasi, const BundleChart& chart);

/// Tangent lift of the action at a natural state, by central differences
/// of chart.action along u (step `eps`).
NaturalState act_on_state(const BundleChart& chart, const GroupElement& g,
                          const NaturalState& x, double eps = 1e-6);

}  // namespace herglotz
