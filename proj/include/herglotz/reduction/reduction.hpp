#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/contact/contact.hpp"
#include "herglotz/lie/lie.hpp"
#include "herglotz/numerics/ode.hpp"
#include "herglotz/numerics/trajectory.hpp"

namespace herglotz {

using ReducedFunction = std::function<Jet(std::span<const Jet> q_base,
                                          std::span<const Jet> v,
                                          std::span<const Jet> w, const Jet& s)>;

/// l(q^i, v, w, s) on (TQ/G) x R.
struct ReducedLagrangian {
  std::size_t base_dim = 0;
  std::size_t fiber_dim = 0;
  ReducedFunction eval;

  [[nodiscard]] double value(const ReducedState& x) const;
};

/// l = L evaluated at the fiber identity with u = from_quasi(v, w).  When
/// probe states are given, L is first checked for G-invariance on them and
/// NonInvariantLagrangian is thrown if the residual exceeds `tolerance`.
ReducedLagrangian reduce_lagrangian(const ContactLagrangian& L,
                                    const BundleChart& chart,
                                    std::span<const NaturalState> probes = {},
                                    double tolerance = 1e-9);

/// max over states and a of |E~_a^C(L)|.
double invariance_check(const ContactLagrangian& L, const BundleChart& chart,
                        std::span<const NaturalState> states);

/// max |l(pi(x)) - L(x)|.
double reduction_consistency(const ContactLagrangian& L,
                             const BundleChart& chart,
                             const ReducedLagrangian& l,
                             std::span<const NaturalState> states);

/// Derivatives of l with y = (v, w) stacked.
struct ReducedJet {
  double l = 0.0;
  std::vector<double> l_q;
  std::vector<double> l_y;
  double l_s = 0.0;
  DenseMatrix H;    // d2l/dy dy
  DenseMatrix Myq;  // (P, k) = d2l/dy_P dq_k
  std::vector<double> mys;  // d2l/dy ds
};

ReducedJet reduced_jet(const ReducedLagrangian& l, const ReducedState& x);

/// Structure data entering the reduced equations at one base point.
struct ReducedStructure {
  std::vector<DenseMatrix> curvature;  // per a, (i, j)
  std::vector<DenseMatrix> upsilon;    // per i, (b, a)
  const LieAlgebraSpec* algebra = nullptr;
};
ReducedStructure reduced_structure(const BundleChart& chart,
                                   std::span<const double> q_base);

struct LphEvaluation {
  ReducedJet jet;
  std::vector<double> ydot;  // (dv/dt, dw/dt)
};

/// Solves the chain-rule expanded Lagrange-Poincare-Herglotz equations for
/// (dv/dt, dw/dt).  Throws NonGRegularAtState when the (v, w) Hessian of l
/// is singular.
LphEvaluation lph_evaluate(const ReducedLagrangian& l, const BundleChart& chart,
                           const ReducedState& x);

/// (dq/dt = v, dv/dt, dw/dt, ds/dt = l).
State lph_rhs(const ReducedLagrangian& l, const BundleChart& chart,
              const ReducedState& x);

std::vector<double> flatten(const ReducedState& x);
ReducedState unflatten_reduced(std::span<const double> y, std::size_t m,
                               std::size_t d);

/// RK4 on (q^i, v, w, s); diagnostics E_L, dissipation_residual and
/// sdot_residual (Hermite-quadrature defect of ds/dt = l per step).
Trajectory integrate_reduced(const ReducedLagrangian& l,
                             const BundleChart& chart, const ReducedState& x0,
                             double t1, double h);

/// l(w, s) on g x R for Q = G.
using EphLagrangian = std::function<Jet(std::span<const Jet> w, const Jet& s)>;

/// (dw/dt, ds/dt) of the Euler-Poincare-Herglotz equations.
State euler_poincare_herglotz_rhs(const EphLagrangian& l,
                                  const LieAlgebraSpec& spec,
                                  std::span<const double> w, double s);

}  // namespace herglotz
