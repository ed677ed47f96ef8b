#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/numerics/jet.hpp"
#include "herglotz/numerics/matrix.hpp"
#include "herglotz/numerics/ode.hpp"
#include "herglotz/numerics/trajectory.hpp"

namespace herglotz {

/// Action-dependent Lagrangian L(q, u, s) on TQ x R, written once over jets.
struct ContactLagrangian {
  std::size_t dim = 0;
  std::function<Jet(std::span<const Jet> q, std::span<const Jet> u, const Jet& s)>
      eval;

  [[nodiscard]] double value(std::span<const double> q,
                             std::span<const double> u, double s) const;
};

/// L and every derivative the Herglotz equations use, at one state.
struct LagrangianJet {
  double L = 0.0;
  std::vector<double> dLdq;
  std::vector<double> dLdu;
  double dLds = 0.0;
  DenseMatrix W;    // d2L/du^a du^b
  DenseMatrix Mqu;  // (b, a) = d2L/dq^b du^a
  std::vector<double> msu;  // d2L/ds du^a
};

LagrangianJet jet(const ContactLagrangian& L, std::span<const double> q,
                  std::span<const double> u, double s);
LagrangianJet jet(const ContactLagrangian& L, const NaturalState& x);

/// E_L = u . dL/du - L.
double energy(const ContactLagrangian& L, std::span<const double> q,
              std::span<const double> u, double s);
double energy(const LagrangianJet& j, std::span<const double> u);

/// Accelerations solving
///   W G = dL/dq + dL/ds dL/du - Mqu^T u - L msu.
/// Throws NonRegularLagrangianAtState when W is singular.
std::vector<double> herglotz_acceleration(const LagrangianJet& j,
                                          std::span<const double> u);

/// (dq/dt, du/dt, ds/dt) = (u, G, L) for the flat state (q, u, s).
State herglotz_rhs(const ContactLagrangian& L, std::span<const double> state);
State herglotz_rhs(const ContactLagrangian& L, const NaturalState& x);

/// |W G - rhs| for accelerations G handed back in.
double herglotz_equation_residual(const LagrangianJet& j,
                                  std::span<const double> u,
                                  std::span<const double> accel);

/// Gamma(E_L) - dL/ds E_L at a state, with Gamma the Herglotz field.
double dissipation_residual(const ContactLagrangian& L,
                            std::span<const double> q,
                            std::span<const double> u, double s);

std::vector<double> flatten(const NaturalState& x);
NaturalState unflatten_natural(std::span<const double> y, std::size_t n);

/// RK4 on (q, u, s); diagnostics E_L and dissipation_residual.
Trajectory integrate_full(const ContactLagrangian& L, const NaturalState& x0,
                          double t1, double h);

struct ContactFormReport {
  double reeb_eta = 0.0;        // |eta(R) - 1|
  double reeb_deta = 0.0;       // |i_R d eta|
  double eta_gamma = 0.0;       // |eta(Gamma) + E_L|
  double herglotz = 0.0;        // |W G - rhs|
  [[nodiscard]] double max() const;
};

/// Builds eta_L, d eta_L and the Reeb field R_L in (q, u, s) coordinates
/// and evaluates the defining identities at x.
ContactFormReport contact_form_check(const ContactLagrangian& L,
                                     const NaturalState& x);

/// A frame {Z_alpha} on Q given by its coordinate components (columns).
using FrameField = std::function<JetMatrix(std::span<const Jet>)>;

/// max over alpha of |Gamma(Z^V L) - Z^C L - dL/ds Z^V L| at x.
double frame_equation_residual(const ContactLagrangian& L,
                               const NaturalState& x, const FrameField& frame);

}  // namespace herglotz
