#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/contact/contact.hpp"

namespace herglotz {

using ParameterMap = std::map<std::string, double>;

/// Known exact solution or identity: value at time t for a run from x0.
using ClosedForm = std::function<double(double t, const NaturalState& x0)>;

struct Scenario {
  std::string name;
  std::string description;
  BundleChart chart;
  ContactLagrangian lagrangian;
  NaturalState default_initial;
  ParameterMap parameters;
  /// Random state inside the scenario's regularity domain.
  std::function<NaturalState(std::mt19937_64&)> sample_state;
  std::map<std::string, ClosedForm> closed_forms;
};

/// Q = G x R, G the affine group of the line with elements (theta, phi)
/// acting as [[e^theta, phi], [0, 1]].  Throws InvalidParameter for
/// q^2 = 1 (the Lagrangian is singular there).
Scenario affine_scenario(double q = 2.0, double gamma = 0.1);

/// Covector field A_i(x) on R^3, written over jets.
using CovectorField = std::function<JetVector(std::span<const Jet>)>;

/// Q = R^3 x R (the circle charted by its angle), abelian fiber,
/// connection gamma^1_i = A_i, L = 1/2 |v|^2 + 1/2 w^2 - gamma s.
Scenario kaluza_klein_scenario(CovectorField field, double gamma = 0.1);

/// A = (a0 - B x1 / 2, a1 + B x0 / 2, a2): uniform curvature B in the
/// (x0, x1) plane.
CovectorField uniform_field(double strength, double a0 = 0.0, double a1 = 0.0,
                            double a2 = 0.0);

struct WongData {
  /// q_base -> g_ij (base_dim x base_dim, symmetric positive definite).
  std::function<JetMatrix(std::span<const Jet>)> metric;
  /// q_base -> gamma^a_i (3 x base_dim).
  std::function<JetMatrix(std::span<const Jet>)> connection;
  DenseMatrix h;  // 3 x 3, ad-invariant
  std::size_t base_dim = 2;
  double gamma = 0.1;
};

/// Q = R^m x SO(3) (rotation-vector chart), L = 1/2 (g_ij v^i v^j +
/// h_ab w^a w^b) - gamma s.  Throws InvalidParameter when h is not
/// ad-invariant.
Scenario wong_scenario(const WongData& data);

/// Default Wong data on R^2: g = diag(1 + kappa x1^2, 1 + kappa x0^2),
/// h = mu I and a linear connection scaled by `coupling`.
WongData default_wong_data(double gamma = 0.1, double mu = 1.0,
                           double kappa = 0.25, double coupling = 1.0);

/// L = 1/2 u^2 - 1/2 k q^2 - gamma s on R, trivial group.
Scenario damped_oscillator_scenario(double gamma = 0.1, double k = 1.0);

/// so(3) in the basis hat(e_a) with the rotation-vector chart.
MatrixGroup so3_group();

/// Registry.
std::vector<std::string> scenario_names();
/// Default parameters of a registered scenario.
ParameterMap scenario_defaults(const std::string& name);
/// Builds a registered scenario; unknown names or parameters throw
/// InvalidParameter.
Scenario make_scenario(const std::string& name, const ParameterMap& params = {});

}  // namespace herglotz
