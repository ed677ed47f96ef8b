#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "herglotz/lie/lie.hpp"
#include "herglotz/numerics/jet.hpp"
#include "herglotz/numerics/matrix.hpp"

namespace herglotz {

/// How Upsilon^b_ia is evaluated: the general X_i(A^c_a) (A^-1)^b_c formula
/// by differentiating the adjoint, or the gamma^c_i C^b_ac contraction
/// valid for a left-translation trivialization.
enum class UpsilonMode { kLemma, kGammaContraction };

/// A principal bundle Q -> Q/G over one trivializing chart.  Coordinates on
/// Q are ordered (q^i base, q^a fiber); the fiber coordinates are the chart
/// coordinates of the group element.
struct BundleChart {
  std::size_t base_dim = 0;
  std::size_t fiber_dim = 0;
  MatrixGroup group;
  /// q_base -> gamma^a_i as a (fiber_dim x base_dim) matrix.
  std::function<JetMatrix(std::span<const Jet>)> gamma;
  /// full q -> K^b_a (fiber_dim x fiber_dim); column a holds the fiber
  /// components of the fundamental field E~_a.
  std::function<JetMatrix(std::span<const Jet>)> fundamental;
  /// fiber coordinates -> A^b_a(g).
  AdjointMap adjoint;
  /// (g, q) -> g.q on Q.
  std::function<std::vector<double>(const GroupElement&, std::span<const double>)>
      action;
  UpsilonMode upsilon_mode = UpsilonMode::kLemma;

  [[nodiscard]] std::size_t dim() const { return base_dim + fiber_dim; }
  [[nodiscard]] const LieAlgebraSpec& algebra() const { return group.algebra; }
};

/// Point of TQ x R in natural coordinates (q, u = dq/dt, s).
struct NaturalState {
  std::vector<double> q;
  std::vector<double> u;
  double s = 0.0;
};

/// Point of TQ x R in coordinates adapted to {X_i, E^_a, d/ds}.
struct FullState {
  std::vector<double> q_base;
  std::vector<double> q_fiber;
  std::vector<double> v;
  std::vector<double> w;
  double s = 0.0;
};

/// Point of (TQ/G) x R.
struct ReducedState {
  std::vector<double> q_base;
  std::vector<double> v;
  std::vector<double> w;
  double s = 0.0;
};

/// Coordinate components of the three frames at q, one field per column
/// (each column has dim() entries).
template <typename T>
struct FrameSet {
  Matrix<T> x;       // X_i = d/dq^i - gamma^b_i E^_b
  Matrix<T> ehat;    // E^_a = A^b_a E~_b
  Matrix<T> etilde;  // E~_a = K^b_a d/dq^b
};

FrameSet<Jet> frames(const BundleChart& chart, std::span<const Jet> q);

/// Components of X_i and E^_a at q.
struct FrameMatrices {
  DenseMatrix x;
  DenseMatrix ehat;
};
FrameMatrices frame_matrices(const BundleChart& chart, std::span<const double> q);

/// Quasi-velocities (v, w) of a natural velocity u at q, and the inverse map.
/// Jet overloads propagate derivatives through the frame.
void to_quasi(const BundleChart& chart, std::span<const Jet> q,
              std::span<const Jet> u, JetVector& v, JetVector& w);
JetVector from_quasi(const BundleChart& chart, std::span<const Jet> q,
                     std::span<const Jet> v, std::span<const Jet> w);

struct QuasiVelocity {
  std::vector<double> v;
  std::vector<double> w;
};
QuasiVelocity to_quasi(const BundleChart& chart, std::span<const double> q,
                       std::span<const double> u);
std::vector<double> from_quasi(const BundleChart& chart,
                               std::span<const double> q,
                               std::span<const double> v,
                               std::span<const double> w);

FullState to_full(const BundleChart& chart, const NaturalState& x);
NaturalState to_natural(const BundleChart& chart, const FullState& x);
ReducedState project(const FullState& x);
std::vector<double> full_configuration(const FullState& x);

/// Curvature K^a_ij = d_i gamma^a_j - d_j gamma^a_i - gamma^b_i gamma^c_j C^a_bc,
/// the sign fixed by [X_i, X_j] = -K^a_ij E^_a with [E^_a, E^_b] = C^c_ab E^_c.
/// Returned as one (base_dim x base_dim) matrix per a.
std::vector<DenseMatrix> curvature(const BundleChart& chart,
                                   std::span<const double> q_base);

/// Upsilon^b_ia as one (fiber_dim x fiber_dim) matrix per i with entry (b, a).
std::vector<DenseMatrix> upsilon(const BundleChart& chart,
                                 std::span<const double> q);
std::vector<DenseMatrix> upsilon_lemma(const BundleChart& chart,
                                       std::span<const double> q);
std::vector<DenseMatrix> upsilon_contraction(const BundleChart& chart,
                                             std::span<const double> q_base);

/// Max residual of each frame bracket relation at q:
///   [E~a,E~b] = -C E~,  [E^a,E^b] = C E^,  [X_i,E~a] = 0,
///   [X_i,E^a] = Upsilon E^,  [X_i,X_j] = -K E^,  [E~a,E^b] = 0.
struct BracketReport {
  std::array<double, 6> residual{};
  [[nodiscard]] double max() const;
  static const std::array<std::string, 6>& names();
};
BracketReport bracket_table_check(const BundleChart& chart,
                                  std::span<const double> q);

/// Lie bracket [Y, Z] of vector fields given their components and
/// Jacobians (entry (beta, alpha) = d Y^beta / d q^alpha).
std::vector<double> lie_bracket(std::span<const double> y,
                                const DenseMatrix& dy,
                                std::span<const double> z,
                                const DenseMatrix& dz);

}  // namespace herglotz
