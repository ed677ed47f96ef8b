#include "doctest.h"

#include <cmath>
#include <random>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/numerics/autodiff.hpp"
#include "herglotz/scenarios/scenarios.hpp"

using namespace herglotz;

namespace {

double diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// R^2 x R with abelian fiber and gamma = 0: the product bundle.
BundleChart trivial_chart() {
  BundleChart ch;
  ch.base_dim = 2;
  ch.fiber_dim = 1;
  ch.group.algebra = LieAlgebraSpec::from_matrices({DenseMatrix{{0, 1}, {0, 0}}});
  ch.group.to_matrix = [](std::span<const Jet> c) {
    JetMatrix m = JetMatrix::identity(2);
    m(0, 1) = c[0];
    return m;
  };
  ch.group.from_matrix = [](const DenseMatrix& m) { return std::vector<double>{m(0, 1)}; };
  ch.gamma = [](std::span<const Jet>) { return JetMatrix(1, 2); };
  ch.fundamental = [](std::span<const Jet>) { return JetMatrix::identity(1); };
  ch.adjoint = [](std::span<const Jet>) { return JetMatrix::identity(1); };
  ch.action = [](const GroupElement& g, std::span<const double> q) {
    return std::vector<double>{q[0], q[1], q[2] + g.coords[0]};
  };
  return ch;
}

// A_i for the Kaluza-Klein tests: a nonlinear field with nonzero curvature.
JetVector wavy(std::span<const Jet> x) {
  return {sin(x[1]) * x[2], x[0] * x[0] * x[2], cos(x[0]) + x[1]};
}

}  // namespace

TEST_CASE("trivial bundle frames are coordinate fields") {
  const BundleChart ch = trivial_chart();
  const std::vector<double> q{0.3, -0.2, 1.1};
  FrameMatrices f = frame_matrices(ch, q);
  CHECK(max_abs(f.x - DenseMatrix{{1, 0}, {0, 1}, {0, 0}}) == 0.0);
  CHECK(max_abs(f.ehat - DenseMatrix{{0}, {0}, {1}}) == 0.0);
  CHECK(bracket_table_check(ch, q).max() == 0.0);
  for (const auto& k : curvature(ch, std::vector<double>{0.3, -0.2})) CHECK(max_abs(k) == 0.0);
  for (const auto& u : upsilon(ch, q)) CHECK(max_abs(u) == 0.0);
}

TEST_CASE("affine frames and quasi-velocities") {
  const Scenario sc = make_scenario("affine");
  const double th = 0.4;
  const double ph = -0.7;
  const std::vector<double> q{0.2, th, ph};
  FrameMatrices f = frame_matrices(sc.chart, q);
  // E^_1 = d/dtheta, E^_2 = e^theta d/dphi, X = d/dx
  CHECK(diff(f.ehat.column(0), std::vector<double>{0, 1, 0}) <= 1e-15);
  CHECK(diff(f.ehat.column(1), std::vector<double>{0, 0, std::exp(th)}) <= 1e-15);
  CHECK(diff(f.x.column(0), std::vector<double>{1, 0, 0}) == 0.0);

  const std::vector<double> u{1.3, -0.6, 0.9};
  QuasiVelocity qv = to_quasi(sc.chart, q, u);
  CHECK(std::abs(qv.v[0] - 1.3) <= 1e-15);
  CHECK(std::abs(qv.w[0] + 0.6) <= 1e-15);
  CHECK(std::abs(qv.w[1] - std::exp(-th) * 0.9) <= 1e-15);
  auto back = from_quasi(sc.chart, q, qv.v, qv.w);
  CHECK(diff(back, u) <= 1e-15);
  auto zero = from_quasi(sc.chart, q, std::vector<double>{0}, std::vector<double>{0, 0});
  CHECK(diff(zero, std::vector<double>{0, 0, 0}) == 0.0);
}

TEST_CASE("u = X_1 has quasi-velocity e_1") {
  const Scenario sc = make_scenario("kaluza-klein");
  const std::vector<double> q{0.3, -0.5, 0.2, 1.0};
  FrameMatrices f = frame_matrices(sc.chart, q);
  QuasiVelocity qv = to_quasi(sc.chart, q, f.x.column(0));
  CHECK(diff(qv.v, std::vector<double>{1, 0, 0}) <= 1e-15);
  CHECK(std::abs(qv.w[0]) <= 1e-15);
  // X_i = d/dx^i - A_i d/dtheta with the uniform field A = (-x1/2, x0/2, 0)
  CHECK(std::abs(f.x(3, 0) - 0.5 * q[1]) <= 1e-15);
  CHECK(std::abs(f.x(3, 1) + 0.5 * q[0]) <= 1e-15);
  CHECK(f.x(3, 2) == 0.0);
}

TEST_CASE("quasi round trip at random states of every scenario") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 rng(21);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      NaturalState x = sc.sample_state(rng);
      FullState fs = to_full(sc.chart, x);
      NaturalState y = to_natural(sc.chart, fs);
      worst = std::max({worst, diff(x.q, y.q), diff(x.u, y.u), std::abs(x.s - y.s)});
      ReducedState r = project(fs);
      CHECK(r.q_base.size() == sc.chart.base_dim);
      CHECK(full_configuration(fs).size() == sc.chart.dim());
    }
    CHECK_MESSAGE(worst <= 1e-12, name);
  }
}

TEST_CASE("Kaluza-Klein curvature is dA") {
  const Scenario sc = kaluza_klein_scenario(wavy, 0.1);
  const std::vector<double> x{0.4, -0.3, 0.8};
  auto k = curvature(sc.chart, x);
  REQUIRE(k.size() == 1);
  DenseMatrix da = jacobian([](std::span<const Jet> y) { return wavy(y); }, x);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      // K_ij = d_i A_j - d_j A_i
      CHECK(std::abs(k[0](i, j) - (da(j, i) - da(i, j))) <= 1e-14);
      CHECK(std::abs(k[0](i, j) + k[0](j, i)) <= 1e-14);
    }
  }
  CHECK(bracket_table_check(sc.chart, std::vector<double>{0.4, -0.3, 0.8, 0.1}).max() <= 1e-12);
}

TEST_CASE("constant connection on an abelian fiber is flat") {
  const Scenario sc = kaluza_klein_scenario(
      [](std::span<const Jet>) { return JetVector{Jet(0.3), Jet(-1.0), Jet(2.0)}; }, 0.1);
  for (const auto& k : curvature(sc.chart, std::vector<double>{1.0, 2.0, 3.0})) {
    CHECK(max_abs(k) == 0.0);
  }
}

TEST_CASE("curvature is antisymmetric in (i, j)") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 rng(4);
    for (int n = 0; n < 10; ++n) {
      NaturalState x = sc.sample_state(rng);
      std::span<const double> base(x.q.data(), sc.chart.base_dim);
      for (const auto& k : curvature(sc.chart, base)) {
        CHECK(max_abs(k + k.transpose()) <= 1e-14);
      }
    }
  }
}

TEST_CASE("Upsilon: lemma and contraction agree where both apply") {
  for (const auto& name : {"kaluza-klein", "wong"}) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 rng(8);
    for (int n = 0; n < 10; ++n) {
      NaturalState x = sc.sample_state(rng);
      auto lemma = upsilon_lemma(sc.chart, x.q);
      auto contr = upsilon_contraction(
          sc.chart, std::span<const double>(x.q.data(), sc.chart.base_dim));
      REQUIRE(lemma.size() == contr.size());
      for (std::size_t i = 0; i < lemma.size(); ++i) {
        CHECK(max_abs(lemma[i] - contr[i]) <= 1e-12);
      }
    }
  }
  // affine: trivial connection, Upsilon = 0 everywhere
  const Scenario aff = make_scenario("affine");
  std::mt19937_64 rng(2);
  for (int n = 0; n < 10; ++n) {
    NaturalState x = aff.sample_state(rng);
    for (const auto& u : upsilon(aff.chart, x.q)) CHECK(max_abs(u) <= 1e-15);
  }
}

TEST_CASE("Wong Upsilon is h-skew") {
  const Scenario sc = make_scenario("wong", {{"mu", 2.5}});
  std::mt19937_64 rng(13);
  for (int n = 0; n < 10; ++n) {
    NaturalState x = sc.sample_state(rng);
    for (const auto& u : upsilon(sc.chart, x.q)) {
      // h = mu I, so h_ac Upsilon^c_ib + h_bc Upsilon^c_ia = mu (U + U^T)
      CHECK(max_abs(u + u.transpose()) <= 1e-13);
    }
  }
}

TEST_CASE("bracket table holds for every scenario") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
      worst = std::max(worst, bracket_table_check(sc.chart, sc.sample_state(rng).q).max());
    }
    CHECK_MESSAGE(worst <= 1e-8, name);
  }
  CHECK(BracketReport::names().size() == 6);
}

TEST_CASE("a wrong fundamental frame is caught") {
  Scenario sc = make_scenario("wong");
  const std::vector<double> q{0.3, -0.4, 0.2, 0.1, -0.3};
  CHECK(bracket_table_check(sc.chart, q).max() <= 1e-12);
  BundleChart bad = sc.chart;
  bad.fundamental = [](std::span<const Jet> qq) {
    JetMatrix k(3, 3);
    (void)qq;  // identity ignores the non-commutativity of SO(3)
    for (std::size_t a = 0; a < 3; ++a) k(a, a) = 1.0;
    return k;
  };
  CHECK(bracket_table_check(bad, q).max() > 1e-3);
}

TEST_CASE("lie_bracket of coordinate fields") {
  // [x d/dy, d/dx] = -d/dy
  const std::vector<double> y{0.0, 2.0};
  const DenseMatrix dy{{0, 0}, {1, 0}};
  const std::vector<double> z{1.0, 0.0};
  const DenseMatrix dz(2, 2);
  auto b = lie_bracket(y, dy, z, dz);
  CHECK(diff(b, std::vector<double>{0, -1}) == 0.0);
}

TEST_CASE("singular fundamental matrix is rejected") {
  BundleChart ch = trivial_chart();
  ch.fundamental = [](std::span<const Jet>) { return JetMatrix(1, 1); };
  CHECK_THROWS_AS(frame_matrices(ch, std::vector<double>{0, 0, 0}), SingularMatrix);
}
