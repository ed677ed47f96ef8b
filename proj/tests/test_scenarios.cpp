#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/reconstruction/reconstruction.hpp"
#include "herglotz/reduction/reduction.hpp"
#include "herglotz/scenarios/scenarios.hpp"

using namespace herglotz;

TEST_CASE("registry") {
  const auto names = scenario_names();
  CHECK(names == std::vector<std::string>{"affine", "kaluza-klein", "wong", "damped-oscillator"});
  for (const auto& n : names) {
    const Scenario sc = make_scenario(n);
    CHECK(sc.name == n);
    CHECK(sc.parameters == scenario_defaults(n));
    CHECK(sc.lagrangian.dim == sc.chart.dim());
    CHECK(sc.default_initial.q.size() == sc.chart.dim());
  }
  CHECK(scenario_defaults("affine").at("q") == 2.0);
  CHECK(scenario_defaults("affine").at("gamma") == 0.1);
  CHECK_THROWS_AS(make_scenario("nope"), InvalidParameter);
  CHECK_THROWS_AS(scenario_defaults("nope"), InvalidParameter);
  CHECK_THROWS_AS(make_scenario("affine", {{"mass", 1.0}}), InvalidParameter);
  CHECK(make_scenario("affine", {{"q", 3.0}}).parameters.at("q") == 3.0);
}

TEST_CASE("affine regularity gate") {
  for (double q : {1.0, -1.0}) {
    try {
      affine_scenario(q, 0.1);
      FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
      CHECK(std::string(e.what()).find("q^2 != 1") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(make_scenario("affine", {{"q", 1.0}}), InvalidParameter);
  CHECK_NOTHROW(affine_scenario(0.5, 0.1));
}

TEST_CASE("affine defaults") {
  const Scenario sc = make_scenario("affine");
  CHECK(sc.default_initial.q == std::vector<double>{0, 0, 0});
  CHECK(sc.default_initial.u == std::vector<double>{1, 0.5, 1});
  CHECK(sc.default_initial.s == 0.0);
  // A((0,0)) = I
  const JetMatrix a = sc.chart.adjoint(lift(std::vector<double>{0.0, 0.0}));
  CHECK(max_abs(values(a) - DenseMatrix::identity(2)) == 0.0);
}

TEST_CASE("affine full trajectories obey the printed equations") {
  const double q = 2.0;
  const double gamma = 0.1;
  const Scenario sc = affine_scenario(q, gamma);
  Trajectory tr = integrate_full(sc.lagrangian, sc.default_initial, 2.0, 1e-3);
  const auto phd = tr.column("u2");
  for (std::size_t k = 0; k < tr.size(); k += 10) {
    const NaturalState x = unflatten_natural(tr.states[k], 3);
    State f = herglotz_rhs(sc.lagrangian, x);
    const double xd = x.u[0], thd = x.u[1];
    CHECK(std::abs(q * f[4] + f[3] + gamma * (xd + q * thd)) <= 1e-9);
    CHECK(std::abs(f[4] + q * f[3] + 1.0 + gamma * (thd + q * xd)) <= 1e-9);
    CHECK(std::abs(-f[5] / (x.u[2] * x.u[2]) + gamma / x.u[2]) <= 1e-9);
    // phi'' = gamma phi'
    CHECK(std::abs(f[5] - gamma * x.u[2]) <= 1e-8);
    CHECK(std::abs(phd[k] - sc.closed_forms.at("phi_dot")(tr.times[k], sc.default_initial)) <=
          1e-8);
  }
}

TEST_CASE("every scenario is G-regular at its default state and passes its checks") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    CHECK_NOTHROW(hessian_blocks(sc.lagrangian, sc.chart, sc.default_initial));
    std::mt19937_64 rng(10);
    std::vector<NaturalState> states;
    for (int k = 0; k < 20; ++k) states.push_back(sc.sample_state(rng));
    CHECK(invariance_check(sc.lagrangian, sc.chart, states) <= 1e-10);
    for (const auto& x : states) CHECK(bracket_table_check(sc.chart, x.q).max() <= 1e-8);
  }
}

TEST_CASE("sampling is deterministic") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 a(123);
    std::mt19937_64 b(123);
    for (int k = 0; k < 5; ++k) {
      NaturalState x = sc.sample_state(a);
      NaturalState y = sc.sample_state(b);
      CHECK(x.q == y.q);
      CHECK(x.u == y.u);
      CHECK(x.s == y.s);
    }
  }
}

TEST_CASE("Kaluza-Klein linear field") {
  const Scenario sc = kaluza_klein_scenario(uniform_field(2.0), 0.1);
  auto k = curvature(sc.chart, std::vector<double>{0.5, -1.0, 3.0});
  CHECK(std::abs(k[0](0, 1) - 2.0) <= 1e-15);
  CHECK(std::abs(k[0](1, 0) + 2.0) <= 1e-15);
  CHECK(k[0](0, 2) == 0.0);
  Trajectory tr = integrate_full(sc.lagrangian, sc.default_initial, 1.0, 1e-3);
  Trajectory qt = to_quasi_trajectory(tr, sc.chart);
  const auto w = qt.column("w0");
  for (std::size_t k2 = 0; k2 < qt.size(); ++k2) {
    CHECK(std::abs(w[k2] - sc.closed_forms.at("w")(qt.times[k2], sc.default_initial)) <= 1e-8);
  }
}

TEST_CASE("Wong data validation") {
  WongData bad = default_wong_data();
  bad.h = DenseMatrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
  CHECK_THROWS_AS(wong_scenario(bad), InvalidParameter);
  WongData asym = default_wong_data();
  asym.h(0, 1) = 0.1;
  CHECK_THROWS_AS(wong_scenario(asym), InvalidParameter);
  CHECK_NOTHROW(wong_scenario(default_wong_data(0.1, 2.0)));
}

TEST_CASE("Wong with flat metric and trivial connection decouples") {
  const double gamma = 0.2;
  const Scenario sc = make_scenario("wong", {{"gamma", gamma}, {"kappa", 0.0}, {"coupling", 0.0}});
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  ReducedState r{{0.3, -0.2}, {0.5, 1.0}, {0.1, -0.4, 0.2}, 0.0};
  State f = lph_rhs(l, sc.chart, r);
  CHECK(std::abs(f[2] + gamma * 0.5) <= 1e-14);
  CHECK(std::abs(f[3] + gamma * 1.0) <= 1e-14);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(f[4 + a] + gamma * r.w[a]) <= 1e-14);
}

TEST_CASE("so(3) chart guards") {
  const Scenario sc = make_scenario("wong");
  const std::vector<double> far{0.0, 0.0, 0.0, 3.12, 0.0};
  CHECK_THROWS_AS(frame_matrices(sc.chart, far), ChartOutOfRange);
}

TEST_CASE("damped oscillator") {
  const double gamma = 0.1;
  const Scenario sc = make_scenario("damped-oscillator", {{"gamma", gamma}});
  CHECK(sc.chart.fiber_dim == 0);
  State f = herglotz_rhs(sc.lagrangian, NaturalState{{0.4}, {-0.3}, 0.0});
  CHECK(std::abs(f[1] - (-0.4 + gamma * 0.3)) <= 1e-15);
  Trajectory tr = integrate_full(sc.lagrangian, sc.default_initial, 5.0, 1e-3);
  const auto e = tr.diagnostic("E_L");
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(std::abs(e[k] - sc.closed_forms.at("energy")(tr.times[k], sc.default_initial)) <= 1e-7);
  }
  Scenario stiff = make_scenario("damped-oscillator", {{"k", 4.0}, {"gamma", 0.0}});
  State g = herglotz_rhs(stiff.lagrangian, NaturalState{{0.5}, {0.0}, 0.0});
  CHECK(g[1] == doctest::Approx(-2.0));
}
