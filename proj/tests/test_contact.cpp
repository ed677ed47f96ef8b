#include "doctest.h"

#include <cmath>
#include <random>

#include "herglotz/contact/contact.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/scenarios/scenarios.hpp"

using namespace herglotz;

namespace {

ContactLagrangian free_particle(std::size_t n) {
  return {n, [](std::span<const Jet>, std::span<const Jet> u, const Jet&) {
            Jet k(0.0);
            for (const auto& x : u) k += x * x;
            return Jet(0.5) * k;
          }};
}

ContactLagrangian oscillator(double gamma) {
  return damped_oscillator_scenario(gamma).lagrangian;
}

}  // namespace

TEST_CASE("jet of simple Lagrangians") {
  auto j = jet(free_particle(2), std::vector<double>{1, 2}, std::vector<double>{3, 4}, 0.5);
  CHECK(j.L == 12.5);
  CHECK(j.dLdq[0] == 0.0);
  CHECK(j.dLds == 0.0);
  CHECK(max_abs(j.W - DenseMatrix::identity(2)) == 0.0);

  auto o = jet(oscillator(0.1), std::vector<double>{1}, std::vector<double>{2}, 0.0);
  CHECK(o.dLds == doctest::Approx(-0.1));
  CHECK(o.W(0, 0) == 1.0);
  CHECK(o.dLdq[0] == -1.0);
}

TEST_CASE("energy fixtures") {
  CHECK(energy(free_particle(2), std::vector<double>{0, 0}, std::vector<double>{3, 4}, 0.0) ==
        doctest::Approx(12.5));
  CHECK(energy(oscillator(0.1), std::vector<double>{1}, std::vector<double>{2}, 0.0) ==
        doctest::Approx(2.5));
  // u = 0 gives E_L = -L
  const auto L = oscillator(0.3);
  CHECK(energy(L, std::vector<double>{0.7}, std::vector<double>{0.0}, 1.2) ==
        doctest::Approx(-L.value(std::vector<double>{0.7}, std::vector<double>{0.0}, 1.2)));
}

TEST_CASE("herglotz_rhs fixtures") {
  auto f = herglotz_rhs(free_particle(2), NaturalState{{0, 0}, {1, 2}, 0});
  CHECK(f == State{1, 2, 0, 0, 2.5});

  const double gamma = 0.2;
  const auto L = oscillator(gamma);
  auto g = herglotz_rhs(L, NaturalState{{0.6}, {-0.4}, 0.3});
  CHECK(g[0] == doctest::Approx(-0.4));
  CHECK(g[1] == doctest::Approx(-0.6 - gamma * -0.4));
  CHECK(g[2] == doctest::Approx(L.value(std::vector<double>{0.6}, std::vector<double>{-0.4}, 0.3)));
}

TEST_CASE("affine full equations match the printed Herglotz equations") {
  const double q = 2.0;
  const double gamma = 0.1;
  const Scenario sc = affine_scenario(q, gamma);
  std::mt19937_64 rng(17);
  for (int n = 0; n < 20; ++n) {
    NaturalState x = sc.sample_state(rng);
    auto f = herglotz_rhs(sc.lagrangian, x);
    const double xd = x.u[0], thd = x.u[1], phd = x.u[2];
    const double xdd = f[3], thdd = f[4], phdd = f[5];
    CHECK(std::abs(q * thdd + xdd + gamma * (xd + q * thd)) <= 1e-9);
    CHECK(std::abs(thdd + q * xdd + 1.0 + gamma * (thd + q * xd)) <= 1e-9);
    CHECK(std::abs(-phdd / (phd * phd) + gamma / phd) <= 1e-9);
  }
}

TEST_CASE("singular Lagrangian is reported") {
  ContactLagrangian deg{1, [](std::span<const Jet>, std::span<const Jet> u, const Jet&) {
                          return u[0];
                        }};
  CHECK_THROWS_AS(herglotz_rhs(deg, NaturalState{{0}, {1}, 0}), NonRegularLagrangianAtState);
  ContactLagrangian sing{2, [](std::span<const Jet>, std::span<const Jet> u, const Jet&) {
                           return Jet(0.5) * (u[0] + u[1]) * (u[0] + u[1]);
                         }};
  CHECK_THROWS_AS(herglotz_rhs(sing, NaturalState{{0, 0}, {1, 1}, 0}),
                  NonRegularLagrangianAtState);
  // affine at q = 1 is singular
  Scenario a = affine_scenario(2.0, 0.1);
  ContactLagrangian one{3, [](std::span<const Jet> qq, std::span<const Jet> u, const Jet&) {
                          return Jet(0.5) * u[1] * u[1] + u[0] * u[1] + Jet(0.5) * u[0] * u[0] +
                                 log(exp(-qq[1]) * u[2]);
                        }};
  CHECK_THROWS_AS(herglotz_rhs(one, a.default_initial), NonRegularLagrangianAtState);
}

TEST_CASE("free particle integrates in closed form") {
  auto tr = integrate_full(free_particle(2), NaturalState{{0.5, -1.0}, {1.0, 0.0}, 0.2}, 2.0, 0.01);
  CHECK(tr.state_names == std::vector<std::string>{"q0", "q1", "u0", "u1", "s"});
  CHECK(tr.diagnostic_names == std::vector<std::string>{"E_L", "dissipation_residual"});
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    CHECK(std::abs(tr.states[k][0] - (0.5 + t)) <= 1e-12);
    CHECK(std::abs(tr.states[k][1] + 1.0) <= 1e-12);
    CHECK(std::abs(tr.states[k][4] - (0.2 + 0.5 * t)) <= 1e-12);
  }
}

TEST_CASE("contact dissipation law") {
  const double gamma = 0.1;
  const auto L = oscillator(gamma);
  const NaturalState x0{{1.0}, {0.0}, 0.0};
  auto tr = integrate_full(L, x0, 5.0, 1e-3);
  const auto e = tr.diagnostic("E_L");
  const auto r = tr.diagnostic("dissipation_residual");
  double worst = 0.0;
  double resid = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    worst = std::max(worst, std::abs(e[k] - e[0] * std::exp(-gamma * tr.times[k])));
    resid = std::max(resid, std::abs(r[k]));
  }
  CHECK(worst <= 1e-7);
  CHECK(resid <= 1e-12);
  // the state follows u' = -q - gamma u
  auto f = herglotz_rhs(L, NaturalState{{0.3}, {0.8}, 1.0});
  CHECK(f[1] == doctest::Approx(-0.3 - gamma * 0.8));

  auto cons = integrate_full(oscillator(0.0), x0, 10.0, 1e-3);
  const auto e0 = cons.diagnostic("E_L");
  double drift = 0.0;
  for (double v : e0) drift = std::max(drift, std::abs(v - e0[0]));
  CHECK(drift <= 1e-8);
}

TEST_CASE("dissipation residual vanishes for every scenario") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    std::mt19937_64 rng(31);
    for (int n = 0; n < 10; ++n) {
      NaturalState x = sc.sample_state(rng);
      CHECK(std::abs(dissipation_residual(sc.lagrangian, x.q, x.u, x.s)) <= 1e-10);
    }
  }
}

TEST_CASE("contact form identities") {
  // L = 1/2 |u|^2 + s: Reeb field is d/ds
  ContactLagrangian ls{2, [](std::span<const Jet>, std::span<const Jet> u, const Jet& s) {
                         return Jet(0.5) * (u[0] * u[0] + u[1] * u[1]) + s;
                       }};
  CHECK(contact_form_check(ls, NaturalState{{0.1, 0.2}, {0.3, -0.4}, 0.5}).max() <= 1e-14);

  std::mt19937_64 rng(1);
  const Scenario osc = make_scenario("damped-oscillator");
  for (int n = 0; n < 10; ++n) {
    CHECK(contact_form_check(osc.lagrangian, osc.sample_state(rng)).max() <= 1e-12);
  }
  const Scenario aff = make_scenario("affine");
  for (int n = 0; n < 20; ++n) {
    auto rep = contact_form_check(aff.lagrangian, aff.sample_state(rng));
    CHECK(rep.eta_gamma <= 1e-10);
    CHECK(rep.max() <= 1e-10);
  }
}

TEST_CASE("Herglotz equations hold in a moving frame") {
  const Scenario sc = make_scenario("wong");
  FrameField frame = [&sc](std::span<const Jet> q) {
    FrameSet<Jet> f = frames(sc.chart, q);
    const std::size_t n = sc.chart.dim();
    JetMatrix z(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < sc.chart.base_dim; ++i) z(r, i) = f.x(r, i);
      for (std::size_t a = 0; a < sc.chart.fiber_dim; ++a) z(r, sc.chart.base_dim + a) = f.etilde(r, a);
    }
    return z;
  };
  std::mt19937_64 rng(2);
  for (int n = 0; n < 10; ++n) {
    CHECK(frame_equation_residual(sc.lagrangian, sc.sample_state(rng), frame) <= 1e-10);
  }
}

TEST_CASE("flatten round trip") {
  NaturalState x{{1, 2}, {3, 4}, 5};
  auto y = flatten(x);
  CHECK(y == std::vector<double>{1, 2, 3, 4, 5});
  NaturalState z = unflatten_natural(y, 2);
  CHECK(z.q == x.q);
  CHECK(z.u == x.u);
  CHECK(z.s == 5.0);
}
