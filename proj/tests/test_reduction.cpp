#include "doctest.h"

#include <cmath>
#include <random>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/autodiff.hpp"
#include "herglotz/numerics/lu.hpp"
#include "herglotz/reconstruction/reconstruction.hpp"
#include "herglotz/reduction/reduction.hpp"
#include "herglotz/scenarios/scenarios.hpp"

using namespace herglotz;

namespace {

std::vector<NaturalState> samples(const Scenario& sc, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NaturalState> out;
  for (int k = 0; k < n; ++k) out.push_back(sc.sample_state(rng));
  return out;
}

// Metric entries and their base derivatives: dg[k](i, j) = d_k g_ij.
struct MetricJet {
  DenseMatrix g;
  std::vector<DenseMatrix> dg;
};

MetricJet metric_jet(const WongData& data, std::span<const double> x) {
  const std::size_t m = data.base_dim;
  JetVector seeds = seed(x, false);
  JetMatrix g = data.metric(seeds);
  MetricJet out{values(g), {}};
  for (std::size_t k = 0; k < m; ++k) out.dg.push_back(partial(g, k));
  return out;
}

}  // namespace

TEST_CASE("affine reduced Lagrangian is the printed one") {
  const double q = 2.0;
  const double gamma = 0.1;
  const Scenario sc = affine_scenario(q, gamma);
  auto probes = samples(sc, 5, 3);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart, probes);
  CHECK(l.base_dim == 1);
  CHECK(l.fiber_dim == 2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    ReducedState r{{u(rng)}, {u(rng)}, {u(rng), 0.5 + std::abs(u(rng))}, u(rng)};
    const double xd = r.v[0], w1 = r.w[0], w2 = r.w[1];
    const double expect =
        0.5 * w1 * w1 + q * xd * w1 + 0.5 * xd * xd + std::log(w2) - gamma * r.s;
    CHECK(std::abs(l.value(r) - expect) <= 1e-14);
  }
  CHECK(reduction_consistency(sc.lagrangian, sc.chart, l, samples(sc, 20, 5)) <= 1e-13);
}

TEST_CASE("Kaluza-Klein reduced Lagrangian is kinetic minus gamma s") {
  const Scenario sc = make_scenario("kaluza-klein", {{"gamma", 0.3}});
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  ReducedState r{{0.1, 0.2, 0.3}, {1.0, -2.0, 0.5}, {0.7}, 1.5};
  CHECK(l.value(r) == doctest::Approx(0.5 * (1.0 + 4.0 + 0.25 + 0.49) - 0.3 * 1.5));
}

TEST_CASE("invariance check and the non-invariant gate") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    CHECK_MESSAGE(invariance_check(sc.lagrangian, sc.chart, samples(sc, 50, 6)) <= 1e-10, name);
  }
  Scenario sc = make_scenario("affine");
  ContactLagrangian broken = sc.lagrangian;
  auto base = sc.lagrangian.eval;
  broken.eval = [base](std::span<const Jet> q, std::span<const Jet> u, const Jet& s) {
    return base(q, u, s) + Jet(0.3) * q[2];  // depends on phi
  };
  auto probes = samples(sc, 5, 7);
  CHECK(invariance_check(broken, sc.chart, probes) > 1e-3);
  CHECK_THROWS_AS(reduce_lagrangian(broken, sc.chart, probes), NonInvariantLagrangian);
  // no probes: no gate
  CHECK_NOTHROW(reduce_lagrangian(broken, sc.chart));
}

TEST_CASE("affine reduced equations match the printed ones") {
  const double q = 2.0;
  const double gamma = 0.1;
  const Scenario sc = affine_scenario(q, gamma);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    ReducedState r{{u(rng)}, {u(rng)}, {u(rng), 0.5 + std::abs(u(rng))}, u(rng)};
    State f = lph_rhs(l, sc.chart, r);
    const double xd = r.v[0], w1 = r.w[0], w2 = r.w[1];
    const double xdd = f[1], w1d = f[2], w2d = f[3];
    CHECK(f[0] == xd);
    CHECK(std::abs(w1d + q * xdd + 1.0 + gamma * (w1 + q * xd)) <= 1e-12);
    CHECK(std::abs(w2d - (-w1 * w2 + gamma * w2)) <= 1e-12);
    CHECK(std::abs(q * w1d + xdd + gamma * (xd + q * w1)) <= 1e-12);
    CHECK(std::abs(f[4] - l.value(r)) <= 1e-15);
  }
}

TEST_CASE("Kaluza-Klein reduced equations in a uniform field") {
  const double b = 1.7;
  const double gamma = 0.2;
  const Scenario sc = kaluza_klein_scenario(uniform_field(b), gamma);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  ReducedState r{{0.3, -0.1, 0.4}, {0.8, -0.5, 0.3}, {1.2}, 0.0};
  State f = lph_rhs(l, sc.chart, r);
  const double w = r.w[0];
  // K_01 = d_0 A_1 - d_1 A_0 = b; x''_m = K_mj x'^j w - gamma x'_m
  CHECK(std::abs(f[3] - (b * r.v[1] * w - gamma * r.v[0])) <= 1e-13);
  CHECK(std::abs(f[4] - (-b * r.v[0] * w - gamma * r.v[1])) <= 1e-13);
  CHECK(std::abs(f[5] - (-gamma * r.v[2])) <= 1e-13);
  CHECK(std::abs(f[6] + gamma * w) <= 1e-13);

  // constant field: no forcing
  const Scenario flat = kaluza_klein_scenario(uniform_field(0.0, 1.0, -2.0, 0.5), gamma);
  State g = lph_rhs(reduce_lagrangian(flat.lagrangian, flat.chart), flat.chart, r);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(g[3 + i] + gamma * r.v[i]) <= 1e-13);
}

TEST_CASE("Kaluza-Klein w decays exponentially along integration") {
  const double gamma = 0.1;
  const Scenario sc = make_scenario("kaluza-klein", {{"gamma", gamma}});
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  FullState fs = to_full(sc.chart, sc.default_initial);
  Trajectory tr = integrate_reduced(l, sc.chart, project(fs), 1.0, 1e-3);
  const auto w = tr.column("w0");
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    worst = std::max(worst, std::abs(w[k] - w[0] * std::exp(-gamma * tr.times[k])));
    CHECK(std::abs(w[k] - sc.closed_forms.at("w")(tr.times[k], sc.default_initial)) <= 1e-8);
  }
  CHECK(worst <= 1e-8);
  CHECK(tr.diagnostic_names ==
        std::vector<std::string>{"E_L", "dissipation_residual", "sdot_residual"});
  for (double r : tr.diagnostic("sdot_residual")) CHECK(std::abs(r) <= 1e-9);
}

TEST_CASE("conservative reduced energy is constant") {
  const Scenario sc = kaluza_klein_scenario(uniform_field(0.0, 0.3, 0.1, -0.2), 0.0);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  ReducedState r{{0, 0, 0}, {1.0, 0.5, -0.3}, {0.8}, 0.0};
  Trajectory tr = integrate_reduced(l, sc.chart, r, 1.0, 1e-3);
  const auto e = tr.diagnostic("E_L");
  for (double v : e) CHECK(std::abs(v - e[0]) <= 1e-8);
}

TEST_CASE("Wong reduced equations against a Christoffel-symbol oracle") {
  const WongData data = default_wong_data(0.15, 1.3, 0.25, 0.8);
  const Scenario sc = wong_scenario(data);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart);
  const DenseMatrix& h = data.h;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 10; ++n) {
    ReducedState r{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, u(rng)};
    State f = lph_rhs(l, sc.chart, r);
    const MetricJet mj = metric_jet(data, r.q_base);
    const DenseMatrix ginv = inverse(mj.g);
    const auto k = curvature(sc.chart, r.q_base);
    const ReducedStructure st = reduced_structure(sc.chart, r.q_base);
    const auto& ups = st.upsilon;

    // hw_a = h_ac w^c
    std::vector<double> hw(3, 0.0);
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) hw[a] += h(a, c) * r.w[c];
    for (int m = 0; m < 2; ++m) {
      double acc = -data.gamma * r.v[m];
      for (int n2 = 0; n2 < 2; ++n2) {
        for (int kk = 0; kk < 2; ++kk) {
          for (int ll = 0; ll < 2; ++ll) {
            const double chris = 0.5 * ginv(m, n2) *
                                 (mj.dg[kk](n2, ll) + mj.dg[ll](n2, kk) - mj.dg[n2](kk, ll));
            acc -= chris * r.v[kk] * r.v[ll];
          }
        }
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int a = 0; a < 3; ++a) acc += ginv(m, i) * k[a](i, j) * r.v[j] * hw[a];
      CHECK(std::abs(f[2 + m] - acc) <= 1e-9);
    }
    for (int a = 0; a < 3; ++a) {
      double wd = -data.gamma * r.w[a];
      for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 3; ++b) wd -= ups[i](a, b) * r.v[i] * r.w[b];
      CHECK(std::abs(f[4 + a] - wd) <= 1e-9);
    }
  }
}

TEST_CASE("projection of the full route equals the reduced route") {
  for (const auto& name : scenario_names()) {
    const Scenario sc = make_scenario(name);
    ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart, samples(sc, 3, 1));
    Trajectory full = integrate_full(sc.lagrangian, sc.default_initial, 2.0, 1e-3);
    Trajectory pf = project_trajectory(to_quasi_trajectory(full, sc.chart), sc.chart);
    Trajectory red =
        integrate_reduced(l, sc.chart, project(to_full(sc.chart, sc.default_initial)), 2.0, 1e-3);
    REQUIRE(pf.size() == red.size());
    CHECK(pf.state_names == red.state_names);
    double worst = 0.0;
    for (std::size_t k = 0; k < pf.size(); ++k)
      for (std::size_t c = 0; c < pf.states[k].size(); ++c)
        worst = std::max(worst, std::abs(pf.states[k][c] - red.states[k][c]));
    CHECK_MESSAGE(worst <= 1e-6, name);
  }
}

TEST_CASE("Euler-Poincare-Herglotz examples") {
  const double gamma = 0.25;
  LieAlgebraSpec abelian(2, std::vector<double>(8, 0.0));
  EphLagrangian free = [gamma](std::span<const Jet> w, const Jet& s) {
    return Jet(0.5) * (w[0] * w[0] + w[1] * w[1]) - Jet(gamma) * s;
  };
  State f = euler_poincare_herglotz_rhs(free, abelian, std::vector<double>{0.4, -1.2}, 0.3);
  CHECK(std::abs(f[0] + gamma * 0.4) <= 1e-15);
  CHECK(std::abs(f[1] - gamma * 1.2) <= 1e-15);
  CHECK(std::abs(f[2] - (0.5 * (0.16 + 1.44) - gamma * 0.3)) <= 1e-15);

  // rigid body without s: p' = p x w with p = I w
  const LieAlgebraSpec so3 = so3_group().algebra;
  const double in[3] = {1.0, 2.0, 3.5};
  EphLagrangian body = [in](std::span<const Jet> w, const Jet&) {
    return Jet(0.5) * (Jet(in[0]) * w[0] * w[0] + Jet(in[1]) * w[1] * w[1] +
                       Jet(in[2]) * w[2] * w[2]);
  };
  const std::vector<double> w{0.3, -0.7, 0.5};
  State g = euler_poincare_herglotz_rhs(body, so3, w, 0.0);
  const double p[3] = {in[0] * w[0], in[1] * w[1], in[2] * w[2]};
  const double pxw[3] = {p[1] * w[2] - p[2] * w[1], p[2] * w[0] - p[0] * w[2],
                         p[0] * w[1] - p[1] * w[0]};
  for (int a = 0; a < 3; ++a) CHECK(std::abs(in[a] * g[a] - pxw[a]) <= 1e-14);

  // affine: agrees with the LPH equations when the base decouples
  const LieAlgebraSpec aff = make_scenario("affine").chart.algebra();
  EphLagrangian le = [gamma](std::span<const Jet> ww, const Jet& s) {
    return Jet(0.5) * ww[0] * ww[0] + log(ww[1]) - Jet(gamma) * s;
  };
  ReducedLagrangian lr{1, 2, [gamma](std::span<const Jet>, std::span<const Jet> v,
                                     std::span<const Jet> ww, const Jet& s) {
                         return Jet(0.5) * v[0] * v[0] + Jet(0.5) * ww[0] * ww[0] +
                                log(ww[1]) - Jet(gamma) * s;
                       }};
  const Scenario asc = make_scenario("affine");
  State e = euler_poincare_herglotz_rhs(le, aff, std::vector<double>{0.6, 1.4}, 0.2);
  State lph = lph_rhs(lr, asc.chart, ReducedState{{0.0}, {0.0}, {0.6, 1.4}, 0.2});
  CHECK(std::abs(e[0] - lph[2]) <= 1e-14);
  CHECK(std::abs(e[1] - lph[3]) <= 1e-14);
  CHECK(std::abs(e[2] - lph[4]) <= 1e-14);
}

TEST_CASE("singular reduced Hessian is reported") {
  const Scenario sc = make_scenario("affine");
  ReducedLagrangian bad{1, 2, [](std::span<const Jet>, std::span<const Jet> v,
                                 std::span<const Jet> w, const Jet&) {
                          return Jet(0.5) * v[0] * v[0] + w[0] * w[1];  // zero in w w
                        }};
  ReducedLagrangian lin{1, 2, [](std::span<const Jet>, std::span<const Jet> v,
                                 std::span<const Jet> w, const Jet&) {
                          return Jet(0.5) * v[0] * v[0] + w[0] + w[1];
                        }};
  CHECK_NOTHROW(lph_rhs(bad, sc.chart, ReducedState{{0}, {1}, {1, 1}, 0}));
  CHECK_THROWS_AS(lph_rhs(lin, sc.chart, ReducedState{{0}, {1}, {1, 1}, 0}), NonGRegularAtState);
}

TEST_CASE("reduced flatten round trip") {
  ReducedState r{{1}, {2}, {3, 4}, 5};
  auto y = flatten(r);
  CHECK(y == std::vector<double>{1, 2, 3, 4, 5});
  ReducedState z = unflatten_reduced(y, 1, 2);
  CHECK(z.w == r.w);
  CHECK(z.s == 5.0);
}
