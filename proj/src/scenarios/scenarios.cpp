#include "herglotz/scenarios/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

JetMatrix hat(std::span<const Jet> r) {
  JetMatrix m(3, 3);
  m(0, 1) = -r[2];
  m(0, 2) = r[1];
  m(1, 0) = r[2];
  m(1, 2) = -r[0];
  m(2, 0) = -r[1];
  m(2, 1) = r[0];
  return m;
}

// Series in x = theta^2 below this, closed forms above.
constexpr double kSeriesCut = 1e-2;

Jet poly(const Jet& x, std::initializer_list<double> coeffs) {
  // Horner from the highest coefficient
  std::vector<double> c(coeffs);
  Jet acc(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + Jet(c[k]);
  return acc;
}

struct RodriguesCoefficients {
  Jet f1;  // sin t / t
  Jet f2;  // (1 - cos t) / t^2
  Jet c;   // 1/t^2 - (1 + cos t) / (2 t sin t)
};

RodriguesCoefficients rodrigues(const Jet& x) {
  if (x.value() < kSeriesCut) {
    return {poly(x, {1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880}),
            poly(x, {0.5, -1.0 / 24, 1.0 / 720, -1.0 / 40320, 1.0 / 3628800}),
            poly(x, {1.0 / 12, 1.0 / 720, 1.0 / 30240, 1.0 / 1209600,
                     1.0 / 47900160})};
  }
  const Jet t = sqrt(x);
  const Jet s = sin(t);
  const Jet co = cos(t);
  return {s / t, (Jet(1.0) - co) / x,
          Jet(1.0) / x - (Jet(1.0) + co) / (Jet(2.0) * t * s)};
}

Jet dot3(std::span<const Jet> r) { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2]; }

JetMatrix rotation(std::span<const Jet> r) {
  const RodriguesCoefficients rc = rodrigues(dot3(r));
  const JetMatrix k = hat(r);
  JetMatrix out = JetMatrix::identity(3);
  out += k * rc.f1;
  out += (k * k) * rc.f2;
  return out;
}

// Inverse of the left Jacobian of exp on SO(3).
JetMatrix left_jacobian_inverse(std::span<const Jet> r) {
  const Jet x = dot3(r);
  if (x.value() > 0.0 && std::sqrt(x.value()) >= 3.1) {
    throw ChartOutOfRange("rotation vector too close to angle pi for the chart");
  }
  const RodriguesCoefficients rc = rodrigues(x);
  const JetMatrix k = hat(r);
  JetMatrix out = JetMatrix::identity(3);
  out -= k * Jet(0.5);
  out += (k * k) * rc.c;
  return out;
}

std::vector<double> so3_log(const DenseMatrix& m) {
  if (m.rows() != 3 || m.cols() != 3) throw DimensionMismatch("SO(3) log of " + m.shape());
  const double v0 = 0.5 * (m(2, 1) - m(1, 2));
  const double v1 = 0.5 * (m(0, 2) - m(2, 0));
  const double v2 = 0.5 * (m(1, 0) - m(0, 1));
  const double s = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
  const double c = 0.5 * (m(0, 0) + m(1, 1) + m(2, 2) - 1.0);
  const double t = std::atan2(s, c);
  if (t > M_PI - 1e-6) {
    throw ChartOutOfRange("rotation angle " + std::to_string(t) +
                          " leaves the rotation-vector chart");
  }
  const double f = t < 1e-4 ? 1.0 + t * t / 6.0 + 7.0 * t * t * t * t / 360.0 : t / std::sin(t);
  return {f * v0, f * v1, f * v2};
}

LieAlgebraSpec affine_algebra() {
  return LieAlgebraSpec::from_matrices({DenseMatrix{{1, 0}, {0, 0}},
                                        DenseMatrix{{0, 1}, {0, 0}}});
}

}  // namespace

MatrixGroup so3_group() {
  std::vector<DenseMatrix> basis;
  for (std::size_t a = 0; a < 3; ++a) {
    JetVector e(3, Jet(0.0));
    e[a] = 1.0;
    basis.push_back(values(hat(e)));
  }
  MatrixGroup g;
  g.algebra = LieAlgebraSpec::from_matrices(std::move(basis));
  g.to_matrix = [](std::span<const Jet> r) { return rotation(r); };
  g.from_matrix = so3_log;
  return g;
}

Scenario affine_scenario(double q, double gamma) {
  if (std::abs(q * q - 1.0) < 1e-12) {
    std::ostringstream msg;
    msg << "affine scenario: the Lagrangian is regular only for q^2 != 1 (got q = "
        << q << ")";
    throw InvalidParameter(msg.str());
  }
  Scenario sc;
  sc.name = "affine";
  sc.description = "affine group of the line acting on G x R";
  sc.parameters = {{"q", q}, {"gamma", gamma}};

  BundleChart& ch = sc.chart;
  ch.base_dim = 1;
  ch.fiber_dim = 2;
  ch.group.algebra = affine_algebra();
  ch.group.to_matrix = [](std::span<const Jet> c) {
    JetMatrix m(2, 2);
    m(0, 0) = exp(c[0]);
    m(0, 1) = c[1];
    m(1, 1) = 1.0;
    return m;
  };
  ch.group.from_matrix = [](const DenseMatrix& m) {
    if (std::abs(m(1, 0)) > 1e-9 || std::abs(m(1, 1) - 1.0) > 1e-9 || !(m(0, 0) > 0.0)) {
      throw ChartOutOfRange("matrix is not an affine-group element");
    }
    return std::vector<double>{std::log(m(0, 0)), m(0, 1)};
  };
  ch.gamma = [](std::span<const Jet>) { return JetMatrix(2, 1); };
  ch.fundamental = [](std::span<const Jet> qq) {
    JetMatrix k = JetMatrix::identity(2);
    k(1, 0) = qq[2];
    return k;
  };
  ch.adjoint = [](std::span<const Jet> c) {
    JetMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 0) = -c[1];
    a(1, 1) = exp(c[0]);
    return a;
  };
  ch.action = [](const GroupElement& g, std::span<const double> qq) {
    return std::vector<double>{qq[0], g.coords[0] + qq[1],
                               std::exp(g.coords[0]) * qq[2] + g.coords[1]};
  };

  sc.lagrangian.dim = 3;
  sc.lagrangian.eval = [q, gamma](std::span<const Jet> qq, std::span<const Jet> u,
                                  const Jet& s) {
    const Jet& xd = u[0];
    const Jet& thd = u[1];
    const Jet& phd = u[2];
    return Jet(0.5) * thd * thd + Jet(q) * xd * thd + Jet(0.5) * xd * xd +
           log(exp(-qq[1]) * phd) - Jet(gamma) * s;
  };

  sc.default_initial = {{0.0, 0.0, 0.0}, {1.0, 0.5, 1.0}, 0.0};
  sc.sample_state = [](std::mt19937_64& rng) {
    NaturalState x;
    for (int k = 0; k < 3; ++k) x.q.push_back(uniform(rng, -1.0, 1.0));
    x.u = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 2.0)};
    x.s = uniform(rng, -1.0, 1.0);
    return x;
  };
  sc.closed_forms["phi_dot"] = [gamma](double t, const NaturalState& x0) {
    return x0.u[2] * std::exp(gamma * t);
  };
  return sc;
}

CovectorField uniform_field(double strength, double a0, double a1, double a2) {
  return [=](std::span<const Jet> x) {
    return JetVector{Jet(a0) - Jet(0.5 * strength) * x[1],
                     Jet(a1) + Jet(0.5 * strength) * x[0], Jet(a2)};
  };
}

Scenario kaluza_klein_scenario(CovectorField field, double gamma) {
  Scenario sc;
  sc.name = "kaluza-klein";
  sc.description = "charged particle on R^3 x S^1 with a damped Kaluza-Klein metric";
  sc.parameters = {{"gamma", gamma}};

  BundleChart& ch = sc.chart;
  ch.base_dim = 3;
  ch.fiber_dim = 1;
  ch.group.algebra = LieAlgebraSpec::from_matrices({DenseMatrix{{0, 1}, {0, 0}}});
  ch.group.to_matrix = [](std::span<const Jet> c) {
    JetMatrix m = JetMatrix::identity(2);
    m(0, 1) = c[0];
    return m;
  };
  ch.group.from_matrix = [](const DenseMatrix& m) {
    if (std::abs(m(0, 0) - 1.0) > 1e-9 || std::abs(m(1, 1) - 1.0) > 1e-9 ||
        std::abs(m(1, 0)) > 1e-9) {
      throw ChartOutOfRange("matrix is not a translation of the angle");
    }
    return std::vector<double>{m(0, 1)};
  };
  ch.gamma = [field](std::span<const Jet> x) {
    const JetVector a = field(x);
    JetMatrix g(1, 3);
    for (std::size_t i = 0; i < 3; ++i) g(0, i) = a[i];
    return g;
  };
  ch.fundamental = [](std::span<const Jet>) { return JetMatrix::identity(1); };
  ch.adjoint = [](std::span<const Jet>) { return JetMatrix::identity(1); };
  ch.action = [](const GroupElement& g, std::span<const double> q) {
    return std::vector<double>{q[0], q[1], q[2], q[3] + g.coords[0]};
  };
  ch.upsilon_mode = UpsilonMode::kGammaContraction;

  sc.lagrangian.dim = 4;
  sc.lagrangian.eval = [field, gamma](std::span<const Jet> q, std::span<const Jet> u,
                                      const Jet& s) {
    const JetVector a = field(q.first(3));
    Jet w = u[3];
    Jet kin(0.0);
    for (std::size_t i = 0; i < 3; ++i) {
      w += a[i] * u[i];
      kin += u[i] * u[i];
    }
    return Jet(0.5) * (kin + w * w) - Jet(gamma) * s;
  };

  sc.default_initial = {{0.1, 0.2, 0.0, 0.0}, {1.0, 0.5, 0.2, 0.7}, 0.0};
  sc.sample_state = [](std::mt19937_64& rng) {
    NaturalState x;
    for (int k = 0; k < 4; ++k) x.q.push_back(uniform(rng, -1.0, 1.0));
    for (int k = 0; k < 4; ++k) x.u.push_back(uniform(rng, -1.0, 1.0));
    x.s = uniform(rng, -1.0, 1.0);
    return x;
  };
  const BundleChart chart = ch;
  sc.closed_forms["w"] = [chart, gamma](double t, const NaturalState& x0) {
    return to_full(chart, x0).w[0] * std::exp(-gamma * t);
  };
  return sc;
}

WongData default_wong_data(double gamma, double mu, double kappa,
                           double coupling) {
  WongData d;
  d.base_dim = 2;
  d.gamma = gamma;
  d.h = DenseMatrix::identity(3) * mu;
  d.metric = [kappa](std::span<const Jet> x) {
    JetMatrix g(2, 2);
    g(0, 0) = Jet(1.0) + Jet(kappa) * x[1] * x[1];
    g(1, 1) = Jet(1.0) + Jet(kappa) * x[0] * x[0];
    return g;
  };
  d.connection = [coupling](std::span<const Jet> x) {
    JetMatrix g(3, 2);
    g(0, 0) = Jet(coupling) * x[1];
    g(1, 1) = Jet(coupling) * x[0];
    g(2, 0) = Jet(coupling) * x[0];
    g(2, 1) = Jet(-coupling) * x[1];
    return g;
  };
  return d;
}

Scenario wong_scenario(const WongData& data) {
  Scenario sc;
  sc.name = "wong";
  sc.description = "dissipative Wong equations, SO(3) colour charge on R^2";
  sc.parameters = {{"gamma", data.gamma}};

  BundleChart& ch = sc.chart;
  ch.base_dim = data.base_dim;
  ch.fiber_dim = 3;
  ch.group = so3_group();
  const LieAlgebraSpec& alg = ch.group.algebra;
  if (data.h.rows() != 3 || data.h.cols() != 3) {
    throw InvalidParameter("Wong scenario: h must be 3x3");
  }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      if (std::abs(data.h(a, b) - data.h(b, a)) > 1e-12) {
        throw InvalidParameter("Wong scenario: h must be symmetric");
      }
      for (std::size_t c = 0; c < 3; ++c) {
        // h_bd C^b_ac + h_bc C^b_ad = 0, here with (a, c, d) -> (a, b, c)
        double s = 0.0;
        for (std::size_t e = 0; e < 3; ++e) {
          s += data.h(e, c) * alg.c(e, a, b) + data.h(e, b) * alg.c(e, a, c);
        }
        if (std::abs(s) > 1e-12) {
          throw InvalidParameter(
              "Wong scenario: h is not ad-invariant (h_bd C^b_ac + h_bc C^b_ad != 0)");
        }
      }
    }

  const std::size_t m = data.base_dim;
  ch.gamma = data.connection;
  ch.fundamental = [m](std::span<const Jet> q) { return left_jacobian_inverse(q.subspan(m)); };
  ch.adjoint = [](std::span<const Jet> r) { return rotation(r); };
  const MatrixGroup group = ch.group;
  ch.action = [m, group](const GroupElement& g, std::span<const double> q) {
    const GroupElement h = group_element(group, q.subspan(m));
    const std::vector<double> r = group.from_matrix(g.matrix * h.matrix);
    std::vector<double> out(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(m));
    out.insert(out.end(), r.begin(), r.end());
    return out;
  };
  ch.upsilon_mode = UpsilonMode::kGammaContraction;

  const BundleChart chart = ch;
  const WongData wd = data;
  sc.lagrangian.dim = m + 3;
  sc.lagrangian.eval = [chart, wd, m](std::span<const Jet> q, std::span<const Jet> u,
                                      const Jet& s) {
    JetVector v;
    JetVector w;
    to_quasi(chart, q, u, v, w);
    const JetMatrix g = wd.metric(q.first(m));
    Jet kin(0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) kin += g(i, j) * v[i] * v[j];
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        if (wd.h(a, b) != 0.0) kin += Jet(wd.h(a, b)) * w[a] * w[b];
      }
    return Jet(0.5) * kin - Jet(wd.gamma) * s;
  };

  NaturalState x0;
  x0.q = {0.2, -0.1};
  x0.q.resize(m, 0.0);
  x0.q.insert(x0.q.end(), {0.1, 0.2, -0.1});
  x0.u = {0.5, 0.3};
  x0.u.resize(m, 0.0);
  x0.u.insert(x0.u.end(), {0.4, -0.2, 0.3});
  sc.default_initial = x0;
  sc.sample_state = [m](std::mt19937_64& rng) {
    NaturalState x;
    for (std::size_t k = 0; k < m; ++k) x.q.push_back(uniform(rng, -1.0, 1.0));
    for (int k = 0; k < 3; ++k) x.q.push_back(uniform(rng, -0.8, 0.8));
    for (std::size_t k = 0; k < m + 3; ++k) x.u.push_back(uniform(rng, -1.0, 1.0));
    x.s = uniform(rng, -1.0, 1.0);
    return x;
  };
  return sc;
}

Scenario damped_oscillator_scenario(double gamma, double k) {
  Scenario sc;
  sc.name = "damped-oscillator";
  sc.description = "linear oscillator with action-dependent damping, no symmetry";
  sc.parameters = {{"gamma", gamma}, {"k", k}};

  BundleChart& ch = sc.chart;
  ch.base_dim = 1;
  ch.fiber_dim = 0;
  ch.group.algebra = LieAlgebraSpec(0, {});
  ch.group.to_matrix = [](std::span<const Jet>) { return JetMatrix(); };
  ch.group.from_matrix = [](const DenseMatrix&) { return std::vector<double>{}; };
  ch.gamma = [](std::span<const Jet>) { return JetMatrix(0, 1); };
  ch.fundamental = [](std::span<const Jet>) { return JetMatrix(); };
  ch.adjoint = [](std::span<const Jet>) { return JetMatrix(); };
  ch.action = [](const GroupElement&, std::span<const double> q) {
    return std::vector<double>(q.begin(), q.end());
  };

  sc.lagrangian.dim = 1;
  sc.lagrangian.eval = [gamma, k](std::span<const Jet> q, std::span<const Jet> u,
                                  const Jet& s) {
    return Jet(0.5) * u[0] * u[0] - Jet(0.5 * k) * q[0] * q[0] - Jet(gamma) * s;
  };
  sc.default_initial = {{1.0}, {0.0}, 0.0};
  sc.sample_state = [](std::mt19937_64& rng) {
    return NaturalState{{uniform(rng, -1.0, 1.0)}, {uniform(rng, -1.0, 1.0)},
                        uniform(rng, -1.0, 1.0)};
  };
  const ContactLagrangian L = sc.lagrangian;
  sc.closed_forms["energy"] = [L, gamma](double t, const NaturalState& x0) {
    return energy(L, x0.q, x0.u, x0.s) * std::exp(-gamma * t);
  };
  return sc;
}

std::vector<std::string> scenario_names() {
  return {"affine", "kaluza-klein", "wong", "damped-oscillator"};
}

ParameterMap scenario_defaults(const std::string& name) {
  if (name == "affine") return {{"q", 2.0}, {"gamma", 0.1}};
  if (name == "kaluza-klein") {
    return {{"gamma", 0.1}, {"field", 1.0}, {"a0", 0.0}, {"a1", 0.0}, {"a2", 0.0}};
  }
  if (name == "wong") {
    return {{"gamma", 0.1}, {"mu", 1.0}, {"kappa", 0.25}, {"coupling", 1.0}};
  }
  if (name == "damped-oscillator") return {{"gamma", 0.1}, {"k", 1.0}};
  throw InvalidParameter("unknown scenario '" + name + "'");
}

Scenario make_scenario(const std::string& name, const ParameterMap& params) {
  ParameterMap p = scenario_defaults(name);
  for (const auto& [key, value] : params) {
    if (!p.count(key)) {
      std::string known;
      for (const auto& kv : p) known += (known.empty() ? "" : ", ") + kv.first;
      throw InvalidParameter("scenario '" + name + "' has no parameter '" + key +
                             "' (known: " + known + ")");
    }
    if (!std::isfinite(value)) {
      throw InvalidParameter("parameter '" + key + "' must be finite");
    }
    p[key] = value;
  }
  Scenario sc;
  if (name == "affine") {
    sc = affine_scenario(p["q"], p["gamma"]);
  } else if (name == "kaluza-klein") {
    sc = kaluza_klein_scenario(uniform_field(p["field"], p["a0"], p["a1"], p["a2"]),
                               p["gamma"]);
  } else if (name == "wong") {
    sc = wong_scenario(default_wong_data(p["gamma"], p["mu"], p["kappa"], p["coupling"]));
  } else {
    sc = damped_oscillator_scenario(p["gamma"], p["k"]);
  }
  sc.parameters = p;
  return sc;
}

}  // namespace herglotz
