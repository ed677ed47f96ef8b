#include "herglotz/reduction/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/lu.hpp"

namespace herglotz {

namespace {

// The reduced equations share one core: given l seeded over (q, y, s) and
// the structure data, assemble H ydot = rhs and solve.
std::vector<double> solve_lph(const ReducedJet& j, const ReducedStructure& st,
                              std::size_t m, std::size_t d,
                              std::span<const double> v,
                              std::span<const double> w) {
  const LieAlgebraSpec& alg = *st.algebra;
  const std::size_t ny = m + d;
  std::vector<double> rhs(ny, 0.0);
  auto l_w = [&](std::size_t a) { return j.l_y[m + a]; };

  for (std::size_t i = 0; i < m; ++i) {
    double r = j.l_q[i] + j.l_s * j.l_y[i];
    for (std::size_t a = 0; a < d; ++a) {
      double c = 0.0;
      for (std::size_t k = 0; k < m; ++k) c += st.curvature[a](i, k) * v[k];
      for (std::size_t b = 0; b < d; ++b) c -= st.upsilon[i](a, b) * w[b];
      r += c * l_w(a);
    }
    rhs[i] = r;
  }
  for (std::size_t a = 0; a < d; ++a) {
    double r = j.l_s * l_w(a);
    for (std::size_t b = 0; b < d; ++b) {
      double c = 0.0;
      for (std::size_t i = 0; i < m; ++i) c += st.upsilon[i](b, a) * v[i];
      for (std::size_t cc = 0; cc < d; ++cc) c -= alg.c(b, a, cc) * w[cc];
      r += c * l_w(b);
    }
    rhs[m + a] = r;
  }
  for (std::size_t p = 0; p < ny; ++p) {
    for (std::size_t k = 0; k < m; ++k) rhs[p] -= j.Myq(p, k) * v[k];
    rhs[p] -= j.mys[p] * j.l;
  }
  try {
    return lu_solve(j.H, rhs);
  } catch (const SingularMatrix& e) {
    throw NonGRegularAtState(
        std::string("reduced Lagrangian Hessian in (v, w) is singular: ") +
        e.what());
  }
}

ReducedJet unpack_reduced(const Jet& r, std::size_t m, std::size_t ny) {
  ReducedJet j;
  const std::size_t is = m + ny;
  j.l = r.value();
  j.l_s = r.d(is);
  j.l_q.resize(m);
  j.l_y.resize(ny);
  j.mys.resize(ny);
  j.H = DenseMatrix(ny, ny);
  j.Myq = DenseMatrix(ny, m);
  for (std::size_t k = 0; k < m; ++k) j.l_q[k] = r.d(k);
  for (std::size_t p = 0; p < ny; ++p) {
    j.l_y[p] = r.d(m + p);
    j.mys[p] = r.d2(m + p, is);
    for (std::size_t q = 0; q < ny; ++q) j.H(p, q) = r.d2(m + p, m + q);
    for (std::size_t k = 0; k < m; ++k) j.Myq(p, k) = r.d2(m + p, k);
  }
  return j;
}

double reduced_energy(const ReducedJet& j, std::span<const double> y) {
  double e = -j.l;
  for (std::size_t p = 0; p < y.size(); ++p) e += y[p] * j.l_y[p];
  return e;
}

// Gamma(E) - l_s E along the reduced field.
double reduced_dissipation(const ReducedJet& j, std::span<const double> v,
                           std::span<const double> y,
                           std::span<const double> ydot) {
  const std::size_t m = v.size();
  const std::size_t ny = y.size();
  double g = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double de = -j.l_q[k];
    for (std::size_t p = 0; p < ny; ++p) de += y[p] * j.Myq(p, k);
    g += de * v[k];
  }
  for (std::size_t q = 0; q < ny; ++q) {
    double de = 0.0;
    for (std::size_t p = 0; p < ny; ++p) de += y[p] * j.H(p, q);
    g += de * ydot[q];
  }
  double des = -j.l_s;
  for (std::size_t p = 0; p < ny; ++p) des += y[p] * j.mys[p];
  g += des * j.l;
  return g - j.l_s * reduced_energy(j, y);
}

// dl/dt along the reduced field.
double reduced_ldot(const ReducedJet& j, std::span<const double> v,
                    std::span<const double> ydot) {
  double r = j.l_s * j.l;
  for (std::size_t k = 0; k < v.size(); ++k) r += j.l_q[k] * v[k];
  for (std::size_t p = 0; p < ydot.size(); ++p) r += j.l_y[p] * ydot[p];
  return r;
}

}  // namespace

double ReducedLagrangian::value(const ReducedState& x) const {
  const JetVector q = lift(x.q_base);
  const JetVector v = lift(x.v);
  const JetVector w = lift(x.w);
  return eval(q, v, w, Jet(x.s)).value();
}

ReducedLagrangian reduce_lagrangian(const ContactLagrangian& L,
                                    const BundleChart& chart,
                                    std::span<const NaturalState> probes,
                                    double tolerance) {
  if (L.dim != chart.dim()) {
    throw DimensionMismatch("Lagrangian dimension " + std::to_string(L.dim) +
                            " does not match chart dimension " +
                            std::to_string(chart.dim()));
  }
  if (!probes.empty()) {
    const double r = invariance_check(L, chart, probes);
    if (!(r <= tolerance)) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "Lagrangian is not G-invariant: max |E~_a^C(L)| = " << r
          << " exceeds " << tolerance;
      throw NonInvariantLagrangian(msg.str());
    }
  }
  ReducedLagrangian l;
  l.base_dim = chart.base_dim;
  l.fiber_dim = chart.fiber_dim;
  l.eval = [L, chart](std::span<const Jet> qb, std::span<const Jet> v,
                      std::span<const Jet> w, const Jet& s) {
    JetVector q(qb.begin(), qb.end());
    q.resize(chart.dim(), Jet(0.0));
    const JetVector u = from_quasi(chart, q, v, w);
    return L.eval(q, u, s);
  };
  return l;
}

double invariance_check(const ContactLagrangian& L, const BundleChart& chart,
                        std::span<const NaturalState> states) {
  const std::size_t n = chart.dim();
  const std::size_t d = chart.fiber_dim;
  double worst = 0.0;
  for (const NaturalState& x : states) {
    const LagrangianJet j = jet(L, x);
    const JetVector qj = seed(x.q, false);
    const FrameSet<Jet> f = frames(chart, qj);
    for (std::size_t a = 0; a < d; ++a) {
      double r = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        const Jet& z = f.etilde(b, a);
        double dzu = 0.0;
        for (std::size_t c = 0; c < n; ++c) dzu += z.d(c) * x.u[c];
        r += z.value() * j.dLdq[b] + dzu * j.dLdu[b];
      }
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double reduction_consistency(const ContactLagrangian& L,
                             const BundleChart& chart,
                             const ReducedLagrangian& l,
                             std::span<const NaturalState> states) {
  double worst = 0.0;
  for (const NaturalState& x : states) {
    const ReducedState r = project(to_full(chart, x));
    worst = std::max(worst, std::abs(l.value(r) - L.value(x.q, x.u, x.s)));
  }
  return worst;
}

ReducedJet reduced_jet(const ReducedLagrangian& l, const ReducedState& x) {
  const std::size_t m = l.base_dim;
  const std::size_t d = l.fiber_dim;
  if (x.q_base.size() != m || x.v.size() != m || x.w.size() != d) {
    throw DimensionMismatch("reduced state does not match reduced Lagrangian");
  }
  const std::size_t ny = m + d;
  const std::size_t seeds = m + ny + 1;
  JetVector q;
  JetVector v;
  JetVector w;
  for (std::size_t k = 0; k < m; ++k) q.push_back(Jet::variable(x.q_base[k], k, seeds));
  for (std::size_t k = 0; k < m; ++k) v.push_back(Jet::variable(x.v[k], m + k, seeds));
  for (std::size_t a = 0; a < d; ++a) w.push_back(Jet::variable(x.w[a], 2 * m + a, seeds));
  const Jet s = Jet::variable(x.s, m + ny, seeds);
  return unpack_reduced(l.eval(q, v, w, s), m, ny);
}

ReducedStructure reduced_structure(const BundleChart& chart,
                                   std::span<const double> q_base) {
  ReducedStructure st;
  st.algebra = &chart.algebra();
  st.curvature = curvature(chart, q_base);
  std::vector<double> q(q_base.begin(), q_base.end());
  q.resize(chart.dim(), 0.0);
  st.upsilon = upsilon(chart, q);
  return st;
}

LphEvaluation lph_evaluate(const ReducedLagrangian& l, const BundleChart& chart,
                           const ReducedState& x) {
  LphEvaluation ev;
  ev.jet = reduced_jet(l, x);
  const ReducedStructure st = reduced_structure(chart, x.q_base);
  ev.ydot = solve_lph(ev.jet, st, l.base_dim, l.fiber_dim, x.v, x.w);
  return ev;
}

std::vector<double> flatten(const ReducedState& x) {
  std::vector<double> y = x.q_base;
  y.insert(y.end(), x.v.begin(), x.v.end());
  y.insert(y.end(), x.w.begin(), x.w.end());
  y.push_back(x.s);
  return y;
}

ReducedState unflatten_reduced(std::span<const double> y, std::size_t m,
                               std::size_t d) {
  if (y.size() != 2 * m + d + 1) {
    throw DimensionMismatch("reduced state needs " + std::to_string(2 * m + d + 1) +
                            " components, got " + std::to_string(y.size()));
  }
  ReducedState x;
  auto it = y.begin();
  x.q_base.assign(it, it + static_cast<std::ptrdiff_t>(m));
  it += static_cast<std::ptrdiff_t>(m);
  x.v.assign(it, it + static_cast<std::ptrdiff_t>(m));
  it += static_cast<std::ptrdiff_t>(m);
  x.w.assign(it, it + static_cast<std::ptrdiff_t>(d));
  x.s = y.back();
  return x;
}

State lph_rhs(const ReducedLagrangian& l, const BundleChart& chart,
              const ReducedState& x) {
  const LphEvaluation ev = lph_evaluate(l, chart, x);
  State out = x.v;
  out.insert(out.end(), ev.ydot.begin(), ev.ydot.end());
  out.push_back(ev.jet.l);
  return out;
}

Trajectory integrate_reduced(const ReducedLagrangian& l,
                             const BundleChart& chart, const ReducedState& x0,
                             double t1, double h) {
  const std::size_t m = l.base_dim;
  const std::size_t d = l.fiber_dim;
  const OdeProblem problem{2 * m + d + 1,
                           [&](double, std::span<const double> y) {
                             return lph_rhs(l, chart, unflatten_reduced(y, m, d));
                           }};
  const auto samples = rk4_integrate(problem, flatten(x0), 0.0, t1, h);

  Trajectory tr;
  tr.state_names = indexed_names("q", m);
  for (auto& s : indexed_names("v", m)) tr.state_names.push_back(s);
  for (auto& s : indexed_names("w", d)) tr.state_names.push_back(s);
  tr.state_names.push_back("s");
  tr.diagnostic_names = {"E_L", "dissipation_residual", "sdot_residual"};

  double prev_l = 0.0;
  double prev_ldot = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& smp = samples[k];
    const ReducedState x = unflatten_reduced(smp.y, m, d);
    LphEvaluation ev;
    try {
      ev = lph_evaluate(l, chart, x);
    } catch (NumericalError& err) {
      err.set_time(smp.t);
      err.set_state(smp.y);
      throw;
    }
    std::vector<double> y = x.v;
    y.insert(y.end(), x.w.begin(), x.w.end());
    const double e = reduced_energy(ev.jet, y);
    const double diss = reduced_dissipation(ev.jet, x.v, y, ev.ydot);
    const double ldot = reduced_ldot(ev.jet, x.v, ev.ydot);
    double sres = 0.0;
    if (k > 0) {
      const double dt = smp.t - samples[k - 1].t;
      const double ds = smp.y.back() - samples[k - 1].y.back();
      sres = ds / dt - (0.5 * (prev_l + ev.jet.l) + dt * (prev_ldot - ldot) / 12.0);
    }
    prev_l = ev.jet.l;
    prev_ldot = ldot;
    tr.times.push_back(smp.t);
    tr.states.push_back(smp.y);
    tr.diagnostics.push_back({e, diss, sres});
  }
  return tr;
}

State euler_poincare_herglotz_rhs(const EphLagrangian& l,
                                  const LieAlgebraSpec& spec,
                                  std::span<const double> w, double s) {
  const std::size_t d = spec.dim();
  if (w.size() != d) {
    throw DimensionMismatch("w has " + std::to_string(w.size()) +
                            " entries for an algebra of dimension " +
                            std::to_string(d));
  }
  const std::size_t seeds = d + 1;
  JetVector wj;
  for (std::size_t a = 0; a < d; ++a) wj.push_back(Jet::variable(w[a], a, seeds));
  const Jet sj = Jet::variable(s, d, seeds);
  const ReducedJet j = unpack_reduced(l(wj, sj), 0, d);
  ReducedStructure st;
  st.algebra = &spec;
  State out = solve_lph(j, st, 0, d, {}, w);
  out.push_back(j.l);
  return out;
}

}  // namespace herglotz
