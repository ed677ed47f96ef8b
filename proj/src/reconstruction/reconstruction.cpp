#include "herglotz/reconstruction/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/expm.hpp"
#include "herglotz/numerics/lu.hpp"

namespace herglotz {

namespace {

struct FrameValues {
  DenseMatrix x;       // n x m
  DenseMatrix etilde;  // n x d
  DenseMatrix ehat;    // n x d
};

FrameValues frame_values(const BundleChart& chart, std::span<const double> q) {
  const JetVector qj = lift(q);
  const FrameSet<Jet> f = frames(chart, qj);
  return {values(f.x), values(f.etilde), values(f.ehat)};
}

// Complete lifts of the frame columns: (Z, (dZ) u, 0) per column.
std::vector<std::vector<double>> complete_lifts(const JetMatrix& frame,
                                                std::span<const double> u) {
  const std::size_t n = frame.rows();
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < frame.cols(); ++c) {
    std::vector<double> z(2 * n + 1, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
      z[b] = frame(b, c).value();
      double du = 0.0;
      for (std::size_t k = 0; k < n; ++k) du += frame(b, c).d(k) * u[k];
      z[n + b] = du;
    }
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<std::vector<double>> vertical_lifts(const DenseMatrix& frame) {
  const std::size_t n = frame.rows();
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < frame.cols(); ++c) {
    std::vector<double> z(2 * n + 1, 0.0);
    for (std::size_t b = 0; b < n; ++b) z[n + b] = frame(b, c);
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<double> reduced_at(const Trajectory& reduced, double t) {
  return interpolate(reduced.times, reduced.states, t);
}

}  // namespace

DenseMatrix HessianBlocks::assembled() const {
  const std::size_t d = g_ab.rows();
  const std::size_t m = g_ij.rows();
  DenseMatrix g(d + m, d + m);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) g(a, b) = g_ab(a, b);
    for (std::size_t i = 0; i < m; ++i) {
      g(a, d + i) = g_ib(i, a);
      g(d + i, a) = g_ib(i, a);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(d + i, d + j) = g_ij(i, j);
  return g;
}

HessianBlocks hessian_blocks(const ContactLagrangian& L,
                             const BundleChart& chart, const NaturalState& x) {
  const LagrangianJet j = jet(L, x);
  const FrameValues f = frame_values(chart, x.q);
  const DenseMatrix xt = f.x.transpose();
  const DenseMatrix et = f.etilde.transpose();
  HessianBlocks hb;
  hb.g_ij = xt * j.W * f.x;
  hb.g_ib = xt * j.W * f.etilde;
  hb.g_ab = et * j.W * f.etilde;
  try {
    hb.B = LuDecomposition<double>(hb.g_ab).solve(hb.g_ib.transpose());
  } catch (const SingularMatrix& e) {
    throw NonGRegularAtState(
        std::string("Lagrangian is not G-regular here (g_ab singular): ") +
        e.what());
  }
  return hb;
}

HessianBlocks hessian_blocks(const ContactLagrangian& L,
                             const BundleChart& chart, const FullState& x) {
  return hessian_blocks(L, chart, to_natural(chart, x));
}

std::vector<double> connection_form(const ContactLagrangian& L,
                                    const BundleChart& chart,
                                    const NaturalState& x,
                                    std::span<const double> tangent) {
  const std::size_t n = chart.dim();
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  if (tangent.size() != 2 * n + 1) {
    throw DimensionMismatch("tangent vector needs " + std::to_string(2 * n + 1) +
                            " components");
  }
  const FrameValues f = frame_values(chart, x.q);
  DenseMatrix basis(n, n);  // [X | E~]
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < m; ++i) basis(r, i) = f.x(r, i);
    for (std::size_t a = 0; a < d; ++a) basis(r, m + a) = f.etilde(r, a);
  }
  const std::vector<double> comp = lu_solve(basis, tangent.first(n));
  const HessianBlocks hb = hessian_blocks(L, chart, x);
  std::vector<double> omega(d);
  for (std::size_t a = 0; a < d; ++a) {
    double s = comp[m + a];
    for (std::size_t i = 0; i < m; ++i) s += hb.B(a, i) * comp[i];
    omega[a] = s;
  }
  return omega;
}

double ConnectionAxiomReport::max() const {
  return std::max({vertical, horizontal, fundamental, invariant});
}

ConnectionAxiomReport connection_axioms_check(const ContactLagrangian& L,
                                              const BundleChart& chart,
                                              const NaturalState& x) {
  const std::size_t n = chart.dim();
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  const JetVector qj = seed(x.q, false);
  const FrameSet<Jet> f = frames(chart, qj);
  const HessianBlocks hb = hessian_blocks(L, chart, x);
  const DenseMatrix a_mat = values(chart.adjoint(lift(std::span<const double>(x.q).subspan(m))));

  ConnectionAxiomReport rep;
  auto omega = [&](std::span<const double> z) { return connection_form(L, chart, x, z); };

  for (const auto& z : vertical_lifts(values(f.x))) rep.vertical = std::max(rep.vertical, max_abs(omega(z)));
  for (const auto& z : vertical_lifts(values(f.etilde))) rep.vertical = std::max(rep.vertical, max_abs(omega(z)));
  std::vector<double> ds(2 * n + 1, 0.0);
  ds[2 * n] = 1.0;
  rep.vertical = std::max(rep.vertical, max_abs(omega(ds)));

  const auto xc = complete_lifts(f.x, x.u);
  const auto ec = complete_lifts(f.etilde, x.u);
  const auto hc = complete_lifts(f.ehat, x.u);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> h = xc[i];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t k = 0; k < h.size(); ++k) h[k] -= hb.B(a, i) * ec[a][k];
    rep.horizontal = std::max(rep.horizontal, max_abs(omega(h)));
  }
  for (std::size_t a = 0; a < d; ++a) {
    std::vector<double> o = omega(ec[a]);
    o[a] -= 1.0;
    rep.fundamental = std::max(rep.fundamental, max_abs(o));
    std::vector<double> p = omega(hc[a]);
    for (std::size_t b = 0; b < d; ++b) p[b] -= a_mat(b, a);
    rep.invariant = std::max(rep.invariant, max_abs(p));
  }
  return rep;
}

double equivariance_check(const ContactLagrangian& L, const BundleChart& chart,
                          const NaturalState& x) {
  const std::size_t n = chart.dim();
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  const JetVector qj = seed(x.q, false);
  const FrameSet<Jet> f = frames(chart, qj);
  const auto ec = complete_lifts(f.etilde, x.u);
  const HessianBlocks hb0 = hessian_blocks(L, chart, x);
  const LieAlgebraSpec& alg = chart.algebra();
  constexpr double eps = 1e-3;

  auto b_at = [&](const std::vector<double>& z, double t) {
    NaturalState y = x;
    for (std::size_t k = 0; k < n; ++k) {
      y.q[k] += t * z[k];
      y.u[k] += t * z[n + k];
    }
    return hessian_blocks(L, chart, y).B;
  };

  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    const DenseMatrix p1 = b_at(ec[a], eps);
    const DenseMatrix m1 = b_at(ec[a], -eps);
    const DenseMatrix p2 = b_at(ec[a], 2 * eps);
    const DenseMatrix m2 = b_at(ec[a], -2 * eps);
    for (std::size_t dd = 0; dd < d; ++dd) {
      for (std::size_t i = 0; i < m; ++i) {
        const double deriv =
            (8.0 * (p1(dd, i) - m1(dd, i)) - (p2(dd, i) - m2(dd, i))) / (12.0 * eps);
        double rhs = 0.0;
        for (std::size_t b = 0; b < d; ++b) rhs += hb0.B(b, i) * alg.c(dd, a, b);
        worst = std::max(worst, std::abs(deriv - rhs));
      }
    }
  }
  return worst;
}

Trajectory horizontal_lift(const Trajectory& reduced, const BundleChart& chart,
                           const ContactLagrangian& L, const FullState& start) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  const std::size_t n = m + d;
  if (reduced.size() == 0) throw InvalidParameter("empty reduced trajectory");
  if (start.q_fiber.size() != d) throw DimensionMismatch("start fiber coordinates");

  // Fiber velocity of the horizontal curve at time t with fiber point h.
  auto assemble = [&](std::span<const double> r, std::span<const double> h) {
    FullState fs = {{r.begin(), r.begin() + static_cast<std::ptrdiff_t>(m)},
                    {h.begin(), h.end()},
                    {r.begin() + static_cast<std::ptrdiff_t>(m),
                     r.begin() + static_cast<std::ptrdiff_t>(2 * m)},
                    {r.begin() + static_cast<std::ptrdiff_t>(2 * m),
                     r.begin() + static_cast<std::ptrdiff_t>(2 * m + d)},
                    r.back()};
    return fs;
  };
  auto fiber_velocity = [&](const FullState& fs) {
    const std::vector<double> q = full_configuration(fs);
    const NaturalState x = to_natural(chart, fs);
    const HessianBlocks hb = hessian_blocks(L, chart, x);
    const JetVector qj = lift(q);
    const DenseMatrix k = values(chart.fundamental(qj));
    const DenseMatrix a = values(chart.adjoint(lift(std::span<const double>(fs.q_fiber))));
    const DenseMatrix gam = values(chart.gamma(lift(std::span<const double>(fs.q_base))));
    std::vector<double> b = lu_solve(a, hb.B * fs.v);
    const std::vector<double> gv = gam * fs.v;
    for (std::size_t c = 0; c < d; ++c) b[c] = -b[c] - gv[c];
    return (k * a) * b;
  };
  auto xi_of = [&](const FullState& fs) {
    const NaturalState x = to_natural(chart, fs);
    const HessianBlocks hb = hessian_blocks(L, chart, x);
    const DenseMatrix a = values(chart.adjoint(lift(std::span<const double>(fs.q_fiber))));
    std::vector<double> xi = a * fs.w;
    const std::vector<double> bv = hb.B * fs.v;
    for (std::size_t c = 0; c < d; ++c) xi[c] += bv[c];
    return xi;
  };

  const OdeProblem problem{d, [&](double t, std::span<const double> h) {
                             const std::vector<double> r = reduced_at(reduced, t);
                             return fiber_velocity(assemble(r, h));
                           }};

  Trajectory out;
  out.state_names = indexed_names("q", n);
  for (auto& s : indexed_names("v", m)) out.state_names.push_back(s);
  for (auto& s : indexed_names("w", d)) out.state_names.push_back(s);
  out.state_names.push_back("s");
  out.diagnostic_names = indexed_names("xi", d);

  std::vector<double> h = start.q_fiber;
  for (std::size_t k = 0; k < reduced.size(); ++k) {
    const double t = reduced.times[k];
    if (k > 0) {
      const double t0 = reduced.times[k - 1];
      try {
        h = rk4_step(problem, t0, h, t - t0);
      } catch (NumericalError& e) {
        e.set_time(t0);
        throw;
      }
    }
    const FullState fs = assemble(reduced.states[k], h);
    std::vector<double> row = full_configuration(fs);
    row.insert(row.end(), fs.v.begin(), fs.v.end());
    row.insert(row.end(), fs.w.begin(), fs.w.end());
    row.push_back(fs.s);
    out.times.push_back(t);
    out.states.push_back(std::move(row));
    out.diagnostics.push_back(xi_of(fs));
  }
  return out;
}

std::vector<GroupSample> reconstruction_ode(const Trajectory& lift,
                                            const BundleChart& chart,
                                            GroupStepper stepper) {
  const LieAlgebraSpec& alg = chart.algebra();
  const std::size_t d = alg.dim();
  std::vector<GroupSample> out;
  GroupElement g = group_identity(chart.group);
  if (lift.size() == 0) return out;
  out.push_back({lift.times[0], g});

  auto xi = [&](double t) { return interpolate(lift.times, lift.diagnostics, t); };
  const double c = std::sqrt(3.0) / 6.0;

  for (std::size_t k = 1; k < lift.size(); ++k) {
    if (d == 0) {  // trivial group
      out.push_back({lift.times[k], g});
      continue;
    }
    const double t0 = lift.times[k - 1];
    const double h = lift.times[k] - t0;
    std::vector<double> omega(d, 0.0);
    if (stepper == GroupStepper::kMidpoint) {
      const std::vector<double> xm = xi(t0 + 0.5 * h);
      for (std::size_t a = 0; a < d; ++a) omega[a] = h * xm[a];
    } else {
      const std::vector<double> x1 = xi(t0 + (0.5 - c) * h);
      const std::vector<double> x2 = xi(t0 + (0.5 + c) * h);
      const std::vector<double> br = bracket(alg, x1, x2);
      for (std::size_t a = 0; a < d; ++a) {
        omega[a] = 0.5 * h * (x1[a] + x2[a]) + std::sqrt(3.0) / 12.0 * h * h * br[a];
      }
    }
    const DenseMatrix step = mat_exp(alg.to_matrix(omega));
    GroupElement next;
    next.matrix = g.matrix * step;
    try {
      next.coords = chart.group.from_matrix(next.matrix);
    } catch (NumericalError& e) {
      e.set_time(t0);
      throw;
    }
    g = std::move(next);
    out.push_back({lift.times[k], g});
  }
  return out;
}

ReconstructionResult reconstruct(const Trajectory& reduced,
                                 const BundleChart& chart,
                                 const ContactLagrangian& L,
                                 const FullState& start, GroupStepper stepper) {
  ReconstructionResult res;
  res.horizontal_lift = horizontal_lift(reduced, chart, L, start);
  res.group_curve = reconstruction_ode(res.horizontal_lift, chart, stepper);

  const std::size_t n = chart.dim();
  Trajectory& full = res.full_trajectory;
  full.state_names = res.horizontal_lift.state_names;
  full.times = res.horizontal_lift.times;
  for (std::size_t k = 0; k < full.times.size(); ++k) {
    std::vector<double> row = res.horizontal_lift.states[k];
    const std::vector<double> q(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    // (v, w) are G-invariant, only the configuration moves.
    const std::vector<double> gq = chart.action(res.group_curve[k].g, q);
    std::copy(gq.begin(), gq.end(), row.begin());
    full.states.push_back(std::move(row));
  }
  return res;
}

Trajectory to_quasi_trajectory(const Trajectory& natural,
                               const BundleChart& chart) {
  const std::size_t n = chart.dim();
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  Trajectory out;
  out.state_names = indexed_names("q", n);
  for (auto& s : indexed_names("v", m)) out.state_names.push_back(s);
  for (auto& s : indexed_names("w", d)) out.state_names.push_back(s);
  out.state_names.push_back("s");
  out.diagnostic_names = natural.diagnostic_names;
  out.times = natural.times;
  out.diagnostics = natural.diagnostics;
  for (const auto& y : natural.states) {
    const NaturalState x = unflatten_natural(y, n);
    const FullState f = to_full(chart, x);
    std::vector<double> row = x.q;
    row.insert(row.end(), f.v.begin(), f.v.end());
    row.insert(row.end(), f.w.begin(), f.w.end());
    row.push_back(f.s);
    out.states.push_back(std::move(row));
  }
  return out;
}

Trajectory project_trajectory(const Trajectory& quasi, const BundleChart& chart) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  Trajectory out;
  out.state_names = indexed_names("q", m);
  for (auto& s : indexed_names("v", m)) out.state_names.push_back(s);
  for (auto& s : indexed_names("w", d)) out.state_names.push_back(s);
  out.state_names.push_back("s");
  out.times = quasi.times;
  for (const auto& y : quasi.states) {
    std::vector<double> row(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
    row.insert(row.end(), y.begin() + static_cast<std::ptrdiff_t>(m + d), y.end());
    out.states.push_back(std::move(row));
  }
  return out;
}

NaturalState act_on_state(const BundleChart& chart, const GroupElement& g,
                          const NaturalState& x, double eps) {
  const std::size_t n = chart.dim();
  NaturalState out;
  out.q = chart.action(g, x.q);
  out.s = x.s;
  std::vector<double> plus = x.q;
  std::vector<double> minus = x.q;
  for (std::size_t k = 0; k < n; ++k) {
    plus[k] += eps * x.u[k];
    minus[k] -= eps * x.u[k];
  }
  const std::vector<double> ap = chart.action(g, plus);
  const std::vector<double> am = chart.action(g, minus);
  out.u.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.u[k] = (ap[k] - am[k]) / (2.0 * eps);
  return out;
}

}  // namespace herglotz
