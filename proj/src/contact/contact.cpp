#include "herglotz/contact/contact.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/lu.hpp"

namespace herglotz {

namespace {

void require_dim(const ContactLagrangian& L, std::size_t q, std::size_t u) {
  if (q != L.dim || u != L.dim) {
    throw DimensionMismatch("Lagrangian of dimension " + std::to_string(L.dim) +
                            " evaluated with q of " + std::to_string(q) +
                            " and u of " + std::to_string(u));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> herglotz_forcing(const LagrangianJet& j,
                                     std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> rhs(n);
  for (std::size_t a = 0; a < n; ++a) {
    double r = j.dLdq[a] + j.dLds * j.dLdu[a] - j.L * j.msu[a];
    for (std::size_t b = 0; b < n; ++b) r -= j.Mqu(b, a) * u[b];
    rhs[a] = r;
  }
  return rhs;
}

}  // namespace

double ContactLagrangian::value(std::span<const double> q,
                                std::span<const double> u, double s) const {
  require_dim(*this, q.size(), u.size());
  const JetVector qj = lift(q);
  const JetVector uj = lift(u);
  return eval(qj, uj, Jet(s)).value();
}

LagrangianJet jet(const ContactLagrangian& L, std::span<const double> q,
                  std::span<const double> u, double s) {
  require_dim(L, q.size(), u.size());
  const std::size_t n = L.dim;
  const std::size_t seeds = 2 * n + 1;
  JetVector qj;
  JetVector uj;
  for (std::size_t i = 0; i < n; ++i) qj.push_back(Jet::variable(q[i], i, seeds));
  for (std::size_t i = 0; i < n; ++i) uj.push_back(Jet::variable(u[i], n + i, seeds));
  const Jet sj = Jet::variable(s, 2 * n, seeds);
  const Jet r = L.eval(qj, uj, sj);

  LagrangianJet j;
  j.L = r.value();
  j.dLdq.resize(n);
  j.dLdu.resize(n);
  j.msu.resize(n);
  j.W = DenseMatrix(n, n);
  j.Mqu = DenseMatrix(n, n);
  const std::size_t is = 2 * n;
  j.dLds = r.d(is);
  for (std::size_t a = 0; a < n; ++a) {
    j.dLdq[a] = r.d(a);
    j.dLdu[a] = r.d(n + a);
    j.msu[a] = r.d2(is, n + a);
    for (std::size_t b = 0; b < n; ++b) {
      j.W(a, b) = r.d2(n + a, n + b);
      j.Mqu(b, a) = r.d2(b, n + a);
    }
  }
  return j;
}

LagrangianJet jet(const ContactLagrangian& L, const NaturalState& x) {
  return jet(L, x.q, x.u, x.s);
}

double energy(const LagrangianJet& j, std::span<const double> u) {
  return dot(u, j.dLdu) - j.L;
}

double energy(const ContactLagrangian& L, std::span<const double> q,
              std::span<const double> u, double s) {
  return energy(jet(L, q, u, s), u);
}

std::vector<double> herglotz_acceleration(const LagrangianJet& j,
                                          std::span<const double> u) {
  const std::vector<double> rhs = herglotz_forcing(j, u);
  try {
    return lu_solve(j.W, rhs);
  } catch (const SingularMatrix& e) {
    throw NonRegularLagrangianAtState(
        std::string("Lagrangian is not regular here (velocity Hessian): ") +
        e.what());
  }
}

double herglotz_equation_residual(const LagrangianJet& j,
                                  std::span<const double> u,
                                  std::span<const double> accel) {
  const std::vector<double> rhs = herglotz_forcing(j, u);
  const std::vector<double> lhs = j.W * accel;
  double r = 0.0;
  for (std::size_t a = 0; a < rhs.size(); ++a) r = std::max(r, std::abs(lhs[a] - rhs[a]));
  return r;
}

std::vector<double> flatten(const NaturalState& x) {
  std::vector<double> y = x.q;
  y.insert(y.end(), x.u.begin(), x.u.end());
  y.push_back(x.s);
  return y;
}

NaturalState unflatten_natural(std::span<const double> y, std::size_t n) {
  if (y.size() != 2 * n + 1) {
    throw DimensionMismatch("natural state needs " + std::to_string(2 * n + 1) +
                            " components, got " + std::to_string(y.size()));
  }
  NaturalState x;
  x.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  x.u.assign(y.begin() + static_cast<std::ptrdiff_t>(n),
             y.begin() + static_cast<std::ptrdiff_t>(2 * n));
  x.s = y[2 * n];
  return x;
}

State herglotz_rhs(const ContactLagrangian& L, const NaturalState& x) {
  const LagrangianJet j = jet(L, x);
  const std::vector<double> acc = herglotz_acceleration(j, x.u);
  State out = x.u;
  out.insert(out.end(), acc.begin(), acc.end());
  out.push_back(j.L);
  return out;
}

State herglotz_rhs(const ContactLagrangian& L, std::span<const double> state) {
  return herglotz_rhs(L, unflatten_natural(state, L.dim));
}

double dissipation_residual(const ContactLagrangian& L,
                            std::span<const double> q,
                            std::span<const double> u, double s) {
  const LagrangianJet j = jet(L, q, u, s);
  const std::vector<double> acc = herglotz_acceleration(j, u);
  const std::size_t n = u.size();
  // Gamma(E_L) with E_L = u.L_u - L
  double ge = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    double mu = 0.0;
    double wg = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      mu += j.Mqu(b, a) * u[a];
      wg += j.W(b, a) * acc[a];
    }
    ge += u[b] * (mu + wg + j.msu[b] * j.L) - j.dLdq[b] * u[b];
  }
  ge -= j.dLds * j.L;
  return ge - j.dLds * energy(j, u);
}

Trajectory integrate_full(const ContactLagrangian& L, const NaturalState& x0,
                          double t1, double h) {
  const std::size_t n = L.dim;
  const OdeProblem problem{
      2 * n + 1, [&L](double, std::span<const double> y) { return herglotz_rhs(L, y); }};
  const auto samples = rk4_integrate(problem, flatten(x0), 0.0, t1, h);

  Trajectory tr;
  tr.state_names = indexed_names("q", n);
  for (auto& s : indexed_names("u", n)) tr.state_names.push_back(s);
  tr.state_names.push_back("s");
  tr.diagnostic_names = {"E_L", "dissipation_residual"};
  tr.times.reserve(samples.size());
  for (const auto& smp : samples) {
    const NaturalState x = unflatten_natural(smp.y, n);
    double e = 0.0;
    double r = 0.0;
    try {
      e = energy(L, x.q, x.u, x.s);
      r = dissipation_residual(L, x.q, x.u, x.s);
    } catch (NumericalError& err) {
      err.set_time(smp.t);
      err.set_state(smp.y);
      throw;
    }
    tr.times.push_back(smp.t);
    tr.states.push_back(smp.y);
    tr.diagnostics.push_back({e, r});
  }
  return tr;
}

double ContactFormReport::max() const {
  return std::max({reeb_eta, reeb_deta, eta_gamma, herglotz});
}

ContactFormReport contact_form_check(const ContactLagrangian& L,
                                     const NaturalState& x) {
  const std::size_t n = L.dim;
  const std::size_t dim = 2 * n + 1;
  const LagrangianJet j = jet(L, x);
  const std::vector<double> acc = herglotz_acceleration(j, x.u);

  // eta = ds - L_u dq in coordinates (q, u, s)
  std::vector<double> eta(dim, 0.0);
  for (std::size_t a = 0; a < n; ++a) eta[a] = -j.dLdu[a];
  eta[2 * n] = 1.0;

  // d_I eta_J: only the q-components of eta vary.
  DenseMatrix deta_partial(dim, dim);  // (I, J) = d eta_J / d z^I
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      deta_partial(b, a) = -j.Mqu(b, a);
      deta_partial(n + b, a) = -j.W(b, a);
    }
    deta_partial(2 * n, a) = -j.msu[a];
  }
  DenseMatrix deta(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      deta(i, k) = deta_partial(i, k) - deta_partial(k, i);

  // Reeb field
  std::vector<double> reeb(dim, 0.0);
  std::vector<double> wr;
  try {
    wr = lu_solve(j.W, j.msu);
  } catch (const SingularMatrix& e) {
    throw NonRegularLagrangianAtState(std::string("Reeb field undefined: ") + e.what());
  }
  for (std::size_t a = 0; a < n; ++a) reeb[n + a] = -wr[a];
  reeb[2 * n] = 1.0;

  ContactFormReport rep;
  rep.reeb_eta = std::abs(dot(eta, reeb) - 1.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += reeb[i] * deta(i, k);
    rep.reeb_deta = std::max(rep.reeb_deta, std::abs(s));
  }
  std::vector<double> gamma_field = x.u;
  gamma_field.insert(gamma_field.end(), acc.begin(), acc.end());
  gamma_field.push_back(j.L);
  rep.eta_gamma = std::abs(dot(eta, gamma_field) + energy(j, x.u));
  rep.herglotz = herglotz_equation_residual(j, x.u, acc);
  return rep;
}

double frame_equation_residual(const ContactLagrangian& L,
                               const NaturalState& x, const FrameField& frame) {
  const std::size_t n = L.dim;
  const LagrangianJet j = jet(L, x);
  const std::vector<double> acc = herglotz_acceleration(j, x.u);
  const JetVector qj = seed(x.q, false);
  const JetMatrix z = frame(qj);
  if (z.rows() != n || z.cols() != n) {
    throw DimensionMismatch("frame returned " + z.shape());
  }

  double worst = 0.0;
  for (std::size_t al = 0; al < n; ++al) {
    double zv = 0.0;      // Z^V(L)
    double zc = 0.0;      // Z^C(L)
    double gamma_zv = 0.0;  // Gamma(Z^V(L))
    for (std::size_t b = 0; b < n; ++b) {
      const Jet& zb = z(b, al);
      double dz_u = 0.0;  // u^c d_c Z^b
      for (std::size_t c = 0; c < n; ++c) dz_u += x.u[c] * zb.d(c);
      zv += zb.value() * j.dLdu[b];
      zc += zb.value() * j.dLdq[b] + dz_u * j.dLdu[b];
      double dlu = j.msu[b] * j.L;  // Gamma(L_{u^b})
      for (std::size_t c = 0; c < n; ++c) {
        dlu += j.Mqu(c, b) * x.u[c] + j.W(c, b) * acc[c];
      }
      gamma_zv += dz_u * j.dLdu[b] + zb.value() * dlu;
    }
    worst = std::max(worst, std::abs(gamma_zv - zc - j.dLds * zv));
  }
  return worst;
}

}  // namespace herglotz
