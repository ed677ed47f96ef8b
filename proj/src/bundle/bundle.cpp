#include "herglotz/bundle/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/lu.hpp"

namespace herglotz {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(got) +
                            " entries, expected " + std::to_string(want));
  }
}

void require_shape(const JetMatrix& m, std::size_t rows, std::size_t cols,
                   const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(std::string(what) + " returned " + m.shape() +
                            ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
}

JetMatrix eval_gamma(const BundleChart& chart, std::span<const Jet> q_base) {
  JetMatrix g = chart.gamma(q_base);
  require_shape(g, chart.fiber_dim, chart.base_dim, "gamma");
  return g;
}

JetMatrix eval_k(const BundleChart& chart, std::span<const Jet> q) {
  JetMatrix k = chart.fundamental(q);
  require_shape(k, chart.fiber_dim, chart.fiber_dim, "fundamental");
  return k;
}

JetMatrix eval_a(const BundleChart& chart, std::span<const Jet> q_fiber) {
  JetMatrix a = chart.adjoint(q_fiber);
  require_shape(a, chart.fiber_dim, chart.fiber_dim, "adjoint");
  return a;
}

// Component vector and Jacobian of one frame column on first-order jets.
struct Field {
  std::vector<double> y;
  DenseMatrix dy;
};

Field field_of(const JetMatrix& frame, std::size_t col) {
  Field f;
  const std::size_t n = frame.rows();
  f.y.resize(n);
  f.dy = DenseMatrix(n, n);
  for (std::size_t b = 0; b < n; ++b) {
    const Jet& c = frame(b, col);
    f.y[b] = c.value();
    for (std::size_t a = 0; a < n; ++a) f.dy(b, a) = c.d(a);
  }
  return f;
}

std::vector<Field> fields_of(const JetMatrix& frame) {
  std::vector<Field> out;
  for (std::size_t c = 0; c < frame.cols(); ++c) out.push_back(field_of(frame, c));
  return out;
}

std::vector<double> bracket_of(const Field& y, const Field& z) {
  return lie_bracket(y.y, y.dy, z.y, z.dy);
}

}  // namespace

FrameSet<Jet> frames(const BundleChart& chart, std::span<const Jet> q) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  const std::size_t n = m + d;
  require_size(q.size(), n, "configuration");

  const JetMatrix k = eval_k(chart, q);
  const JetMatrix a = eval_a(chart, q.subspan(m));
  const JetMatrix ka = k * a;
  const JetMatrix gam = eval_gamma(chart, q.first(m));

  FrameSet<Jet> f{JetMatrix(n, m), JetMatrix(n, d), JetMatrix(n, d)};
  for (std::size_t i = 0; i < m; ++i) f.x(i, i) = 1.0;
  const JetMatrix fiber_x = ka * gam;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t i = 0; i < m; ++i) f.x(m + r, i) = -fiber_x(r, i);
    for (std::size_t c = 0; c < d; ++c) {
      f.ehat(m + r, c) = ka(r, c);
      f.etilde(m + r, c) = k(r, c);
    }
  }
  return f;
}

FrameMatrices frame_matrices(const BundleChart& chart,
                             std::span<const double> q) {
  const JetVector qj = lift(q);
  FrameSet<Jet> f = frames(chart, qj);
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  // K nonsingular is a precondition of the whole frame machinery.
  DenseMatrix k(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) k(r, c) = f.etilde(m + r, c).value();
  LuDecomposition<double> check(k);
  (void)check;
  return {values(f.x), values(f.ehat)};
}

void to_quasi(const BundleChart& chart, std::span<const Jet> q,
              std::span<const Jet> u, JetVector& v, JetVector& w) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  require_size(q.size(), m + d, "configuration");
  require_size(u.size(), m + d, "velocity");
  const JetMatrix ka = eval_k(chart, q) * eval_a(chart, q.subspan(m));
  const JetMatrix gam = eval_gamma(chart, q.first(m));

  v.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m));
  w = LuDecomposition<Jet>(ka).solve(u.subspan(m));
  const JetVector gv = gam * std::span<const Jet>(v);
  for (std::size_t a = 0; a < d; ++a) w[a] += gv[a];
}

JetVector from_quasi(const BundleChart& chart, std::span<const Jet> q,
                     std::span<const Jet> v, std::span<const Jet> w) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  require_size(q.size(), m + d, "configuration");
  require_size(v.size(), m, "v");
  require_size(w.size(), d, "w");
  const JetMatrix ka = eval_k(chart, q) * eval_a(chart, q.subspan(m));
  const JetMatrix gam = eval_gamma(chart, q.first(m));

  JetVector b(w.begin(), w.end());
  const JetVector gv = gam * v;
  for (std::size_t a = 0; a < d; ++a) b[a] -= gv[a];
  const JetVector uf = ka * std::span<const Jet>(b);

  JetVector u(v.begin(), v.end());
  u.insert(u.end(), uf.begin(), uf.end());
  return u;
}

QuasiVelocity to_quasi(const BundleChart& chart, std::span<const double> q,
                       std::span<const double> u) {
  const JetVector qj = lift(q);
  const JetVector uj = lift(u);
  JetVector v;
  JetVector w;
  to_quasi(chart, qj, uj, v, w);
  return {values(v), values(w)};
}

std::vector<double> from_quasi(const BundleChart& chart,
                               std::span<const double> q,
                               std::span<const double> v,
                               std::span<const double> w) {
  const JetVector qj = lift(q);
  const JetVector vj = lift(v);
  const JetVector wj = lift(w);
  return values(from_quasi(chart, qj, vj, wj));
}

FullState to_full(const BundleChart& chart, const NaturalState& x) {
  const std::size_t m = chart.base_dim;
  require_size(x.q.size(), chart.dim(), "configuration");
  QuasiVelocity qv = to_quasi(chart, x.q, x.u);
  FullState out;
  out.q_base.assign(x.q.begin(), x.q.begin() + static_cast<std::ptrdiff_t>(m));
  out.q_fiber.assign(x.q.begin() + static_cast<std::ptrdiff_t>(m), x.q.end());
  out.v = std::move(qv.v);
  out.w = std::move(qv.w);
  out.s = x.s;
  return out;
}

NaturalState to_natural(const BundleChart& chart, const FullState& x) {
  NaturalState out;
  out.q = full_configuration(x);
  out.u = from_quasi(chart, out.q, x.v, x.w);
  out.s = x.s;
  return out;
}

ReducedState project(const FullState& x) { return {x.q_base, x.v, x.w, x.s}; }

std::vector<double> full_configuration(const FullState& x) {
  std::vector<double> q = x.q_base;
  q.insert(q.end(), x.q_fiber.begin(), x.q_fiber.end());
  return q;
}

std::vector<DenseMatrix> curvature(const BundleChart& chart,
                                   std::span<const double> q_base) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  require_size(q_base.size(), m, "base configuration");
  const JetVector qj = seed(q_base, false);
  const JetMatrix gam = eval_gamma(chart, qj);
  const LieAlgebraSpec& alg = chart.algebra();

  std::vector<DenseMatrix> out(d, DenseMatrix(m, m));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double k = gam(a, j).d(i) - gam(a, i).d(j);
        for (std::size_t b = 0; b < d; ++b)
          for (std::size_t c = 0; c < d; ++c)
            k -= gam(b, i).value() * gam(c, j).value() * alg.c(a, b, c);
        out[a](i, j) = k;
        out[a](j, i) = -k;
      }
    }
  }
  return out;
}

std::vector<DenseMatrix> upsilon_lemma(const BundleChart& chart,
                                       std::span<const double> q) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  require_size(q.size(), m + d, "configuration");
  const JetVector qf = seed(q.subspan(m), false);
  const JetMatrix a = eval_a(chart, qf);
  const DenseMatrix a_val = values(a);
  const DenseMatrix a_inv = inverse(a_val);
  const FrameMatrices fm = frame_matrices(chart, q);

  std::vector<DenseMatrix> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    // X_i(A^c_a): A only depends on fiber coordinates.
    DenseMatrix xa(d, d);
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t aa = 0; aa < d; ++aa) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += fm.x(m + k, i) * a(c, aa).d(k);
        xa(c, aa) = s;
      }
    out.push_back(a_inv * xa);
  }
  return out;
}

std::vector<DenseMatrix> upsilon_contraction(const BundleChart& chart,
                                             std::span<const double> q_base) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  require_size(q_base.size(), m, "base configuration");
  const DenseMatrix gam = values(eval_gamma(chart, lift(q_base)));
  const LieAlgebraSpec& alg = chart.algebra();
  std::vector<DenseMatrix> out(m, DenseMatrix(d, d));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t a = 0; a < d; ++a) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += gam(c, i) * alg.c(b, a, c);
        out[i](b, a) = s;
      }
  return out;
}

std::vector<DenseMatrix> upsilon(const BundleChart& chart,
                                 std::span<const double> q) {
  if (chart.upsilon_mode == UpsilonMode::kGammaContraction) {
    require_size(q.size(), chart.dim(), "configuration");
    return upsilon_contraction(chart, q.first(chart.base_dim));
  }
  return upsilon_lemma(chart, q);
}

std::vector<double> lie_bracket(std::span<const double> y,
                                const DenseMatrix& dy,
                                std::span<const double> z,
                                const DenseMatrix& dz) {
  const std::size_t n = y.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += y[a] * dz(b, a) - z[a] * dy(b, a);
    out[b] = s;
  }
  return out;
}

double BracketReport::max() const {
  return *std::max_element(residual.begin(), residual.end());
}

const std::array<std::string, 6>& BracketReport::names() {
  static const std::array<std::string, 6> kNames = {
      "[Et_a,Et_b]=-C Et", "[Eh_a,Eh_b]=C Eh",     "[X_i,Et_a]=0",
      "[X_i,Eh_a]=Ups Eh", "[X_i,X_j]=-K Eh",      "[Et_a,Eh_b]=0"};
  return kNames;
}

BracketReport bracket_table_check(const BundleChart& chart,
                                  std::span<const double> q) {
  const std::size_t m = chart.base_dim;
  const std::size_t d = chart.fiber_dim;
  const std::size_t n = m + d;
  require_size(q.size(), n, "configuration");

  const JetVector qj = seed(q, false);
  const FrameSet<Jet> f = frames(chart, qj);
  const auto x = fields_of(f.x);
  const auto eh = fields_of(f.ehat);
  const auto et = fields_of(f.etilde);
  const LieAlgebraSpec& alg = chart.algebra();
  const auto ups = upsilon(chart, q);
  const auto curv = curvature(chart, q.first(m));

  BracketReport rep;
  auto record = [&](int k, std::span<const double> r) {
    rep.residual[k] = std::max(rep.residual[k], max_abs(r));
  };

  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      auto r1 = bracket_of(et[a], et[b]);
      auto r2 = bracket_of(eh[a], eh[b]);
      for (std::size_t c = 0; c < d; ++c) {
        const double cc = alg.c(c, a, b);
        if (cc == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) {
          r1[k] += cc * et[c].y[k];
          r2[k] -= cc * eh[c].y[k];
        }
      }
      record(0, r1);
      record(1, r2);
      record(5, bracket_of(et[a], eh[b]));
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      record(2, bracket_of(x[i], et[a]));
      auto r4 = bracket_of(x[i], eh[a]);
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t k = 0; k < n; ++k) r4[k] -= ups[i](b, a) * eh[b].y[k];
      record(3, r4);
    }
    for (std::size_t j = 0; j < m; ++j) {
      auto r5 = bracket_of(x[i], x[j]);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t k = 0; k < n; ++k) r5[k] += curv[a](i, j) * eh[a].y[k];
      record(4, r5);
    }
  }
  return rep;
}

}  // namespace herglotz
