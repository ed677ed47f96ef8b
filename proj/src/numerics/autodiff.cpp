#include "herglotz/numerics/autodiff.hpp"

namespace herglotz {

Jet2Result unpack(const Jet& j) {
  const std::size_t n = j.seeds();
  Jet2Result r;
  r.value = j.value();
  r.gradient.assign(j.gradient().begin(), j.gradient().end());
  r.hessian = DenseMatrix(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) r.hessian(a, b) = j.d2(a, b);
  return r;
}

Jet2Result eval_jet2(const JetFunction& f, std::span<const double> point) {
  const JetVector x = seed(point, true);
  Jet2Result r = unpack(f(x));
  // Constant functions come back unseeded.
  if (r.gradient.size() != point.size()) {
    r.gradient.assign(point.size(), 0.0);
    r.hessian = DenseMatrix(point.size(), point.size());
  }
  return r;
}

DenseMatrix jacobian(const std::function<JetVector(std::span<const Jet>)>& f,
                     std::span<const double> point) {
  const JetVector x = seed(point, false);
  const JetVector y = f(x);
  DenseMatrix jac(y.size(), point.size());
  for (std::size_t r = 0; r < y.size(); ++r)
    for (std::size_t c = 0; c < point.size(); ++c) jac(r, c) = y[r].d(c);
  return jac;
}

DenseMatrix partial(const JetMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).d(k);
  return out;
}

}  // namespace herglotz
