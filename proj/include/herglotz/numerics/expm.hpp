#pragma once

#include "herglotz/numerics/matrix.hpp"

namespace herglotz {

/// Matrix exponential by scaling and squaring with a degree-10 Taylor
/// polynomial.  The argument is scaled until its 1-norm is at most 1/4.
DenseMatrix mat_exp(const DenseMatrix& x);

}  // namespace herglotz
