#pragma once

#include "pam/matrix.hpp"

namespace pam {

struct NormalizeResult {
  Matrix matrix;
  bool converged = false;  // false means the iteration cap was hit; matrix is the last iterate
  int iterations = 0;
  double deviation = 0.0;  // max |row sum - target| after the final pass
};

/// Alternating row/column scaling. Square inputs become doubly stochastic;
/// an r x c input ends with rows summing to 1 and columns to r / c.
/// Throws InputError on negative or non-finite entries and on an all-zero row or column.
NormalizeResult bistochastic_normalize(const Matrix& input, int max_iterations = 10000,
                                       double tolerance = 1e-10);

}  // namespace pam
