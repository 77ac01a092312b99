#include "pam/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pam/error.hpp"

namespace pam {

NormalizeResult bistochastic_normalize(const Matrix& input, int max_iterations, double tolerance) {
  const std::size_t r = input.rows();
  const std::size_t c = input.cols();
  for (double v : input.values()) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("bistochastic normalization needs finite nonnegative entries");
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (input.row_sum(i) <= 0.0) throw InputError("cannot normalize: row " + std::to_string(i) + " is all zero");
  }
  for (std::size_t j = 0; j < c; ++j) {
    if (input.col_sum(j) <= 0.0) throw InputError("cannot normalize: column " + std::to_string(j) + " is all zero");
  }

  NormalizeResult out;
  out.matrix = input;
  if (r == 0 || c == 0) {
    out.converged = true;
    return out;
  }
  Matrix& m = out.matrix;
  const double col_target = static_cast<double>(r) / static_cast<double>(c);

  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t i = 0; i < r; ++i) {
      const double s = m.row_sum(i);
      for (double& v : m.row(i)) v /= s;
    }
    for (std::size_t j = 0; j < c; ++j) {
      const double s = m.col_sum(j) / col_target;
      for (std::size_t i = 0; i < r; ++i) m(i, j) /= s;
    }
    // Columns are exact after the column pass; only rows can be off.
    double dev = 0.0;
    for (std::size_t i = 0; i < r; ++i) dev = std::max(dev, std::fabs(m.row_sum(i) - 1.0));
    out.iterations = it;
    out.deviation = dev;
    if (dev < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace pam
