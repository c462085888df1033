#ifndef MLNCC_NUMERIC_HPP
#define MLNCC_NUMERIC_HPP

#include <cmath>
#include <span>

namespace mlncc {

/// Arithmetic mean with compensated extended-precision accumulation. A
/// constant sequence averages back to exactly that constant, so strict
/// "above average" tests on vertex-transitive graphs select nothing.
inline double stable_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (double v : values) {
    long double x = v;
    long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return static_cast<double>((sum + comp) / static_cast<long double>(values.size()));
}

}  // namespace mlncc

#endif  // MLNCC_NUMERIC_HPP
