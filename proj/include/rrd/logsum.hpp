#ifndef RRD_LOGSUM_HPP
#define RRD_LOGSUM_HPP

#include <cmath>
#include <limits>
#include <span>

namespace rrd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i exp(a[i])), max-subtracted. Entries equal to -inf are skipped;
// an empty or all -inf input yields -inf.
inline double log_sum_exp(std::span<const double> a) {
  double m = kNegInf;
  for (double v : a)
    if (v > m) m = v;
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : a) s += std::exp(v - m);
  return m + std::log(s);
}

// log(sum_i w[i] * exp(a[i])) for nonnegative weights, max-subtracted over
// the support {i : w[i] > 0}.
inline double log_dot_exp(std::span<const double> a, std::span<const double> w) {
  double m = kNegInf;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (w[i] > 0.0 && a[i] > m) m = a[i];
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (w[i] > 0.0) s += w[i] * std::exp(a[i] - m);
  return m + std::log(s);
}

// Binary entropy in nats with the 0 log 0 = 0 convention.
inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

}  // namespace rrd

#endif  // RRD_LOGSUM_HPP
