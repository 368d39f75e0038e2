#include "rrd/prob.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rrd/errors.hpp"

namespace rrd {

ProbVector ProbVector::uniform(std::size_t n) {
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> p(n, 0.0);
  p[at] = 1.0;
  return ProbVector(std::move(p));
}

Kernel Kernel::identity(std::size_t n) {
  Kernel k(n, n);
  for (std::size_t i = 0; i < n; ++i) k(i, i) = 1.0;
  return k;
}

Kernel Kernel::constant_rows(std::size_t rows, const ProbVector& row) {
  Kernel k(rows, row.size());
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < row.size(); ++y) k(x, y) = row[y];
  return k;
}

void Kernel::validate(double tol) const {
  for (std::size_t x = 0; x < rows_; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < cols_; ++y) {
      double v = (*this)(x, y);
      if (v < -tol)
        throw NegativeMass("kernel row " + std::to_string(x) + " has a negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > tol)
      throw NotNormalized("kernel row " + std::to_string(x) + " sums to " +
                          std::to_string(s));
  }
}

DistortionMatrix::DistortionMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> costs)
    : c_(std::move(costs)), rows_(rows), cols_(cols) {
  if (c_.size() != rows * cols)
    throw DimensionMismatch("distortion matrix storage does not match dimensions");
  for (double v : c_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error("distortion entries must be finite and nonnegative");
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  std::vector<double> c(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) c[i * n + i] = 0.0;
  return DistortionMatrix(n, n, std::move(c));
}

std::vector<double> DistortionMatrix::column(std::size_t y) const {
  std::vector<double> col(rows_);
  for (std::size_t x = 0; x < rows_; ++x) col[x] = (*this)(x, y);
  return col;
}

double DistortionMatrix::row_min(std::size_t x) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < cols_; ++y) m = std::min(m, (*this)(x, y));
  return m;
}

void ProblemInstance::validate() const {
  if (rho.rows() != source_size || rho.cols() != repro_size)
    throw DimensionMismatch("distortion matrix does not match alphabet sizes");
  if (nominal.size() != source_size)
    throw DimensionMismatch("nominal distribution does not match source alphabet");
  if (radius < 0.0) throw Error("radius must be nonnegative");
  if (budget < 0.0) throw Error("budget must be nonnegative");
}

ProbVector validate_pmf(std::span<const double> raw, double tol) {
  if (raw.empty()) throw Error("empty probability vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < -tol)
      throw NegativeMass("entry " + std::to_string(i) + " is negative");
    sum += raw[i];
  }
  if (std::abs(sum - 1.0) > tol)
    throw NotNormalized("entries sum to " + std::to_string(sum));
  std::vector<double> p(raw.begin(), raw.end());
  for (double& v : p) v = (v < 0.0) ? 0.0 : v / sum;
  return ProbVector(std::move(p));
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw DimensionMismatch("kl_divergence: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s < 0.0 ? 0.0 : s;
}

ProbVector induced_output(const ProbVector& mu, const Kernel& q) {
  if (mu.size() != q.rows()) throw DimensionMismatch("induced_output: size mismatch");
  std::vector<double> nu(q.cols(), 0.0);
  for (std::size_t x = 0; x < q.rows(); ++x) {
    if (mu[x] == 0.0) continue;
    for (std::size_t y = 0; y < q.cols(); ++y) nu[y] += mu[x] * q(x, y);
  }
  return ProbVector(std::move(nu));
}

double mutual_information(const ProbVector& mu, const Kernel& q) {
  if (mu.size() != q.rows())
    throw DimensionMismatch("mutual_information: size mismatch");
  ProbVector nu = induced_output(mu, q);
  double s = 0.0;
  for (std::size_t x = 0; x < q.rows(); ++x) {
    if (mu[x] == 0.0) continue;
    for (std::size_t y = 0; y < q.cols(); ++y) {
      double v = q(x, y);
      if (v == 0.0) continue;
      s += mu[x] * v * std::log(v / nu[y]);
    }
  }
  return s < 0.0 ? 0.0 : s;
}

double expected_distortion(const ProbVector& mu, const Kernel& q,
                           const DistortionMatrix& rho) {
  if (mu.size() != q.rows() || q.rows() != rho.rows() || q.cols() != rho.cols())
    throw DimensionMismatch("expected_distortion: size mismatch");
  double s = 0.0;
  for (std::size_t x = 0; x < q.rows(); ++x) {
    if (mu[x] == 0.0) continue;
    double row = 0.0;
    for (std::size_t y = 0; y < q.cols(); ++y) row += q(x, y) * rho(x, y);
    s += mu[x] * row;
  }
  return s;
}

}  // namespace rrd
