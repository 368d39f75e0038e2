#ifndef RRD_PROB_HPP
#define RRD_PROB_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rrd {

// A probability distribution on a finite alphabet. Entries are nonnegative
// and sum to 1 (validate_pmf renormalizes exactly).
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> probs) : p_(std::move(probs)) {}

  static ProbVector uniform(std::size_t n);
  static ProbVector point_mass(std::size_t n, std::size_t at);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probs() const { return p_; }
  const std::vector<double>& vec() const { return p_; }

  bool operator==(const ProbVector& other) const = default;

 private:
  std::vector<double> p_;
};

// Row-stochastic conditional distribution matrix: one row per source symbol,
// one column per reproduction symbol.
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::size_t rows, std::size_t cols)
      : data_(rows * cols, 0.0), rows_(rows), cols_(cols) {}
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> data)
      : data_(std::move(data)), rows_(rows), cols_(cols) {}

  static Kernel identity(std::size_t n);
  // All rows equal to `row` (an input-independent kernel).
  static Kernel constant_rows(std::size_t rows, const ProbVector& row);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return data_[x * cols_ + y]; }
  double& operator()(std::size_t x, std::size_t y) { return data_[x * cols_ + y]; }
  std::span<const double> row(std::size_t x) const {
    return {data_.data() + x * cols_, cols_};
  }
  std::span<double> row(std::size_t x) { return {data_.data() + x * cols_, cols_}; }

  // Throws NegativeMass / NotNormalized when a row violates the invariants.
  void validate(double tol = 1e-12) const;

 private:
  std::vector<double> data_;
  std::size_t rows_ = 0, cols_ = 0;
};

// Per-letter distortion costs; finite and nonnegative.
class DistortionMatrix {
 public:
  DistortionMatrix() = default;
  DistortionMatrix(std::size_t rows, std::size_t cols, std::vector<double> costs);

  static DistortionMatrix hamming(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return c_[x * cols_ + y]; }
  std::span<const double> row(std::size_t x) const { return {c_.data() + x * cols_, cols_}; }
  std::vector<double> column(std::size_t y) const;
  // min over y of row x.
  double row_min(std::size_t x) const;

 private:
  std::vector<double> c_;
  std::size_t rows_ = 0, cols_ = 0;
};

// A full problem statement: alphabets, costs, nominal source, KL-ball radius
// (nats) and distortion budget.
struct ProblemInstance {
  std::size_t source_size = 0;
  std::size_t repro_size = 0;
  DistortionMatrix rho;
  ProbVector nominal;
  double radius = 0.0;
  double budget = 0.0;

  // Throws on dimension mismatches or negative radius/budget.
  void validate() const;
};

// Checks nonnegativity (within tol) and normalization (within tol), then
// renormalizes exactly. Throws NegativeMass / NotNormalized.
ProbVector validate_pmf(std::span<const double> raw, double tol = 1e-12);

// sum_x p(x) ln(p(x)/q(x)) in nats, with 0 ln(0/.) = 0; +inf when p(x) > 0
// while q(x) = 0.
double kl_divergence(const ProbVector& p, const ProbVector& q);

// Output marginal nu(y) = sum_x mu(x) q(x,y).
ProbVector induced_output(const ProbVector& mu, const Kernel& q);

// I(mu; q) in nats against the induced output marginal.
double mutual_information(const ProbVector& mu, const Kernel& q);

// sum_{x,y} mu(x) q(x,y) rho(x,y).
double expected_distortion(const ProbVector& mu, const Kernel& q,
                           const DistortionMatrix& rho);

}  // namespace rrd

#endif  // RRD_PROB_HPP
