#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "quadsketch/graph.hpp"
#include "quadsketch/spectral_sketch.hpp"

namespace quadsketch {

/// Dense symmetric matrix, row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  /// Throws std::invalid_argument unless symmetric within 1e-12 (relative to the largest entry).
  SymMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v);
  std::span<const double> data() const noexcept { return a_; }

  double quadratic_form(std::span<const double> x) const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Text format: a line with n, then n lines of n numbers.
SymMatrix read_matrix(std::istream& in);
SymMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const SymMatrix& a);

/// First row i with A_ii < sum_{j != i} |A_ij| (beyond rounding), if any.
std::optional<std::size_t> sdd_violation(const SymMatrix& a);
bool is_sdd(const SymMatrix& a);
/// Smallest eigenvalue >= -1e-9 * spectral norm.
bool is_psd(const SymMatrix& a);

inline constexpr std::size_t kMaxDenseMatrix = 4096;

struct SddReduction {
  std::vector<double> diag_slack;  // A_ii - sum_{j != i} |A_ij|
  WeightedGraph laplacian;         // on 2n vertices

  /// (x, -x).
  static std::vector<double> embed(std::span<const double> x);
  /// x^T diag(slack) x + y^T L y / 2 with y = embed(x); equals x^T A x.
  double evaluate(std::span<const double> x) const;
};

/// Throws std::domain_error naming the first non-dominant row.
SddReduction sdd_to_laplacian(const SymMatrix& a);

/// Reduction plus an improved spectral sketch of the 2n-vertex Laplacian.
class SddSketch {
 public:
  SddSketch() = default;
  static SddSketch build(const SymMatrix& a, double epsilon, std::uint64_t seed,
                         const SpectralParams& params = {});

  double estimate(std::span<const double> x) const;
  std::size_t num_vertices() const noexcept { return slack_.size(); }
  const SpectralImprovedSketch& laplacian_sketch() const noexcept { return sketch_; }

  std::size_t words() const { return slack_.size() + sketch_.words(); }
  std::vector<std::uint8_t> to_bytes() const;
  static SddSketch from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const SddSketch&, const SddSketch&) = default;

 private:
  std::vector<double> slack_;
  SpectralImprovedSketch sketch_;
};

inline constexpr double kDefaultJlConstant = 8.0;

/// r x n matrix S B with B^T B = A and S Rademacher / sqrt(r);
/// r = ceil(c * eps^-2 * ln(1/delta)).
class JlSketch {
 public:
  JlSketch() = default;
  /// Throws std::domain_error when A has an eigenvalue below -1e-9 * ||A||.
  static JlSketch build(const SymMatrix& a, double epsilon, double delta, std::uint64_t seed,
                        double c = kDefaultJlConstant);
  static std::size_t rows_for(double epsilon, double delta, double c = kDefaultJlConstant);

  double estimate(std::span<const double> x) const;

  std::size_t rows() const noexcept { return r_; }
  std::size_t cols() const noexcept { return n_; }
  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }

  std::size_t words() const { return r_ * n_; }
  std::vector<std::uint8_t> to_bytes() const;
  static JlSketch from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const JlSketch&, const JlSketch&) = default;

 private:
  std::size_t r_ = 0;
  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  double delta_ = 0.0;
  std::vector<double> sb_;  // row-major r x n
};

}  // namespace quadsketch
