#include "quadsketch/psd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "quadsketch/graph_io.hpp"
#include "quadsketch/numeric.hpp"
#include "quadsketch/random.hpp"
#include "quadsketch/serialize.hpp"

namespace quadsketch {

namespace {

void check_size(std::size_t n) {
  if (n > kMaxDenseMatrix) throw std::invalid_argument("matrix too large for dense processing");
}

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return m;
}

}  // namespace

SymMatrix::SymMatrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw DimensionError("matrix data must have n*n entries");
  double scale = 0.0;
  for (double v : a_) {
    if (!std::isfinite(v)) throw std::invalid_argument("matrix entries must be finite");
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(a_[i * n + j] - a_[j * n + i]);
      if (d > 1e-12 * std::max(scale, 1.0)) {
        throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
      }
      a_[j * n + i] = a_[i * n + j];
    }
  }
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("matrix index out of range");
  a_[i * n_ + j] = v;
  a_[j * n_ + i] = v;
}

double SymMatrix::quadratic_form(std::span<const double> x) const {
  if (x.size() != n_) throw DimensionError("vector length does not match the matrix size");
  std::vector<double> terms;
  terms.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) terms.push_back(x[i] * a_[i * n_ + j] * x[j]);
  }
  return pairwise_sum(terms);
}

SymMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<double> data;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!n) {
      long long v = -1;
      std::string rest;
      if (!(fields >> v) || v < 0 || (fields >> rest)) throw ParseError(lineno, "matrix header must be a single size");
      n = static_cast<std::size_t>(v);
      check_size(*n);
      data.reserve(*n * *n);
      continue;
    }
    std::string tok;
    while (fields >> tok) {
      if (data.size() == *n * *n) throw ParseError(lineno, "trailing data after matrix");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ParseError(lineno, "not a number: " + tok);
      data.push_back(v);
    }
  }
  if (!n) throw ParseError(lineno, "missing matrix header");
  if (data.size() != *n * *n) throw ParseError(lineno, "matrix has fewer than n*n entries");
  return SymMatrix(*n, std::move(data));
}

SymMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SymMatrix& a) {
  out << a.size() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

std::optional<std::size_t> sdd_violation(const SymMatrix& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) off += std::abs(a(i, j));
    }
    if (a(i, i) < off - 1e-12 * std::max(off, 1.0)) return i;
  }
  return std::nullopt;
}

bool is_sdd(const SymMatrix& a) { return !sdd_violation(a).has_value(); }

bool is_psd(const SymMatrix& a) {
  check_size(a.size());
  if (a.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(a), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  return ev.minCoeff() >= -1e-9 * norm;
}

std::vector<double> SddReduction::embed(std::span<const double> x) {
  std::vector<double> y(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i];
    y[i + x.size()] = -x[i];
  }
  return y;
}

double SddReduction::evaluate(std::span<const double> x) const {
  if (x.size() != diag_slack.size()) throw DimensionError("vector length does not match the matrix size");
  std::vector<double> terms;
  for (std::size_t i = 0; i < x.size(); ++i) terms.push_back(diag_slack[i] * x[i] * x[i]);
  terms.push_back(0.5 * quadratic_form(laplacian, embed(x)));
  return pairwise_sum(terms);
}

SddReduction sdd_to_laplacian(const SymMatrix& a) {
  if (auto row = sdd_violation(a)) {
    throw std::domain_error("matrix is not diagonally dominant in row " + std::to_string(*row));
  }
  const std::size_t n = a.size();
  SddReduction r;
  r.diag_slack.resize(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) off += std::abs(a(i, j));
    }
    r.diag_slack[i] = std::max(0.0, a(i, i) - off);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = a(i, j);
      const auto u = static_cast<Vertex>(i), w = static_cast<Vertex>(j), k = static_cast<Vertex>(n);
      if (v < 0.0) {
        edges.push_back({u, w, -v});
        edges.push_back({u + k, w + k, -v});
      } else if (v > 0.0) {
        edges.push_back({u, w + k, v});
        edges.push_back({w, u + k, v});
      }
    }
  }
  r.laplacian = WeightedGraph(2 * n, edges);
  return r;
}

SddSketch SddSketch::build(const SymMatrix& a, double epsilon, std::uint64_t seed, const SpectralParams& params) {
  check_size(a.size());
  SddReduction red = sdd_to_laplacian(a);
  SddSketch sk;
  sk.slack_ = std::move(red.diag_slack);
  sk.sketch_ = SpectralImprovedSketch::build(red.laplacian, epsilon, seed, params);
  return sk;
}

double SddSketch::estimate(std::span<const double> x) const {
  if (x.size() != slack_.size()) throw DimensionError("vector length does not match the matrix size");
  std::vector<double> terms;
  for (std::size_t i = 0; i < x.size(); ++i) terms.push_back(slack_[i] * x[i] * x[i]);
  terms.push_back(0.5 * sketch_.estimate(SddReduction::embed(x)));
  return pairwise_sum(terms);
}

std::vector<std::uint8_t> SddSketch::to_bytes() const {
  ByteWriter out;
  out.varint(slack_.size());
  for (double s : slack_) out.f64(s);
  const auto inner = sketch_.to_bytes();
  const std::size_t token = out.begin_section();
  out.bytes(inner);
  out.end_section(token);
  return wrap_envelope(SketchKind::sdd, out.buffer());
}

SddSketch SddSketch::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::sdd);
  SddSketch sk;
  const std::size_t n = in.varint();
  if (n > kMaxDenseMatrix) throw FormatError("matrix size out of range");
  sk.slack_.resize(n);
  for (double& s : sk.slack_) s = in.f64();
  ByteReader sec = in.section();
  sk.sketch_ = SpectralImprovedSketch::from_bytes(sec.bytes(sec.remaining()));
  in.expect_end();
  if (sk.sketch_.num_vertices() != 2 * n) throw FormatError("laplacian sketch size mismatch");
  return sk;
}

std::size_t JlSketch::rows_for(double epsilon, double delta, double c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("JL constant must be positive");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(c * std::log(1.0 / delta) / (epsilon * epsilon))));
}

JlSketch JlSketch::build(const SymMatrix& a, double epsilon, double delta, std::uint64_t seed, double c) {
  const std::size_t n = a.size();
  check_size(n);
  JlSketch sk;
  sk.r_ = rows_for(epsilon, delta, c);
  sk.n_ = n;
  sk.epsilon_ = epsilon;
  sk.delta_ = delta;
  sk.sb_.assign(sk.r_ * n, 0.0);
  if (n == 0) return sk;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(a));
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  if (ev.minCoeff() < -1e-9 * norm) throw std::domain_error("matrix is not positive semidefinite");
  // B = diag(sqrt(lambda)) V^T
  Eigen::MatrixXd b = eig.eigenvectors().transpose();
  for (Eigen::Index k = 0; k < b.rows(); ++k) b.row(k) *= std::sqrt(std::max(0.0, ev(k)));

  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sk.r_));
  Eigen::MatrixXd s(static_cast<Eigen::Index>(sk.r_), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) s(i, j) = rng.sign() * scale;
  }
  const Eigen::MatrixXd sb = s * b;
  for (std::size_t i = 0; i < sk.r_; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sk.sb_[i * n + j] = sb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return sk;
}

double JlSketch::estimate(std::span<const double> x) const {
  if (x.size() != n_) throw DimensionError("vector length does not match the matrix size");
  std::vector<double> squares(r_);
  std::vector<double> row(n_);
  for (std::size_t i = 0; i < r_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) row[j] = sb_[i * n_ + j] * x[j];
    const double v = pairwise_sum(row);
    squares[i] = v * v;
  }
  return pairwise_sum(squares);
}

std::vector<std::uint8_t> JlSketch::to_bytes() const {
  ByteWriter out;
  out.varint(r_);
  out.varint(n_);
  out.f64(epsilon_);
  out.f64(delta_);
  for (double v : sb_) out.f64(v);
  return wrap_envelope(SketchKind::jl, out.buffer());
}

JlSketch JlSketch::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::jl);
  JlSketch sk;
  sk.r_ = in.varint();
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  sk.delta_ = in.f64();
  if (sk.n_ > kMaxDenseMatrix || (sk.n_ > 0 && sk.r_ > in.remaining() / 8 / sk.n_)) {
    throw FormatError("sketch dimensions out of range");
  }
  sk.sb_.resize(sk.r_ * sk.n_);
  for (double& v : sk.sb_) v = in.f64();
  in.expect_end();
  return sk;
}

}  // namespace quadsketch
