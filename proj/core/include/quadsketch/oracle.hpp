#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quadsketch/graph.hpp"

namespace quadsketch::oracle {

// Brute-force ground truth. Nothing here shares code paths with the sketches
// it is used to check: the dense eigensolver is a self-contained Jacobi
// iteration and minimum cuts come from Stoer-Wagner or plain enumeration.

struct MinCut {
  double value = 0.0;
  CutQuery side;
};

/// Stoer-Wagner global minimum cut (n <= 256). A disconnected graph yields
/// value 0 with the component of vertex 0 as the witness side.
MinCut min_cut_exact(const WeightedGraph& g);

/// Minimum over all nontrivial cuts by enumeration (n <= 24).
MinCut min_cut_exhaustive(const WeightedGraph& g);

/// Every nontrivial cut (S side excludes vertex n-1) whose weight is at most
/// factor * minimum cut (n <= 24).
std::vector<CutQuery> near_min_cuts_exhaustive(const WeightedGraph& g, double factor);

struct Eigensystem {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k (row-major n x n): eigenvector of values[k]
};

/// Cyclic Jacobi rotations on a dense symmetric matrix given row-major.
/// Converges once the off-diagonal Frobenius norm drops below
/// tolerance * max(1, ||A||_F).
Eigensystem jacobi_eigen(std::vector<double> a, std::size_t n, double tolerance = 1e-10);

/// Second-smallest eigenvalue of D^{-1/2} L D^{-1/2} (connected, n <= 512).
double lambda1_normalized(const WeightedGraph& g);

/// One independent multinomial sampling process: `draws` draws with
/// replacement from a categorical distribution.
struct SamplingSlot {
  std::vector<double> probabilities;
  std::size_t draws = 0;
};

/// counts[slot][category] for one joint outcome.
using OutcomeCounts = std::vector<std::vector<std::size_t>>;

/// Exact expectation of evaluate(outcome) over all joint multinomial outcomes.
/// Throws when the outcome space exceeds max_outcomes.
double expectation_exhaustive(std::span<const SamplingSlot> slots,
                              const std::function<double(const OutcomeCounts&)>& evaluate,
                              std::size_t max_outcomes = 1'000'000);

/// Number of joint outcomes expectation_exhaustive would enumerate.
double outcome_space_size(std::span<const SamplingSlot> slots);

enum class Method { exhaustive, stoer_wagner, dense_eig };

const char* method_name(Method m);

struct Report {
  std::string quantity;
  double value = 0.0;
  Method method = Method::exhaustive;
  std::uint64_t fingerprint = 0;
};

/// FNV-1a over the canonical edge list (n, then u, v, weight bits per edge).
std::uint64_t fingerprint(const WeightedGraph& g);

Report report_min_cut(const WeightedGraph& g);
Report report_lambda1(const WeightedGraph& g);
Report report_cut_weight(const WeightedGraph& g, const CutQuery& s);

}  // namespace quadsketch::oracle
