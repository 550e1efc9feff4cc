#include "quadsketch/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

#include "quadsketch/random.hpp"

namespace quadsketch {

namespace {

constexpr double kBridgeLeverage = 1.0 - 1e-9;

void component_leverage(const WeightedGraph& g, std::span<const Vertex> members,
                        std::vector<double>& out) {
  const std::size_t k = members.size();
  if (k < 2) return;
  std::vector<std::size_t> local(g.num_vertices(), k);
  for (std::size_t i = 0; i < k; ++i) local[members[i]] = i;

  // Ground the last member; the remaining (k-1)x(k-1) block is positive definite.
  const std::size_t dim = k - 1;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> edges;
  for (Vertex u : members) {
    for (const Incidence& inc : g.neighbors(u)) {
      if (u > inc.neighbor) continue;
      edges.push_back(inc.edge);
      const std::size_t a = local[u];
      const std::size_t b = local[inc.neighbor];
      if (a < dim) lap(a, a) += inc.w;
      if (b < dim) lap(b, b) += inc.w;
      if (a < dim && b < dim) {
        lap(a, b) -= inc.w;
        lap(b, a) -= inc.w;
      }
    }
  }
  const Eigen::MatrixXd inv = lap.ldlt().solve(Eigen::MatrixXd::Identity(lap.rows(), lap.cols()));
  for (std::size_t id : edges) {
    const Edge& e = g.edge(id);
    const std::size_t a = local[e.u];
    const std::size_t b = local[e.v];
    double r = 0.0;
    if (a < dim) r += inv(a, a);
    if (b < dim) r += inv(b, b);
    if (a < dim && b < dim) r -= 2.0 * inv(a, b);
    out[id] = std::clamp(e.w * r, 0.0, 1.0);
  }
}

}  // namespace

std::vector<double> leverage_scores(const WeightedGraph& g, std::size_t dense_limit) {
  std::vector<double> out(g.num_edges(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& members : connected_components(g).groups()) {
    if (members.size() <= dense_limit) component_leverage(g, members, out);
  }
  return out;
}

std::vector<double> sampling_probabilities(const WeightedGraph& g, const SparsifierConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw std::invalid_argument("sparsifier epsilon must lie in (0, 1)");
  }
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  std::vector<double> p(m, 1.0);
  if (m == 0 || n < 3) return p;

  const double log_n = std::log(static_cast<double>(n));
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const std::vector<double> lev = leverage_scores(g, cfg.dense_limit);

  // Edges outside any solved component share the budget of their weight class.
  std::map<int, std::size_t> class_size;
  auto weight_class = [&](double w) {
    return static_cast<int>(std::floor(std::log2(w / g.min_weight())));
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(lev[i])) ++class_size[weight_class(g.edge(i).w)];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(lev[i])) {
      const double budget = cfg.oversampling * static_cast<double>(n) * log_n / eps2;
      p[i] = std::min(1.0, budget / static_cast<double>(class_size[weight_class(g.edge(i).w)]));
    } else if (lev[i] >= kBridgeLeverage) {
      p[i] = 1.0;
    } else {
      p[i] = std::min(1.0, cfg.oversampling * log_n * lev[i] / eps2);
    }
  }
  return p;
}

WeightedGraph sparsify(const WeightedGraph& g, const SparsifierConfig& cfg) {
  if (g.num_edges() <= cfg.keep_all_threshold) return g;
  const std::vector<double> p = sampling_probabilities(g, cfg);
  Rng rng(derive_seed(cfg.seed, 0x5a5a'0001));

  std::vector<Edge> kept;
  double heaviest = 0.0;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    if (p[i] >= 1.0 || rng.uniform() < p[i]) {
      kept.push_back({e.u, e.v, e.w / p[i]});
      heaviest = std::max(heaviest, e.w / p[i]);
    }
  }
  const double n = static_cast<double>(std::max<std::size_t>(g.num_vertices(), 2));
  const double floor_weight = heaviest / std::pow(n, 6.0);
  std::erase_if(kept, [&](const Edge& e) { return e.w < floor_weight; });
  return WeightedGraph(g.num_vertices(), kept);
}

}  // namespace quadsketch
