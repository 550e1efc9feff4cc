#include "quadsketch/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace quadsketch::oracle {

namespace {

CutQuery component_of_zero(const WeightedGraph& g) {
  const Components c = connected_components(g);
  CutQuery side(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (c.label[u] == c.label[0]) side.set(u);
  }
  return side;
}

// Enumerates every subset of the first n-1 vertices, tracking the cut weight.
template <class Visit>
void for_each_cut(const WeightedGraph& g, Visit&& visit) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) {
    throw std::invalid_argument("instance too large for exhaustive oracle");
  }
  std::vector<std::uint8_t> in(n, 0);
  double cut = 0.0;
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const std::uint64_t flipped = mask ^ (mask - 1);
    for (std::size_t v = 0; v + 1 < n; ++v) {
      if (!((flipped >> v) & 1U)) continue;
      double to_s = 0.0;
      for (const Incidence& inc : g.neighbors(static_cast<Vertex>(v))) {
        if (in[inc.neighbor]) to_s += inc.w;
      }
      const double deg = g.weighted_degree(static_cast<Vertex>(v));
      if (in[v]) {
        in[v] = 0;
        cut -= deg - 2.0 * to_s;
      } else {
        cut += deg - 2.0 * to_s;
        in[v] = 1;
      }
    }
    visit(mask, cut);
  }
}

double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double binomial(std::size_t n, std::size_t k) {
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

struct SlotOutcome {
  std::vector<std::size_t> counts;
  double probability;
};

void compositions(std::size_t remaining, std::size_t index, std::vector<std::size_t>& counts,
                  const SamplingSlot& slot, std::vector<SlotOutcome>& out) {
  const std::size_t k = slot.probabilities.size();
  if (index + 1 == k) {
    counts[index] = remaining;
    double logp = log_factorial(slot.draws);
    bool zero = false;
    for (std::size_t i = 0; i < k; ++i) {
      logp -= log_factorial(counts[i]);
      if (counts[i] > 0) {
        if (slot.probabilities[i] <= 0.0) {
          zero = true;
          break;
        }
        logp += static_cast<double>(counts[i]) * std::log(slot.probabilities[i]);
      }
    }
    if (!zero) out.push_back({counts, std::exp(logp)});
    return;
  }
  for (std::size_t c = 0; c <= remaining; ++c) {
    counts[index] = c;
    compositions(remaining - c, index + 1, counts, slot, out);
  }
}

}  // namespace

MinCut min_cut_exact(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > 256) throw std::invalid_argument("Stoer-Wagner oracle limited to n <= 256");
  if (n < 2) throw std::invalid_argument("minimum cut needs at least two vertices");
  if (!is_connected(g)) return {0.0, component_of_zero(g)};

  std::vector<double> w(n * n, 0.0);
  for (const Edge& e : g.edges()) {
    w[e.u * n + e.v] += e.w;
    w[e.v * n + e.u] += e.w;
  }
  // members[i]: original vertices merged into super-vertex i.
  std::vector<std::vector<Vertex>> members(n);
  for (Vertex u = 0; u < n; ++u) members[u] = {u};
  std::vector<std::size_t> alive(n);
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  double best = std::numeric_limits<double>::infinity();
  std::vector<Vertex> best_side;
  std::vector<double> key(n);
  std::vector<std::uint8_t> added(n);
  while (alive.size() > 1) {
    std::fill(added.begin(), added.end(), 0);
    for (std::size_t v : alive) key[v] = 0.0;
    std::size_t prev = alive[0];
    std::size_t last = alive[0];
    for (std::size_t step = 0; step < alive.size(); ++step) {
      std::size_t pick = n;
      for (std::size_t v : alive) {
        if (!added[v] && (pick == n || key[v] > key[pick])) pick = v;
      }
      added[pick] = 1;
      prev = last;
      last = pick;
      for (std::size_t v : alive) {
        if (!added[v]) key[v] += w[pick * n + v];
      }
    }
    const double phase_cut = key[last];
    if (phase_cut < best) {
      best = phase_cut;
      best_side = members[last];
    }
    members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
    for (std::size_t v : alive) {
      w[prev * n + v] += w[last * n + v];
      w[v * n + prev] = w[prev * n + v];
    }
    w[prev * n + prev] = 0.0;
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  return {best, CutQuery::from_members(n, best_side)};
}

MinCut min_cut_exhaustive(const WeightedGraph& g) {
  if (g.num_vertices() < 2) throw std::invalid_argument("minimum cut needs at least two vertices");
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  for_each_cut(g, [&](std::uint64_t mask, double cut) {
    if (cut < best) {
      best = cut;
      best_mask = mask;
    }
  });
  return {best, CutQuery::from_mask(g.num_vertices(), best_mask)};
}

std::vector<CutQuery> near_min_cuts_exhaustive(const WeightedGraph& g, double factor) {
  const double lambda = min_cut_exhaustive(g).value;
  const double limit = factor * lambda * (1.0 + 1e-12);
  std::vector<CutQuery> out;
  for_each_cut(g, [&](std::uint64_t mask, double cut) {
    if (cut <= limit) out.push_back(CutQuery::from_mask(g.num_vertices(), mask));
  });
  return out;
}

Eigensystem jacobi_eigen(std::vector<double> a, std::size_t n, double tolerance) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen: matrix size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double target = tolerance * std::max(1.0, frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    }
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > target) throw std::runtime_error("Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = v[r * n + order[k]];
  }
  return out;
}

double lambda1_normalized(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > 512) throw std::invalid_argument("dense eigensolve limited to n <= 512");
  if (n < 2) throw std::invalid_argument("lambda1 needs at least two vertices");
  for (Vertex u = 0; u < n; ++u) {
    if (g.degree(u) == 0) {
      throw std::invalid_argument("isolated vertex " + std::to_string(u) + " has zero degree");
    }
  }
  if (!is_connected(g)) throw std::invalid_argument("lambda1 requires a connected graph");

  std::vector<double> a(n * n, 0.0);
  std::vector<double> inv_sqrt(n);
  for (Vertex u = 0; u < n; ++u) {
    inv_sqrt[u] = 1.0 / std::sqrt(g.weighted_degree(u));
    a[u * n + u] = 1.0;
  }
  for (const Edge& e : g.edges()) {
    const double x = -e.w * inv_sqrt[e.u] * inv_sqrt[e.v];
    a[e.u * n + e.v] += x;
    a[e.v * n + e.u] += x;
  }
  const Eigensystem es = jacobi_eigen(std::move(a), n);
  if (std::abs(es.values[0]) > 1e-8) {
    throw std::runtime_error("normalized Laplacian has no zero eigenvalue within 1e-8");
  }
  return es.values[1];
}

double outcome_space_size(std::span<const SamplingSlot> slots) {
  double total = 1.0;
  for (const SamplingSlot& s : slots) {
    if (s.probabilities.empty() || s.draws == 0) continue;
    total *= binomial(s.draws + s.probabilities.size() - 1, s.probabilities.size() - 1);
  }
  return total;
}

double expectation_exhaustive(std::span<const SamplingSlot> slots,
                              const std::function<double(const OutcomeCounts&)>& evaluate,
                              std::size_t max_outcomes) {
  if (outcome_space_size(slots) > static_cast<double>(max_outcomes)) {
    throw std::invalid_argument("outcome space too large for exhaustive enumeration");
  }
  std::vector<std::vector<SlotOutcome>> per_slot(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const SamplingSlot& s = slots[i];
    if (s.probabilities.empty()) {
      if (s.draws != 0) throw std::invalid_argument("draws from an empty distribution");
      per_slot[i].push_back({{}, 1.0});
      continue;
    }
    std::vector<std::size_t> counts(s.probabilities.size(), 0);
    compositions(s.draws, 0, counts, s, per_slot[i]);
  }

  OutcomeCounts outcome(slots.size());
  std::vector<std::size_t> cursor(slots.size(), 0);
  double sum = 0.0;
  double compensation = 0.0;
  while (true) {
    double p = 1.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      outcome[i] = per_slot[i][cursor[i]].counts;
      p *= per_slot[i][cursor[i]].probability;
    }
    // Neumaier summation keeps the expectation exact to ~1e-15 relative.
    const double term = p * evaluate(outcome);
    const double t = sum + term;
    compensation += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;

    std::size_t i = 0;
    while (i < slots.size() && ++cursor[i] == per_slot[i].size()) {
      cursor[i] = 0;
      ++i;
    }
    if (i == slots.size()) break;
  }
  return sum + compensation;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::exhaustive:
      return "exhaustive";
    case Method::stoer_wagner:
      return "stoer_wagner";
    case Method::dense_eig:
      return "dense_eig";
  }
  return "unknown";
}

std::uint64_t fingerprint(const WeightedGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(g.num_vertices());
  for (const Edge& e : g.edges()) {
    mix(e.u);
    mix(e.v);
    mix(std::bit_cast<std::uint64_t>(e.w));
  }
  return h;
}

Report report_min_cut(const WeightedGraph& g) {
  return {"min_cut", min_cut_exact(g).value, Method::stoer_wagner, fingerprint(g)};
}

Report report_lambda1(const WeightedGraph& g) {
  return {"lambda1_normalized", lambda1_normalized(g), Method::dense_eig, fingerprint(g)};
}

Report report_cut_weight(const WeightedGraph& g, const CutQuery& s) {
  return {"cut_weight", cut_weight(g, s), Method::exhaustive, fingerprint(g)};
}

}  // namespace quadsketch::oracle
