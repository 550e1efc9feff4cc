// Acceptance experiments. Prints one PASS/FAIL line per criterion; with a
// numeric argument only that criterion runs. Exit status is nonzero when any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "quadsketch/cut_sketch.hpp"
#include "quadsketch/distmincut.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/partition.hpp"
#include "quadsketch/psd.hpp"
#include "quadsketch/serialize.hpp"
#include "quadsketch/spectral_sketch.hpp"

namespace {

using namespace quadsketch;
using qs_test::gnp_connected;

// Tolerances.
constexpr double kS1Eps = 1.0 / 8.0;
constexpr std::size_t kS1Builds = 1000;
constexpr double kS1FailSlack = 0.03;
constexpr double kVarianceSlack = 1.2;
constexpr double kExactTol = 1e-12;
constexpr double kSamplingSlack = 0.03;
constexpr double kCutSuccessSlack = 0.05;
constexpr double kSlopeTarget = 1.0;
constexpr double kSlopeTol = 0.35;
constexpr double kQBound = 16.0;
constexpr double kSpectralRate = 0.9;
constexpr double kReductionTol = 1e-9;
constexpr double kJlSlack = 0.02;
constexpr double kMinCutRate = 0.95;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1, 2: S1 sketches on exhaustively verified expanders.

struct S1Case {
  WeightedGraph g;
  std::vector<CutQuery> queries;
};

std::vector<S1Case> s1_corpus() {
  std::vector<S1Case> out;
  const double gamma = 1.0 / 32.0;
  std::uint64_t seed = 100;
  while (out.size() < 20) {
    if (seed > 2100) throw std::runtime_error("could not generate enough expanders");
    const std::size_t n = 20 + out.size() % 3;
    WeightedGraph g = gnp_connected(n, 0.97, seed++, gamma, 2.0 * gamma);
    if (expansion_exact(g) < 1.0 / kS1Eps) continue;
    Rng rng(derive_seed(seed, 7));
    S1Case c{g, {}};
    while (c.queries.size() < 3) {
      CutQuery s = qs_test::random_cut(n, rng);
      if (cut_weight(g, s) <= 5.0) c.queries.push_back(s);
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct S1Stats {
  double worst_fail = 0.0;
  double worst_variance_ratio = 0.0;
};

S1Stats s1_stats() {
  S1Stats st;
  const auto corpus = s1_corpus();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t q = 0; q < corpus[i].queries.size(); ++q) {
      const CutQuery& s = corpus[i].queries[q];
      const double w = cut_weight(corpus[i].g, s);
      std::size_t fails = 0;
      double sum = 0.0, sq = 0.0;
      for (std::size_t b = 0; b < kS1Builds; ++b) {
        const double est = S1Sketch::build(corpus[i].g, kS1Eps, derive_seed(1, i * 16 + q, b)).estimate(s);
        if (std::abs(est - w) > 21.0 * kS1Eps * w) ++fails;
        sum += est;
        sq += est * est;
      }
      const double k = static_cast<double>(kS1Builds);
      const double mean = sum / k;
      const double var = (sq - k * mean * mean) / (k - 1.0);
      st.worst_fail = std::max(st.worst_fail, static_cast<double>(fails) / k);
      st.worst_variance_ratio = std::max(st.worst_variance_ratio, var / (44.0 * kS1Eps * kS1Eps * w * w));
    }
  }
  return st;
}

Outcome criterion1() {
  const S1Stats st = s1_stats();
  const double limit = 1.0 / 9.0 + kS1FailSlack;
  return {st.worst_fail <= limit, fmt("worst failure fraction %.4f (limit %.4f) over 60 queries", st.worst_fail, limit)};
}

Outcome criterion2() {
  const S1Stats st = s1_stats();
  return {st.worst_variance_ratio <= kVarianceSlack,
          fmt("worst Var/(44 eps^2 w^2) = %.4f (limit %.2f)", st.worst_variance_ratio, kVarianceSlack)};
}

// ---------------------------------------------------------------------------
// 3: exact expectations by enumerating every sampling outcome.

double s1_expectation(const WeightedGraph& p, double eps, const CutQuery& s) {
  const auto draws = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-9));
  std::vector<oracle::SamplingSlot> slots;
  std::vector<Vertex> owner;
  for (Vertex u = 0; u < p.num_vertices(); ++u) {
    const std::size_t d = p.degree(u);
    if (d == 0) continue;
    slots.push_back({std::vector<double>(d, 1.0 / static_cast<double>(d)), draws});
    owner.push_back(u);
  }
  return oracle::expectation_exhaustive(slots, [&](const oracle::OutcomeCounts& c) {
    std::vector<std::vector<std::size_t>> counts(p.num_vertices());
    for (std::size_t i = 0; i < owner.size(); ++i) counts[owner[i]] = c[i];
    return S1Sketch(p, eps, counts).estimate(s);
  });
}

bool close(double a, double b) { return std::abs(a - b) <= kExactTol * std::max(1.0, std::abs(b)); }

Outcome criterion3() {
  std::size_t checks = 0, bad = 0;
  double worst = 0.0;
  auto record = [&](double got, double want) {
    ++checks;
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    if (!close(got, want)) ++bad;
  };

  // S1, two samples per vertex, degrees at most three.
  const std::vector<Edge> prism = {{0, 1, 1.0}, {1, 2, 1.5}, {0, 2, 1.25}, {3, 4, 1.75}, {4, 5, 1.0},
                                   {3, 5, 1.5}, {0, 3, 1.25}, {1, 4, 1.0},  {2, 5, 1.75}};
  const std::vector<WeightedGraph> s1_graphs = {qs_test::complete(4, 1.5), qs_test::cycle(6, 1.25),
                                                WeightedGraph(6, prism)};
  for (std::size_t i = 0; i < s1_graphs.size(); ++i) {
    Rng rng(derive_seed(3, i));
    for (int q = 0; q < 4; ++q) {
      const CutQuery s = qs_test::random_cut(s1_graphs[i].num_vertices(), rng);
      record(s1_expectation(s1_graphs[i], 0.5, s), cut_weight(s1_graphs[i], s));
    }
  }

  // S2 with alpha = 2: a heavy triangle with light pendants, and K8 with four heavy vertices.
  SpectralParams s2;
  s2.alpha = 2.0;
  const WeightedGraph tri(6, std::vector<Edge>{{0, 1, 1.2}, {1, 2, 1.7}, {0, 2, 1.4}, {0, 3, 1.0}, {1, 4, 1.0},
                                               {2, 5, 1.0}});
  const WeightedGraph k8 = qs_test::gnp(8, 1.0, 33, 1.0, 2.0);
  std::vector<double> deg8;
  for (Vertex u = 0; u < 8; ++u) deg8.push_back(k8.weighted_degree(u));
  std::sort(deg8.rbegin(), deg8.rend());
  const std::vector<std::pair<WeightedGraph, double>> s2_cases = {{tri, 1.0}, {k8, (deg8[3] + deg8[4]) / 4.0}};
  for (std::size_t i = 0; i < s2_cases.size(); ++i) {
    const auto& [g, gamma] = s2_cases[i];
    const auto slots = S2Sketch::sampling_slots(g, 0.1, s2, gamma);
    Rng rng(derive_seed(4, i));
    for (int q = 0; q < 3; ++q) {
      std::vector<double> x = q == 0 ? std::vector<double>(g.num_vertices(), 0.0) : qs_test::gaussian_vector(g.num_vertices(), rng);
      if (q == 0) x[0] = 1.0;
      const double e = oracle::expectation_exhaustive(slots, [&](const oracle::OutcomeCounts& c) {
        return S2Sketch::from_counts(g, 0.1, c, s2, gamma).estimate(x);
      });
      record(e, quadratic_form(g, x));
    }
  }

  // S3 with beta = 2: every arc is sampled.
  SpectralParams s3;
  s3.beta = 2.0;
  s3.s3_threshold = S3Threshold::beta_eps_squared;
  const DirectedGraph tour(5, {{0, 1, 1.0}, {0, 2, 1.5}, {1, 2, 1.25}, {3, 0, 1.75}, {1, 3, 1.0}, {2, 3, 1.5},
                               {4, 0, 1.25}, {4, 1, 1.0}, {2, 4, 1.75}});
  const auto slots = S3Sketch::sampling_slots(tour, 0, 0.1, s3);
  Rng rng(5);
  for (int q = 0; q < 3; ++q) {
    const std::vector<double> x = qs_test::gaussian_vector(5, rng);
    const double e = oracle::expectation_exhaustive(slots, [&](const oracle::OutcomeCounts& c) {
      return S3Sketch::from_counts(tour, 0, 0.1, c, s3).estimate(x);
    });
    record(e, quadratic_form(tour.undirected(), x));
  }
  return {bad == 0, fmt("%zu/%zu expectations exact, worst relative gap %.2e (limit %.0e)", checks - bad, checks,
                        worst, kExactTol)};
}

// ---------------------------------------------------------------------------
// 4: importance sampling at the ladder-matched scale.

Outcome criterion4() {
  const double eps = 0.1;
  const std::size_t trials = 2000;
  std::size_t ok = 0;
  std::vector<WeightedGraph> graphs;
  for (std::uint64_t i = 0; i < 10; ++i) graphs.push_back(gnp_connected(32, 0.4, 400 + i, 1.0, 10.0));
  for (std::size_t t = 0; t < trials; ++t) {
    const WeightedGraph& g = graphs[t % graphs.size()];
    Rng rng(derive_seed(4, t));
    const CutQuery s = qs_test::random_cut(32, rng);
    const double w = cut_weight(g, s);
    const double w0 = g.min_weight();
    const int rung = static_cast<int>(std::floor(std::log(w / 1.96 / w0) / std::log(CutSketchPoly::kLadderBase)));
    const double c = w0 * std::pow(CutSketchPoly::kLadderBase, std::max(rung, 0));
    const std::vector<double> rs = importance_sample(g, c, eps, derive_seed(44, t));
    double approx = 0.0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (s.contains(g.edge(e).u) != s.contains(g.edge(e).v)) approx += rs[e];
    }
    approx *= c;
    if (std::abs(approx - w) <= 3.0 * eps * w) ++ok;
  }
  const double rate = static_cast<double>(ok) / trials;
  const double need = 8.0 / 9.0 - kSamplingSlack;
  return {rate >= need, fmt("success %.4f (need %.4f) over %zu trials", rate, need, trials)};
}

// ---------------------------------------------------------------------------
// 5, 6: end-to-end cut sketches.

Outcome criterion5() {
  const double eps = 0.1;
  const std::size_t trials = 500;
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const WeightedGraph g = gnp_connected(32, 0.4, 500 + t / 10, 1.0, 10.0);
    Rng rng(derive_seed(5, t));
    const CutQuery s = qs_test::random_cut(32, rng);
    const double w = cut_weight(g, s);
    const double est = CutSketchPoly::build(g, eps, derive_seed(55, t)).estimate(s);
    if (std::abs(est - w) <= 27.0 * eps * w) ++ok;
  }
  const double rate = static_cast<double>(ok) / trials;
  const double need = 7.0 / 9.0 - kCutSuccessSlack;
  return {rate >= need, fmt("success %.4f (need %.4f) over %zu trials", rate, need, trials)};
}

Outcome criterion6() {
  const double eps = 0.1;
  const std::size_t trials = 500;
  std::size_t ok = 0, scale_bad = 0, straddles = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 12 + (t / 10) % 13;
    const WeightedGraph g = qs_test::with_levels(gnp_connected(n, 0.5, 600 + t / 10), {1.0, 1e3, 1e6}, 6 + t / 10);
    Rng rng(derive_seed(6, t));
    const CutQuery s = qs_test::random_cut(n, rng);
    const double w = cut_weight(g, s);
    try {
      const QueryResult r = CutSketchGeneral::build(g, eps, derive_seed(66, t)).query(s);
      const double ratio = w / r.tree_weight;
      if (!(ratio > 0.5 && ratio <= static_cast<double>(n * n))) ++scale_bad;
      if (std::abs(r.value - w) <= 27.0 * eps * w) ++ok;
    } catch (const std::logic_error&) {
      ++straddles;
    }
  }
  const double rate = static_cast<double>(ok) / trials;
  const double need = 7.0 / 9.0 - kCutSuccessSlack;
  return {rate >= need && scale_bad == 0 && straddles == 0,
          fmt("success %.4f (need %.4f), scale violations %zu, straddles %zu", rate, need, scale_bad, straddles)};
}

// ---------------------------------------------------------------------------
// 7: serialized size against 1/eps.

Outcome criterion7() {
  // Degrees (about 77) stay above the largest 1/eps so neighbor samples do not saturate.
  const WeightedGraph g = gnp_connected(256, 0.3, 700, 1.0, 4.0);
  std::vector<double> xs, ys;
  std::string sizes;
  for (int k = 2; k <= 5; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const std::size_t bytes = CutSketchGeneral::build(g, eps, 77).to_bytes().size();
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(bytes)));
    sizes += fmt("%s%zu", sizes.empty() ? "" : ",", bytes);
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4.0;
  const double my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - kSlopeTarget) <= kSlopeTol,
          fmt("slope %.3f (target %.1f +- %.2f), bytes %s, m=%zu", slope, kSlopeTarget, kSlopeTol, sizes.c_str(),
              g.num_edges())};
}

// ---------------------------------------------------------------------------
// 8, 9, 10: partition machinery.

Outcome criterion8() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(8, i));
    const std::size_t n = 10 + rng.below(31);
    const double p = 0.2 + 0.6 * rng.uniform();
    const double h = 0.05 + 0.45 * rng.uniform();
    const WeightedGraph g = qs_test::gnp(n, p, derive_seed(88, i), 1.0, 2.0);
    const PartitionResult r = spectral_preprocessing(g, h);
    worst = std::max(worst, q_bound_ratio(r, g.num_edges(), h));
  }
  return {worst <= kQBound, fmt("worst |Q|/(h m log2(m+1)) = %.4f (limit %.0f)", worst, kQBound)};
}

Outcome criterion9() {
  std::size_t checked = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(9, i));
    const std::size_t n = 4 + rng.below(9);
    const double h = 0.05 + 0.55 * rng.uniform();
    const WeightedGraph g = qs_test::gnp(n, 0.3 + 0.6 * rng.uniform(), derive_seed(99, i), 1.0, 10.0);
    const PartitionResult r = spectral_preprocessing(g, h);
    if (r.heuristic_pieces != 0) ++bad;
    for (const Subgraph& c : r.components) {
      const double l1 = oracle::lambda1_normalized(c.graph);
      ++checked;
      worst = std::min(worst, l1 / (h * h / 2.0));
      if (l1 < h * h / 2.0) ++bad;
    }
  }
  return {bad == 0 && checked > 0,
          fmt("%zu components, violations %zu, min lambda1/(h^2/2) = %.3f", checked, bad, worst)};
}

Outcome criterion10() {
  std::size_t post_bad = 0, depth_bad = 0;
  std::size_t worst_depth = 0, worst_bound = 0;
  double tightest = -1.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(10, i));
    const std::size_t n = 8 + rng.below(57);
    const WeightedGraph g = qs_test::gnp(n, 0.1 + 0.8 * rng.uniform(), derive_seed(1010, i), 1.0, 8.0);
    const std::size_t t = 2 + rng.below(2 * n);
    if (!direction_postcondition(assign_direction(g, t, true), t)) ++post_bad;
    DegreeClassOptions opts;
    opts.seed = derive_seed(1011, i);
    const double eps = 0.2 + 0.1 * static_cast<double>(i % 3);
    const DegreeClassPartition part = degree_class_partition(g, eps, opts);
    if (part.recursion_depth > part.depth_bound()) ++depth_bad;
    const double ratio = static_cast<double>(part.recursion_depth) / static_cast<double>(part.depth_bound());
    if (ratio > tightest) {
      tightest = ratio;
      worst_depth = part.recursion_depth;
      worst_bound = part.depth_bound();
    }
  }
  return {post_bad == 0 && depth_bad == 0,
          fmt("postcondition failures %zu, depth violations %zu (tightest depth %zu vs bound %zu)", post_bad,
              depth_bad, worst_depth, worst_bound)};
}

// ---------------------------------------------------------------------------
// 11: spectral sketches.

struct SpectralRun {
  double rate = 0.0;
  double sampled = 0.0;  // mean vertices with sampled terms per sketch
};

template <class Build>
SpectralRun spectral_rate(std::size_t n, double p, double eps, std::uint64_t base, Build&& build) {
  std::size_t ok = 0, sampled = 0;
  const std::size_t trials = 400;
  for (std::size_t t = 0; t < trials; ++t) {
    const WeightedGraph g = gnp_connected(n, p, base + t / 20, 1.0, 4.0);
    Rng rng(derive_seed(base, t));
    const std::vector<double> x = qs_test::unit_vector(n, rng);
    const double exact = quadratic_form(g, x);
    const auto sk = build(g, eps, derive_seed(base + 1, t));
    sampled += sk.sampled_vertices();
    if (std::abs(sk.estimate(x) - exact) <= eps * exact) ++ok;
  }
  return {static_cast<double>(ok) / trials, static_cast<double>(sampled) / trials};
}

Outcome criterion11() {
  const SpectralRun basic = spectral_rate(32, 0.5, 0.2, 1100, [](const WeightedGraph& g, double e, std::uint64_t s) {
    return SpectralBasicSketch::build(g, e, s);
  });
  const SpectralRun improved =
      spectral_rate(64, 0.6, 0.25, 1200, [](const WeightedGraph& g, double e, std::uint64_t s) {
        return SpectralImprovedSketch::build(g, e, s);
      });
  return {basic.rate >= kSpectralRate && improved.rate >= kSpectralRate,
          fmt("basic %.4f, improved %.4f (need %.2f); mean sampled vertices per sketch %.1f / %.1f", basic.rate,
              improved.rate, kSpectralRate, basic.sampled, improved.sampled)};
}

// ---------------------------------------------------------------------------
// 12, 13: matrices.

Outcome criterion12() {
  std::size_t bad = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng(derive_seed(12, i));
    const std::size_t n = 1 + rng.below(64);
    const SymMatrix a = qs_test::random_sdd(n, rng, rng.uniform());
    const std::vector<double> x = qs_test::gaussian_vector(n, rng);
    const double want = a.quadratic_form(x);
    const double got = sdd_to_laplacian(a).evaluate(x);
    const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    worst = std::max(worst, rel);
    if (rel > kReductionTol) ++bad;
  }
  return {bad == 0, fmt("failures %zu/500, worst relative error %.2e (limit %.0e)", bad, worst, kReductionTol)};
}

Outcome criterion13() {
  const double eps = 0.5, delta = 0.1;
  const std::size_t n = 16, seeds = 2000;
  const std::size_t r_expected = static_cast<std::size_t>(std::ceil(8.0 / (eps * eps) * std::log(1.0 / delta)));
  std::vector<SymMatrix> mats;
  std::vector<std::vector<double>> xs;
  {
    std::vector<double> id(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1.0;
    mats.emplace_back(n, id);
    std::vector<double> e0(n, 0.0);
    e0[0] = 1.0;
    xs.push_back(e0);
  }
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    mats.push_back(qs_test::random_psd(n, 4 + 2 * static_cast<std::size_t>(i), rng));
    xs.push_back(qs_test::gaussian_vector(n, rng));
  }
  double worst = 0.0;
  std::size_t r_seen = 0;
  for (std::size_t m = 0; m < mats.size(); ++m) {
    const double exact = mats[m].quadratic_form(xs[m]);
    std::size_t fails = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const JlSketch sk = JlSketch::build(mats[m], eps, delta, derive_seed(1313, m, s));
      r_seen = sk.rows();
      if (std::abs(sk.estimate(xs[m]) - exact) > eps * exact) ++fails;
    }
    worst = std::max(worst, static_cast<double>(fails) / seeds);
  }
  return {worst <= delta + kJlSlack && r_seen == r_expected,
          fmt("worst failure fraction %.4f (limit %.2f), r = %zu (expected %zu)", worst, delta + kJlSlack, r_seen,
              r_expected)};
}

// ---------------------------------------------------------------------------
// 14: distributed minimum cut.

Outcome criterion14() {
  std::size_t ok = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 20 + s % 21;
    const WeightedGraph g = gnp_connected(n, 0.3, 1400 + s, 1.0, 4.0);
    ProtocolOptions opts;
    opts.servers = s % 2 == 0 ? 2 : 4;
    opts.epsilon = 0.1;
    opts.reps = 9;
    opts.seed = derive_seed(14, s);
    const ProtocolTranscript tr = run_protocol(g, opts);
    const double exact = oracle::min_cut_exact(g).value;
    if (cut_weight(g, tr.cut) <= (1.0 + 3.0 * opts.epsilon) * exact * (1.0 + 1e-12)) ++ok;
  }
  const WeightedGraph dense = qs_test::gnp(48, 0.8, 1480);
  ProtocolOptions opts;
  opts.servers = 2;
  opts.epsilon = 0.25;
  opts.seed = 1481;
  const ProtocolTranscript tr = run_protocol(dense, opts);
  const std::size_t raw = raw_edge_list_bytes(dense);
  const double rate = ok / 100.0;
  return {rate >= kMinCutRate && tr.total_bytes < raw,
          fmt("within 1+3eps on %.2f of seeds (need %.2f); transcript %zu bytes vs raw edge list %zu bytes", rate,
              kMinCutRate, tr.total_bytes, raw)};
}

// ---------------------------------------------------------------------------
// 15: determinism and round trips.

template <class Sketch, class Query>
bool round_trips(const Sketch& a, const Sketch& b, Query&& query) {
  const auto bytes = a.to_bytes();
  if (bytes != b.to_bytes()) return false;
  const Sketch back = Sketch::from_bytes(bytes);
  return back == a && back.to_bytes() == bytes && query(back) == query(a);
}

Outcome criterion15() {
  std::size_t checks = 0, bad = 0;
  auto check = [&](bool ok) {
    ++checks;
    if (!ok) ++bad;
  };
  for (std::uint64_t i = 0; i < 6; ++i) {
    const std::size_t n = 12 + 6 * i;
    const WeightedGraph g = gnp_connected(n, 0.5, 1500 + i, 1.0, 5.0);
    const WeightedGraph heavy = qs_test::with_levels(g, {1.0, 1e3, 1e6}, 1510 + i);
    Rng rng(derive_seed(15, i));
    const CutQuery s = qs_test::random_cut(n, rng);
    const std::vector<double> x = qs_test::gaussian_vector(n, rng);
    const std::uint64_t seed = 150 + i;

    check(round_trips(CutSketchPoly::build(g, 0.2, seed), CutSketchPoly::build(g, 0.2, seed),
                      [&](const auto& sk) { return sk.estimate(s); }));
    check(round_trips(CutSketchGeneral::build(heavy, 0.2, seed), CutSketchGeneral::build(heavy, 0.2, seed),
                      [&](const auto& sk) { return sk.estimate(s); }));
    check(round_trips(AmplifiedCutSketch::build(heavy, 0.2, 3, seed), AmplifiedCutSketch::build(heavy, 0.2, 3, seed),
                      [&](const auto& sk) { return sk.estimate(s); }));
    check(round_trips(SpectralBasicSketch::build(g, 0.2, seed), SpectralBasicSketch::build(g, 0.2, seed),
                      [&](const auto& sk) { return sk.estimate(x); }));
    check(round_trips(SpectralImprovedSketch::build(g, 0.25, seed), SpectralImprovedSketch::build(g, 0.25, seed),
                      [&](const auto& sk) { return sk.estimate(x); }));
    const SymMatrix a = qs_test::random_sdd(n, rng);
    check(round_trips(SddSketch::build(a, 0.25, seed), SddSketch::build(a, 0.25, seed),
                      [&](const auto& sk) { return sk.estimate(x); }));
    check(round_trips(JlSketch::build(a, 0.3, 0.1, seed), JlSketch::build(a, 0.3, 0.1, seed),
                      [&](const auto& sk) { return sk.estimate(x); }));
    check(graph_from_bytes(graph_to_bytes(g)) == g);

    ProtocolOptions opts;
    opts.seed = seed;
    const ProtocolTranscript t1 = run_protocol(g, opts), t2 = run_protocol(g, opts);
    bool same = t1.cut == t2.cut && t1.estimate == t2.estimate && t1.total_bytes == t2.total_bytes;
    for (std::size_t k = 0; same && k < t1.messages.size(); ++k) {
      same = t1.messages[k].sketch == t2.messages[k].sketch && t1.messages[k].sparsifier == t2.messages[k].sparsifier;
    }
    check(same);
  }
  return {bad == 0, fmt("%zu/%zu determinism and round-trip checks hold", checks - bad, checks)};
}

const std::map<int, std::pair<const char*, Outcome (*)()>> kCriteria = {
    {1, {"S1 guarantee", criterion1}},
    {2, {"S1 variance", criterion2}},
    {3, {"exact unbiasedness", criterion3}},
    {4, {"importance sampling", criterion4}},
    {5, {"poly-weight cut sketch", criterion5}},
    {6, {"general-weight reduction", criterion6}},
    {7, {"cut sketch size scaling", criterion7}},
    {8, {"Q bound", criterion8}},
    {9, {"Cheeger inequality", criterion9}},
    {10, {"direction and recursion depth", criterion10}},
    {11, {"spectral sketches", criterion11}},
    {12, {"SDD reduction", criterion12}},
    {13, {"JL sketch", criterion13}},
    {14, {"distributed min cut", criterion14}},
    {15, {"determinism and round trip", criterion15}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [id, c] : kCriteria) selected.push_back(id);
  }
  bool all = true;
  for (int id : selected) {
    const auto it = kCriteria.find(id);
    if (it == kCriteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s  %-30s %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", it->second.first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
