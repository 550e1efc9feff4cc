#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quadsketch/cut_sketch.hpp"
#include "quadsketch/distmincut.hpp"
#include "quadsketch/graph_io.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/parallel.hpp"
#include "quadsketch/partition.hpp"
#include "quadsketch/psd.hpp"
#include "quadsketch/random.hpp"
#include "quadsketch/serialize.hpp"
#include "quadsketch/sparsify.hpp"
#include "quadsketch/spectral_sketch.hpp"

namespace fs = std::filesystem;
using namespace quadsketch;

namespace {

// Shortest decimal that round-trips.
std::string num(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string num(std::size_t v) { return std::to_string(v); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < t.header.size(); ++i) {
        const std::string& cell = row[i];
        char* end = nullptr;
        const long long k = std::strtoll(cell.c_str(), &end, 10);
        if (!cell.empty() && end == cell.c_str() + cell.size()) {
          obj[t.header[i]] = k;
          continue;
        }
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size()) {
          obj[t.header[i]] = v;
        } else {
          obj[t.header[i]] = cell;
        }
      }
      arr.push_back(obj);
    }
    out << arr.dump(2) << '\n';
    return;
  }
  out << "# quadsketch v1\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
}

WeightedGraph load_graph(const std::string& path) { return read_edge_list_file(path); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

// A comma-separated member list, or "-" / "" for the empty set.
CutQuery parse_members(const std::string& text, std::size_t n) {
  std::vector<Vertex> members;
  if (text != "-") {
    for (const std::string& tok : split(text, ',')) {
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw std::invalid_argument("bad vertex id: " + tok);
      if (v >= n) throw std::invalid_argument("vertex id out of range: " + tok);
      members.push_back(static_cast<Vertex>(v));
    }
  }
  return CutQuery::from_members(n, members);
}

// A file of whitespace-separated numbers, or a comma-separated list.
std::vector<double> parse_vector(const std::string& text, std::size_t n) {
  std::vector<double> x;
  if (fs::exists(text)) {
    std::ifstream file(text);
    std::string body((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    double v = 0.0;
    while (in >> v) x.push_back(v);
    if (!in.eof()) throw std::invalid_argument("vector file contains a non-number");
  } else {
    for (const std::string& tok : split(text, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw std::invalid_argument("bad vector entry: " + tok);
      x.push_back(v);
    }
  }
  if (x.size() != n) {
    throw DimensionError("vector has " + std::to_string(x.size()) + " entries, expected " + std::to_string(n));
  }
  return x;
}

void write_output(const std::string& path, std::span<const std::uint8_t> bytes) {
  if (path.empty()) throw std::invalid_argument("an output path (-o) is required");
  write_file_bytes(path, bytes);
}

struct CommonFlags {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string output;
};

void add_epsilon(CLI::App* app, CommonFlags& f) {
  app->add_option("--epsilon,--eps", f.epsilon, "accuracy parameter in (0, 1)")->check(CLI::Range(0.0, 1.0));
}
void add_seed(CLI::App* app, CommonFlags& f) { app->add_option("--seed", f.seed, "root random seed"); }
void add_format(CLI::App* app, CommonFlags& f) {
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------------------
// cut-sketch

double cut_estimate(std::span<const std::uint8_t> bytes, const CutQuery& s) {
  switch (peek_kind(bytes)) {
    case SketchKind::cut_poly:
      return CutSketchPoly::from_bytes(bytes).estimate(s);
    case SketchKind::cut_general:
      return CutSketchGeneral::from_bytes(bytes).estimate(s);
    case SketchKind::cut_amplified:
      return AmplifiedCutSketch::from_bytes(bytes).estimate(s);
    default:
      throw FormatError("not a cut sketch");
  }
}

std::pair<std::size_t, std::size_t> cut_shape(std::span<const std::uint8_t> bytes) {
  switch (peek_kind(bytes)) {
    case SketchKind::cut_poly: {
      const auto sk = CutSketchPoly::from_bytes(bytes);
      return {sk.num_vertices(), sk.words()};
    }
    case SketchKind::cut_general: {
      const auto sk = CutSketchGeneral::from_bytes(bytes);
      return {sk.num_vertices(), sk.words()};
    }
    case SketchKind::cut_amplified: {
      const auto sk = AmplifiedCutSketch::from_bytes(bytes);
      return {sk.reps() ? sk.copy(0).num_vertices() : 0, sk.words()};
    }
    default:
      throw FormatError("not a cut sketch");
  }
}

std::vector<std::uint8_t> build_cut(const WeightedGraph& g, double eps, std::uint64_t seed, const std::string& variant,
                                    std::size_t reps) {
  if (reps % 2 == 0) throw std::invalid_argument("--reps must be odd");
  if (variant == "poly") {
    if (reps != 1) throw std::invalid_argument("--reps applies to the general variant only");
    return CutSketchPoly::build(g, eps, seed).to_bytes();
  }
  if (reps > 1) return AmplifiedCutSketch::build(g, eps, reps, seed).to_bytes();
  return CutSketchGeneral::build(g, eps, seed).to_bytes();
}

const char* kind_name(SketchKind k) {
  switch (k) {
    case SketchKind::graph: return "graph";
    case SketchKind::s1: return "s1";
    case SketchKind::cut_poly: return "cut-poly";
    case SketchKind::cut_general: return "cut-general";
    case SketchKind::cut_amplified: return "cut-amplified";
    case SketchKind::spectral_basic: return "spectral-basic";
    case SketchKind::spectral_improved: return "spectral-improved";
    case SketchKind::jl: return "jl";
    case SketchKind::sdd: return "sdd";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// spectral-sketch

std::vector<std::uint8_t> build_spectral(const WeightedGraph& g, double eps, std::uint64_t seed,
                                         const std::string& variant) {
  if (variant == "basic") return SpectralBasicSketch::build(g, eps, seed).to_bytes();
  return SpectralImprovedSketch::build(g, eps, seed).to_bytes();
}

std::size_t spectral_vertices(std::span<const std::uint8_t> bytes) {
  switch (peek_kind(bytes)) {
    case SketchKind::spectral_basic:
      return SpectralBasicSketch::from_bytes(bytes).num_vertices();
    case SketchKind::spectral_improved:
      return SpectralImprovedSketch::from_bytes(bytes).num_vertices();
    default:
      throw FormatError("not a spectral sketch");
  }
}

double spectral_estimate(std::span<const std::uint8_t> bytes, std::span<const double> x) {
  switch (peek_kind(bytes)) {
    case SketchKind::spectral_basic:
      return SpectralBasicSketch::from_bytes(bytes).estimate(x);
    case SketchKind::spectral_improved:
      return SpectralImprovedSketch::from_bytes(bytes).estimate(x);
    default:
      throw FormatError("not a spectral sketch");
  }
}

std::size_t spectral_words(std::span<const std::uint8_t> bytes) {
  switch (peek_kind(bytes)) {
    case SketchKind::spectral_basic:
      return SpectralBasicSketch::from_bytes(bytes).words();
    case SketchKind::spectral_improved:
      return SpectralImprovedSketch::from_bytes(bytes).words();
    default:
      throw FormatError("not a spectral sketch");
  }
}

// ---------------------------------------------------------------------------
// bench

Table run_bench(const std::string& suite, const WeightedGraph& g, const std::vector<double>& eps_list,
                std::uint64_t seed, std::size_t trials, const std::string& variant) {
  Table t;
  const bool size_suite = suite == "cut-size" || suite == "spectral-size";
  if (size_suite) {
    t.header = {"suite", "n", "m", "epsilon", "bytes", "words", "raw_bytes"};
  } else {
    t.header = {"suite", "n", "m", "epsilon", "trials", "success_rate", "mean_rel_err", "max_rel_err"};
  }
  const std::size_t n = g.num_vertices();
  t.rows.resize(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t i) {
    const double eps = eps_list[i];
    const std::uint64_t point_seed = derive_seed(seed, std::hash<std::string>{}(suite) ^ i);
    std::vector<std::string> row = {suite, num(n), num(g.num_edges()), num(eps)};
    if (suite == "cut-size") {
      const auto sk = CutSketchGeneral::build(g, eps, point_seed);
      row.insert(row.end(), {num(sk.to_bytes().size()), num(sk.words()), num(raw_edge_list_bytes(g))});
    } else if (suite == "spectral-size") {
      const auto bytes = build_spectral(g, eps, point_seed, variant);
      row.insert(row.end(), {num(bytes.size()), num(spectral_words(bytes)), num(raw_edge_list_bytes(g))});
    } else {
      std::size_t ok = 0;
      double sum = 0.0, worst = 0.0;
      Rng rng(derive_seed(point_seed, 1));
      for (std::size_t k = 0; k < trials; ++k) {
        double exact = 0.0, est = 0.0;
        if (suite == "cut-error") {
          CutQuery s(n);
          while (s.count() == 0 || s.count() == n) {
            for (Vertex u = 0; u < n; ++u) s.set(u, rng.uniform() < 0.5);
          }
          exact = cut_weight(g, s);
          est = CutSketchGeneral::build(g, eps, derive_seed(point_seed, 2, k)).estimate(s);
        } else {
          std::vector<double> x(n);
          for (double& v : x) v = 2.0 * rng.uniform() - 1.0;
          exact = quadratic_form(g, x);
          const auto bytes = build_spectral(g, eps, derive_seed(point_seed, 2, k), variant);
          est = spectral_estimate(bytes, x);
        }
        const double rel = exact > 0.0 ? std::abs(est - exact) / exact : std::abs(est);
        sum += rel;
        worst = std::max(worst, rel);
        if (rel <= eps) ++ok;
      }
      const double tr = static_cast<double>(trials);
      row.insert(row.end(), {num(trials), num(static_cast<double>(ok) / tr), num(sum / tr), num(worst)});
    }
    t.rows[i] = std::move(row);
  });
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketches of graph Laplacians and SDD/PSD quadratic forms"};
  app.require_subcommand(1);
  CommonFlags f;
  std::string graph_path, sketch_path, query_text, vector_text, matrix_path, variant = "general";
  std::size_t reps = 1;

  // cut-sketch
  auto* cut = app.add_subcommand("cut-sketch", "cut sketches: build, query, size");
  cut->require_subcommand(1);
  auto* cut_build = cut->add_subcommand("build", "build a cut sketch from an edge list");
  add_epsilon(cut_build, f);
  add_seed(cut_build, f);
  cut_build->add_option("--reps", reps, "odd number of independent copies (median)");
  cut_build->add_option("--variant", variant, "general or poly")->check(CLI::IsMember({"general", "poly"}));
  cut_build->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  cut_build->add_option("-o,--output", f.output)->required();
  auto* cut_query = cut->add_subcommand("query", "estimate the weight of a cut");
  cut_query->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  cut_query->add_option("members", query_text, "comma-separated vertices of S")->required();
  auto* cut_size = cut->add_subcommand("size", "report the size of a cut sketch");
  cut_size->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  add_format(cut_size, f);

  // spectral-sketch
  std::string spectral_variant = "improved";
  auto* spectral_cmd = app.add_subcommand("spectral-sketch", "spectral sketches: build, query, size");
  spectral_cmd->require_subcommand(1);
  auto* spectral_build = spectral_cmd->add_subcommand("build", "build a spectral sketch from an edge list");
  add_epsilon(spectral_build, f);
  add_seed(spectral_build, f);
  spectral_build->add_option("--variant", spectral_variant)->check(CLI::IsMember({"basic", "improved"}));
  spectral_build->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  spectral_build->add_option("-o,--output", f.output)->required();
  auto* spectral_query = spectral_cmd->add_subcommand("query", "estimate x^T L x");
  spectral_query->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  spectral_query->add_option("vector", vector_text, "file of numbers or comma-separated list")->required();
  auto* spectral_size = spectral_cmd->add_subcommand("size", "report the size of a spectral sketch");
  spectral_size->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  add_format(spectral_size, f);

  // psd
  double delta = 0.1;
  auto* psd = app.add_subcommand("psd", "Johnson-Lindenstrauss sketch of a PSD matrix");
  psd->require_subcommand(1);
  auto* jl_build = psd->add_subcommand("jl-build", "build a JL sketch");
  add_epsilon(jl_build, f);
  add_seed(jl_build, f);
  jl_build->add_option("--delta", delta, "failure probability in (0, 1)")->check(CLI::Range(0.0, 1.0));
  jl_build->add_option("matrix", matrix_path)->required()->check(CLI::ExistingFile);
  jl_build->add_option("-o,--output", f.output)->required();
  auto* jl_query = psd->add_subcommand("jl-query", "estimate x^T A x");
  jl_query->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  jl_query->add_option("vector", vector_text)->required();

  // sdd
  auto* sdd = app.add_subcommand("sdd", "sketches of SDD matrices");
  sdd->require_subcommand(1);
  auto* sdd_build = sdd->add_subcommand("build", "build an SDD sketch");
  add_epsilon(sdd_build, f);
  add_seed(sdd_build, f);
  sdd_build->add_option("matrix", matrix_path)->required()->check(CLI::ExistingFile);
  sdd_build->add_option("-o,--output", f.output)->required();
  auto* sdd_query = sdd->add_subcommand("query", "estimate x^T A x");
  sdd_query->add_option("sketch", sketch_path)->required()->check(CLI::ExistingFile);
  sdd_query->add_option("vector", vector_text)->required();
  auto* sdd_reduce = sdd->add_subcommand("reduce", "print the 2n-vertex Laplacian of an SDD matrix");
  sdd_reduce->add_option("matrix", matrix_path)->required()->check(CLI::ExistingFile);
  sdd_reduce->add_option("-o,--output", f.output);

  // sparsify
  std::string kind = "spectral";
  auto* sp = app.add_subcommand("sparsify", "importance-sampled sparsifier");
  add_epsilon(sp, f);
  add_seed(sp, f);
  sp->add_option("--kind", kind)->check(CLI::IsMember({"cut", "spectral"}));
  sp->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  sp->add_option("-o,--output", f.output);

  // partition
  std::string mode = "spectral";
  std::optional<double> threshold;
  auto* part = app.add_subcommand("partition", "inspect the partitioning routines");
  part->add_option("--mode", mode)->check(CLI::IsMember({"cut", "spectral", "degree"}));
  add_epsilon(part, f);
  add_seed(part, f);
  add_format(part, f);
  part->add_option("--threshold", threshold, "cut threshold (default 1/eps for cut, eps^(1/3) for spectral)");
  part->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);

  // oracle
  auto* orc = app.add_subcommand("oracle", "exact reference values");
  orc->require_subcommand(1);
  auto* orc_mincut = orc->add_subcommand("mincut", "global minimum cut");
  orc_mincut->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  auto* orc_lambda = orc->add_subcommand("lambda1", "second eigenvalue of the normalized Laplacian");
  orc_lambda->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  auto* orc_cut = orc->add_subcommand("cutweight", "weight of a cut");
  orc_cut->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
  orc_cut->add_option("members", query_text, "comma-separated vertices of S")->required();

  // mincut
  ProtocolOptions proto;
  std::string split_name = "round_robin";
  auto* mc = app.add_subcommand("mincut", "simulated distributed minimum cut");
  mc->add_option("--servers", proto.servers)->check(CLI::PositiveNumber);
  mc->add_option("--epsilon,--eps", proto.epsilon)->check(CLI::Range(0.0, 1.0));
  mc->add_option("--reps", proto.reps);
  mc->add_option("--seed", proto.seed);
  mc->add_option("--split", split_name)->check(CLI::IsMember({"round_robin", "random", "by_vertex_hash"}));
  add_format(mc, f);
  mc->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);

  // bench
  std::string suite;
  std::vector<double> eps_list;
  std::size_t trials = 20;
  std::string bench_variant = "improved";
  auto* bench = app.add_subcommand("bench", "size and error sweeps over epsilon");
  bench->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"cut-size", "cut-error", "spectral-size", "spectral-error"}));
  bench->add_option("--eps", eps_list)->required()->delimiter(',')->check(CLI::Range(0.0, 1.0));
  bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
  bench->add_option("--variant", bench_variant)->check(CLI::IsMember({"basic", "improved"}));
  add_seed(bench, f);
  add_format(bench, f);
  bench->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    const CLI::App* where = app.get_subcommands().empty() ? &app : app.get_subcommands().back();
    while (!where->get_subcommands().empty()) where = where->get_subcommands().back();
    std::cerr << where->help();
    return 2;
  }

  try {
    auto& out = std::cout;
    if (*cut_build) {
      write_output(f.output, build_cut(load_graph(graph_path), f.epsilon, f.seed, variant, reps));
    } else if (*cut_query) {
      const auto bytes = read_file_bytes(sketch_path);
      const std::size_t n = cut_shape(bytes).first;
      out << num(cut_estimate(bytes, parse_members(query_text, n))) << '\n';
    } else if (*cut_size) {
      const auto bytes = read_file_bytes(sketch_path);
      const auto [n, words] = cut_shape(bytes);
      emit({{"kind", "n", "bytes", "words"}, {{kind_name(peek_kind(bytes)), num(n), num(bytes.size()), num(words)}}},
           f.format, out);
    } else if (*spectral_build) {
      write_output(f.output, build_spectral(load_graph(graph_path), f.epsilon, f.seed, spectral_variant));
    } else if (*spectral_query) {
      const auto bytes = read_file_bytes(sketch_path);
      out << num(spectral_estimate(bytes, parse_vector(vector_text, spectral_vertices(bytes)))) << '\n';
    } else if (*spectral_size) {
      const auto bytes = read_file_bytes(sketch_path);
      emit({{"kind", "n", "bytes", "words"},
            {{kind_name(peek_kind(bytes)), num(spectral_vertices(bytes)), num(bytes.size()), num(spectral_words(bytes))}}},
           f.format, out);
    } else if (*jl_build) {
      write_output(f.output, JlSketch::build(read_matrix(fs::path(matrix_path)), f.epsilon, delta, f.seed).to_bytes());
    } else if (*jl_query) {
      const auto sk = JlSketch::from_bytes(read_file_bytes(sketch_path));
      out << num(sk.estimate(parse_vector(vector_text, sk.cols()))) << '\n';
    } else if (*sdd_build) {
      write_output(f.output, SddSketch::build(read_matrix(fs::path(matrix_path)), f.epsilon, f.seed).to_bytes());
    } else if (*sdd_query) {
      const auto sk = SddSketch::from_bytes(read_file_bytes(sketch_path));
      out << num(sk.estimate(parse_vector(vector_text, sk.num_vertices()))) << '\n';
    } else if (*sdd_reduce) {
      const SddReduction red = sdd_to_laplacian(read_matrix(fs::path(matrix_path)));
      std::ostringstream text;
      text << "# diagonal slack:";
      for (double s : red.diag_slack) text << ' ' << num(s);
      text << '\n';
      write_edge_list(text, red.laplacian);
      if (f.output.empty()) {
        out << text.str();
      } else {
        std::ofstream file(f.output);
        if (!(file << text.str())) throw std::runtime_error("cannot write " + f.output);
      }
    } else if (*sp) {
      SparsifierConfig cfg;
      cfg.epsilon = f.epsilon;
      cfg.kind = kind == "cut" ? SparsifierKind::cut : SparsifierKind::spectral;
      cfg.seed = f.seed;
      const WeightedGraph h = sparsify(load_graph(graph_path), cfg);
      if (f.output.empty()) {
        write_edge_list(out, h);
      } else {
        write_edge_list_file(f.output, h);
      }
    } else if (*part) {
      const WeightedGraph g = load_graph(graph_path);
      Table t;
      if (mode == "degree") {
        DegreeClassOptions opts;
        opts.seed = f.seed;
        const DegreeClassPartition dp = degree_class_partition(g, f.epsilon, opts);
        t.header = {"class", "kind", "level", "weight_class", "band", "arcs", "max_out_degree"};
        for (std::size_t i = 0; i < dp.classes.size(); ++i) {
          const DegreeClass& c = dp.classes[i];
          const auto outdeg = c.arcs.out_degrees();
          const std::size_t top = outdeg.empty() ? 0 : *std::max_element(outdeg.begin(), outdeg.end());
          const char* k = c.kind == DegreeClassKind::verbatim ? "verbatim"
                          : c.kind == DegreeClassKind::low    ? "low"
                                                              : "indexed";
          t.rows.push_back({num(i), k, num(c.level), std::to_string(c.weight_class), std::to_string(c.band),
                            num(c.arcs.num_arcs()), num(top)});
        }
      } else {
        const double h = threshold ? *threshold : mode == "cut" ? 1.0 / f.epsilon : std::cbrt(f.epsilon);
        const CutCriterion crit{mode == "cut" ? CutMode::edge_expansion : CutMode::conductance, h};
        const PartitionResult r = split_recursively(g, crit);
        t.header = {"component", "vertices", "edges", "weight", "cross_edges"};
        for (std::size_t i = 0; i < r.components.size(); ++i) {
          const WeightedGraph& c = r.components[i].graph;
          t.rows.push_back({num(i), num(c.num_vertices()), num(c.num_edges()), num(c.total_weight()),
                            num(r.cross_edges.size())});
        }
      }
      emit(t, f.format, out);
    } else if (*orc_mincut) {
      out << num(oracle::report_min_cut(load_graph(graph_path)).value) << '\n';
    } else if (*orc_lambda) {
      out << num(oracle::lambda1_normalized(load_graph(graph_path))) << '\n';
    } else if (*orc_cut) {
      const WeightedGraph g = load_graph(graph_path);
      out << num(cut_weight(g, parse_members(query_text, g.num_vertices()))) << '\n';
    } else if (*mc) {
      const WeightedGraph g = load_graph(graph_path);
      proto.split = split_name == "random"           ? EdgeSplit::random
                    : split_name == "by_vertex_hash" ? EdgeSplit::by_vertex_hash
                                                     : EdgeSplit::round_robin;
      const ProtocolTranscript tr = run_protocol(g, proto);
      const double exact = oracle::min_cut_exact(g).value;
      const double found = cut_weight(g, tr.cut);
      std::string per_server;
      for (const ServerMessage& m : tr.messages) per_server += (per_server.empty() ? "" : ";") + num(m.bytes());
      emit({{"n", "m", "k", "epsilon", "bytes_total", "bytes_per_server", "est_cut", "true_cut", "rel_err"},
            {{num(g.num_vertices()), num(g.num_edges()), num(proto.servers), num(proto.epsilon), num(tr.total_bytes),
              per_server, num(tr.estimate), num(found), num(exact > 0.0 ? (found - exact) / exact : 0.0)}}},
           f.format, out);
    } else if (*bench) {
      emit(run_bench(suite, load_graph(graph_path), eps_list, f.seed, trials, bench_variant), f.format, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
