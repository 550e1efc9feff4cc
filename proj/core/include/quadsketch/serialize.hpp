#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "quadsketch/graph.hpp"

namespace quadsketch {

/// Kind tags of the "QSK1" envelope.
enum class SketchKind : std::uint8_t {
  graph = 1,
  s1 = 2,
  cut_poly = 3,
  cut_general = 4,
  cut_amplified = 5,
  spectral_basic = 6,
  spectral_improved = 7,
  jl = 8,
  sdd = 9,
};

inline constexpr std::uint16_t kFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Little-endian writer. Sections are prefixed with their u32 byte length.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void varint(std::uint64_t v);
  void bytes(std::span<const std::uint8_t> data);

  std::size_t begin_section();
  void end_section(std::size_t token);

  std::size_t size() const noexcept { return buf_.size(); }
  const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::uint64_t varint();
  std::span<const std::uint8_t> bytes(std::size_t n);

  /// Reads a section length and returns a reader over exactly that section.
  ByteReader section();

  bool at_end() const noexcept { return pos_ == data_.size(); }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  void expect_end() const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

/// Wraps a payload in the envelope: magic "QSK1", u16 version, u8 kind.
std::vector<std::uint8_t> wrap_envelope(SketchKind kind, std::span<const std::uint8_t> payload);
/// Validates the envelope and returns a reader over the payload.
ByteReader open_envelope(std::span<const std::uint8_t> bytes, SketchKind expected);
SketchKind peek_kind(std::span<const std::uint8_t> bytes);

/// Compact edge list used inside sketches: varint endpoints, f64 weights.
void write_edges(ByteWriter& out, std::span<const Edge> edges);
std::vector<Edge> read_edges(ByteReader& in);
void write_graph(ByteWriter& out, const WeightedGraph& g);
WeightedGraph read_graph(ByteReader& in);

std::vector<std::uint8_t> graph_to_bytes(const WeightedGraph& g);
WeightedGraph graph_from_bytes(std::span<const std::uint8_t> bytes);

/// Uncompressed binary edge list (u32 n, u32 m, then u32 u, u32 v, f64 w per
/// edge): the baseline a server would ship without sketching.
std::size_t raw_edge_list_bytes(const WeightedGraph& g);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace quadsketch
