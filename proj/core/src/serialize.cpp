#include "quadsketch/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace quadsketch {

namespace {

constexpr std::uint8_t kMagic[4] = {'Q', 'S', 'K', '1'};

}  // namespace

void ByteWriter::u16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::varint(std::uint64_t v) {
  while (v >= 0x80) {
    buf_.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::bytes(std::span<const std::uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

std::size_t ByteWriter::begin_section() {
  const std::size_t token = buf_.size();
  u32(0);
  return token;
}

void ByteWriter::end_section(std::size_t token) {
  const auto length = static_cast<std::uint32_t>(buf_.size() - token - 4);
  for (int i = 0; i < 4; ++i) buf_[token + i] = static_cast<std::uint8_t>(length >> (8 * i));
}

void ByteReader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) throw FormatError("truncated sketch data");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(data_[pos_++]) << (8 * i);
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::uint64_t ByteReader::varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = u8();
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if (!(b & 0x80)) return v;
  }
  throw FormatError("malformed varint");
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
  need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteReader ByteReader::section() {
  const std::uint32_t length = u32();
  return ByteReader(bytes(length));
}

void ByteReader::expect_end() const {
  if (!at_end()) throw FormatError("unexpected trailing bytes in sketch section");
}

std::vector<std::uint8_t> wrap_envelope(SketchKind kind, std::span<const std::uint8_t> payload) {
  ByteWriter out;
  out.bytes(kMagic);
  out.u16(kFormatVersion);
  out.u8(static_cast<std::uint8_t>(kind));
  out.bytes(payload);
  return out.take();
}

SketchKind peek_kind(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto magic = in.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("missing QSK1 magic");
  if (in.u16() != kFormatVersion) throw FormatError("unsupported sketch format version");
  return static_cast<SketchKind>(in.u8());
}

ByteReader open_envelope(std::span<const std::uint8_t> bytes, SketchKind expected) {
  if (peek_kind(bytes) != expected) {
    throw FormatError("sketch kind mismatch: expected tag " +
                      std::to_string(static_cast<int>(expected)));
  }
  return ByteReader(bytes.subspan(7));
}

void write_edges(ByteWriter& out, std::span<const Edge> edges) {
  out.varint(edges.size());
  for (const Edge& e : edges) {
    out.varint(e.u);
    out.varint(e.v);
    out.f64(e.w);
  }
}

std::vector<Edge> read_edges(ByteReader& in) {
  const std::uint64_t m = in.varint();
  if (m > in.remaining()) throw FormatError("edge count exceeds payload");
  std::vector<Edge> edges(m);
  for (Edge& e : edges) {
    e.u = static_cast<Vertex>(in.varint());
    e.v = static_cast<Vertex>(in.varint());
    e.w = in.f64();
  }
  return edges;
}

void write_graph(ByteWriter& out, const WeightedGraph& g) {
  out.varint(g.num_vertices());
  write_edges(out, g.edges());
}

WeightedGraph read_graph(ByteReader& in) {
  const auto n = static_cast<std::size_t>(in.varint());
  const auto edges = read_edges(in);
  return WeightedGraph(n, edges);
}

std::vector<std::uint8_t> graph_to_bytes(const WeightedGraph& g) {
  ByteWriter out;
  write_graph(out, g);
  return wrap_envelope(SketchKind::graph, out.buffer());
}

WeightedGraph graph_from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::graph);
  WeightedGraph g = read_graph(in);
  in.expect_end();
  return g;
}

std::size_t raw_edge_list_bytes(const WeightedGraph& g) { return 8 + 16 * g.num_edges(); }

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace quadsketch
