#include "nepdf/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace nepdf {

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts need swaps");

std::uint32_t crc32_bytes(const std::uint8_t* data, std::size_t size) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data),
              static_cast<uInt>(size)));
}

namespace detail {

void ByteWriter::raw(const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  bytes.insert(bytes.end(), b, b + n);
}

void ByteReader::raw(void* p, std::size_t n) {
  if (pos + n > bytes.size())
    throw CorruptChecksum("model file truncated");
  std::memcpy(p, bytes.data() + pos, n);
  pos += n;
}

std::uint8_t ByteReader::u8() {
  std::uint8_t v;
  raw(&v, 1);
  return v;
}
std::uint16_t ByteReader::u16() {
  std::uint16_t v;
  raw(&v, 2);
  return v;
}
std::uint32_t ByteReader::u32() {
  std::uint32_t v;
  raw(&v, 4);
  return v;
}
std::uint64_t ByteReader::u64() {
  std::uint64_t v;
  raw(&v, 8);
  return v;
}
std::int32_t ByteReader::i32() {
  std::int32_t v;
  raw(&v, 4);
  return v;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open: " + path.string());
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(size));
  if (!in) throw IoError("read failed: " + path.string());
  return bytes;
}

}  // namespace detail

namespace {

constexpr char kMagic[4] = {'N', 'E', 'P', 'D'};

template <typename Scalar>
constexpr std::uint8_t dtype_tag() {
  return sizeof(Scalar) == 4 ? 0 : 1;
}

}  // namespace

template <typename Scalar>
std::vector<std::uint8_t> serialize_model(const Network<Scalar>& net,
                                          std::uint64_t config_digest) {
  detail::ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kModelFormatVersion);
  w.u8(dtype_tag<Scalar>());
  w.u8(static_cast<std::uint8_t>(net.n_classes));
  w.u32(static_cast<std::uint32_t>(net.input_size));
  w.u64(net.seed);
  w.u64(config_digest);
  w.u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& layer : net.layers) {
    w.u8(static_cast<std::uint8_t>(layer.spec.kind));
    w.u8(static_cast<std::uint8_t>(layer.spec.activation));
    w.i32(layer.spec.units);
  }
  for (const auto& layer : net.layers) {
    if (!layer.parametric()) continue;
    w.u64(static_cast<std::uint64_t>(layer.weights.rows()));
    w.u64(static_cast<std::uint64_t>(layer.weights.cols()));
    w.raw(layer.weights.data(),
          static_cast<std::size_t>(layer.weights.size()) * sizeof(Scalar));
    w.u64(static_cast<std::uint64_t>(layer.bias.size()));
    w.raw(layer.bias.data(),
          static_cast<std::size_t>(layer.bias.size()) * sizeof(Scalar));
  }
  w.u32(crc32_bytes(w.bytes.data(), w.bytes.size()));
  return w.bytes;
}

template <typename Scalar>
void save_model(const Network<Scalar>& net, const std::filesystem::path& path,
                std::uint64_t config_digest) {
  detail::write_file(path, serialize_model(net, config_digest));
}

template <typename Scalar>
Network<Scalar> load_model(const std::filesystem::path& path,
                           std::uint64_t* config_digest) {
  const auto bytes = detail::read_file(path);
  if (bytes.size() < 4 + 2 + 4)
    throw CorruptChecksum("model file too short: " + path.string());
  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  if (crc32_bytes(bytes.data(), bytes.size() - 4) != stored_crc)
    throw CorruptChecksum("model checksum mismatch: " + path.string());

  detail::ByteReader r{bytes};
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatVersionMismatch("not a model file: " + path.string());
  const auto version = r.u16();
  if (version != kModelFormatVersion)
    throw FormatVersionMismatch("model format version " +
                                std::to_string(version) + ", expected " +
                                std::to_string(kModelFormatVersion));
  const auto dtype = r.u8();
  if (dtype != dtype_tag<Scalar>())
    throw FormatVersionMismatch(
        "model scalar type mismatch (file dtype tag " +
        std::to_string(static_cast<int>(dtype)) + ")");
  const int n_classes = r.u8();
  const auto input_size = static_cast<int>(r.u32());
  const std::uint64_t seed = r.u64();
  const std::uint64_t digest = r.u64();
  if (config_digest) *config_digest = digest;
  const auto n_layers = r.u32();

  std::vector<LayerSpec> arch;
  arch.reserve(n_layers);
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    LayerSpec spec;
    spec.kind = static_cast<LayerKind>(r.u8());
    spec.activation = static_cast<Activation>(r.u8());
    spec.units = r.i32();
    arch.push_back(spec);
  }
  Network<Scalar> net = init_network<Scalar>(input_size, n_classes, arch, seed);
  for (auto& layer : net.layers) {
    if (!layer.parametric()) continue;
    const auto rows = static_cast<Eigen::Index>(r.u64());
    const auto cols = static_cast<Eigen::Index>(r.u64());
    if (rows != layer.weights.rows() || cols != layer.weights.cols())
      throw CorruptChecksum("model parameter block shape mismatch");
    r.raw(layer.weights.data(),
          static_cast<std::size_t>(layer.weights.size()) * sizeof(Scalar));
    const auto blen = static_cast<Eigen::Index>(r.u64());
    if (blen != layer.bias.size())
      throw CorruptChecksum("model bias block shape mismatch");
    r.raw(layer.bias.data(),
          static_cast<std::size_t>(layer.bias.size()) * sizeof(Scalar));
  }
  return net;
}

template std::vector<std::uint8_t> serialize_model<float>(
    const Network<float>&, std::uint64_t);
template std::vector<std::uint8_t> serialize_model<double>(
    const Network<double>&, std::uint64_t);
template void save_model<float>(const Network<float>&,
                                const std::filesystem::path&, std::uint64_t);
template void save_model<double>(const Network<double>&,
                                 const std::filesystem::path&, std::uint64_t);
template Network<float> load_model<float>(const std::filesystem::path&,
                                          std::uint64_t*);
template Network<double> load_model<double>(const std::filesystem::path&,
                                            std::uint64_t*);

}  // namespace nepdf
