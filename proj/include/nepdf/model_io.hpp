#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nepdf/net.hpp"

namespace nepdf {

inline constexpr std::uint16_t kModelFormatVersion = 1;

//! CRC32 (IEEE) of a byte range.
std::uint32_t crc32_bytes(const std::uint8_t* data, std::size_t size);

namespace detail {

//! Little-endian byte sink/source. The toolkit targets little-endian hosts;
//! scalar payloads are written with memcpy.
struct ByteWriter {
  std::vector<std::uint8_t> bytes;

  void raw(const void* p, std::size_t n);
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u16(std::uint16_t v) { raw(&v, 2); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void i32(std::int32_t v) { raw(&v, 4); }
};

struct ByteReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void raw(void* p, std::size_t n);
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32();
};

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace detail

//! Model file: magic "NEPD", format version u16, dtype byte, architecture
//! descriptor block, per-layer parameter blobs in declaration order, and a
//! trailing CRC32 over all preceding bytes. Everything little-endian.
template <typename Scalar>
std::vector<std::uint8_t> serialize_model(const Network<Scalar>& net,
                                          std::uint64_t config_digest);

template <typename Scalar>
void save_model(const Network<Scalar>& net, const std::filesystem::path& path,
                std::uint64_t config_digest = 0);

//! Round-trips bit-identically. Throws IoError, FormatVersionMismatch (bad
//! version or scalar type) or CorruptChecksum (CRC/truncation damage).
template <typename Scalar>
Network<Scalar> load_model(const std::filesystem::path& path,
                           std::uint64_t* config_digest = nullptr);

extern template std::vector<std::uint8_t> serialize_model<float>(
    const Network<float>&, std::uint64_t);
extern template std::vector<std::uint8_t> serialize_model<double>(
    const Network<double>&, std::uint64_t);
extern template void save_model<float>(const Network<float>&,
                                       const std::filesystem::path&,
                                       std::uint64_t);
extern template void save_model<double>(const Network<double>&,
                                        const std::filesystem::path&,
                                        std::uint64_t);
extern template Network<float> load_model<float>(
    const std::filesystem::path&, std::uint64_t*);
extern template Network<double> load_model<double>(
    const std::filesystem::path&, std::uint64_t*);

}  // namespace nepdf
