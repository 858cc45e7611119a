#pragma once

// VSEM container, little-endian:
//   magic "VSEM" | u16 version (=1) | u8 kind | u8 rank | u32 extents[rank]
//   | u8 dtype | payload (row-major, last axis fastest)
// kind: 0 depth image, 1 semantic volume, 2 checkpoint.
// dtype: 0 f32 (depth meters, NaN = invalid), 1 u8 (category index),
//        2 f64 (checkpoint tensors).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssc/scene/depth.hpp"
#include "ssc/scene/volume.hpp"

namespace ssc::scene {

inline constexpr std::uint16_t kVsemVersion = 1;

enum class VsemKind : std::uint8_t { kDepth = 0, kVolume = 1, kCheckpoint = 2 };
enum class VsemDtype : std::uint8_t { kF32 = 0, kU8 = 1, kF64 = 2 };

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
  void str(const std::string& s);  // u32 length + bytes

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

// Throws FormatError(kTruncated) when reading past the end.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::span<const std::uint8_t> raw(std::size_t n);
  std::string str();

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const;
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

struct VsemHeader {
  VsemKind kind;
  std::vector<std::uint32_t> extents;
  VsemDtype dtype;
};

void write_vsem_header(ByteWriter& out, const VsemHeader& header);
// Validates magic and version. Kind/dtype values are returned unchecked.
VsemHeader read_vsem_header(ByteReader& in);

std::vector<std::uint8_t> encode_depth(const DepthImage& image);
DepthImage decode_depth(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_volume(const SemanticVolume& volume);
SemanticVolume decode_volume(std::span<const std::uint8_t> bytes,
                             std::size_t num_categories = kDefaultCategoryCount);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

void save_depth(const std::filesystem::path& path, const DepthImage& image);
DepthImage load_depth(const std::filesystem::path& path);
void save_volume(const std::filesystem::path& path, const SemanticVolume& volume);
SemanticVolume load_volume(const std::filesystem::path& path,
                           std::size_t num_categories = kDefaultCategoryCount);

// A paired depth image and ground-truth volume.
struct Sample {
  DepthImage depth;
  SemanticVolume volume;
};

// Writes <stem>.depth.vsem and <stem>.volume.vsem.
void save_sample(const std::filesystem::path& stem, const Sample& sample);
Sample load_sample(const std::filesystem::path& stem,
                   std::size_t num_categories = kDefaultCategoryCount);

}  // namespace ssc::scene
