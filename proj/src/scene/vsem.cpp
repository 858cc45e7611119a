#include "ssc/scene/vsem.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "ssc/errors.hpp"

namespace ssc::scene {

namespace {
constexpr char kMagic[4] = {'V', 'S', 'E', 'M'};
// Payloads above this are rejected before allocation.
constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 34;

std::size_t dtype_size(VsemDtype dtype) {
  switch (dtype) {
    case VsemDtype::kF32:
      return 4;
    case VsemDtype::kU8:
      return 1;
    case VsemDtype::kF64:
      return 8;
  }
  throw FormatError(FormatError::Kind::kBadHeader, "unknown VSEM dtype");
}

// Element count implied by the extents, with overflow detection.
std::uint64_t checked_payload_bytes(const VsemHeader& h) {
  std::uint64_t count = 1;
  for (std::uint32_t e : h.extents) {
    if (e == 0) throw FormatError(FormatError::Kind::kBadHeader, "zero extent in VSEM header");
    if (count > kMaxPayloadBytes / e) {
      throw FormatError(FormatError::Kind::kExtentOverflow, "VSEM extents overflow payload size");
    }
    count *= e;
  }
  const std::uint64_t bytes = count * dtype_size(h.dtype);
  if (bytes > kMaxPayloadBytes) {
    throw FormatError(FormatError::Kind::kExtentOverflow, "VSEM extents overflow payload size");
  }
  return bytes;
}

void expect_exact_payload(const ByteReader& in, std::uint64_t bytes) {
  if (in.remaining() != bytes) {
    throw FormatError(FormatError::Kind::kTruncated,
                      "VSEM payload is " + std::to_string(in.remaining()) +
                          " bytes but the header implies " + std::to_string(bytes));
  }
}

std::uint32_t to_u32(std::size_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(FormatError::Kind::kExtentOverflow, "extent does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void ByteWriter::u16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}
void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}
void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}
void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
void ByteWriter::str(const std::string& s) {
  u32(to_u32(s.size()));
  raw({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

void ByteReader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) {
    throw FormatError(FormatError::Kind::kTruncated, "unexpected end of VSEM data");
  }
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
float ByteReader::f32() { return std::bit_cast<float>(u32()); }
double ByteReader::f64() { return std::bit_cast<double>(u64()); }
std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}
std::string ByteReader::str() {
  const std::uint32_t n = u32();
  auto bytes = raw(n);
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void write_vsem_header(ByteWriter& out, const VsemHeader& header) {
  for (char c : kMagic) out.u8(static_cast<std::uint8_t>(c));
  out.u16(kVsemVersion);
  out.u8(static_cast<std::uint8_t>(header.kind));
  out.u8(static_cast<std::uint8_t>(header.extents.size()));
  for (std::uint32_t e : header.extents) out.u32(e);
  out.u8(static_cast<std::uint8_t>(header.dtype));
}

VsemHeader read_vsem_header(ByteReader& in) {
  if (in.remaining() < 4) throw FormatError(FormatError::Kind::kBadMagic, "file too short for VSEM magic");
  auto magic = in.raw(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError(FormatError::Kind::kBadMagic, "bad VSEM magic");
  }
  const std::uint16_t version = in.u16();
  if (version != kVsemVersion) {
    throw FormatError(FormatError::Kind::kBadVersion,
                      "unsupported VSEM version " + std::to_string(version));
  }
  VsemHeader h;
  h.kind = static_cast<VsemKind>(in.u8());
  const std::uint8_t rank = in.u8();
  h.extents.resize(rank);
  for (auto& e : h.extents) e = in.u32();
  h.dtype = static_cast<VsemDtype>(in.u8());
  return h;
}

std::vector<std::uint8_t> encode_depth(const DepthImage& image) {
  ByteWriter out;
  write_vsem_header(out, {VsemKind::kDepth, {to_u32(image.width()), to_u32(image.height())}, VsemDtype::kF32});
  for (float d : image.data()) out.f32(d);
  return std::move(out.bytes());
}

DepthImage decode_depth(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const VsemHeader h = read_vsem_header(in);
  if (h.kind != VsemKind::kDepth || h.extents.size() != 2 || h.dtype != VsemDtype::kF32) {
    throw FormatError(FormatError::Kind::kBadHeader, "VSEM file is not a rank-2 f32 depth image");
  }
  expect_exact_payload(in, checked_payload_bytes(h));
  std::vector<float> depth(static_cast<std::size_t>(h.extents[0]) * h.extents[1]);
  for (float& d : depth) {
    d = in.f32();
    if (!std::isnan(d) && !(d >= 0.0f)) {
      throw FormatError(FormatError::Kind::kBadHeader, "negative depth value in VSEM payload");
    }
  }
  return DepthImage(h.extents[0], h.extents[1], std::move(depth));
}

std::vector<std::uint8_t> encode_volume(const SemanticVolume& volume) {
  const Extents3& e = volume.extents();
  ByteWriter out;
  write_vsem_header(out, {VsemKind::kVolume, {to_u32(e.d), to_u32(e.h), to_u32(e.w)}, VsemDtype::kU8});
  out.raw(volume.labels());
  return std::move(out.bytes());
}

SemanticVolume decode_volume(std::span<const std::uint8_t> bytes, std::size_t num_categories) {
  ByteReader in(bytes);
  const VsemHeader h = read_vsem_header(in);
  if (h.kind != VsemKind::kVolume || h.extents.size() != 3 || h.dtype != VsemDtype::kU8) {
    throw FormatError(FormatError::Kind::kBadHeader, "VSEM file is not a rank-3 u8 volume");
  }
  expect_exact_payload(in, checked_payload_bytes(h));
  auto payload = in.raw(in.remaining());
  for (std::uint8_t l : payload) {
    if (l >= num_categories) {
      throw FormatError(FormatError::Kind::kBadHeader,
                        "category " + std::to_string(l) + " outside [0, " +
                            std::to_string(num_categories) + ")");
    }
  }
  return SemanticVolume({h.extents[0], h.extents[1], h.extents[2]},
                        std::vector<std::uint8_t>(payload.begin(), payload.end()), num_categories);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatError::Kind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(FormatError::Kind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError(FormatError::Kind::kIo, "write failed for " + path.string());
}

void save_depth(const std::filesystem::path& path, const DepthImage& image) {
  write_file(path, encode_depth(image));
}
DepthImage load_depth(const std::filesystem::path& path) { return decode_depth(read_file(path)); }
void save_volume(const std::filesystem::path& path, const SemanticVolume& volume) {
  write_file(path, encode_volume(volume));
}
SemanticVolume load_volume(const std::filesystem::path& path, std::size_t num_categories) {
  return decode_volume(read_file(path), num_categories);
}

void save_sample(const std::filesystem::path& stem, const Sample& sample) {
  save_depth(stem.string() + ".depth.vsem", sample.depth);
  save_volume(stem.string() + ".volume.vsem", sample.volume);
}

Sample load_sample(const std::filesystem::path& stem, std::size_t num_categories) {
  return Sample{load_depth(stem.string() + ".depth.vsem"),
                load_volume(stem.string() + ".volume.vsem", num_categories)};
}

}  // namespace ssc::scene
