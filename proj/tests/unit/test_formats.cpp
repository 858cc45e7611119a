#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "ssc/errors.hpp"
#include "ssc/scene/vsem.hpp"

namespace {

using namespace ssc;
using namespace ssc::scene;

TEST(Bytes, LittleEndianPrimitives) {
  ByteWriter w;
  w.u16(0x0102);
  w.u32(0x03040506);
  w.f32(1.0f);
  const auto& b = w.bytes();
  ASSERT_EQ(b.size(), 10u);
  EXPECT_EQ(b[0], 0x02);
  EXPECT_EQ(b[1], 0x01);
  EXPECT_EQ(b[2], 0x06);
  EXPECT_EQ(b[5], 0x03);
  EXPECT_EQ(b[9], 0x3f);  // 1.0f = 0x3f800000
}

TEST(Bytes, RoundTripAndTruncation) {
  ByteWriter w;
  w.u8(7);
  w.u64(0x1122334455667788ULL);
  w.f64(-0.1);
  w.f32(std::nanf(""));
  w.str("hello");
  ByteReader r(w.bytes());
  EXPECT_EQ(r.u8(), 7);
  EXPECT_EQ(r.u64(), 0x1122334455667788ULL);
  EXPECT_EQ(r.f64(), -0.1);
  EXPECT_TRUE(std::isnan(r.f32()));
  EXPECT_EQ(r.str(), "hello");
  EXPECT_EQ(r.remaining(), 0u);
  try {
    r.u8();
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::kTruncated);
  }
}

TEST(Bytes, OversizedStringLengthIsTruncation) {
  ByteWriter w;
  w.u32(1000);
  w.u8('x');
  ByteReader r(w.bytes());
  EXPECT_THROW(r.str(), FormatError);
}

TEST(Header, Layout) {
  ByteWriter w;
  write_vsem_header(w, {VsemKind::kVolume, {3, 4, 5}, VsemDtype::kU8});
  const auto& b = w.bytes();
  ASSERT_EQ(b.size(), 4 + 2 + 1 + 1 + 12 + 1u);
  EXPECT_EQ(std::memcmp(b.data(), "VSEM", 4), 0);
  EXPECT_EQ(b[4], kVsemVersion);
  EXPECT_EQ(b[6], 1);  // kind
  EXPECT_EQ(b[7], 3);  // rank
  EXPECT_EQ(b[8], 3);
  EXPECT_EQ(b[12], 4);
  EXPECT_EQ(b[16], 5);
  EXPECT_EQ(b[20], 1);  // dtype
  ByteReader r(b);
  const VsemHeader h = read_vsem_header(r);
  EXPECT_EQ(h.kind, VsemKind::kVolume);
  EXPECT_EQ(h.extents, (std::vector<std::uint32_t>{3, 4, 5}));
  EXPECT_EQ(h.dtype, VsemDtype::kU8);
}

TEST(Header, ShortFileIsBadMagic) {
  const std::vector<std::uint8_t> b{'V', 'S'};
  ByteReader r(b);
  try {
    read_vsem_header(r);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::kBadMagic);
  }
}

TEST(Depth, PayloadLayoutAndInvalidPixels) {
  DepthImage img(3, 2);
  img.set(0, 0, 1.5f);
  img.set(2, 1, 0.0f);
  const auto bytes = encode_depth(img);
  EXPECT_EQ(bytes.size(), 4 + 2 + 1 + 1 + 8 + 1 + 6 * 4u);
  EXPECT_EQ(bytes[6], 0);   // depth kind
  EXPECT_EQ(bytes[8], 3);   // first extent is the image width
  EXPECT_EQ(bytes[12], 2);
  const DepthImage back = decode_depth(bytes);
  EXPECT_TRUE(back.bitwise_equal(img));
  EXPECT_FALSE(back.valid(1, 0));
  EXPECT_TRUE(back.valid(2, 1));
  EXPECT_EQ(back.valid_count(), 2u);
}

TEST(Depth, NegativePayloadRejected) {
  DepthImage img(1, 1);
  img.set(0, 0, 2.0f);
  auto bytes = encode_depth(img);
  bytes.back() |= 0x80;  // sign bit of the last f32
  EXPECT_THROW(decode_depth(bytes), FormatError);
  EXPECT_THROW(img.set(0, 0, -1.0f), std::invalid_argument);
}

TEST(Depth, InputTensorZeroFillsAndMasks) {
  DepthImage img(2, 1);
  img.set(1, 0, 3.0f);
  const ad::Tensor t = img.to_input_tensor();
  EXPECT_EQ(t.shape(), (ad::Shape{2, 1, 2}));
  EXPECT_EQ(t.at(0), 0.0);
  EXPECT_EQ(t.at(1), 0.0);
  EXPECT_EQ(t.at(2), 3.0);
  EXPECT_EQ(t.at(3), 1.0);
}

}  // namespace
