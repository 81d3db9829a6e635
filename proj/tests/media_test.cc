#include <gtest/gtest.h>

#include <random>
#include <string>

#include "tafi/error.h"
#include "tafi/media.h"
#include "test_util.h"

namespace tafi {
namespace {

std::vector<std::uint8_t> Bytes(const std::string& s) {
  return {s.begin(), s.end()};
}

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tafi::Error thrown";
  return ErrorCode::kParseError;
}

TEST(Y4m, ParsesMinimalStream) {
  std::string s = "YUV4MPEG2 W4 H4 F25:1\n";
  for (int f = 0; f < 2; ++f) s += "FRAME\n" + std::string(24, char(f + 1));
  const Clip c = ReadY4m(Bytes(s));
  EXPECT_EQ(c.width(), 4);
  EXPECT_EQ(c.height(), 4);
  EXPECT_EQ(c.fps, (Rational{25, 1}));
  ASSERT_EQ(c.size(), 2);
  EXPECT_EQ(c.frames[1].luma().at(3, 3), 2);
  EXPECT_EQ(WriteY4m(c), Bytes(s));
}

TEST(Y4m, WritesHeaderAndZeroFrame) {
  Clip c{"z", {Frame(4, 4, 0, 0)}, {25, 1}, std::nullopt};
  const auto out = WriteY4m(c);
  EXPECT_EQ(std::string(out.begin(), out.end()),
            "YUV4MPEG2 W4 H4 F25:1\nFRAME\n" + std::string(24, '\0'));
}

TEST(Y4m, NtscRateInHeader) {
  Clip c{"n", {Frame(4, 4)}, {60000, 1001}, std::nullopt};
  const auto out = WriteY4m(c);
  EXPECT_NE(std::string(out.begin(), out.end()).find("F60000:1001"),
            std::string::npos);
}

TEST(Y4m, Errors) {
  EXPECT_EQ(CodeOf([] { ReadY4m(Bytes("XUV4MPEG2 W4 H4 F25:1\nFRAME\n")); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(CodeOf([] {
              ReadY4m(Bytes("YUV4MPEG2 W4 H4 F25:1\nFRAME\n" +
                            std::string(23, 'a')));
            }),
            ErrorCode::kTruncatedFrame);
  EXPECT_EQ(CodeOf([] {
              ReadY4m(Bytes("YUV4MPEG2 W4 H4 F25:1 C444\nFRAME\n" +
                            std::string(48, 'a')));
            }),
            ErrorCode::kUnsupportedColorspace);
  EXPECT_EQ(CodeOf([] { ReadY4m(Bytes("YUV4MPEG2 W4 F25:1\n")); }),
            ErrorCode::kMalformedHeader);
}

TEST(Y4m, AcceptsOptionalParameters) {
  const std::string s = "YUV4MPEG2 W2 H2 F30000:1001 Ip A1:1 C420jpeg XYSCSS=420JPEG\n"
                        "FRAME\n" + std::string(6, 'x');
  const Clip c = ReadY4m(Bytes(s));
  EXPECT_EQ(c.size(), 1);
  EXPECT_EQ(c.fps, (Rational{30000, 1001}));
}

TEST(Y4m, LabelSurvivesRoundTrip) {
  std::mt19937_64 rng(3);
  Clip c{"l", {testing::RandomFrame(6, 4, rng)}, {25, 1}, TextureClass::kDynCon};
  const Clip back = ReadY4m(WriteY4m(c));
  EXPECT_TRUE(back.SameContent(c));
  EXPECT_EQ(back.label, TextureClass::kDynCon);
}

TEST(Y4m, RandomRoundTripsAreBitExact) {
  std::mt19937_64 rng(20210);
  for (int i = 0; i < 200; ++i) {
    const int w = 2 * (1 + static_cast<int>(rng() % 12));
    const int h = 2 * (1 + static_cast<int>(rng() % 12));
    Clip c;
    c.fps = {static_cast<std::uint32_t>(1 + rng() % 60000),
             static_cast<std::uint32_t>(1 + rng() % 1001)};
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < n; ++f) c.frames.push_back(testing::RandomFrame(w, h, rng));
    const auto bytes = WriteY4m(c);
    const Clip back = ReadY4m(bytes);
    ASSERT_TRUE(back.SameContent(c));
    ASSERT_EQ(WriteY4m(back), bytes);
  }
}

TEST(Frame, RejectsBadGeometry) {
  EXPECT_EQ(CodeOf([] { Frame(3, 4); }), ErrorCode::kOddGeometry);
  EXPECT_EQ(CodeOf([] {
              Frame(4, 4, std::vector<Sample>(15), std::vector<Sample>(4),
                    std::vector<Sample>(4));
            }),
            ErrorCode::kGeometryMismatch);
}

TEST(Clip, ValidateRejectsMixedGeometry) {
  Clip c{"m", {Frame(4, 4), Frame(6, 4)}, {25, 1}, std::nullopt};
  EXPECT_THROW(c.Validate(), Error);
  Clip z{"z", {Frame(4, 4)}, {0, 1}, std::nullopt};
  EXPECT_THROW(z.Validate(), Error);
}

TEST(RawYuv, ReadsBackToBackFrames) {
  std::vector<std::uint8_t> bytes(2 * 24);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(i);
  const Clip c = ReadRawYuv(bytes, 4, 4, {25, 1});
  ASSERT_EQ(c.size(), 2);
  EXPECT_EQ(c.frames[1].luma().at(0, 0), 24);
  EXPECT_EQ(CodeOf([&] {
              ReadRawYuv(std::span(bytes).first(30), 4, 4, {25, 1});
            }),
            ErrorCode::kTruncatedFrame);
}

TEST(Patch, IdentityConstancyAndBounds) {
  std::mt19937_64 rng(5);
  const Frame f = testing::RandomFrame(16, 12, rng);
  EXPECT_EQ(ExtractPatch(f, 0, 0, 16, 12), f);
  const Frame flat(16, 16, 77, 99);
  const Frame p = ExtractPatch(flat, 4, 2, 8, 6);
  for (Sample s : p.samples(PlaneId::kY)) EXPECT_EQ(s, 77);
  for (Sample s : p.samples(PlaneId::kV)) EXPECT_EQ(s, 99);
  const Frame big(256, 256);
  EXPECT_EQ(CodeOf([&] { ExtractPatch(big, 128, 128, 256, 256); }),
            ErrorCode::kOutOfBounds);
  EXPECT_EQ(CodeOf([&] { ExtractPatch(big, 1, 0, 8, 8); }),
            ErrorCode::kOddGeometry);
}

TEST(Patch, PreservesSamples) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Frame f = testing::RandomFrame(20, 14, rng);
    const int w = 2 * (1 + static_cast<int>(rng() % 10));
    const int h = 2 * (1 + static_cast<int>(rng() % 7));
    const int x = 2 * static_cast<int>(rng() % ((20 - w) / 2 + 1));
    const int y = 2 * static_cast<int>(rng() % ((14 - h) / 2 + 1));
    const Frame p = ExtractPatch(f, x, y, w, h);
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < w; ++i)
        ASSERT_EQ(p.luma().at(i, j), f.luma().at(x + i, y + j));
    for (int j = 0; j < h / 2; ++j)
      for (int i = 0; i < w / 2; ++i)
        ASSERT_EQ(p.plane(PlaneId::kU).at(i, j),
                  f.plane(PlaneId::kU).at(x / 2 + i, y / 2 + j));
  }
}

TEST(Files, MissingFileIsReported) {
  EXPECT_EQ(CodeOf([] { ReadFileBytes("/nonexistent/clip.y4m"); }),
            ErrorCode::kMissingFile);
}

TEST(Files, SaveAndLoad) {
  const auto dir = testing::TempDir("media");
  std::mt19937_64 rng(8);
  Clip c{"f", {testing::RandomFrame(8, 8, rng), testing::RandomFrame(8, 8, rng)},
         {24000, 1001}, TextureClass::kStatic};
  SaveY4mFile(c, dir / "c.y4m");
  EXPECT_TRUE(LoadY4mFile(dir / "c.y4m").SameContent(c));
}

}  // namespace
}  // namespace tafi
