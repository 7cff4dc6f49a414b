#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aerodet/box_io.hpp"
#include "aerodet/errors.hpp"
#include "aerodet/image_io.hpp"
#include "aerodet/output.hpp"
#include "aerodet/random.hpp"

namespace aerodet {
namespace {

namespace fs = std::filesystem;

Image byte_ramp(int w, int h, int ch) {
  std::vector<double> px;
  for (int i = 0; i < w * h * ch; ++i) px.push_back(from_byte(static_cast<std::uint8_t>((i * 37) % 256)));
  return Image(w, h, ch, std::move(px));
}

TEST(ByteTest, RoundTrip) {
  for (int b = 0; b < 256; ++b) EXPECT_EQ(to_byte(from_byte(static_cast<std::uint8_t>(b))), b);
  EXPECT_EQ(to_byte(0.0), 0);
  EXPECT_EQ(to_byte(1.0), 255);
}

TEST(PgmTest, RoundTrip) {
  const auto img = byte_ramp(7, 5, 1);
  EXPECT_EQ(decode_pgm(encode_pgm(img)), img);
}

TEST(PgmTest, HeaderWithComments) {
  const std::string text("P5\n# made by hand\n2 1\n255\n\x00\xff", 28);
  const Bytes data(text.begin(), text.end());
  const auto img = decode_pgm(data);
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(1, 0), 1.0);
}

TEST(PgmTest, RejectsMalformedData) {
  const auto bytes = [](std::string s) { return Bytes(s.begin(), s.end()); };
  EXPECT_THROW(decode_pgm(bytes("P2\n1 1\n255\n0")), InputFormatError);
  EXPECT_THROW(decode_pgm(bytes("P5\n2 2\n255\nab")), InputFormatError);
  EXPECT_THROW(decode_pgm(bytes("P5\n1 1\n65535\nab")), InputFormatError);
  EXPECT_THROW(decode_pgm(bytes("P5\n0 1\n255\n")), InputFormatError);
  EXPECT_THROW(encode_pgm(byte_ramp(2, 2, 3)), std::invalid_argument);
}

TEST(PngTest, RoundTripGrayAndRgb) {
  for (int ch : {1, 3}) {
    const auto img = byte_ramp(9, 4, ch);
    EXPECT_EQ(decode_png(encode_png(img)), img);
  }
}

TEST(PngTest, DeterministicBytesAndGarbageRejected) {
  const auto img = byte_ramp(5, 5, 3);
  EXPECT_EQ(encode_png(img), encode_png(img));
  EXPECT_THROW(decode_png(Bytes{1, 2, 3}), InputFormatError);
}

TEST(ReadImageTest, DispatchesOnSignature) {
  const auto dir = fs::temp_directory_path() / "aerodet_io_test";
  fs::create_directories(dir);
  const auto img = byte_ramp(4, 3, 1);
  write_file_atomic(dir / "a.pgm", encode_pgm(img));
  write_file_atomic(dir / "b.png", encode_png(img));
  write_file_atomic(dir / "c.txt", std::string_view("hello"));
  EXPECT_EQ(read_image(dir / "a.pgm"), img);
  EXPECT_EQ(read_image(dir / "b.png"), img);
  EXPECT_THROW(read_image(dir / "c.txt"), InputFormatError);
  EXPECT_THROW(read_image(dir / "missing.png"), IoError);
  fs::remove_all(dir);
}

TEST(BoxCsvTest, ParsesGroundTruthWithBomAndCrlf) {
  std::istringstream in("\xEF\xBB\xBFimage_id,x,y,w,h,class\r\nimg1,1.5,2,3,4,0\r\n\r\nimg2,0,0,10,20,1\r\n");
  const auto gts = read_ground_truth_csv(in);
  ASSERT_EQ(gts.size(), 2u);
  EXPECT_EQ(gts[0].image_id, "img1");
  EXPECT_EQ(gts[0].box, (Box{1.5, 2, 3, 4}));
  EXPECT_EQ(gts[1].class_id, 1);
}

TEST(BoxCsvTest, ErrorsNameTheLine) {
  const auto line_of = [](const std::string& text, bool detections) -> std::size_t {
    std::istringstream in(text);
    try {
      if (detections) read_detections_csv(in);
      else read_ground_truth_csv(in);
    } catch (const InputFormatError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("image_id,x,y,w,h,class\na,1,1,1,1,0\na,1,1,0,1,0\n", false), 3u);
  EXPECT_EQ(line_of("image_id,x,y,w,h,class\na,1,x,1,1,0\n", false), 2u);
  EXPECT_EQ(line_of("image_id,x,y,w,h,class\na,1,1,1,1\n", false), 2u);
  EXPECT_EQ(line_of("image_id,x,y,w,h,score,class\na,1,1,1,1,1.5,0\n", true), 2u);
  // A detections file without the score column fails on its header.
  EXPECT_EQ(line_of("image_id,x,y,w,h,class\na,1,1,1,1,0\n", true), 1u);
  std::istringstream empty("");
  EXPECT_THROW(read_ground_truth_csv(empty), InputFormatError);
}

TEST(BoxCsvTest, WriteThenReadRoundTrips) {
  const std::vector<Detection> dets{{"a", {0.1, 0.2, 3.3, 4.4}, 0.123456789, 0}, {"b", {1, 2, 3, 4}, 1.0, 2}};
  std::stringstream io;
  write_detections_csv(io, dets);
  const auto back = read_detections_csv(io);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].box, dets[0].box);
  EXPECT_EQ(back[0].score, dets[0].score);
  EXPECT_EQ(back[1].class_id, 2);

  const std::vector<GroundTruth> gts{{"z", {5, 6, 7, 8}, 3}};
  std::stringstream io2;
  write_ground_truth_csv(io2, gts);
  EXPECT_EQ(read_ground_truth_csv(io2)[0].box, gts[0].box);
}

TEST(OutputTest, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.0002), "0.0002");
  EXPECT_EQ(format_double(1e-10), "1e-10");
  EXPECT_EQ(std::stod(format_double(1e-6)), 1e-6);
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(OutputTest, AtomicWriteLeavesNoTemporary) {
  const auto dir = fs::temp_directory_path() / "aerodet_out_test";
  fs::create_directories(dir);
  write_file_atomic(dir / "x.txt", std::string_view("one"));
  write_file_atomic(dir / "x.txt", std::string_view("two"));
  std::ifstream in(dir / "x.txt");
  std::string s;
  in >> s;
  EXPECT_EQ(s, "two");
  EXPECT_FALSE(fs::exists(dir / "x.txt.tmp"));
  EXPECT_THROW(write_file_atomic(dir / "no" / "such" / "dir.txt", std::string_view("x")), IoError);
  fs::remove_all(dir);
}

TEST(OutputTest, SvgHasAxesAndSeries) {
  SvgChart c;
  c.title = "a < b";
  c.series.push_back({"s", {{0, 0}, {0.5, 1}, {1, 0.5}}});
  const auto svg = render_svg(c);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("a &lt; b"), std::string::npos);
  EXPECT_EQ(svg, render_svg(c));
}

TEST(RandomStreamTest, SplitStreamsAreIndependentAndReproducible) {
  const RandomStream root(42);
  RandomStream a = root.split(0), b = root.split(0), c = root.split(1);
  const double x = a.uniform();
  EXPECT_EQ(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  RandomStream r(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = r.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

}  // namespace
}  // namespace aerodet
