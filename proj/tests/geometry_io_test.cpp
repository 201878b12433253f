#include "hroi/io.hpp"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hroi/annotation.hpp"
#include "hroi/error.hpp"
#include "hroi/polygon.hpp"
#include "hroi/range_set.hpp"
#include "hroi/raster.hpp"

namespace hroi {
namespace {

// The interchange listings for the worked example, kept byte for byte as
// they circulate in the wild: the JSON and SVG variants carry typographic
// quotes from a word processor, and the GeoJSON key casing is sloppy.
constexpr char kWktListing[] = "POLYGON (1 1, 1 4, 3 5, 5 3, 4 1, 1 1)";
constexpr char kGeojsonListing[] =
    "{\xE2\x80\x9C"
    "coordinates\xE2\x80\x9D: [[[1,1],[1,4],[3,5],[5,3],[4,1],[1,1]]], "
    "\xE2\x80\x9CType\xE2\x80\x9D: \xE2\x80\x9CPolygon\xE2\x80\x9D}";
constexpr char kSvgListing[] =
    "<svg><polygon points=\xE2\x80\x9C"
    "1,1 1,4 3,5 5,3 4,1 1,1\xE2\x80\x9D "
    "style=\xE2\x80\x9C"
    "fill:lime;stroke:purple;stroke-width:1\xE2\x80\x9D/></svg>";
constexpr char kRangeListing[] =
    "{\n"
    "  \"name\": \"Polygon 1\",\n"
    "  \"type\": \"Nuclear Material\",\n"
    "  \"Ranges\": [[8,12],[17,18],[23,24],[27,36],[53,53]]\n"
    "}";

PolygonGeom example_polygon() {
  return PolygonGeom{{{1, 1}, {1, 4}, {3, 5}, {5, 3}, {4, 1}}, {}};
}

std::vector<HilbertRange> rv(std::initializer_list<HilbertRange> list) {
  return std::vector<HilbertRange>(list);
}

TEST(Interchange, ListingsAgree) {
  PolygonGeom expect = example_polygon();
  EXPECT_EQ(parse_wkt(kWktListing), expect);
  EXPECT_EQ(parse_geojson_polygon(kGeojsonListing), expect);
  EXPECT_EQ(parse_svg_points(kSvgListing), expect);
}

TEST(Interchange, RangeListingRoundtripsByteForByte) {
  AnnotationRecord rec = parse_hilbert_json(kRangeListing);
  EXPECT_EQ(rec.name, "Polygon 1");
  EXPECT_EQ(rec.class_label, "Nuclear Material");
  EXPECT_EQ(rec.ranges.ranges(),
            rv({{8, 12}, {17, 18}, {23, 24}, {27, 36}, {53, 53}}));
  EXPECT_EQ(emit_hilbert_json(rec), kRangeListing);
}

TEST(Wkt, NestedAndFlatFormsMatch) {
  EXPECT_EQ(parse_wkt("POLYGON ((1 1, 1 4, 3 5, 5 3, 4 1, 1 1))"),
            example_polygon());
  EXPECT_EQ(parse_wkt("polygon(1 1,1 4,3 5,5 3,4 1)"), example_polygon());
}

TEST(Wkt, Holes) {
  PolygonGeom donut{{{0, 0}, {8, 0}, {8, 8}, {0, 8}},
                    {{{2, 2}, {4, 2}, {4, 4}, {2, 4}}}};
  std::string text = emit_wkt(donut);
  EXPECT_EQ(text,
            "POLYGON ((0 0, 8 0, 8 8, 0 8, 0 0), (2 2, 4 2, 4 4, 2 4, 2 2))");
  EXPECT_EQ(parse_wkt(text), donut);
}

TEST(Wkt, HalfPixelCoordinates) {
  PolygonGeom traced{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}},
                     {}};
  std::string text = emit_wkt(traced);
  EXPECT_EQ(text, "POLYGON ((-0.5 -0.5, 0.5 -0.5, 0.5 0.5, -0.5 0.5, -0.5 -0.5))");
  EXPECT_EQ(parse_wkt(text), traced);
}

TEST(Wkt, Rejections) {
  EXPECT_THROW(parse_wkt("LINESTRING (0 0, 1 1)"), ParseError);
  EXPECT_THROW(parse_wkt("POLYGON ((1 1, 2 2))"), GeometryError);
  EXPECT_THROW(parse_wkt("POLYGON ((1 1, 2 2, 3 1)) extra"), ParseError);
  EXPECT_THROW(parse_wkt("POLYGON ((1.25 1, 2 2, 3 1))"), ParseError);
  EXPECT_THROW(parse_wkt("POLYGON ((1e2 1, 2 2, 3 1))"), ParseError);
  EXPECT_THROW(parse_wkt("POLYGON ((1 1, 2 2, 3"), ParseError);
}

TEST(Geojson, MemberOrderAndCaseAreFree) {
  PolygonGeom expect = example_polygon();
  EXPECT_EQ(parse_geojson_polygon(
                R"({"type": "Polygon", "coordinates": )"
                R"([[[1,1],[1,4],[3,5],[5,3],[4,1]]]})"),
            expect);
  EXPECT_EQ(parse_geojson_polygon(
                R"({"coordinates": [[[1,1],[1,4],[3,5],[5,3],[4,1],[1,1]]], )"
                R"("TYPE": "Polygon"})"),
            expect);
}

TEST(Geojson, EmitsClosedRingsWithBareIntegers) {
  EXPECT_EQ(emit_geojson_polygon(example_polygon()),
            R"({"type":"Polygon","coordinates":)"
            R"([[[1,1],[1,4],[3,5],[5,3],[4,1],[1,1]]]})");
  PolygonGeom traced{{{-0.5, -0.5}, {1.5, -0.5}, {0.5, 1.5}}, {}};
  std::string text = emit_geojson_polygon(traced);
  EXPECT_EQ(parse_geojson_polygon(text), traced);
}

TEST(Geojson, Rejections) {
  EXPECT_THROW(parse_geojson_polygon(R"({"type": "MultiPolygon",
      "coordinates": [[[1,1],[1,4],[3,5]]]})"),
               SchemaError);
  EXPECT_THROW(parse_geojson_polygon(R"({"type": "Polygon"})"), SchemaError);
  EXPECT_THROW(parse_geojson_polygon(
                   R"({"type": "Polygon", "coordinates":
      [[[1,1],[1,4],[3,5]]], "bbox": [0,0,5,5]})"),
               SchemaError);
  EXPECT_THROW(parse_geojson_polygon(
                   R"({"type": "Polygon", "coordinates": [[[1.25,1],[1,4],[3,5]]]})"),
               SchemaError);
  EXPECT_THROW(parse_geojson_polygon("{"), ParseError);
}

TEST(Svg, FormsAndRejections) {
  EXPECT_EQ(parse_svg_points("1,1 1,4 3,5 5,3 4,1"), example_polygon());
  EXPECT_EQ(parse_svg_points("<polygon points='1,1 1,4 3,5 5,3 4,1 1,1'/>"),
            example_polygon());
  EXPECT_EQ(emit_svg_points(example_polygon()),
            "<polygon points=\"1,1 1,4 3,5 5,3 4,1 1,1\"/>");
  EXPECT_THROW(parse_svg_points("<rect width='4'/>"), ParseError);
  PolygonGeom donut{{{0, 0}, {8, 0}, {8, 8}, {0, 8}},
                    {{{2, 2}, {4, 2}, {4, 4}, {2, 4}}}};
  EXPECT_THROW(emit_svg_points(donut), FormatError);
}

TEST(RangeJson, VariantsAndRejections) {
  // Typographic quotes and a capitalized type key still parse.
  AnnotationRecord rec = parse_hilbert_json(
      "{\xE2\x80\x9Cname\xE2\x80\x9D: \xE2\x80\x9CPolygon 1\xE2\x80\x9D, "
      "\xE2\x80\x9CType\xE2\x80\x9D: \xE2\x80\x9CNuclear Material\xE2\x80\x9D, "
      "\xE2\x80\x9CRanges\xE2\x80\x9D: [[8,12]]}");
  EXPECT_EQ(rec.name, "Polygon 1");
  EXPECT_EQ(rec.class_label, "Nuclear Material");

  // Ranges normalize on parse.
  EXPECT_EQ(parse_hilbert_json(
                R"({"name":"x","type":"y","Ranges":[[17,18],[8,12],[13,16]]})")
                .ranges.ranges(),
            rv({{8, 18}}));

  EXPECT_THROW(parse_hilbert_json(R"({"name":"x","type":"y"})"), SchemaError);
  EXPECT_THROW(
      parse_hilbert_json(R"({"name":"x","type":"y","Ranges":[[5,4]]})"),
      RangeError);
  EXPECT_THROW(
      parse_hilbert_json(R"({"name":"x","type":"y","Ranges":[[1]]})"),
      SchemaError);
  EXPECT_THROW(parse_hilbert_json(
                   R"({"name":"x","type":"y","Ranges":[], "extra": 1})"),
               SchemaError);
  EXPECT_THROW(
      parse_hilbert_json(R"({"name":"x","type":"y","Ranges":[[-1,4]]})"),
      SchemaError);
}

TEST(Pbm, AsciiAndPackedAgree) {
  RasterMask ascii = read_mask_pbm(
      "P1\n"
      "# a comment\n"
      "4 4\n"
      "1 0 0 1\n"
      "0 1 1 0\n"
      "0 1 1 0\n"
      "1 0 0 1\n");
  EXPECT_EQ(ascii.grid().order(), 2);
  EXPECT_EQ(ascii.set_count(), 8u);
  EXPECT_TRUE(ascii.test(0, 0));
  EXPECT_TRUE(ascii.test(2, 1));
  EXPECT_FALSE(ascii.test(1, 0));

  std::string packed = write_mask_pbm(ascii);
  EXPECT_EQ(packed.substr(0, 7), "P4\n4 4\n");
  RasterMask reread = read_mask_pbm(packed);
  EXPECT_TRUE(reread.same_cells(ascii));
}

TEST(Pbm, ExactPackedBytes) {
  GridGeometry grid(1);
  RasterMask mask = RasterMask::full(grid);
  mask.set(0, 0);
  mask.set(1, 0);
  mask.set(1, 1);
  EXPECT_EQ(write_mask_pbm(mask), std::string("P4\n2 2\n\xC0\x40", 9));
}

TEST(Pbm, Rejections) {
  EXPECT_THROW(read_mask_pbm("P2\n2 2\n3\n0 0 0 0\n"), FormatError);
  EXPECT_THROW(read_mask_pbm("P1\n3 3\n0 0 0 0 0 0 0 0 0\n"), FormatError);
  EXPECT_THROW(read_mask_pbm("P1\n4 2\n0 0 0 0 0 0 0 0\n"), FormatError);
  EXPECT_THROW(read_mask_pbm("P4\n4 4\n\xFF"), FormatError);
  EXPECT_THROW(read_mask_pbm("P1\n2 2\n1 1 1\n"), FormatError);
}

AnnotationCollection sample_collection() {
  AnnotationCollection col;
  col.grid = GridGeometry(3);
  col.cell_size = 4;
  col.width = 30;
  col.height = 27;
  col.records.push_back(
      {7, "Polygon 1", "Nuclear Material",
       normalize_ranges(rv({{8, 12}, {17, 18}, {23, 24}, {27, 36}, {53, 53}}))});
  col.records.push_back({9, "stroma band", "stroma",
                         normalize_ranges(rv({{0, 3}}))});
  return col;
}

TEST(Container, RoundtripIsByteStable) {
  AnnotationCollection col = sample_collection();
  std::ostringstream first;
  write_collection(col, first);
  std::istringstream in(first.str());
  AnnotationCollection back = read_collection(in);
  EXPECT_EQ(back.grid, col.grid);
  EXPECT_EQ(back.cell_size, col.cell_size);
  EXPECT_EQ(back.width, col.width);
  EXPECT_EQ(back.height, col.height);
  EXPECT_EQ(back.records, col.records);
  std::ostringstream second;
  write_collection(back, second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Container, SkipsBlankLines) {
  std::istringstream in(
      "{\"order\":3,\"cell_size\":1,\"width\":8,\"height\":8}\n"
      "\n"
      "{\"id\":1,\"name\":\"a\",\"type\":\"t\",\"Ranges\":[[0,3]]}\n"
      "\n");
  EXPECT_EQ(read_collection(in).records.size(), 1u);
}

TEST(Container, Rejections) {
  std::istringstream dup(
      "{\"order\":3,\"cell_size\":1,\"width\":8,\"height\":8}\n"
      "{\"id\":1,\"name\":\"a\",\"type\":\"t\",\"Ranges\":[[0,3]]}\n"
      "{\"id\":1,\"name\":\"b\",\"type\":\"t\",\"Ranges\":[[9,9]]}\n");
  EXPECT_THROW(read_collection(dup), ConflictError);

  std::istringstream overflow(
      "{\"order\":2,\"cell_size\":1,\"width\":4,\"height\":4}\n"
      "{\"id\":1,\"name\":\"a\",\"type\":\"t\",\"Ranges\":[[0,16]]}\n");
  EXPECT_THROW(read_collection(overflow), RangeError);

  std::istringstream no_header(
      "{\"id\":1,\"name\":\"a\",\"type\":\"t\",\"Ranges\":[[0,3]]}\n");
  EXPECT_THROW(read_collection(no_header), SchemaError);

  std::istringstream empty("");
  EXPECT_THROW(read_collection(empty), ParseError);
}

TEST(Container, ErrorsNameTheLine) {
  std::istringstream in(
      "{\"order\":3,\"cell_size\":1,\"width\":8,\"height\":8}\n"
      "{\"id\":1,\"name\":\"a\",\"type\":\"t\",\"Ranges\":[[0,3]]}\n"
      "{\"id\":2,\"name\":\"b\",\"type\":\"t\",\"Ranges\":[[5,4]]}\n");
  try {
    read_collection(in);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

}  // namespace
}  // namespace hroi
