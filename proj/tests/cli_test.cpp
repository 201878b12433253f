// Drives the installed-style binary end to end through a shell, checking
// exit codes, exact output bytes, format sniffing, and the index pipeline.
// The binary path comes in through HROI_CLI_PATH at compile time.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "hroicliXXXXXX").string();
    ASSERT_NE(::mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path write(const std::string& name, const std::string& bytes) const {
    fs::path p = path(name);
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
  }

  CliResult run(const std::string& args, const std::string& stdin_text = "") {
    fs::path in = write("stdin.tmp", stdin_text);
    fs::path out = path("stdout.tmp");
    fs::path err = path("stderr.tmp");
    std::string cmd = std::string(HROI_CLI_PATH) + " " + args + " < " +
                      in.string() + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

// The five-range record for the worked polygon, exactly as the encoder
// prints it (the CLI adds a trailing newline).
const std::string kRecord =
    "{\n"
    "  \"name\": \"Polygon 1\",\n"
    "  \"type\": \"Nuclear Material\",\n"
    "  \"Ranges\": [[8,12],[17,18],[23,24],[27,36],[53,53]]\n"
    "}";

const std::string kPolygonWkt = "POLYGON ((1 6, 1 3, 3 2, 5 4, 4 6, 1 6))";

TEST_F(CliTest, VersionAndUsageExitCodes) {
  CliResult r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("hroi 0.1.0"), std::string::npos);

  EXPECT_EQ(run("").code, 1);               // a subcommand is required
  EXPECT_EQ(run("--no-such-flag").code, 1);
  EXPECT_EQ(run("encode --format sgml").code, 1);  // rejected by the option check
}

TEST_F(CliTest, EncodePrintsTheExactRecord) {
  CliResult r = run(
      "encode --order 3 --name 'Polygon 1' --type 'Nuclear Material'",
      kPolygonWkt);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, kRecord + "\n");
}

TEST_F(CliTest, EncodeDerivesOrderFromImageSize) {
  // A 6x6-pixel image needs a 2^3 grid, so this must match --order 3.
  CliResult r = run(
      "encode --width 6 --height 6 --name 'Polygon 1' --type 'Nuclear Material'",
      kPolygonWkt);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, kRecord + "\n");
}

TEST_F(CliTest, SniffsEachInputFormat) {
  const std::string geojson =
      R"({"type": "Polygon", "coordinates": [[[1, 6], [1, 3], [3, 2], [5, 4], [4, 6], [1, 6]]]})";
  const std::string svg = "<polygon points=\"1,6 1,3 3,2 5,4 4,6\" />";
  for (const std::string& text : {kPolygonWkt, geojson, svg}) {
    CliResult r = run("encode --order 3 --name 'Polygon 1' --type 'Nuclear Material'",
                      text);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, kRecord + "\n") << text;
  }
  // Range-set JSON is told apart from GeoJSON by its Ranges key and passes
  // through unchanged (modulo canonical formatting).
  CliResult r = run("encode --order 3", kRecord);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, kRecord + "\n");
}

TEST_F(CliTest, DecodeEncodeRoundtripsEveryFormat) {
  auto ranges_of = [](const std::string& record) {
    return nlohmann::json::parse(record).at("Ranges");
  };
  for (const std::string format : {"wkt", "geojson", "svg", "pbm"}) {
    CliResult decoded = run("decode --order 3 --format " + format, kRecord);
    ASSERT_EQ(decoded.code, 0) << format << ": " << decoded.err;
    CliResult encoded = run("encode --order 3", decoded.out);
    ASSERT_EQ(encoded.code, 0) << format << ": " << encoded.err;
    EXPECT_EQ(ranges_of(encoded.out), ranges_of(kRecord)) << format;
  }
}

TEST_F(CliTest, DecodeToBitmapEncodesBackWithoutOrderFlag) {
  // The bitmap carries its own grid size, so re-encoding needs no --order.
  CliResult bitmap = run("decode --order 3 --format pbm", kRecord);
  ASSERT_EQ(bitmap.code, 0) << bitmap.err;
  EXPECT_EQ(bitmap.out.substr(0, 7), "P4\n8 8\n");
  CliResult encoded = run("encode --name 'Polygon 1' --type 'Nuclear Material'",
                          bitmap.out);
  EXPECT_EQ(encoded.code, 0) << encoded.err;
  EXPECT_EQ(encoded.out, kRecord + "\n");
}

TEST_F(CliTest, ConvertKeepsGeometryUntouched) {
  CliResult r = run("convert --from wkt --to wkt", kPolygonWkt);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, kPolygonWkt + "\n");
}

TEST_F(CliTest, MaxRangesCapsTheRecord) {
  CliResult r = run("encode --order 3 --max-ranges 2", kPolygonWkt);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("[[8,36],[53,53]]"), std::string::npos);
}

TEST_F(CliTest, IndexPipeline) {
  fs::path corpus = path("corpus.txt");
  fs::path idx = path("roi.idx");
  ASSERT_EQ(
      run("synth --width 512 --height 512 --count 5 --seed 9 --out " +
          corpus.string())
          .code,
      0);
  ASSERT_EQ(run("index build --in " + corpus.string() + " --out " +
                idx.string())
                .code,
            0);

  CliResult all = run("index query --index " + idx.string() +
                      " --window 0,0,511,511");
  EXPECT_EQ(all.code, 0) << all.err;
  int lines = 0;
  for (char c : all.out) lines += c == '\n';
  EXPECT_EQ(lines, 5);
  EXPECT_NE(all.out.find("poly-0"), std::string::npos);

  CliResult doc = run("index query --index " + idx.string() +
                      " --window 0,0,511,511 --json --stats");
  EXPECT_EQ(doc.code, 0) << doc.err;
  nlohmann::json parsed = nlohmann::json::parse(doc.out);
  EXPECT_EQ(parsed["ids"].size(), 5u);
  EXPECT_EQ(parsed["annotations"][0]["name"], "poly-0");
  EXPECT_GT(parsed["stats"]["entries_touched"].get<std::uint64_t>(), 0u);

  // A probe covering the whole image finds everything too.
  CliResult probe_record = run(
      "encode --order 9",
      "POLYGON ((0 0, 0 511, 511 511, 511 0, 0 0))");
  ASSERT_EQ(probe_record.code, 0) << probe_record.err;
  fs::path probe = write("probe.json", probe_record.out);
  CliResult hit = run("index query --index " + idx.string() + " --probe " +
                      probe.string());
  EXPECT_EQ(hit.code, 0) << hit.err;
  lines = 0;
  for (char c : hit.out) lines += c == '\n';
  EXPECT_EQ(lines, 5);

  // Both selectors at once is a usage error in the data layer.
  EXPECT_EQ(run("index query --index " + idx.string() +
                " --window 0,0,1,1 --probe " + probe.string())
                .code,
            2);

  // Flip one id byte in the row block: the loader must refuse the file.
  std::string bytes = slurp(idx);
  ASSERT_GT(bytes.size(), 61u);
  bytes[44 + 16] = '\x7f';
  fs::path broken = write("broken.idx", bytes);
  EXPECT_EQ(run("index query --index " + broken.string() + " --window 0,0,1,1")
                .code,
            3);
}

TEST_F(CliTest, StatsAndBenchReports) {
  CliResult table =
      run("stats --width 256 --height 256 --count 8 --seed 3 --max-radius 16");
  EXPECT_EQ(table.code, 0) << table.err;
  EXPECT_NE(table.out.find("polygons"), std::string::npos);
  EXPECT_NE(table.out.find("8"), std::string::npos);

  CliResult doc = run(
      "stats --width 256 --height 256 --count 8 --seed 3 --max-radius 16 --json");
  EXPECT_EQ(doc.code, 0) << doc.err;
  EXPECT_EQ(nlohmann::json::parse(doc.out)["polygons"], 8);

  CliResult bench = run(
      "bench --width 256 --height 256 --count 8 --seed 3 --max-radius 16 "
      "--windows 4 --json");
  EXPECT_EQ(bench.code, 0) << bench.err;
  nlohmann::json report = nlohmann::json::parse(bench.out);
  EXPECT_EQ(report["windows"].size(), 4u);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(run("encode --order 3", "POLYGON ((1 1, 2").code, 2);
  EXPECT_EQ(run("decode --format wkt", kRecord).code, 2);  // no grid given
  EXPECT_EQ(run("encode --order 3 --width 6 --height 6", kPolygonWkt).code, 2);
  EXPECT_EQ(run("encode --order 3", "").code, 2);  // unsniffable empty input
  EXPECT_EQ(run("encode --order 3 --in " + path("absent.wkt").string()).code,
            2);
}

}  // namespace
