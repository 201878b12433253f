// Command-line front end: encode geometry into Hilbert ranges, decode
// ranges back into geometry, convert between the supported formats, and
// build, query, or benchmark persistent range indexes.
//
// Exit codes: 0 success, 1 bad usage, 2 data or format problems,
// 3 integrity failures in a loaded index.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hroi/corpus.hpp"
#include "hroi/error.hpp"
#include "hroi/grid.hpp"
#include "hroi/index.hpp"
#include "hroi/io.hpp"
#include "hroi/range_set.hpp"
#include "hroi/region_codec.hpp"

namespace {

using namespace hroi;

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    buf << in.rdbuf();
  }
  return std::move(buf).str();
}

void write_output(const std::string& path, std::string_view bytes) {
  if (path == "-") {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path);
}

enum class Format { wkt, geojson, svg, hjson, pbm };

Format parse_format(const std::string& name) {
  if (name == "wkt") return Format::wkt;
  if (name == "geojson") return Format::geojson;
  if (name == "svg") return Format::svg;
  if (name == "hjson") return Format::hjson;
  if (name == "pbm") return Format::pbm;
  throw ArgumentError("unknown format: " + name);
}

// First-bytes dispatch: PBM magic, an XML tag, a JSON object (split into
// range JSON vs GeoJSON by the Ranges key), or the WKT keyword.
Format sniff_format(std::string_view text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string_view::npos) throw FormatError("empty input");
  std::string_view body = text.substr(pos);
  if (body.size() >= 2 && body[0] == 'P' && (body[1] == '1' || body[1] == '4'))
    return Format::pbm;
  if (body[0] == '<') return Format::svg;
  if (body[0] == '{')
    return text.find("\"Ranges\"") != std::string_view::npos ||
                   text.find("“Ranges”") != std::string_view::npos
               ? Format::hjson
               : Format::geojson;
  static constexpr std::string_view kword = "POLYGON";
  if (body.size() >= kword.size()) {
    bool match = true;
    for (std::size_t i = 0; i < kword.size(); ++i)
      match = match && std::toupper(static_cast<unsigned char>(body[i])) ==
                           kword[i];
    if (match) return Format::wkt;
  }
  throw FormatError("cannot determine input format; pass it explicitly");
}

PolygonGeom parse_polygon(std::string_view text, Format format) {
  switch (format) {
    case Format::wkt:
      return parse_wkt(text);
    case Format::geojson:
      return parse_geojson_polygon(text);
    case Format::svg:
      return parse_svg_points(text);
    default:
      throw ArgumentError("polygon input formats are wkt, geojson, svg");
  }
}

// Renders traced components.  A single component uses the plain form of
// each format; several become MULTIPOLYGON / MultiPolygon, or for SVG one
// <polygon> element per line (SVG has no multi-polygon element).
std::string emit_polygons(const std::vector<PolygonGeom>& polygons,
                          Format format) {
  if (polygons.empty())
    throw GeometryError("empty range set traces to no polygon");
  switch (format) {
    case Format::wkt: {
      if (polygons.size() == 1) return emit_wkt(polygons.front());
      std::string out = "MULTIPOLYGON (";
      for (std::size_t i = 0; i < polygons.size(); ++i) {
        if (i) out += ", ";
        out += emit_wkt(polygons[i]).substr(std::string_view("POLYGON ").size());
      }
      return out + ")";
    }
    case Format::geojson: {
      if (polygons.size() == 1) return emit_geojson_polygon(polygons.front());
      nlohmann::ordered_json multi;
      multi["type"] = "MultiPolygon";
      auto coords = nlohmann::ordered_json::array();
      for (const auto& p : polygons)
        coords.push_back(
            nlohmann::ordered_json::parse(emit_geojson_polygon(p))
                ["coordinates"]);
      multi["coordinates"] = std::move(coords);
      return multi.dump();
    }
    case Format::svg: {
      std::string out;
      for (const auto& p : polygons) {
        if (!out.empty()) out += '\n';
        out += emit_svg_points(p);
      }
      return out;
    }
    default:
      throw ArgumentError("polygon output formats are wkt, geojson, svg");
  }
}

// Grid flags shared by the conversion commands.  --order pins the grid
// directly; --width/--height derive the smallest one covering the image.
struct GridFlags {
  std::uint32_t order = 0;
  std::uint64_t width = 0;
  std::uint64_t height = 0;
  std::uint32_t cell_size = 1;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--order", g.order, "grid order k (side 2^k cells)");
  cmd->add_option("--width", g.width, "image width in pixels");
  cmd->add_option("--height", g.height, "image height in pixels");
  cmd->add_option("--cell-size", g.cell_size, "pixels per grid cell")
      ->capture_default_str();
}

GridGeometry grid_from_flags(const GridFlags& g) {
  if (g.order > 0 && (g.width > 0 || g.height > 0))
    throw ArgumentError("give either --order or --width/--height, not both");
  if (g.order > 0) return GridGeometry(static_cast<int>(g.order));
  if (g.width > 0 && g.height > 0)
    return GridGeometry(order_for(g.width, g.height, g.cell_size));
  throw ArgumentError("grid size needed: pass --order or --width and --height");
}

struct RecordFlags {
  std::string name = "region";
  std::string type = "roi";
  std::uint64_t id = 0;
  std::uint64_t max_ranges = 0;
};

void add_record_flags(CLI::App* cmd, RecordFlags& r) {
  cmd->add_option("--name", r.name, "annotation name")->capture_default_str();
  cmd->add_option("--type", r.type, "annotation class label")
      ->capture_default_str();
  cmd->add_option("--id", r.id, "annotation id");
  cmd->add_option("--max-ranges", r.max_ranges,
                  "lossy cap: keep at most this many ranges (0 = exact)");
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void apply_record_flags(AnnotationRecord& rec, const RecordFlags& r,
                        const CLI::App* cmd) {
  if (flag_given(cmd, "--name")) rec.name = r.name;
  if (flag_given(cmd, "--type")) rec.class_label = r.type;
  if (flag_given(cmd, "--id")) rec.id = r.id;
}

struct ConvertOpts {
  std::string in = "-";
  std::string out = "-";
  std::string from = "auto";
  std::string to;
  GridFlags grid;
  RecordFlags record;
};

// The common conversion core.  Sources are either explicit geometry
// (wkt/geojson/svg, passed through untouched when the target is also
// geometry) or a range set with an optional implied grid (pbm fixes it,
// hjson leaves it to the flags).
void run_convert(const ConvertOpts& o, const CLI::App* cmd) {
  std::string text = read_input(o.in);
  Format src = o.from == "auto" ? sniff_format(text) : parse_format(o.from);
  Format dst = parse_format(o.to);

  std::optional<PolygonGeom> geom;
  AnnotationRecord rec;
  rec.name = o.record.name;
  rec.class_label = o.record.type;
  rec.id = o.record.id;
  std::optional<GridGeometry> implied;

  switch (src) {
    case Format::wkt:
    case Format::geojson:
    case Format::svg:
      geom = parse_polygon(text, src);
      break;
    case Format::hjson:
      rec = parse_hilbert_json(text);
      apply_record_flags(rec, o.record, cmd);
      break;
    case Format::pbm: {
      RasterMask mask = read_mask_pbm(text);
      implied = mask.grid();
      rec.ranges = mask_to_ranges(mask);
      apply_record_flags(rec, o.record, cmd);
      break;
    }
  }

  auto target_grid = [&]() -> GridGeometry {
    if (implied) {
      if (o.grid.order > 0 &&
          static_cast<int>(o.grid.order) != implied->order())
        throw ArgumentError("--order disagrees with the input bitmap size");
      return *implied;
    }
    return grid_from_flags(o.grid);
  };
  auto capped = [&](RangeSet ranges) {
    return o.record.max_ranges > 0
               ? simplify_ranges(ranges, o.record.max_ranges)
               : ranges;
  };

  switch (dst) {
    case Format::hjson: {
      if (geom)
        rec.ranges = mask_to_ranges(
            rasterize_polygon(*geom, target_grid(), o.grid.cell_size));
      rec.ranges = capped(rec.ranges);
      write_output(o.out, emit_hilbert_json(rec) + "\n");
      return;
    }
    case Format::pbm: {
      RasterMask mask =
          geom ? rasterize_polygon(*geom, target_grid(), o.grid.cell_size)
               : ranges_to_mask(capped(rec.ranges), target_grid());
      write_output(o.out, write_mask_pbm(mask));
      return;
    }
    default: {
      if (geom) {
        write_output(o.out, emit_polygons({*geom}, dst) + "\n");
        return;
      }
      auto polygons = ranges_to_polygon(capped(rec.ranges), target_grid());
      write_output(o.out, emit_polygons(polygons, dst) + "\n");
      return;
    }
  }
}

struct IndexBuildOpts {
  std::string in = "-";
  std::string out;
};

void run_index_build(const IndexBuildOpts& o) {
  AnnotationCollection collection;
  if (o.in == "-") {
    collection = read_collection(std::cin);
  } else {
    std::ifstream in(o.in);
    if (!in) throw Error("cannot open " + o.in);
    collection = read_collection(in);
  }
  IndexTable table = IndexTable::build(collection);
  if (o.out == "-")
    table.save(std::cout);
  else
    table.save_file(o.out);
}

struct IndexQueryOpts {
  std::string index;
  std::vector<std::int64_t> window;
  std::string probe;
  bool json = false;
  bool show_stats = false;
};

void run_index_query(const IndexQueryOpts& o) {
  IndexTable table =
      o.index == "-" ? IndexTable::load(std::cin) : IndexTable::load_file(o.index);
  if (o.window.empty() == o.probe.empty())
    throw ArgumentError("pass exactly one of --window or --probe");

  QueryStats stats;
  std::vector<std::uint64_t> ids;
  if (!o.window.empty()) {
    QueryWindow window{o.window[0], o.window[1], o.window[2], o.window[3]};
    ids = table.query_window(window, &stats);
  } else {
    AnnotationRecord probe = parse_hilbert_json(read_input(o.probe));
    ids = table.query_ranges(probe.ranges, &stats);
  }

  if (o.json) {
    nlohmann::ordered_json doc;
    doc["ids"] = ids;
    auto hits = nlohmann::ordered_json::array();
    for (auto id : ids) {
      const AnnotationMeta* meta = table.find(id);
      hits.push_back({{"id", id},
                      {"name", meta ? meta->name : ""},
                      {"type", meta ? meta->class_label : ""}});
    }
    doc["annotations"] = std::move(hits);
    doc["stats"] = {{"ranges_probed", stats.ranges_probed},
                    {"entries_touched", stats.entries_touched}};
    write_output("-", doc.dump(2) + "\n");
    return;
  }
  std::ostringstream out;
  for (auto id : ids) {
    const AnnotationMeta* meta = table.find(id);
    out << id << '\t' << (meta ? meta->name : "") << '\t'
        << (meta ? meta->class_label : "") << '\n';
  }
  write_output("-", out.str());
  if (o.show_stats)
    std::cerr << "ranges probed: " << stats.ranges_probed
              << ", entries touched: " << stats.entries_touched << '\n';
}

struct GenFlags {
  std::uint64_t width = 0;
  std::uint64_t height = 0;
  std::uint32_t count = 0;
  std::uint64_t seed = 0;
  std::uint32_t cell_size = 1;
  std::uint32_t min_radius = 4;
  std::uint32_t max_radius = 32;
  std::uint32_t min_vertices = 8;
  std::uint32_t max_vertices = 24;
};

void add_gen_flags(CLI::App* cmd, GenFlags& g) {
  cmd->add_option("--width", g.width, "image width in pixels")->required();
  cmd->add_option("--height", g.height, "image height in pixels")->required();
  cmd->add_option("--count", g.count, "number of regions")->required();
  cmd->add_option("--seed", g.seed, "generator seed")->capture_default_str();
  cmd->add_option("--cell-size", g.cell_size, "pixels per grid cell")
      ->capture_default_str();
  cmd->add_option("--min-radius", g.min_radius, "smallest blob radius")
      ->capture_default_str();
  cmd->add_option("--max-radius", g.max_radius, "largest blob radius")
      ->capture_default_str();
  cmd->add_option("--min-vertices", g.min_vertices, "fewest blob vertices")
      ->capture_default_str();
  cmd->add_option("--max-vertices", g.max_vertices, "most blob vertices")
      ->capture_default_str();
}

CorpusSpec to_spec(const GenFlags& g) {
  CorpusSpec spec;
  spec.image_width = g.width;
  spec.image_height = g.height;
  spec.polygon_count = g.count;
  spec.seed = g.seed;
  spec.min_radius = g.min_radius;
  spec.max_radius = g.max_radius;
  spec.min_vertices = g.min_vertices;
  spec.max_vertices = g.max_vertices;
  return spec;
}

struct SynthOpts {
  GenFlags gen;
  std::string out = "-";
  std::string wkt_out;
};

void run_synth(const SynthOpts& o) {
  SynthCorpus corpus = synth_corpus(to_spec(o.gen), o.gen.cell_size);
  AnnotationCollection collection = corpus.to_collection();
  if (o.out == "-") {
    write_collection(collection, std::cout);
  } else {
    std::ofstream out(o.out);
    if (!out) throw Error("cannot open " + o.out);
    write_collection(collection, out);
    if (!out) throw Error("short write to " + o.out);
  }
  if (!o.wkt_out.empty()) {
    std::string lines;
    for (const auto& item : corpus.items) lines += emit_wkt(item.polygon) + "\n";
    write_output(o.wkt_out, lines);
  }
}

struct StatsOpts {
  GenFlags gen;
  bool json = false;
};

void run_stats(const StatsOpts& o) {
  SynthCorpus corpus = synth_corpus(to_spec(o.gen), o.gen.cell_size);
  CorpusStats s = compute_stats(corpus);
  if (o.json) {
    nlohmann::ordered_json doc;
    doc["polygons"] = s.polygon_count;
    doc["vertices"] = s.total_vertices;
    doc["ranges"] = s.total_ranges;
    doc["vertices_per_polygon"] = s.vertices_per_polygon;
    doc["ranges_per_polygon"] = s.ranges_per_polygon;
    doc["polygon_bytes"] = s.polygon_bytes;
    doc["range_bytes"] = s.range_bytes;
    write_output("-", doc.dump(2) + "\n");
    return;
  }
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "%-16s %12llu\n", "polygons",
                static_cast<unsigned long long>(s.polygon_count));
  out += line;
  std::snprintf(line, sizeof line, "%-16s %12llu  (%.1f per polygon)\n",
                "vertices", static_cast<unsigned long long>(s.total_vertices),
                s.vertices_per_polygon);
  out += line;
  std::snprintf(line, sizeof line, "%-16s %12llu  (%.1f per polygon)\n",
                "ranges", static_cast<unsigned long long>(s.total_ranges),
                s.ranges_per_polygon);
  out += line;
  std::snprintf(line, sizeof line, "%-16s %12llu\n", "polygon bytes",
                static_cast<unsigned long long>(s.polygon_bytes));
  out += line;
  std::snprintf(line, sizeof line, "%-16s %12llu\n", "range bytes",
                static_cast<unsigned long long>(s.range_bytes));
  out += line;
  write_output("-", out);
}

struct BenchOpts {
  GenFlags gen;
  std::uint32_t windows = 20;
  std::uint64_t query_seed = 1;
  std::uint32_t threads = 1;
  bool json = false;
  std::string out = "-";
};

void run_bench_command(const BenchOpts& o) {
  SynthCorpus corpus = synth_corpus(to_spec(o.gen), o.gen.cell_size);
  IndexTable table = IndexTable::build(corpus.to_collection());
  BenchConfig config;
  config.window_count = o.windows;
  config.seed = o.query_seed;
  config.threads = o.threads;
  BenchReport report = run_bench(corpus, table, config);
  write_output(o.out, o.json ? report.to_json() + "\n" : report.to_table());
}

const std::vector<std::string> kPolygonOrRegionFormats = {"wkt", "geojson",
                                                         "svg", "hjson",
                                                         "pbm"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-range codec for whole-slide ROI annotations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hroi 0.1.0");

  // encode: geometry or bitmap in, one range-set JSON record out.
  auto encode_opts = std::make_shared<ConvertOpts>();
  encode_opts->to = "hjson";
  auto* encode = app.add_subcommand(
      "encode", "encode a polygon or bitmap as Hilbert ranges");
  encode->add_option("--in", encode_opts->in, "input file, - for stdin")
      ->capture_default_str();
  encode->add_option("--out", encode_opts->out, "output file, - for stdout")
      ->capture_default_str();
  encode
      ->add_option("--format", encode_opts->from,
                   "input format (auto = sniff)")
      ->check(CLI::IsMember({"auto", "wkt", "geojson", "svg", "hjson", "pbm"}))
      ->capture_default_str();
  add_grid_flags(encode, encode_opts->grid);
  add_record_flags(encode, encode_opts->record);
  encode->callback([encode_opts, encode] { run_convert(*encode_opts, encode); });

  // decode: range-set JSON in, geometry or bitmap out.  Coordinates come
  // out in cell units (pixels when --cell-size is 1).
  auto decode_opts = std::make_shared<ConvertOpts>();
  decode_opts->from = "hjson";
  decode_opts->to = "wkt";
  auto* decode = app.add_subcommand(
      "decode", "decode Hilbert ranges back into geometry");
  decode->add_option("--in", decode_opts->in, "input file, - for stdin")
      ->capture_default_str();
  decode->add_option("--out", decode_opts->out, "output file, - for stdout")
      ->capture_default_str();
  decode
      ->add_option("--format", decode_opts->to,
                   "output format")
      ->check(CLI::IsMember({"wkt", "geojson", "svg", "pbm"}))
      ->capture_default_str();
  decode->add_option("--order", decode_opts->grid.order,
                     "grid order k the ranges live on");
  decode->add_option("--max-ranges", decode_opts->record.max_ranges,
                     "lossy cap: keep at most this many ranges (0 = exact)");
  decode->callback([decode_opts, decode] { run_convert(*decode_opts, decode); });

  // convert: the general any-to-any form.
  auto convert_opts = std::make_shared<ConvertOpts>();
  auto* convert =
      app.add_subcommand("convert", "convert between region formats");
  convert->add_option("--in", convert_opts->in, "input file, - for stdin")
      ->capture_default_str();
  convert->add_option("--out", convert_opts->out, "output file, - for stdout")
      ->capture_default_str();
  convert
      ->add_option("--from", convert_opts->from, "input format (auto = sniff)")
      ->check(CLI::IsMember({"auto", "wkt", "geojson", "svg", "hjson", "pbm"}))
      ->capture_default_str();
  convert->add_option("--to", convert_opts->to, "output format")
      ->check(CLI::IsMember(kPolygonOrRegionFormats))
      ->required();
  add_grid_flags(convert, convert_opts->grid);
  add_record_flags(convert, convert_opts->record);
  convert->callback(
      [convert_opts, convert] { run_convert(*convert_opts, convert); });

  auto* index = app.add_subcommand("index", "build or query a range index");
  index->require_subcommand(1);

  auto build_opts = std::make_shared<IndexBuildOpts>();
  auto* build = index->add_subcommand(
      "build", "build a binary index from an annotation container");
  build->add_option("--in", build_opts->in, "container file, - for stdin")
      ->capture_default_str();
  build->add_option("--out", build_opts->out, "index file, - for stdout")
      ->required();
  build->callback([build_opts] { run_index_build(*build_opts); });

  auto query_opts = std::make_shared<IndexQueryOpts>();
  auto* query =
      index->add_subcommand("query", "query an index by window or region");
  query->add_option("--index", query_opts->index, "index file, - for stdin")
      ->required();
  query
      ->add_option("--window", query_opts->window,
                   "pixel window minx,miny,maxx,maxy (inclusive)")
      ->expected(4)
      ->delimiter(',');
  query->add_option("--probe", query_opts->probe,
                    "range-set JSON file to intersect with");
  query->add_flag("--json", query_opts->json, "emit a JSON result document");
  query->add_flag("--stats", query_opts->show_stats,
                  "print probe work counters to stderr");
  query->callback([query_opts] { run_index_query(*query_opts); });

  auto synth_opts = std::make_shared<SynthOpts>();
  auto* synth = app.add_subcommand(
      "synth", "generate a deterministic synthetic annotation container");
  add_gen_flags(synth, synth_opts->gen);
  synth->add_option("--out", synth_opts->out, "container file, - for stdout")
      ->capture_default_str();
  synth->add_option("--wkt-out", synth_opts->wkt_out,
                    "also write source polygons, one WKT per line");
  synth->callback([synth_opts] { run_synth(*synth_opts); });

  auto stats_opts = std::make_shared<StatsOpts>();
  auto* stats = app.add_subcommand(
      "stats", "storage accounting for a synthetic corpus");
  add_gen_flags(stats, stats_opts->gen);
  stats->add_flag("--json", stats_opts->json, "emit JSON instead of a table");
  stats->callback([stats_opts] { run_stats(*stats_opts); });

  auto bench_opts = std::make_shared<BenchOpts>();
  auto* bench = app.add_subcommand(
      "bench", "time indexed window queries against a reference scan");
  add_gen_flags(bench, bench_opts->gen);
  bench->add_option("--windows", bench_opts->windows, "number of query windows")
      ->capture_default_str();
  bench
      ->add_option("--query-seed", bench_opts->query_seed,
                   "seed for window placement")
      ->capture_default_str();
  bench->add_option("--threads", bench_opts->threads, "query worker threads")
      ->capture_default_str();
  bench->add_flag("--json", bench_opts->json, "emit the JSON report");
  bench->add_option("--out", bench_opts->out, "report file, - for stdout")
      ->capture_default_str();
  bench->callback([bench_opts] { run_bench_command(*bench_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const IntegrityError& e) {
    std::cerr << "hroi: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "hroi: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hroi: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
