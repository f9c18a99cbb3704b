#include "infodiv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "infodiv/errors.hpp"
#include "infodiv/random.hpp"
#include "json.hpp"

namespace infodiv::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skippable(const std::string& line) { return line.empty() || line.front() == '#'; }

double parse_double(const std::string& field, std::size_t line_no) {
  const std::string t = trim(field);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ValidationError("line " + std::to_string(line_no) + ": '" + t + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

json parse_json_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError("line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace

TableFormat format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? TableFormat::JsonLines : TableFormat::Csv;
}

std::vector<LabeledDistribution> parse_distributions(std::istream& in, bool normalize) {
  std::vector<LabeledDistribution> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (skippable(line)) continue;
    std::string id;
    std::vector<double> values;
    if (line.front() == '{') {
      const json record = parse_json_line(line, line_no);
      if (!record.contains("p") || !record["p"].is_array()) {
        throw ValidationError("line " + std::to_string(line_no) + ": missing \"p\" array");
      }
      id = record.value("id", std::to_string(rows.size()));
      for (const auto& v : record["p"]) {
        if (!v.is_number()) {
          throw ValidationError("line " + std::to_string(line_no) + ": non-numeric coordinate");
        }
        values.push_back(v.get<double>());
      }
    } else {
      id = std::to_string(rows.size());
      for (const auto& field : split_csv(line)) values.push_back(parse_double(field, line_no));
    }
    try {
      rows.push_back({id, validate(values, normalize)});
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<LabeledDistribution> read_distributions(const std::filesystem::path& path,
                                                    bool normalize) {
  auto in = open_input(path);
  return parse_distributions(in, normalize);
}

void write_distributions(std::ostream& out, std::span<const LabeledDistribution> rows,
                         TableFormat format) {
  for (const auto& row : rows) {
    if (format == TableFormat::JsonLines) {
      json record;
      record["id"] = row.id;
      record["p"] = std::vector<double>(row.p.values().begin(), row.p.values().end());
      out << record.dump() << '\n';
    } else {
      for (std::size_t i = 0; i < row.p.d(); ++i) {
        if (i) out << ',';
        out << format_double(row.p[i]);
      }
      out << '\n';
    }
  }
}

std::vector<AggregateItem> parse_stream(std::istream& in) {
  std::vector<AggregateItem> items;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (skippable(line)) continue;
    if (line.front() == '{') {
      const json record = parse_json_line(line, line_no);
      if (!record.contains("id") || !record.contains("i") || !record.contains("v")) {
        throw ValidationError("line " + std::to_string(line_no) + ": stream record needs id, i, v");
      }
      const json& id = record["id"];
      const long long index = record["i"].get<long long>();
      if (index < 0) throw ValidationError("line " + std::to_string(line_no) + ": negative index");
      items.push_back({id.is_string() ? id.get<std::string>() : id.dump(),
                       static_cast<std::size_t>(index), record["v"].get<double>()});
    } else {
      const auto fields = split_csv(line);
      if (fields.size() != 3) {
        throw ValidationError("line " + std::to_string(line_no) + ": expected id,i,v");
      }
      const double index = parse_double(fields[1], line_no);
      if (index < 0 || index != std::floor(index)) {
        throw ValidationError("line " + std::to_string(line_no) + ": index must be a natural number");
      }
      items.push_back({trim(fields[0]), static_cast<std::size_t>(index),
                       parse_double(fields[2], line_no)});
    }
  }
  return items;
}

std::vector<AggregateItem> read_stream(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_stream(in);
}

void write_stream(std::ostream& out, std::span<const AggregateItem> items, TableFormat format) {
  for (const auto& item : items) {
    if (format == TableFormat::JsonLines) {
      json record;
      record["id"] = item.point_id;
      record["i"] = item.coord_index;
      record["v"] = item.value;
      out << record.dump() << '\n';
    } else {
      out << item.point_id << ',' << item.coord_index << ',' << format_double(item.value) << '\n';
    }
  }
}

void write_embeddings(std::ostream& out, const EmbeddingHeader& header,
                      std::span<const EmbeddingRecord> records) {
  json h;
  h["mode"] = header.mode;
  h["kind"] = std::string(to_string(header.kind));
  h["d"] = header.d;
  h["layout"] = header.layout;
  h["digest"] = to_hex(header.digest);
  h["dimension"] = header.dimension;
  if (header.mode == "det") {
    h["eps"] = header.eps;
    h["J"] = header.J;
    h["step"] = header.step;
  } else if (header.mode == "rand") {
    h["s"] = header.s;
    h["seed"] = header.seed;
    h["rng_id"] = header.rng_id;
  }
  out << "# " << h.dump() << '\n';
  for (const auto& rec : records) {
    if (rec.vector.size() != header.dimension) {
      throw DimensionError("embedding '" + rec.id + "' does not match the header dimension");
    }
    out << rec.id;
    for (double v : rec.vector) out << ',' << format_double(v);
    out << '\n';
  }
}

std::pair<EmbeddingHeader, std::vector<EmbeddingRecord>> read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ValidationError("embedding file must start with a '# {json}' header line");
  }
  const json h = parse_json_line(line.substr(2), 1);
  EmbeddingHeader header;
  try {
    header.mode = h.at("mode").get<std::string>();
    header.kind = parse_kind(h.at("kind").get<std::string>());
    header.d = h.at("d").get<std::size_t>();
    header.layout = h.at("layout").get<std::string>();
    header.digest = from_hex(h.at("digest").get<std::string>());
    header.dimension = h.at("dimension").get<std::size_t>();
    if (header.mode == "det") {
      header.eps = h.at("eps").get<double>();
      header.J = h.at("J").get<std::int64_t>();
      header.step = h.at("step").get<double>();
    } else if (header.mode == "rand") {
      header.s = h.at("s").get<std::size_t>();
      header.seed = h.at("seed").get<std::uint64_t>();
      header.rng_id = h.at("rng_id").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("embedding header: ") + e.what());
  }
  std::vector<EmbeddingRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    EmbeddingRecord rec{fields.front(), {}};
    rec.vector.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) rec.vector.push_back(parse_double(fields[i], line_no));
    if (rec.vector.size() != header.dimension) {
      throw DimensionError("line " + std::to_string(line_no) + ": embedding has " +
                           std::to_string(rec.vector.size()) + " entries, header says " +
                           std::to_string(header.dimension));
    }
    records.push_back(std::move(rec));
  }
  return {header, std::move(records)};
}

void write_sketches(std::ostream& out, const SketchFamily& family,
                    const std::map<std::string, LinearSketch>& sketches) {
  const SketchHeader& sh = family.header();
  const SketchParams& params = family.params();
  json h;
  h["type"] = "sketch-header";
  h["kind"] = std::string(to_string(sh.kind));
  h["d"] = sh.d;
  h["eps_embed"] = sh.eps_embed;
  h["eps_l2"] = sh.eps_l2;
  h["delta"] = sh.delta;
  h["seed"] = sh.seed;
  h["R"] = sh.reps;
  h["m"] = sh.width;
  h["grid_digest"] = to_hex(sh.grid_digest);
  h["rng_id"] = sh.rng_id;
  h["width_constant"] = params.width_constant;
  h["reps_constant"] = params.reps_constant;
  h["embedding_dimension"] = family.embedding_dimension();
  out << h.dump() << '\n';
  for (const auto& [id, sketch] : sketches) {
    if (!(sketch.header() == sh)) throw SketchMismatchError("sketch '" + id + "' has another header");
    json rec;
    rec["id"] = id;
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < sketch.seen().size(); ++i) {
      if (sketch.seen()[i]) seen.push_back(i);
    }
    rec["seen"] = seen;
    rec["counters"] = std::vector<double>(sketch.counters().begin(), sketch.counters().end());
    out << rec.dump() << '\n';
  }
}

SketchFile read_sketches(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty sketch file");
  const json h = parse_json_line(line, 1);
  SketchParams params;
  std::uint64_t digest = 0;
  std::size_t reps = 0;
  std::size_t width = 0;
  try {
    if (h.at("type").get<std::string>() != "sketch-header") {
      throw ValidationError("sketch file does not start with a sketch-header record");
    }
    params.kind = parse_kind(h.at("kind").get<std::string>());
    params.d = h.at("d").get<std::size_t>();
    params.eps_embed = h.at("eps_embed").get<double>();
    params.eps_l2 = h.at("eps_l2").get<double>();
    params.delta = h.at("delta").get<double>();
    params.seed = h.at("seed").get<std::uint64_t>();
    params.width_constant = h.at("width_constant").get<double>();
    params.reps_constant = h.at("reps_constant").get<double>();
    digest = from_hex(h.at("grid_digest").get<std::string>());
    reps = h.at("R").get<std::size_t>();
    width = h.at("m").get<std::size_t>();
    if (h.at("rng_id").get<std::string>() != kRngId) {
      throw SketchMismatchError("sketch was written with rng '" + h.at("rng_id").get<std::string>() +
                                "', this build uses '" + std::string(kRngId) + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sketch header: ") + e.what());
  }
  SketchFile file{SketchFamily::create(params), {}};
  const SketchHeader& sh = file.family->header();
  if (sh.grid_digest != digest || sh.reps != reps || sh.width != width) {
    throw SketchMismatchError("sketch header does not match the rebuilt grid and hash family");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const json rec = parse_json_line(line, line_no);
    std::vector<bool> seen(params.d, false);
    for (const auto& i : rec.at("seen")) {
      const auto idx = i.get<std::size_t>();
      if (idx >= params.d) throw ValidationError("sketch seen-index out of range");
      seen[idx] = true;
    }
    LinearSketch sketch(file.family);
    sketch.load(rec.at("counters").get<std::vector<double>>(), std::move(seen));
    file.sketches.emplace(rec.at("id").get<std::string>(), std::move(sketch));
  }
  return file;
}

void write_reduced(std::ostream& out, const ReducedPointSet& reduced,
                   std::span<const std::string> ids) {
  if (ids.size() != reduced.points.size()) throw DimensionError("write_reduced: id count mismatch");
  json h;
  h["kind"] = std::string(to_string(reduced.kind));
  h["n"] = reduced.n;
  h["d"] = reduced.d;
  h["k"] = reduced.k;
  h["eps"] = reduced.eps;
  h["seed"] = reduced.seed;
  h["c0"] = reduced.c0;
  h["r"] = reduced.radius;
  h["beta"] = reduced.geometric_scale;
  h["local_constant"] = reduced.local_constant;
  h["divergence_scale"] = reduced.divergence_scale;
  h["embed_dimension"] = reduced.embed_dimension;
  h["eps_embed"] = reduced.eps_embed;
  out << h.dump() << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    json rec;
    rec["id"] = ids[i];
    const auto values = reduced.points[i].values();
    rec["p_reduced"] = std::vector<double>(values.begin(), values.end());
    out << rec.dump() << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t from_hex(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("'" + text + "' is not a hexadecimal digest");
  }
  return value;
}

}  // namespace infodiv::io
