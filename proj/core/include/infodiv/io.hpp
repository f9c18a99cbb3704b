#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infodiv/dimred.hpp"
#include "infodiv/distribution.hpp"
#include "infodiv/stream.hpp"

namespace infodiv::io {

struct LabeledDistribution {
  std::string id;
  Distribution p;
};

enum class TableFormat { Csv, JsonLines };

/// Picks JsonLines for ".jsonl"/".json" extensions, Csv otherwise.
TableFormat format_for(const std::filesystem::path& path);

/// One distribution per line: comma-separated reals (id = row index) or
/// {"id": ..., "p": [...]}. Blank lines and lines starting with '#' are skipped.
/// Every row goes through validate(values, normalize).
std::vector<LabeledDistribution> parse_distributions(std::istream& in, bool normalize);
std::vector<LabeledDistribution> read_distributions(const std::filesystem::path& path,
                                                    bool normalize);
void write_distributions(std::ostream& out, std::span<const LabeledDistribution> rows,
                         TableFormat format);

/// {"id": ..., "i": ..., "v": ...} lines or "id,i,v" CSV lines.
std::vector<AggregateItem> parse_stream(std::istream& in);
std::vector<AggregateItem> read_stream(const std::filesystem::path& path);
void write_stream(std::ostream& out, std::span<const AggregateItem> items, TableFormat format);

/// Header of a persisted embedding. Enough to rebuild the grid (det) or the
/// frequency sample (rand) and to check compatibility before comparing.
struct EmbeddingHeader {
  std::string mode;  // "det", "rand" or "hellinger"
  DivergenceKind kind = DivergenceKind::JS;
  std::size_t d = 0;
  double eps = 0.0;      // det
  std::int64_t J = 0;    // det
  double step = 0.0;     // det
  std::size_t s = 0;     // rand
  std::uint64_t seed = 0;  // rand
  std::string rng_id;      // rand
  std::string layout;
  std::uint64_t digest = 0;
  std::size_t dimension = 0;

  friend bool operator==(const EmbeddingHeader&, const EmbeddingHeader&) = default;
};

struct EmbeddingRecord {
  std::string id;
  std::vector<double> vector;
};

/// "# {json header}" line followed by one "id,v0,v1,..." CSV row per point.
void write_embeddings(std::ostream& out, const EmbeddingHeader& header,
                      std::span<const EmbeddingRecord> records);
std::pair<EmbeddingHeader, std::vector<EmbeddingRecord>> read_embeddings(std::istream& in);

/// JSON lines: a header record, then {"id", "seen", "counters"} per sketch.
void write_sketches(std::ostream& out, const SketchFamily& family,
                    const std::map<std::string, LinearSketch>& sketches);

struct SketchFile {
  std::shared_ptr<const SketchFamily> family;
  std::map<std::string, LinearSketch> sketches;
};

/// Rebuilds the family from the header and checks its grid digest.
SketchFile read_sketches(std::istream& in);

/// Header record followed by {"id", "p_reduced"} records.
void write_reduced(std::ostream& out, const ReducedPointSet& reduced,
                   std::span<const std::string> ids);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

std::string to_hex(std::uint64_t value);
std::uint64_t from_hex(const std::string& text);

}  // namespace infodiv::io
