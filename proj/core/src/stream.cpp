#include "infodiv/stream.hpp"

#include <algorithm>
#include <cmath>

#include "infodiv/errors.hpp"
#include "infodiv/random.hpp"

namespace infodiv {

namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
constexpr std::size_t kCacheBudgetBytes = std::size_t{512} << 20;

std::uint64_t mod_mersenne(unsigned __int128 x) {
  std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) + static_cast<std::uint64_t>(x >> 61);
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

void check_unit_open(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(std::string("sketch parameter ") + name + " must lie in (0, 1)");
  }
}

}  // namespace

PolyHash4::PolyHash4(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& c : coeff_) c = rng.below(kMersenne61);
}

std::uint64_t PolyHash4::operator()(std::uint64_t key) const {
  const std::uint64_t x = key % kMersenne61;
  std::uint64_t acc = coeff_[3];
  for (int i = 2; i >= 0; --i) {
    acc = mod_mersenne(static_cast<unsigned __int128>(acc) * x + coeff_[i]);
  }
  return acc;
}

SketchFamily::SketchFamily(const SketchParams& params, GridSpec grid)
    : params_(params), grid_(std::move(grid)) {
  const auto width = static_cast<std::size_t>(
      std::ceil(params.width_constant / (params.eps_l2 * params.eps_l2)));
  const auto reps =
      static_cast<std::size_t>(std::ceil(params.reps_constant * std::log(1.0 / params.delta)));
  header_ = {params.kind, params.d,  params.eps_embed, params.eps_l2,   params.delta,
             params.seed, std::max<std::size_t>(reps, 1), std::max<std::size_t>(width, 1),
             grid_.digest(), std::string(kRngId)};
  if (header_.width >= (std::size_t{1} << 31)) throw ConfigError("sketch width too large");

  const std::uint64_t hash_seed = derive_seed(params.seed, "sketch-hash");
  for (std::size_t r = 0; r < header_.reps; ++r) {
    bucket_hash_.emplace_back(derive_seed(hash_seed, "bucket/" + std::to_string(r)));
    sign_hash_.emplace_back(derive_seed(hash_seed, "sign/" + std::to_string(r)));
  }

  const double cache_bytes = static_cast<double>(grid_.dimension()) *
                             static_cast<double>(header_.reps) * sizeof(std::uint32_t);
  cache_enabled_ = cache_bytes <= static_cast<double>(kCacheBudgetBytes);
  if (cache_enabled_) {
    cache_once_ = std::make_unique<std::once_flag[]>(grid_.d);
    cache_.resize(grid_.d);
  }
}

std::shared_ptr<const SketchFamily> SketchFamily::create(const SketchParams& params) {
  if (params.kind == DivergenceKind::Hellinger) {
    throw UnsupportedKernel("streaming sketches are built for js and chi2");
  }
  check_unit_open("eps_embed", params.eps_embed);
  check_unit_open("eps_l2", params.eps_l2);
  check_unit_open("delta", params.delta);
  if (!(params.width_constant > 0.0 && params.reps_constant > 0.0)) {
    throw ConfigError("sketch constants must be positive");
  }
  return std::make_shared<const SketchFamily>(params,
                                              build_grid(params.kind, params.d, params.eps_embed));
}

std::uint32_t SketchFamily::bucket(std::size_t r, std::uint64_t g) const {
  return static_cast<std::uint32_t>(bucket_hash_[r](g) % header_.width);
}

double SketchFamily::sign(std::size_t r, std::uint64_t g) const {
  return (sign_hash_[r](g) & 1U) ? -1.0 : 1.0;
}

const std::uint32_t* SketchFamily::block_codes(std::size_t coord) const {
  if (!cache_enabled_) return nullptr;
  std::call_once(cache_once_[coord], [this, coord] {
    const std::size_t len = grid_.block_len();
    auto codes = std::make_unique<std::uint32_t[]>(len * header_.reps);
    const std::uint64_t base = static_cast<std::uint64_t>(coord) * len;
    for (std::size_t r = 0; r < header_.reps; ++r) {
      for (std::size_t k = 0; k < len; ++k) {
        const std::uint64_t g = base + k;
        codes[r * len + k] = (bucket(r, g) << 1) | (sign_hash_[r](g) & 1U);
      }
    }
    cache_[coord] = std::move(codes);
  });
  return cache_[coord].get();
}

LinearSketch::LinearSketch(std::shared_ptr<const SketchFamily> family)
    : family_(std::move(family)),
      counters_(family_->counter_count(), 0.0),
      seen_(family_->grid().d, false) {}

void LinearSketch::add_block(std::size_t coord, std::span<const double> block) {
  const SketchFamily& fam = *family_;
  const std::size_t len = fam.grid().block_len();
  if (coord >= fam.grid().d) throw ValidationError("sketch block coordinate out of range");
  if (block.size() != len) throw DimensionError("sketch block has the wrong length");
  const std::size_t m = fam.width();
  if (const std::uint32_t* codes = fam.block_codes(coord)) {
    for (std::size_t r = 0; r < fam.reps(); ++r) {
      double* row = counters_.data() + r * m;
      const std::uint32_t* rc = codes + r * len;
      for (std::size_t k = 0; k < len; ++k) {
        const double e = block[k];
        if (e == 0.0) continue;
        const std::uint32_t code = rc[k];
        row[code >> 1] += (code & 1U) ? -e : e;
      }
    }
    return;
  }
  const std::uint64_t base = static_cast<std::uint64_t>(coord) * len;
  for (std::size_t r = 0; r < fam.reps(); ++r) {
    double* row = counters_.data() + r * m;
    for (std::size_t k = 0; k < len; ++k) {
      if (block[k] == 0.0) continue;
      row[fam.bucket(r, base + k)] += fam.sign(r, base + k) * block[k];
    }
  }
}

void LinearSketch::add_vector(std::span<const double> embedding) {
  const GridSpec& grid = family_->grid();
  if (embedding.size() != grid.dimension()) {
    throw DimensionError("add_vector: expected an embedding of length 4 J d = " +
                         std::to_string(grid.dimension()));
  }
  const std::size_t len = grid.block_len();
  for (std::size_t i = 0; i < grid.d; ++i) add_block(i, embedding.subspan(i * len, len));
}

void LinearSketch::process(std::size_t coord_index, double value) {
  const GridSpec& grid = family_->grid();
  if (coord_index >= grid.d) {
    throw ValidationError("stream item coordinate " + std::to_string(coord_index) +
                          " out of range for d = " + std::to_string(grid.d));
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError("stream item value must lie in [0, 1]");
  }
  if (seen_[coord_index]) {
    throw DuplicateCoordinateError("coordinate " + std::to_string(coord_index) +
                                   " delivered twice");
  }
  seen_[coord_index] = true;
  ++coords_seen_;
  if (value == 0.0) return;
  add_block(coord_index, embed_coordinate(grid, value));
}

void LinearSketch::require_compatible(const LinearSketch& other) const {
  if (!(header() == other.header())) {
    throw SketchMismatchError("sketches differ in parameters, seed or grid");
  }
}

LinearSketch& LinearSketch::operator+=(const LinearSketch& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] += other.counters_[i];
  for (std::size_t i = 0; i < seen_.size(); ++i) {
    if (other.seen_[i] && !seen_[i]) {
      seen_[i] = true;
      ++coords_seen_;
    }
  }
  return *this;
}

LinearSketch& LinearSketch::operator-=(const LinearSketch& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] -= other.counters_[i];
  return *this;
}

void LinearSketch::load(std::vector<double> counters, std::vector<bool> seen) {
  if (counters.size() != counters_.size() || seen.size() != seen_.size()) {
    throw DimensionError("stored sketch does not match its header");
  }
  counters_ = std::move(counters);
  seen_ = std::move(seen);
  coords_seen_ = static_cast<std::size_t>(std::count(seen_.begin(), seen_.end(), true));
}

LinearSketch new_sketch(DivergenceKind kind, std::size_t d, double eps_embed, double eps_l2,
                        double delta, std::uint64_t seed) {
  SketchParams params;
  params.kind = kind;
  params.d = d;
  params.eps_embed = eps_embed;
  params.eps_l2 = eps_l2;
  params.delta = delta;
  params.seed = seed;
  return LinearSketch(SketchFamily::create(params));
}

void process_item(LinearSketch& sketch, const AggregateItem& item) {
  sketch.process(item.coord_index, item.value);
}

double estimate_divergence(const LinearSketch& a, const LinearSketch& b) {
  if (!(a.header() == b.header())) {
    throw SketchMismatchError("cannot compare sketches with different parameters, seed or grid");
  }
  const std::size_t reps = a.family().reps();
  const std::size_t m = a.family().width();
  std::vector<double> per_rep(reps);
  const auto ca = a.counters();
  const auto cb = b.counters();
  for (std::size_t r = 0; r < reps; ++r) {
    double total = 0.0;
    for (std::size_t k = r * m; k < (r + 1) * m; ++k) {
      const double diff = ca[k] - cb[k];
      total += diff * diff;
    }
    per_rep[r] = total;
  }
  const std::size_t mid = reps / 2;
  std::nth_element(per_rep.begin(), per_rep.begin() + mid, per_rep.end());
  if (reps % 2 == 1) return per_rep[mid];
  const double upper = per_rep[mid];
  const double lower = *std::max_element(per_rep.begin(), per_rep.begin() + mid);
  return 0.5 * (lower + upper);
}

std::map<std::string, LinearSketch> replay_stream(std::span<const AggregateItem> items,
                                                  std::shared_ptr<const SketchFamily> family) {
  std::map<std::string, LinearSketch> sketches;
  for (const AggregateItem& item : items) {
    auto it = sketches.find(item.point_id);
    if (it == sketches.end()) it = sketches.emplace(item.point_id, LinearSketch(family)).first;
    it->second.process(item.coord_index, item.value);
  }
  return sketches;
}

std::vector<AggregateItem> to_items(const std::string& id, const Distribution& p) {
  std::vector<AggregateItem> items;
  items.reserve(p.d());
  for (std::size_t i = 0; i < p.d(); ++i) items.push_back({id, i, p[i]});
  return items;
}

}  // namespace infodiv
