#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "infodiv/dimred.hpp"
#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/errors.hpp"
#include "infodiv/io.hpp"
#include "infodiv/random.hpp"
#include "infodiv/sample_embed.hpp"
#include "infodiv/stream.hpp"
#include "manifest.hpp"
#include "verify.hpp"

namespace infodiv::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kInputFlags = {"input", "embeddings", "sketches"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t common_dimension(const std::vector<io::LabeledDistribution>& rows) {
  if (rows.empty()) throw ValidationError("input contains no distributions");
  const std::size_t d = rows.front().p.d();
  for (const auto& r : rows) {
    if (r.p.d() != d) {
      throw DimensionError("distribution '" + r.id + "' has " + std::to_string(r.p.d()) +
                           " coordinates, expected " + std::to_string(d));
    }
  }
  return d;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  io::write_file_atomic(path, writer);
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::size_t n = 10;
  std::size_t d = 8;
  std::string family = "uniform-dirichlet";
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<double> dirichlet(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.exponential();
  return v;
}

int cmd_gen(const GenOptions& o, std::ostream& out) {
  if (o.n == 0 || o.d == 0) throw ConfigError("gen: n and d must be at least 1");
  Rng rng(derive_seed(o.seed, "gen"));
  std::vector<io::LabeledDistribution> rows;
  rows.reserve(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    std::vector<double> v;
    if (o.family == "uniform-dirichlet") {
      v = dirichlet(rng, o.d);
    } else if (o.family == "sparse") {
      v = dirichlet(rng, o.d);
      std::vector<std::size_t> idx(o.d);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      const std::size_t zeros = std::min(o.d - 1, static_cast<std::size_t>(0.8 * o.d));
      for (std::size_t z = 0; z < zeros; ++z) {
        const std::size_t pick = z + rng.below(o.d - z);
        std::swap(idx[z], idx[pick]);
        v[idx[z]] = 0.0;
      }
    } else if (o.family == "corner-heavy") {
      v = dirichlet(rng, o.d);
      const double total = std::accumulate(v.begin(), v.end(), 0.0);
      for (auto& x : v) x *= 0.05 / total;
      v[rng.below(o.d)] += 0.95;
    } else {
      throw ConfigError("unknown family '" + o.family +
                        "' (expected uniform-dirichlet, sparse or corner-heavy)");
    }
    rows.push_back({"p" + std::to_string(i), validate(v, true)});
  }
  write_text(o.out, [&](std::ostream& s) { io::write_distributions(s, rows, io::format_for(o.out)); });
  out << "wrote " << o.n << " distributions on the " << o.d << "-simplex to " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- embed

struct EmbedOptions {
  std::string input;
  std::string kind = "js";
  std::string mode = "det";
  double eps = 0.1;
  std::size_t s = 1000;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::string out;
};

int cmd_embed(const EmbedOptions& o, std::ostream& out) {
  const auto rows = io::read_distributions(o.input, o.normalize);
  const std::size_t d = common_dimension(rows);
  io::EmbeddingHeader h;
  h.mode = o.mode;
  h.d = d;
  std::vector<io::EmbeddingRecord> records;
  records.reserve(rows.size());

  if (o.mode == "hellinger") {
    h.kind = DivergenceKind::Hellinger;
    h.layout = "sqrt";
    h.digest = fnv1a64("hellinger/" + std::to_string(d));
    h.dimension = d;
    for (const auto& r : rows) records.push_back({r.id, hellinger_embed(r.p)});
  } else if (o.mode == "det") {
    h.kind = parse_kind(o.kind);
    const auto grid = build_grid(h.kind, d, o.eps);
    h.eps = o.eps;
    h.J = grid.J;
    h.step = grid.step;
    h.layout = kDetLayout;
    h.digest = grid.digest();
    h.dimension = grid.dimension();
    for (const auto& r : rows) records.push_back({r.id, embed_point(grid, r.p).vector});
  } else if (o.mode == "rand") {
    h.kind = parse_kind(o.kind);
    if (2 * o.s * d > static_cast<std::size_t>(kMaxEmbeddingDimension)) {
      throw ConfigError("randomized embedding dimension 2*s*d exceeds the limit; reduce s");
    }
    const auto sample = draw_frequencies(h.kind, o.s, o.seed);
    h.s = o.s;
    h.seed = o.seed;
    h.rng_id = std::string(kRngId);
    h.layout = kRandLayout;
    h.digest = sample.digest();
    h.dimension = 2 * o.s * d;
    for (const auto& r : rows) records.push_back({r.id, rand_embed_point(sample, r.p).vector});
  } else {
    throw ConfigError("unknown mode '" + o.mode + "' (expected det, rand or hellinger)");
  }

  write_text(o.out, [&](std::ostream& s) { io::write_embeddings(s, h, records); });
  out << "dimension " << h.dimension << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- stream

struct StreamOptions {
  std::string input;
  bool from_distributions = false;
  bool shuffle = false;
  bool normalize = false;
  std::string kind = "js";
  std::size_t d = 0;
  double eps_embed = 0.05;
  double eps_l2 = 0.1;
  double delta = 0.05;
  double width_constant = 6.0;
  double reps_constant = 8.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_stream(const StreamOptions& o, std::ostream& out) {
  std::vector<AggregateItem> items;
  std::size_t d = o.d;
  if (o.from_distributions) {
    const auto rows = io::read_distributions(o.input, o.normalize);
    const std::size_t rd = common_dimension(rows);
    if (d == 0) d = rd;
    if (d != rd) throw DimensionError("--d does not match the input dimension");
    for (const auto& r : rows) {
      const auto part = to_items(r.id, r.p);
      items.insert(items.end(), part.begin(), part.end());
    }
    if (o.shuffle) {
      Rng rng(derive_seed(o.seed, "shuffle"));
      for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
    }
  } else {
    items = io::read_stream(o.input);
    if (d == 0) {
      for (const auto& it : items) d = std::max(d, it.coord_index + 1);
    }
    if (d == 0) throw ValidationError("cannot infer d from an empty stream; pass --d");
  }

  SketchParams params;
  params.kind = parse_kind(o.kind);
  params.d = d;
  params.eps_embed = o.eps_embed;
  params.eps_l2 = o.eps_l2;
  params.delta = o.delta;
  params.seed = o.seed;
  params.width_constant = o.width_constant;
  params.reps_constant = o.reps_constant;
  const auto family = SketchFamily::create(params);
  const auto sketches = replay_stream(items, family);

  write_text(o.out, [&](std::ostream& s) { io::write_sketches(s, *family, sketches); });
  out << "points " << sketches.size() << ", items " << items.size() << "\n"
      << "sketch " << family->reps() << " x " << family->width() << " = " << family->counter_count()
      << " counters per point (embedding dimension " << family->embedding_dimension() << ")\n";
  for (const auto& [id, sk] : sketches) {
    if (!sk.complete()) {
      out << "incomplete: " << id << " (" << sk.coords_seen() << " of " << d << " coordinates)\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::string sketches;
  std::string out;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
  std::istringstream in(io::read_file(o.sketches));
  const auto file = io::read_sketches(in);
  std::vector<const std::pair<const std::string, LinearSketch>*> all;
  for (const auto& entry : file.sketches) all.push_back(&entry);
  auto write = [&](std::ostream& s) {
    s << "id_a,id_b,estimate,complete\n";
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        const bool complete = all[i]->second.complete() && all[j]->second.complete();
        s << all[i]->first << ',' << all[j]->first << ','
          << fmt(estimate_divergence(all[i]->second, all[j]->second)) << ','
          << (complete ? "true" : "false") << '\n';
      }
    }
  };
  if (o.out.empty()) {
    write(out);
  } else {
    write_text(o.out, write);
    out << "wrote " << all.size() * (all.size() - 1) / 2 << " estimates to " << o.out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string input;
  std::string kind = "js";
  std::string embeddings;
  std::string sketches;
  bool normalize = false;
  std::string out;
};

struct Estimator {
  std::function<double(const std::string&, const std::string&)> estimate;
  std::function<bool(double exact, double estimate)> within;
  std::string abs_bound;
  std::string rel_bound;
  double allowed_failure_fraction = 0.0;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  if (o.embeddings.empty() == o.sketches.empty()) {
    throw ConfigError("eval needs exactly one of --embeddings or --sketches");
  }
  const auto kind = parse_kind(o.kind);
  const auto rows = io::read_distributions(o.input, o.normalize);
  common_dimension(rows);

  Estimator est;
  std::map<std::string, std::vector<double>> vectors;
  io::SketchFile sketch_file;
  if (!o.embeddings.empty()) {
    std::istringstream in(io::read_file(o.embeddings));
    auto [header, records] = io::read_embeddings(in);
    if (header.kind != kind) {
      throw SketchMismatchError("embeddings are for " + std::string(to_string(header.kind)) +
                                ", not " + std::string(to_string(kind)));
    }
    for (auto& r : records) vectors[r.id] = std::move(r.vector);
    est.estimate = [&vectors](const std::string& a, const std::string& b) {
      return l22_distance(vectors.at(a), vectors.at(b));
    };
    if (header.mode == "det") {
      const double eps = header.eps;
      est.within = [eps](double exact, double e) { return std::abs(e - exact) <= eps + 1e-12; };
      est.abs_bound = fmt(eps);
    } else if (header.mode == "hellinger") {
      est.within = [](double exact, double e) { return std::abs(e - exact) <= 1e-9; };
      est.abs_bound = "1e-09";
    } else {
      est.within = [](double, double) { return true; };
    }
  } else {
    std::istringstream in(io::read_file(o.sketches));
    sketch_file = io::read_sketches(in);
    const auto& sh = sketch_file.family->header();
    if (sh.kind != kind) {
      throw SketchMismatchError("sketches are for " + std::string(to_string(sh.kind)) + ", not " +
                                std::string(to_string(kind)));
    }
    const double el2 = sh.eps_l2, eemb = sh.eps_embed;
    est.estimate = [&sketch_file](const std::string& a, const std::string& b) {
      return estimate_divergence(sketch_file.sketches.at(a), sketch_file.sketches.at(b));
    };
    est.within = [el2, eemb](double exact, double e) {
      return std::abs(e - exact) <= el2 * (exact + eemb) + eemb;
    };
    est.abs_bound = fmt(eemb);
    est.rel_bound = fmt(el2);
    est.allowed_failure_fraction = 0.1;
  }

  for (const auto& r : rows) {
    const bool present = o.embeddings.empty() ? sketch_file.sketches.count(r.id) > 0
                                              : vectors.count(r.id) > 0;
    if (!present) throw SketchMismatchError("no embedding or sketch for point '" + r.id + "'");
  }

  std::size_t pairs = 0, failures = 0;
  double max_abs = 0, sum_abs = 0, max_rel = 0, sum_rel = 0;
  std::ostringstream table;
  table << "id_a,id_b,exact,estimate,abs_error,rel_error,within_bound\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double exact = divergence(kind, rows[i].p, rows[j].p);
      const double e = est.estimate(rows[i].id, rows[j].id);
      const double abs_err = std::abs(e - exact);
      const double rel_err = exact > 0 ? abs_err / exact
                                       : (abs_err == 0 ? 0.0 : std::numeric_limits<double>::infinity());
      const bool ok = est.within(exact, e);
      ++pairs;
      if (!ok) ++failures;
      max_abs = std::max(max_abs, abs_err);
      sum_abs += abs_err;
      max_rel = std::max(max_rel, rel_err);
      sum_rel += rel_err;
      table << rows[i].id << ',' << rows[j].id << ',' << fmt(exact) << ',' << fmt(e) << ','
            << fmt(abs_err) << ',' << fmt(rel_err) << ',' << (ok ? "true" : "false") << '\n';
    }
  }
  const double mean_abs = pairs ? sum_abs / pairs : 0.0;
  const double mean_rel = pairs ? sum_rel / pairs : 0.0;
  const bool violation =
      pairs > 0 && static_cast<double>(failures) > est.allowed_failure_fraction * static_cast<double>(pairs);
  table << "summary,max,,," << fmt(max_abs) << ',' << fmt(max_rel) << ','
        << (violation ? "false" : "true") << '\n';
  table << "summary,mean,,," << fmt(mean_abs) << ',' << fmt(mean_rel) << ",\n";
  table << "summary,bound,,," << est.abs_bound << ',' << est.rel_bound << ',' << failures << '\n';

  write_text(o.out, [&](std::ostream& s) { s << table.str(); });
  out << "pairs " << pairs << ", max abs error " << fmt(max_abs) << ", mean abs error "
      << fmt(mean_abs) << ", max rel error " << fmt(max_rel) << "\n"
      << "rows outside bound " << failures << (violation ? " (VIOLATION)" : "") << "\n";
  return violation ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------- reduce

struct ReduceCliOptions {
  std::string input;
  std::string kind = "hellinger";
  double eps = 0.25;
  std::uint64_t seed = 0;
  double c0 = 0.1;
  double c_jl = 16.0;
  std::string mode = "auto";
  std::size_t samples = 2048;
  std::size_t calibration_pairs = 1000;
  bool normalize = false;
  std::string out;
};

EmbedMode parse_mode(const std::string& m) {
  if (m == "auto") return EmbedMode::Auto;
  if (m == "exact") return EmbedMode::Exact;
  if (m == "det") return EmbedMode::DetBudget;
  if (m == "rand") return EmbedMode::Randomized;
  throw ConfigError("unknown reduce mode '" + m + "' (expected auto, exact, det or rand)");
}

int cmd_reduce(const ReduceCliOptions& o, std::ostream& out) {
  const auto kind = parse_kind(o.kind);
  const auto rows = io::read_distributions(o.input, o.normalize);
  common_dimension(rows);
  std::vector<Distribution> points;
  std::vector<std::string> ids;
  for (const auto& r : rows) {
    points.push_back(r.p);
    ids.push_back(r.id);
  }
  ReduceOptions opts;
  opts.c0 = o.c0;
  opts.c_jl = o.c_jl;
  opts.mode = parse_mode(o.mode);
  opts.samples = o.samples;
  opts.calibration_pairs = o.calibration_pairs;
  const auto reduced = reduce(kind, points, o.eps, o.seed, opts);

  std::ostringstream audit;
  audit << "id_a,id_b,before,after,ratio\n";
  std::size_t pairs = 0, inside = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double before = divergence(kind, points[i], points[j]);
      const double after = divergence(kind, reduced.points[i], reduced.points[j]);
      const double ratio = before > 0 ? after / (reduced.divergence_scale * before)
                                      : (after == 0 ? 1.0 : std::numeric_limits<double>::infinity());
      audit << ids[i] << ',' << ids[j] << ',' << fmt(before) << ',' << fmt(after) << ',' << fmt(ratio)
            << '\n';
      ++pairs;
      if (std::abs(ratio - 1.0) <= o.eps) ++inside;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }

  write_text(o.out, [&](std::ostream& s) { io::write_reduced(s, reduced, ids); });
  const fs::path audit_path = o.out + ".audit.csv";
  write_text(audit_path, [&](std::ostream& s) { s << audit.str(); });
  out << "k " << reduced.k << " (points on " << reduced.k + 1 << " coordinates), radius "
      << fmt(reduced.radius) << ", beta " << fmt(reduced.geometric_scale) << ", divergence scale "
      << fmt(reduced.divergence_scale) << "\n"
      << "ratio range [" << fmt(lo) << ", " << fmt(hi) << "], " << inside << " of " << pairs
      << " pairs within 1 +/- " << o.eps << "\n"
      << "audit table " << audit_path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- manifest plumbing

RunManifest capture(const CLI::App& sub, std::uint64_t seed) {
  RunManifest m;
  m.command = sub.get_name();
  m.seed = seed;
  m.tool_version = tool_version();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || opt->count() == 0) continue;
    const auto& results = opt->results();
    m.params[name] = results.empty() ? "true" : results.back();
    if (kInputFlags.count(name) && !results.empty()) {
      m.input_digests[results.back()] = file_digest(results.back());
    }
  }
  return m;
}

void write_manifest(const RunManifest& m, const std::string& out) {
  if (out.empty()) return;
  const auto text = m.to_json();
  io::write_file_atomic(manifest_path(out), [&](std::ostream& s) { s << text; });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral embeddings, streaming sketches and simplex-preserving dimensionality "
               "reduction for information divergences"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(0, 1);

  std::string manifest_file, replay_out;
  app.add_option("--manifest", manifest_file, "Replay the run recorded in a manifest file")
      ->check(CLI::ExistingFile);
  app.add_option("--replay-out", replay_out, "Output path for the replayed run (default: original)");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic dataset of distributions");
  g->add_option("--n", gen.n, "Number of distributions")->capture_default_str();
  g->add_option("--d", gen.d, "Dimension")->capture_default_str();
  g->add_option("--family", gen.family, "uniform-dirichlet, sparse or corner-heavy")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output file (.csv or .jsonl)")->required();

  EmbedOptions emb;
  auto* e = app.add_subcommand("embed", "Embed distributions into l2^2");
  e->add_option("--input", emb.input, "Distribution file")->required()->check(CLI::ExistingFile);
  e->add_option("--kind", emb.kind, "js or chi2")->capture_default_str();
  e->add_option("--mode", emb.mode, "det, rand or hellinger")->capture_default_str();
  e->add_option("--eps", emb.eps, "Additive error of the deterministic embedding")->capture_default_str();
  e->add_option("--s", emb.s, "Frequency samples of the randomized embedding")->capture_default_str();
  e->add_option("--seed", emb.seed, "Random seed (rand mode)")->capture_default_str();
  e->add_flag("--normalize", emb.normalize, "Rescale rows to sum to one");
  e->add_option("--out", emb.out, "Embedding file")->required();

  StreamOptions st;
  auto* s = app.add_subcommand("stream", "Replay an aggregate stream into linear sketches");
  s->add_option("--input", st.input, "Stream file (id,i,v) or, with --from-distributions, a dataset")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_flag("--from-distributions", st.from_distributions, "Input is a distribution file");
  s->add_flag("--shuffle", st.shuffle, "Shuffle the items of a distribution file (seeded)");
  s->add_flag("--normalize", st.normalize, "Rescale rows to sum to one");
  s->add_option("--kind", st.kind, "js or chi2")->capture_default_str();
  s->add_option("--d", st.d, "Dimension (default: inferred)");
  s->add_option("--eps-embed", st.eps_embed, "Additive error of the embedding")->capture_default_str();
  s->add_option("--eps-l2", st.eps_l2, "Relative error of the sketch")->capture_default_str();
  s->add_option("--delta", st.delta, "Failure probability")->capture_default_str();
  s->add_option("--width-constant", st.width_constant, "m = ceil(c / eps_l2^2)")->capture_default_str();
  s->add_option("--reps-constant", st.reps_constant, "R = ceil(c ln(1/delta))")->capture_default_str();
  s->add_option("--seed", st.seed, "Hash seed")->capture_default_str();
  s->add_option("--out", st.out, "Sketch file (.jsonl)")->required();

  EstimateOptions es;
  auto* t = app.add_subcommand("estimate", "Estimate pairwise divergences from sketches");
  t->add_option("--sketches", es.sketches, "Sketch file")->required()->check(CLI::ExistingFile);
  t->add_option("--out", es.out, "CSV output (default: stdout)");

  EvalOptions ev;
  auto* v = app.add_subcommand("eval", "Compare embeddings or sketches against exact divergences");
  v->add_option("--input", ev.input, "Distribution file")->required()->check(CLI::ExistingFile);
  v->add_option("--kind", ev.kind, "js, chi2 or hellinger")->capture_default_str();
  v->add_option("--embeddings", ev.embeddings, "Embedding file")->check(CLI::ExistingFile);
  v->add_option("--sketches", ev.sketches, "Sketch file")->check(CLI::ExistingFile);
  v->add_flag("--normalize", ev.normalize, "Rescale rows to sum to one");
  v->add_option("--out", ev.out, "Error-table CSV")->required();

  ReduceCliOptions rd;
  auto* r = app.add_subcommand("reduce", "Reduce the dimension of the simplex");
  r->add_option("--input", rd.input, "Distribution file")->required()->check(CLI::ExistingFile);
  r->add_option("--kind", rd.kind, "hellinger, js or chi2")->capture_default_str();
  r->add_option("--eps", rd.eps, "Target distortion")->capture_default_str();
  r->add_option("--seed", rd.seed, "Random seed")->capture_default_str();
  r->add_option("--c0", rd.c0, "Initial ball constant")->capture_default_str();
  r->add_option("--c-jl", rd.c_jl, "JL constant")->capture_default_str();
  r->add_option("--mode", rd.mode, "auto, exact, det or rand")->capture_default_str();
  r->add_option("--samples", rd.samples, "Frequencies for rand mode")->capture_default_str();
  r->add_option("--calibration-pairs", rd.calibration_pairs, "Pairs per radius check")
      ->capture_default_str();
  r->add_flag("--normalize", rd.normalize, "Rescale rows to sum to one");
  r->add_option("--out", rd.out, "Reduced point file (.jsonl)")->required();

  std::uint64_t verify_seed = 0;
  auto* vf = app.add_subcommand("verify", "Run the built-in invariant checks");
  vf->add_option("--seed", verify_seed, "Random seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!manifest_file.empty()) {
      if (!app.get_subcommands().empty()) {
        err << "error: --manifest cannot be combined with a subcommand\n";
        return kExitUsage;
      }
      const auto m = RunManifest::from_json(io::read_file(manifest_file));
      for (const auto& [path, digest] : m.input_digests) {
        if (file_digest(path) != digest) {
          throw ValidationError("input '" + path + "' changed since the manifest was written");
        }
      }
      auto replay = m;
      if (!replay_out.empty()) replay.params["out"] = replay_out;
      return run(replay.to_args(), out, err);
    }
    if (app.get_subcommands().empty()) {
      out << app.help();
      return kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    int code = kExitOk;
    std::string primary;
    std::uint64_t seed = 0;
    if (name == "gen") {
      code = cmd_gen(gen, out);
      primary = gen.out;
      seed = gen.seed;
    } else if (name == "embed") {
      code = cmd_embed(emb, out);
      primary = emb.out;
      seed = emb.seed;
    } else if (name == "stream") {
      code = cmd_stream(st, out);
      primary = st.out;
      seed = st.seed;
    } else if (name == "estimate") {
      code = cmd_estimate(es, out);
      primary = es.out;
    } else if (name == "eval") {
      code = cmd_eval(ev, out);
      primary = ev.out;
    } else if (name == "reduce") {
      code = cmd_reduce(rd, out);
      primary = rd.out;
      seed = rd.seed;
    } else if (name == "verify") {
      return run_verify(verify_seed, out) == 0 ? kExitOk : kExitViolation;
    }
    write_manifest(capture(*sub, seed), primary);
    return code;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace infodiv::cli
