#include "amann/cli.hpp"

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <variant>

#include "amann/baselines.hpp"
#include "amann/bounds.hpp"
#include "amann/collection.hpp"
#include "amann/csv.hpp"
#include "amann/error.hpp"
#include "amann/experiments.hpp"
#include "amann/generate.hpp"
#include "amann/index.hpp"
#include "amann/index_io.hpp"
#include "amann/kernels.hpp"
#include "amann/recall.hpp"
#include "amann/rng.hpp"

#ifndef AMANN_GIT_DESCRIBE
#define AMANN_GIT_DESCRIBE "unknown"
#endif

namespace amann {

namespace {

constexpr const char* kVersion = "1.0.0";

// Seed streams split off the user seed, one per randomized stage.
constexpr std::uint64_t kAllocationStream = 0;
constexpr std::uint64_t kAnchorStream = 1;
constexpr std::uint64_t kHybridStream = 2;

struct Globals {
  int threads = 0;
  bool deterministic = false;
};

struct InputArgs {
  std::string base;
  std::string queries;
  std::string format;
  std::uint32_t dim = 0;
  bool csv_header = false;
  std::uint32_t skip_leading = 0;
  std::uint32_t skip_trailing = 0;
  bool no_preprocess = false;
  std::uint64_t base_limit = 0;
  std::uint64_t query_limit = 0;
};

struct GenArgs {
  std::string variant;
  std::uint32_t d = 0;
  double c = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
};

struct BuildArgs {
  std::string variant;
  InputArgs input;
  std::uint32_t q = 0;
  std::string allocation = "random";
  std::string rule = "sum";
  std::uint64_t max_class_size = 0;
  std::uint32_t rs_r = 0;
  std::uint32_t hybrid_r = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct QueryArgs {
  std::string index;
  std::string variant;
  InputArgs input;
  std::string method = "am";
  std::uint32_t p = 1;
  std::uint32_t a = 1;
  std::string out;
};

struct SyntheticArgs {
  std::string variant;
  std::string sweep = "auto";
  std::vector<std::uint32_t> d;
  double c = 0;
  std::vector<std::uint64_t> k;
  std::vector<std::uint32_t> q;
  std::uint64_t n = 0;
  std::vector<double> exponents;
  bool k_over_ten = false;
  double alpha = 1.0;
  std::string rule = "sum";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  bool reuse_database = false;
  std::string out;
};

struct RecallArgs {
  std::string variant;
  InputArgs input;
  std::string gt;
  std::uint32_t q = 0;
  std::vector<std::string> allocations{"random", "greedy"};
  std::string rule = "sum";
  std::vector<std::uint32_t> p;
  std::uint64_t max_class_size = 0;
  std::vector<std::uint32_t> rs_r;
  std::vector<std::uint32_t> rs_a;
  std::uint32_t hybrid_r = 0;
  std::uint32_t hybrid_a = 1;
  std::uint64_t seed = 0;
  std::string out;
};

struct BoundArgs {
  std::string regime;
  double d = 0, k = 0, q = 0;
  double alpha = 1.0;
  std::string branch = "A";
  bool report = false;
};

struct InspectArgs {
  std::string index;
};

Variant variant_of(const std::string& name) { return parse_variant(name); }

FileFormat infer_format(const std::string& path, const std::string& explicit_format) {
  if (!explicit_format.empty()) return parse_format(explicit_format);
  std::string p = path;
  if (p.size() > 3 && p.ends_with(".gz")) p.resize(p.size() - 3);
  if (p.ends_with(".fvecs")) return FileFormat::kFvecs;
  if (p.ends_with(".bvecs")) return FileFormat::kBvecs;
  if (p.ends_with(".csv")) return FileFormat::kCsv;
  if (p.ends_with("ubyte") || p.ends_with(".idx")) return FileFormat::kMnist;
  throw ParameterError("cannot infer the format of '" + path + "'; pass --format");
}

LoadOptions load_options(Variant variant, const InputArgs& in, const std::string& path) {
  LoadOptions opt;
  opt.variant = variant;
  opt.format = infer_format(path, in.format);
  opt.dim = in.dim;
  opt.csv = {in.csv_header, in.skip_leading, in.skip_trailing};
  return opt;
}

void add_input_options(CLI::App* sub, InputArgs& in, bool with_queries) {
  sub->add_option("--base", in.base, "Stored vectors")->required();
  if (with_queries) sub->add_option("--queries", in.queries, "Query vectors (default: --base)");
  sub->add_option("--format", in.format, "fvecs, bvecs, mnist or csv (default: from extension)");
  sub->add_option("--dim", in.dim, "Vector dimension of CSV input");
  sub->add_flag("--csv-header", in.csv_header, "CSV input starts with a header row");
  sub->add_option("--skip-leading", in.skip_leading, "CSV columns before the vector");
  sub->add_option("--skip-trailing", in.skip_trailing, "CSV columns after the vector");
  sub->add_flag("--no-preprocess", in.no_preprocess,
                "Skip centering and unit normalization of real vectors");
  sub->add_option("--base-limit", in.base_limit, "Keep only the first N stored vectors");
  if (with_queries) sub->add_option("--query-limit", in.query_limit, "Keep only the first N queries");
}

template <class P>
void truncate(std::vector<P>& v, std::uint64_t limit) {
  if (limit > 0 && v.size() > limit) v.resize(limit);
}

// Loaded base and query sets of one variant, preprocessed when real.
template <Pattern P>
struct Loaded {
  std::vector<P> base;
  std::vector<P> queries;
  bool queries_are_base = false;
};

template <Pattern P>
std::vector<P> load_as(const std::string& path, const LoadOptions& opt) {
  auto c = load_collection(path, opt);
  return std::move(std::get<std::vector<P>>(c));
}

template <Pattern P>
Loaded<P> load_sets(Variant variant, const InputArgs& in, bool with_queries) {
  Loaded<P> out;
  out.base = load_as<P>(in.base, load_options(variant, in, in.base));
  truncate(out.base, in.base_limit);
  if (with_queries && !in.queries.empty()) {
    out.queries = load_as<P>(in.queries, load_options(variant, in, in.queries));
  } else if (with_queries) {
    out.queries = out.base;
    out.queries_are_base = true;
  }
  truncate(out.queries, in.query_limit);
  const std::uint32_t dim = out.base.front().dim();
  for (const auto& x : out.base) {
    if (x.dim() != dim) throw DataError("stored vectors do not share one dimension");
  }
  for (const auto& x : out.queries) {
    if (x.dim() != dim) {
      throw DataError("query dimension " + std::to_string(x.dim()) +
                      " differs from stored dimension " + std::to_string(dim));
    }
  }
  if constexpr (std::is_same_v<P, RealPattern>) {
    if (!in.no_preprocess) {
      auto [b, q] = preprocess_center_normalize(out.base, out.queries);
      out.base = std::move(b);
      out.queries = std::move(q);
    }
  }
  return out;
}

template <class F>
decltype(auto) dispatch(Variant variant, F&& f) {
  switch (variant) {
    case Variant::kSparse: return f(SparsePattern{});
    case Variant::kDense: return f(DensePattern{});
    case Variant::kReal: break;
  }
  return f(RealPattern{});
}

Allocation make_allocation(const std::string& kind, const auto& patterns, std::uint32_t q,
                           Rule rule, std::uint64_t seed, std::uint64_t max_class_size) {
  using P = typename std::decay_t<decltype(patterns)>::value_type;
  const std::uint64_t alloc_seed = derive_seed(seed, kAllocationStream);
  if (kind == "random") return allocate_random(patterns.size(), q, alloc_seed);
  if (kind == "greedy") {
    std::optional<std::uint64_t> cap;
    if (max_class_size > 0) cap = max_class_size;
    return allocate_greedy(std::span<const P>(patterns), q, rule, alloc_seed, cap);
  }
  throw ParameterError("unknown allocation '" + kind + "'");
}

class Session {
 public:
  Session(std::span<const std::string> args, std::ostream& out, std::ostream& err)
      : args_(args), out_(out), err_(err) {}

  int run();

 private:
  void setup();
  Provenance provenance(std::optional<std::uint64_t> seed) const;
  void emit_csv(const std::string& path, std::optional<std::uint64_t> seed,
                const CsvTable& table);

  int cmd_gen();
  int cmd_build();
  int cmd_query();
  int cmd_bench_synthetic();
  int cmd_bench_recall();
  int cmd_bound();
  int cmd_inspect();

  template <Pattern P>
  int build_impl();
  template <Pattern P>
  int query_impl();
  template <Pattern P>
  int recall_impl();
  template <Pattern P>
  int inspect_impl(std::span<const std::uint8_t> bytes);

  std::span<const std::string> args_;
  std::ostream& out_;
  std::ostream& err_;

  CLI::App app_{"Associative-memory class filtering for nearest neighbor search", "amann"};
  CLI::App* active_ = nullptr;
  Globals globals_;
  GenArgs gen_;
  BuildArgs build_;
  QueryArgs query_;
  SyntheticArgs synth_;
  RecallArgs recall_;
  BoundArgs bound_;
  InspectArgs inspect_;
  CLI::App* gen_cmd_ = nullptr;
  CLI::App* build_cmd_ = nullptr;
  CLI::App* query_cmd_ = nullptr;
  CLI::App* synth_cmd_ = nullptr;
  CLI::App* recall_cmd_ = nullptr;
  CLI::App* bound_cmd_ = nullptr;
  CLI::App* inspect_cmd_ = nullptr;
};

void Session::setup() {
  app_.option_defaults()->always_capture_default();
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.allow_config_extras(CLI::config_extras_mode::error);
  app_.set_config("--config", "", "TOML or INI file of option values (flags override it)");
  app_.add_option("--threads", globals_.threads, "Worker thread cap (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app_.add_flag("--deterministic", globals_.deterministic,
                "Leave the timestamp out of CSV provenance");
  app_.add_flag_callback(
      "--version", [this] { throw CLI::CallForVersion(std::string("amann ") + kVersion, 0); },
      "Print the version");

  const auto variants = CLI::IsMember({"sparse", "dense", "real"});
  const auto binary_variants = CLI::IsMember({"sparse", "dense"});
  const auto rules = CLI::IsMember({"sum", "max", "cooccurrence"});

  gen_cmd_ = app_.add_subcommand("gen", "Generate random sparse or dense patterns");
  gen_cmd_->add_option("--variant", gen_.variant)->required()->check(binary_variants);
  gen_cmd_->add_option("--d", gen_.d, "Dimension")->required()->check(CLI::PositiveNumber);
  gen_cmd_->add_option("--c", gen_.c, "Expected ones per sparse pattern");
  gen_cmd_->add_option("--n", gen_.n, "Pattern count")->required()->check(CLI::PositiveNumber);
  gen_cmd_->add_option("--seed", gen_.seed)->required();
  gen_cmd_->add_option("--out", gen_.out, "Output file")->required();
  gen_cmd_->add_option("--format", gen_.format, "csv or fvecs (default: from extension)");

  build_cmd_ = app_.add_subcommand("build", "Partition a collection and write an index file");
  build_cmd_->add_option("--variant", build_.variant)->required()->check(variants);
  add_input_options(build_cmd_, build_.input, false);
  build_cmd_->add_option("--q", build_.q, "Class count (0: anchor sections only)");
  build_cmd_->add_option("--allocation", build_.allocation)
      ->check(CLI::IsMember({"random", "greedy"}));
  build_cmd_->add_option("--rule", build_.rule)->check(rules);
  build_cmd_->add_option("--max-class-size", build_.max_class_size, "Greedy size cap (0: none)");
  build_cmd_->add_option("--rs-r", build_.rs_r, "Anchors of a whole-collection RS section");
  build_cmd_->add_option("--hybrid-r", build_.hybrid_r, "Anchors per class for hybrid search");
  build_cmd_->add_option("--seed", build_.seed)->required();
  build_cmd_->add_option("--out", build_.out, "Index file")->required();

  query_cmd_ = app_.add_subcommand("query", "Search an index for each query vector");
  query_cmd_->add_option("--index", query_.index)->required();
  query_cmd_->add_option("--variant", query_.variant, "Must match the index (default: from it)")
      ->check(variants);
  add_input_options(query_cmd_, query_.input, true);
  query_cmd_->add_option("--method", query_.method)->check(CLI::IsMember({"am", "rs", "hybrid"}));
  query_cmd_->add_option("--p", query_.p, "Probed classes")->check(CLI::PositiveNumber);
  query_cmd_->add_option("--a", query_.a, "Probed anchors")->check(CLI::PositiveNumber);
  query_cmd_->add_option("--out", query_.out, "CSV output (default: stdout)");

  synth_cmd_ = app_.add_subcommand("bench-synthetic", "Monte-Carlo error rate sweeps");
  synth_cmd_->add_option("--variant", synth_.variant)->required()->check(binary_variants);
  synth_cmd_->add_option("--sweep", synth_.sweep, "auto, k, q, fixed-n or d")
      ->check(CLI::IsMember({"auto", "k", "q", "fixed-n", "d"}));
  synth_cmd_->add_option("--d", synth_.d, "Dimension (a list for the d sweep)")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  synth_cmd_->add_option("--c", synth_.c, "Expected ones (d sweep default: ceil(log2 d))");
  synth_cmd_->add_option("--k", synth_.k, "Class sizes")->delimiter(',')->check(CLI::PositiveNumber);
  synth_cmd_->add_option("--q", synth_.q, "Class counts")->delimiter(',')->check(CLI::PositiveNumber);
  synth_cmd_->add_option("--n", synth_.n, "Fixed collection size (fixed-n sweep)");
  synth_cmd_->add_option("--exponents", synth_.exponents, "k = d^a for each a (d sweep)")
      ->delimiter(',');
  synth_cmd_->add_flag("--k-over-ten", synth_.k_over_ten, "d sweep uses k = d^a / 10");
  synth_cmd_->add_option("--alpha", synth_.alpha, "Query overlap in (0, 1]");
  synth_cmd_->add_option("--rule", synth_.rule)->check(rules);
  synth_cmd_->add_option("--trials", synth_.trials)->check(CLI::PositiveNumber);
  synth_cmd_->add_option("--seed", synth_.seed)->required();
  synth_cmd_->add_flag("--reuse-database", synth_.reuse_database,
                       "One database for all trials of a point");
  synth_cmd_->add_option("--out", synth_.out, "CSV output (default: stdout)");

  recall_cmd_ = app_.add_subcommand("bench-recall", "Recall@1 against relative complexity");
  recall_cmd_->add_option("--variant", recall_.variant)->required()->check(variants);
  add_input_options(recall_cmd_, recall_.input, true);
  recall_cmd_->add_option("--gt", recall_.gt, "ivecs ground truth (default: exhaustive search)");
  recall_cmd_->add_option("--q", recall_.q, "Class count")->check(CLI::PositiveNumber);
  recall_cmd_->add_option("--allocation", recall_.allocations, "random and/or greedy")
      ->delimiter(',')
      ->check(CLI::IsMember({"random", "greedy"}));
  recall_cmd_->add_option("--rule", recall_.rule)->check(rules);
  recall_cmd_->add_option("--p", recall_.p, "Probed classes (default: 1..q)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  recall_cmd_->add_option("--max-class-size", recall_.max_class_size, "Greedy size cap");
  recall_cmd_->add_option("--rs-r", recall_.rs_r, "Anchor counts of the RS baseline (none: skip)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  recall_cmd_->add_option("--rs-a", recall_.rs_a, "Probed anchors (default: powers of two)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  recall_cmd_->add_option("--hybrid-r", recall_.hybrid_r, "Anchors per class (0: skip)");
  recall_cmd_->add_option("--hybrid-a", recall_.hybrid_a, "Probed anchors per class")
      ->check(CLI::PositiveNumber);
  recall_cmd_->add_option("--seed", recall_.seed)->required();
  recall_cmd_->add_option("--out", recall_.out, "CSV output (default: stdout)");

  bound_cmd_ = app_.add_subcommand("bound", "Evaluate the closed-form error bounds");
  bound_cmd_->add_option("--regime", bound_.regime,
                         "sparse-exact, sparse-corrupted, dense-exact or dense-corrupted");
  bound_cmd_->add_option("--d", bound_.d)->required()->check(CLI::PositiveNumber);
  bound_cmd_->add_option("--k", bound_.k)->required()->check(CLI::PositiveNumber);
  bound_cmd_->add_option("--q", bound_.q)->required()->check(CLI::PositiveNumber);
  bound_cmd_->add_option("--alpha", bound_.alpha);
  bound_cmd_->add_option("--branch", bound_.branch, "Dense form A or B")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));
  bound_cmd_->add_flag("--report", bound_.report, "Print ratios and every bound");

  inspect_cmd_ = app_.add_subcommand("inspect", "Summarize an index file");
  inspect_cmd_->add_option("--index", inspect_.index)->required();
}

std::string now_utc() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

Provenance Session::provenance(std::optional<std::uint64_t> seed) const {
  Provenance p;
  p.tool_version = kVersion;
  p.seed = seed;
  p.git_describe = AMANN_GIT_DESCRIBE;
  std::string resolved = std::string("deterministic=") + (globals_.deterministic ? "true" : "false") + "\n";
  for (const CLI::Option* opt : active_->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else if (opt->get_expected_min() == 0) {
      value = "false";
    } else {
      value = opt->get_default_str();
    }
    resolved += name + "=" + value + "\n";
  }
  p.resolved_config = resolved;
  if (const CLI::Option* cfg = app_.get_config_ptr(); cfg && cfg->count() > 0) {
    const std::string path = cfg->as<std::string>();
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    p.config_file = fmt::format("{} (fnv1a {:016x})", path, fnv1a64(text.str()));
  }
  // --threads never changes results, so it is left out of the record.
  std::string argv;
  for (std::size_t i = 1; i < args_.size(); ++i) {
    if (args_[i] == "--threads") {
      ++i;
      continue;
    }
    if (args_[i].starts_with("--threads=")) continue;
    argv += (argv.empty() ? "" : " ") + args_[i];
  }
  p.argv = argv;
  if (!globals_.deterministic) p.timestamp = now_utc();
  return p;
}

void Session::emit_csv(const std::string& path, std::optional<std::uint64_t> seed,
                       const CsvTable& table) {
  const Provenance p = provenance(seed);
  if (path.empty()) {
    write_csv(out_, p, table);
    return;
  }
  std::ostringstream buffer;
  write_csv(buffer, p, table);
  const std::string text = buffer.str();
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

int Session::cmd_gen() {
  const Variant variant = variant_of(gen_.variant);
  FileFormat format;
  if (!gen_.format.empty()) {
    format = parse_format(gen_.format);
  } else {
    format = infer_format(gen_.out, "");
  }
  GeneratorConfig cfg{gen_.d, gen_.c, gen_.n, gen_.seed};
  if (variant == Variant::kSparse) {
    save_collection(gen_.out, gen_sparse_patterns(cfg), format);
  } else {
    save_collection(gen_.out, gen_dense_patterns(cfg), format);
  }
  return kExitOk;
}

template <Pattern P>
int Session::build_impl() {
  const Variant variant = variant_of(build_.variant);
  auto sets = load_sets<P>(variant, build_.input, false);
  const Rule rule = parse_rule(build_.rule);
  StoredIndex<P> stored;
  stored.dim = sets.base.front().dim();
  stored.n = sets.base.size();
  stored.rule = rule;
  const std::span<const P> base(sets.base);
  if (build_.q == 0 && build_.rs_r == 0) {
    throw ParameterError("build needs --q >= 1 or an anchor section (--rs-r)");
  }
  if (build_.hybrid_r > 0 && build_.q == 0) throw ParameterError("--hybrid-r needs --q >= 1");
  if (build_.q > 0) {
    auto allocation =
        make_allocation(build_.allocation, sets.base, build_.q, rule, build_.seed, build_.max_class_size);
    if (build_.hybrid_r > 0) {
      auto hybrid = hybrid_build(base, std::move(allocation), rule, build_.hybrid_r,
                                 derive_seed(build_.seed, kHybridStream));
      for (std::uint32_t c = 0; c < hybrid.inner.size(); ++c) {
        stored.sections.push_back({c, std::move(hybrid.inner[c])});
      }
      stored.classes.emplace(std::move(hybrid.outer));
    } else {
      stored.classes.emplace(build_index(base, std::move(allocation), rule));
    }
  }
  if (build_.rs_r > 0) {
    stored.sections.push_back(
        {kGlobalScope, rs_build(base, build_.rs_r, derive_seed(build_.seed, kAnchorStream))});
  }
  save_index(build_.out, stored);
  err_ << "wrote " << build_.out << ": n=" << stored.n << " d=" << stored.dim
       << " q=" << build_.q << " sections=" << stored.sections.size() << '\n';
  return kExitOk;
}

int Session::cmd_build() {
  return dispatch(variant_of(build_.variant), [&](auto tag) {
    return build_impl<decltype(tag)>();
  });
}

template <Pattern P>
int Session::query_impl() {
  const auto stored = load_index<P>(query_.index);
  const Variant variant = PatternTraits<P>::kVariant;
  auto sets = load_sets<P>(variant, query_.input, true);
  if (sets.base.size() != stored.n || sets.base.front().dim() != stored.dim) {
    throw DataError("stored vectors (n=" + std::to_string(sets.base.size()) + ", d=" +
                    std::to_string(sets.base.front().dim()) + ") do not match the index (n=" +
                    std::to_string(stored.n) + ", d=" + std::to_string(stored.dim) + ")");
  }
  const std::span<const P> base(sets.base);
  const AnchorIndex* global = nullptr;
  for (const auto& s : stored.sections) {
    if (s.scope == kGlobalScope) global = &s.index;
  }
  std::optional<HybridIndex<P>> hybrid;
  if (query_.method == "am" && !stored.classes) throw ParameterError("index has no classes");
  if (query_.method == "rs" && !global) throw ParameterError("index has no whole-collection anchor section");
  if (query_.method == "hybrid") {
    if (!stored.classes) throw ParameterError("index has no classes");
    std::vector<AnchorIndex> inner(stored.classes->num_classes());
    std::vector<bool> seen(inner.size(), false);
    for (const auto& s : stored.sections) {
      if (s.scope != kGlobalScope) {
        inner[s.scope] = s.index;
        seen[s.scope] = true;
      }
    }
    for (bool ok : seen) {
      if (!ok) throw ParameterError("index lacks per-class anchor sections for hybrid search");
    }
    hybrid.emplace(HybridIndex<P>{*stored.classes, std::move(inner)});
  }
  CsvTable table;
  table.header = {"query", "nn_id", "similarity", "op_count"};
  for (std::size_t i = 0; i < sets.queries.size(); ++i) {
    const P& x = sets.queries[i];
    std::uint32_t id = 0;
    double sim = 0;
    std::uint64_t ops = 0;
    if (query_.method == "am") {
      const auto r = search_top_p(*stored.classes, base, x, query_.p);
      id = r.nn_id;
      sim = static_cast<double>(r.nn_similarity);
      ops = r.op_count;
    } else if (query_.method == "rs") {
      const auto r = rs_search(*global, base, x, query_.a);
      id = r.nn_id;
      sim = static_cast<double>(r.similarity);
      ops = r.op_count;
    } else {
      const auto r = hybrid_search(*hybrid, base, x, query_.p, query_.a);
      id = r.nn_id;
      sim = static_cast<double>(r.similarity);
      ops = r.op_count;
    }
    table.rows.push_back({format_number(std::uint64_t{i}), format_number(std::uint64_t{id}),
                          format_number(sim), format_number(ops)});
  }
  emit_csv(query_.out, std::nullopt, table);
  return kExitOk;
}

int Session::cmd_query() {
  const auto header = decode_index_header(read_file_bytes(query_.index));
  if (!query_.variant.empty() && variant_of(query_.variant) != header.variant) {
    throw ParameterError("--variant " + query_.variant + " does not match the index (" +
                         std::string(to_string(header.variant)) + ")");
  }
  query_.variant = std::string(to_string(header.variant));
  return dispatch(header.variant, [&](auto tag) { return query_impl<decltype(tag)>(); });
}

int Session::cmd_bench_synthetic() {
  ExperimentConfig cfg;
  cfg.variant = variant_of(synth_.variant);
  cfg.ones_mean = synth_.c;
  cfg.k_values = synth_.k;
  cfg.q_values = synth_.q;
  cfg.n = synth_.n;
  cfg.exponents = synth_.exponents;
  cfg.k_over_ten = synth_.k_over_ten;
  cfg.alpha = synth_.alpha;
  cfg.rule = parse_rule(synth_.rule);
  cfg.trials = synth_.trials;
  cfg.seed = synth_.seed;
  cfg.reuse_database = synth_.reuse_database;
  if (synth_.sweep == "auto") {
    if (!synth_.exponents.empty()) {
      cfg.sweep = SweepKind::kD;
    } else if (synth_.n > 0) {
      cfg.sweep = SweepKind::kFixedN;
    } else if (synth_.k.size() == 1 && synth_.q.size() > 1) {
      cfg.sweep = SweepKind::kQ;
    } else {
      cfg.sweep = SweepKind::kK;
    }
  } else {
    cfg.sweep = parse_sweep(synth_.sweep);
  }
  if (cfg.sweep == SweepKind::kD) {
    cfg.d_values = synth_.d;
  } else {
    if (synth_.d.size() != 1) throw ParameterError("--d takes one value outside the d sweep");
    cfg.dim = synth_.d.front();
    if (cfg.variant == Variant::kSparse && !(cfg.ones_mean > 0)) {
      throw ParameterError("sparse sweeps need --c > 0");
    }
  }
  if (cfg.sweep == SweepKind::kFixedN && !synth_.q.empty()) {
    throw ParameterError("the fixed-n sweep derives q = n / k; drop --q");
  }
  const auto curve = run_error_rate(cfg, [&](std::size_t done, std::size_t total) {
    err_ << "bench-synthetic: " << done << "/" << total << " points\n" << std::flush;
  });
  CsvTable table;
  table.header = {"sweep_value", "metric", "stderr", "op_count", "sweep", "variant", "d",
                  "c",           "k",      "q",      "n",        "alpha", "rule",    "exponent",
                  "trials",      "errors"};
  for (const auto& pt : curve) {
    const TrialPoint& t = pt.grid.point;
    table.rows.push_back({format_number(pt.grid.x), format_number(pt.y), format_number(pt.std_error),
                          format_number(pt.op_count), std::string(to_string(cfg.sweep)),
                          std::string(to_string(t.variant)), format_number(std::uint64_t{t.dim}),
                          t.variant == Variant::kSparse ? format_number(t.ones_mean) : "",
                          format_number(t.k), format_number(std::uint64_t{t.q}),
                          format_number(t.k * t.q), format_number(t.alpha),
                          std::string(to_string(t.rule)), format_number(pt.grid.exponent),
                          format_number(pt.trials), format_number(pt.errors)});
  }
  emit_csv(synth_.out, synth_.seed, table);
  return kExitOk;
}

template <Pattern P>
int Session::recall_impl() {
  const Variant variant = PatternTraits<P>::kVariant;
  auto sets = load_sets<P>(variant, recall_.input, true);
  const std::span<const P> base(sets.base);
  const std::span<const P> queries(sets.queries);
  std::vector<std::uint32_t> truth;
  if (!recall_.gt.empty()) {
    if (recall_.input.base_limit > 0) {
      throw ParameterError("--gt refers to the full collection; drop --base-limit");
    }
    const auto gt = load_ivecs(recall_.gt);
    if (gt.size() < queries.size()) throw DataError("ground truth has fewer rows than queries");
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const std::int32_t id = gt[i][0];
      if (id < 0 || static_cast<std::uint64_t>(id) >= base.size()) {
        throw DataError("ground-truth id " + std::to_string(id) + " out of range");
      }
      truth.push_back(static_cast<std::uint32_t>(id));
    }
  } else {
    truth = ground_truth(base, queries);
  }
  err_ << "bench-recall: ground truth ready\n" << std::flush;
  const Rule rule = parse_rule(recall_.rule);
  std::vector<RecallPoint> points;
  std::vector<std::string> allocation_of;
  auto add = [&](std::vector<RecallPoint> pts, const std::string& alloc) {
    for (auto& pt : pts) {
      points.push_back(std::move(pt));
      allocation_of.push_back(alloc);
    }
  };
  std::vector<std::uint32_t> p_values = recall_.p;
  if (recall_.q > 0 && p_values.empty()) {
    p_values.resize(recall_.q);
    std::iota(p_values.begin(), p_values.end(), 1u);
  }
  if (recall_.q > 0) {
    for (const auto& kind : recall_.allocations) {
      auto allocation =
          make_allocation(kind, sets.base, recall_.q, rule, recall_.seed, recall_.max_class_size);
      err_ << "bench-recall: " << kind << " allocation ready\n" << std::flush;
      if (recall_.hybrid_r > 0) {
        const auto hybrid = hybrid_build(base, allocation, rule, recall_.hybrid_r,
                                         derive_seed(recall_.seed, kHybridStream));
        add(hybrid_recall_curve(hybrid, base, queries, truth, p_values, recall_.hybrid_a), kind);
      }
      const auto index = build_index(base, std::move(allocation), rule);
      add(am_recall_curve(index, queries, truth, p_values, "am"), kind);
    }
  } else if (recall_.hybrid_r > 0) {
    throw ParameterError("--hybrid-r needs --q");
  }
  for (const std::uint32_t r : recall_.rs_r) {
    const auto rs = rs_build(base, r, derive_seed(recall_.seed, kAnchorStream));
    std::vector<std::uint32_t> a_values;
    for (std::uint32_t a : recall_.rs_a) {
      if (a <= r) a_values.push_back(a);
    }
    if (recall_.rs_a.empty()) {
      for (std::uint32_t a = 1; a < r; a *= 2) a_values.push_back(a);
      a_values.push_back(r);
    }
    if (a_values.empty()) throw ParameterError("every --rs-a exceeds r=" + std::to_string(r));
    add(rs_recall_curve(rs, base, queries, truth, a_values), "");
  }
  if (points.empty()) throw ParameterError("nothing to measure: pass --q and/or --rs-r");
  CsvTable table;
  table.header = {"sweep_value", "metric", "stderr", "op_count", "method", "allocation", "rule",
                  "p",           "a",      "r",      "q",        "n",      "queries",    "hits"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    table.rows.push_back({format_number(pt.relative_complexity), format_number(pt.recall),
                          format_number(pt.std_error), format_number(pt.mean_op_count), pt.method,
                          allocation_of[i], pt.method == "rs" ? "" : std::string(to_string(rule)),
                          format_number(std::uint64_t{pt.p}), format_number(std::uint64_t{pt.a}),
                          format_number(std::uint64_t{pt.r}),
                          format_number(std::uint64_t{pt.method == "rs" ? 0 : recall_.q}),
                          format_number(std::uint64_t{base.size()}), format_number(pt.queries),
                          format_number(pt.hits)});
  }
  emit_csv(recall_.out, recall_.seed, table);
  return kExitOk;
}

int Session::cmd_bench_recall() {
  return dispatch(variant_of(recall_.variant), [&](auto tag) {
    return recall_impl<decltype(tag)>();
  });
}

int Session::cmd_bound() {
  if (bound_.report) {
    write_report(out_, regime_check(bound_.d, bound_.k, bound_.q, bound_.alpha));
    return kExitOk;
  }
  if (bound_.regime.empty()) throw ParameterError("bound needs --regime (or --report)");
  BoundInput in;
  in.regime = parse_regime(bound_.regime);
  in.d = bound_.d;
  in.k = bound_.k;
  in.q = bound_.q;
  in.alpha = bound_.alpha;
  in.branch = (bound_.branch == "B" || bound_.branch == "b") ? DenseBranch::kB : DenseBranch::kA;
  out_ << format_number(theoretical_bound(in)) << '\n';
  return kExitOk;
}

template <Pattern P>
int Session::inspect_impl(std::span<const std::uint8_t> bytes) {
  const auto stored = decode_index<P>(bytes);
  out_ << "format AMANN1\n";
  out_ << "variant " << to_string(PatternTraits<P>::kVariant) << '\n';
  out_ << "rule " << to_string(stored.rule) << '\n';
  out_ << "d " << stored.dim << '\n';
  out_ << "n " << stored.n << '\n';
  out_ << "q " << (stored.classes ? stored.classes->num_classes() : 0) << '\n';
  if (stored.classes) {
    for (std::uint32_t c = 0; c < stored.classes->num_classes(); ++c) {
      out_ << "class " << c << " size " << stored.classes->classes()[c].size() << '\n';
    }
  }
  for (const auto& s : stored.sections) {
    out_ << "section RSIDX1 scope ";
    if (s.scope == kGlobalScope) {
      out_ << "all";
    } else {
      out_ << s.scope;
    }
    out_ << " r " << s.index.r() << '\n';
  }
  return kExitOk;
}

int Session::cmd_inspect() {
  const auto bytes = read_file_bytes(inspect_.index);
  const auto header = decode_index_header(bytes);
  return dispatch(header.variant, [&](auto tag) {
    return inspect_impl<decltype(tag)>(bytes);
  });
}

int Session::run() {
  setup();
  try {
    std::vector<std::string> reversed(args_.rbegin(), args_.rend() - (args_.empty() ? 0 : 1));
    app_.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::CallForAllHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::CallForVersion& e) {
    out_ << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app_.exit(e, out_, err_);
    return kExitUsage;
  }
  set_thread_count(globals_.threads);
  try {
    if (*gen_cmd_) return (active_ = gen_cmd_, cmd_gen());
    if (*build_cmd_) return (active_ = build_cmd_, cmd_build());
    if (*query_cmd_) return (active_ = query_cmd_, cmd_query());
    if (*synth_cmd_) return (active_ = synth_cmd_, cmd_bench_synthetic());
    if (*recall_cmd_) return (active_ = recall_cmd_, cmd_bench_recall());
    if (*bound_cmd_) return (active_ = bound_cmd_, cmd_bound());
    if (*inspect_cmd_) return (active_ = inspect_cmd_, cmd_inspect());
  } catch (const ParameterError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Session session(args, out, err);
  return session.run();
}

}  // namespace amann
