#pragma once

// qcorr command-line driver: gen, eval, verify.
//
// Exit status: 0 all checks passed, 1 at least one check failed,
// 2 usage/parse/premise error.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcorr/qcorr.hpp"

namespace qcorr::cli {

enum ExitCode : int { kExitPass = 0, kExitFailed = 1, kExitUsage = 2 };

enum class OutputFormat { json, csv };

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t samples = 1;
  double tol = kEqualityTol;
  LogBase log_base = LogBase::bits;
  OutputFormat output_format = OutputFormat::json;
  std::size_t max_total_dim = kDefaultMaxTotalDim;
  std::string timestamp;  ///< empty: current UTC time

  void validate() const {
    if (samples < 1) throw PreconditionError("--samples must be >= 1");
    if (!(tol > 0.0)) throw PreconditionError("--tol must be positive");
  }
  void check_dims(const Dims& dims) const {
    if (total_dim(dims) > max_total_dim) {
      throw PreconditionError("total dimension " + std::to_string(total_dim(dims)) +
                              " exceeds --max-dim " + std::to_string(max_total_dim));
    }
  }
  CheckOptions check_options() const {
    CheckOptions o;
    o.tol = tol;
    o.base = log_base;
    return o;
  }
};

/// Generator parameters shared by gen and verify.
struct FamilyArgs {
  std::string family;
  std::string dims;
  std::size_t rank = 0;  ///< 0: full
  std::size_t cut = 0;   ///< 0: default
  std::string blocks;
  std::string blocks2;
  std::string weights;
  std::size_t components = 2;
  std::string rho3 = "independent";
  bool shared_third = false;
  bool local_unitary = false;
};

namespace detail {

inline std::string now_utc_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to `path`, or to `fallback` when path is empty or "-".
inline void write_output(const std::string& path, std::ostream& fallback,
                         const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  body(out);
}

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline Dims require_dims(const FamilyArgs& a, std::size_t n, const char* who) {
  if (a.dims.empty()) throw PreconditionError(std::string(who) + ": --dims is required");
  Dims d = parse_dims(a.dims);
  if (n && d.size() != n) {
    throw PreconditionError(std::string(who) + ": --dims needs " + std::to_string(n) + " entries");
  }
  return d;
}

inline std::vector<std::size_t> parse_blocks(const std::string& text, const char* flag) {
  if (text.empty()) throw PreconditionError(std::string(flag) + " is required for this family");
  std::vector<std::size_t> out;
  for (std::size_t b : parse_dims(text)) out.push_back(b);
  return out;
}

inline std::vector<double> weights_or_uniform(const FamilyArgs& a, std::size_t k) {
  if (!a.weights.empty()) {
    auto w = parse_real_list(a.weights, "--weights");
    if (w.size() != k) {
      throw PreconditionError("--weights has " + std::to_string(w.size()) + " entries, expected " +
                              std::to_string(k));
    }
    return w;
  }
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

inline ThirdFactor parse_third(const std::string& s) {
  if (s == "independent") return ThirdFactor::independent;
  if (s == "orthogonal") return ThirdFactor::orthogonal_pure;
  if (s == "shared") return ThirdFactor::shared;
  throw PreconditionError("--rho3 must be independent, orthogonal or shared");
}

inline MixtureOptions mixture_options(const FamilyArgs& a) {
  MixtureOptions o;
  o.component_rank = a.rank;
  o.local_unitary = a.local_unitary;
  return o;
}

inline BlockAllocation bipartite_blocks(const FamilyArgs& a) {
  const auto b1 = parse_blocks(a.blocks, "--blocks");
  const auto b2 = a.blocks2.empty() ? b1 : parse_blocks(a.blocks2, "--blocks2");
  return BlockAllocation{{b1, b2}};
}

inline std::size_t default_cut(std::size_t n) { return (n + 1) / 2; }

}  // namespace detail

/// What a family generator produced: always a state, sometimes the mixture it
/// was mixed from.
struct Generated {
  DensityMatrix state;
  std::optional<Mixture> mixture;
};

inline Generated generate(const FamilyArgs& a, const RunConfig& cfg, Rng& rng) {
  using namespace detail;
  const std::string& f = a.family;
  auto checked = [&](Dims d) {
    cfg.check_dims(d);
    return d;
  };
  if (f == "bell" || f == "ghz" || f == "w3") return {named_state(f), {}};
  if (f == "max-mixed" || f == "max_mixed") {
    return {named_state("max_mixed", checked(require_dims(a, 0, "max-mixed"))), {}};
  }
  if (f == "random") {
    const Dims d = checked(require_dims(a, 0, "random"));
    return {random_density(d, a.rank ? a.rank : total_dim(d), rng, cfg.max_total_dim), {}};
  }
  if (f == "pure") return {random_pure(checked(require_dims(a, 0, "pure")), rng, cfg.max_total_dim), {}};
  if (f == "product") {
    const Dims d = checked(require_dims(a, 0, "product"));
    if (d.size() < 2) throw PreconditionError("product: need at least two subsystems");
    const std::size_t cut = a.cut ? a.cut : default_cut(d.size());
    if (cut >= d.size()) throw PreconditionError("product: --cut must lie in 1..N-1");
    const Dims head(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(cut));
    const Dims tail(d.begin() + static_cast<std::ptrdiff_t>(cut), d.end());
    auto full = [&](const Dims& x) { return a.rank ? std::min(a.rank, total_dim(x)) : total_dim(x); };
    const DensityMatrix h = random_density(head, full(head), rng);
    const DensityMatrix t = random_density(tail, full(tail), rng);
    return {product_state({h, t}), {}};
  }
  if (f == "full-product") {
    const Dims d = checked(require_dims(a, 0, "full-product"));
    std::vector<DensityMatrix> factors;
    for (std::size_t x : d) factors.push_back(random_density({x}, a.rank ? std::min(a.rank, x) : x, rng));
    return {product_state(factors, cfg.max_total_dim), {}};
  }
  if (f == "mixture") {
    const Dims d = checked(require_dims(a, 0, "mixture"));
    const std::size_t k = a.weights.empty() ? a.components : parse_real_list(a.weights).size();
    Mixture m = random_mixture(d, weights_or_uniform(a, k), rng, a.rank);
    DensityMatrix s = m.mixed();
    return {std::move(s), std::move(m)};
  }
  if (f == "orthogonal") {
    const Dims d = checked(require_dims(a, 0, "orthogonal"));
    const auto blocks = parse_blocks(a.blocks, "--blocks");
    Mixture m = orthogonal_mixture(d, blocks, weights_or_uniform(a, blocks.size()), rng,
                                   mixture_options(a));
    DensityMatrix s = m.mixed();
    return {std::move(s), std::move(m)};
  }
  if (f == "biorthogonal") {
    const Dims d = checked(require_dims(a, 2, "biorthogonal"));
    const auto alloc = bipartite_blocks(a);
    Mixture m = biorthogonal_mixture(d[0], d[1], alloc, weights_or_uniform(a, alloc.components()),
                                     rng, mixture_options(a));
    DensityMatrix s = m.mixed();
    return {std::move(s), std::move(m)};
  }
  if (f == "monoorthogonal") {
    const Dims d = checked(require_dims(a, 2, "monoorthogonal"));
    const auto blocks = parse_blocks(a.blocks, "--blocks");
    MonoorthogonalOptions o;
    o.component_rank = a.rank;
    o.local_unitary = a.local_unitary;
    o.shared_product_third = a.shared_third;
    Mixture m = monoorthogonal_mixture(d[0], d[1], BlockAllocation{{blocks}},
                                       weights_or_uniform(a, blocks.size()), rng, o);
    DensityMatrix s = m.mixed();
    return {std::move(s), std::move(m)};
  }
  if (f == "theorem2") {
    const Dims d = checked(require_dims(a, 3, "theorem2"));
    const auto alloc = bipartite_blocks(a);
    auto inst = theorem2_family(d, alloc, weights_or_uniform(a, alloc.components()), rng,
                                parse_third(a.rho3), mixture_options(a));
    return {std::move(inst.state), std::move(inst.mixture)};
  }
  throw PreconditionError("unknown family '" + f + "'");
}

// -----------------------------------------------------------------------------
// Commands

struct GenArgs {
  FamilyArgs family;
  std::string output;
  std::string mixture_output;
};

inline int cmd_gen(const GenArgs& g, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Rng rng(cfg.seed);
  const Generated result = generate(g.family, cfg, rng);
  const bool to_stdout = g.output.empty() || g.output == "-";
  detail::write_output(g.output, out, [&](std::ostream& os) { write_state(os, result.state); });
  if (!g.mixture_output.empty()) {
    if (!result.mixture) throw PreconditionError("family '" + g.family.family + "' is not a mixture");
    detail::write_output(g.mixture_output, out,
                         [&](std::ostream& os) { write_mixture(os, *result.mixture); });
  }
  std::ostream& summary = to_stdout ? err : out;
  summary << "dims [" << format_dims(result.state.dims()) << "] rank "
          << numerical_rank(result.state) << " entropy "
          << detail::format_value(von_neumann_entropy(result.state, cfg.log_base)) << ' '
          << (cfg.log_base == LogBase::bits ? "bits" : "nats") << '\n';
  return kExitPass;
}

struct EvalArgs {
  std::string state_file;
  std::vector<std::string> quantity;  ///< name followed by its arguments
};

inline int cmd_eval(const EvalArgs& e, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  DensityValidation v;
  v.max_total_dim = cfg.max_total_dim;
  const DensityMatrix rho = parse_state(detail::read_file(e.state_file), e.state_file, v);
  if (e.quantity.empty()) throw PreconditionError("eval: missing quantity");
  const std::string& q = e.quantity.front();
  const std::size_t n = rho.n_subsystems();
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= e.quantity.size()) throw PreconditionError("eval " + q + ": missing argument " + std::to_string(i));
    return e.quantity[i];
  };
  auto expect_args = [&](std::size_t count) {
    if (e.quantity.size() != count + 1) {
      throw PreconditionError("eval " + q + ": expected " + std::to_string(count) + " argument(s)");
    }
  };
  EntropyTable t(rho, cfg.log_base);
  double value = 0.0;
  if (q == "entropy") {
    if (e.quantity.size() > 2) throw PreconditionError("eval entropy: at most one cluster argument");
    value = e.quantity.size() == 2 ? t.entropy(parse_index_set(arg(1), n)) : t.entropy(t.all());
  } else if (q == "corr") {
    expect_args(0);
    value = t.correlation_information();
  } else if (q == "mutual") {
    expect_args(2);
    value = t.mutual_information(parse_index_set(arg(1), n), parse_index_set(arg(2), n));
  } else if (q == "within") {
    expect_args(1);
    value = t.within_cluster_information(parse_index_set(arg(1), n));
  } else if (q == "among") {
    expect_args(1);
    value = t.among_cluster_information(parse_partition(arg(1), n));
  } else if (q == "excess") {
    expect_args(3);
    value = t.ssa_excess(parse_index_set(arg(1), n), parse_index_set(arg(2), n),
                         parse_index_set(arg(3), n));
  } else if (q == "decompose") {
    expect_args(1);
    for (const auto& term : binary_decomposition(t, parse_split_tree(arg(1)))) {
      out << term.label << ' ' << detail::format_value(term.value) << '\n';
      value += term.value;
    }
  } else {
    throw PreconditionError("eval: unknown quantity '" + q +
                            "' (entropy, corr, mutual, within, among, excess, decompose)");
  }
  out << detail::format_value(value) << '\n';
  return kExitPass;
}

struct VerifyArgs {
  std::string check;
  FamilyArgs family;
  std::string state_file;
  std::string mixture_file;
  std::string report;
  std::string partition;
  std::string tree;
  std::string a, b, discard;
  std::string k_cluster, l_cluster, l_prime;
  std::string mode = "inequality";
  bool expect_product = false;
};

namespace detail {

/// Every nonempty subset of `set`, by increasing bitmask.
inline std::vector<IndexSet> nonempty_subsets(const IndexSet& set) {
  std::vector<IndexSet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << set.size()); ++mask) {
    IndexSet s;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(set[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline FamilyArgs with_default_family(FamilyArgs f, const char* family, const char* dims) {
  if (f.family.empty()) f.family = family;
  if (f.dims.empty() && dims) f.dims = dims;
  return f;
}

}  // namespace detail

/// Runs one check on one sample. `rng` is seeded per sample.
inline std::vector<VerificationReport> run_check(const VerifyArgs& v, const RunConfig& cfg, Rng& rng,
                                                 std::ostream& err) {
  using namespace detail;
  const CheckOptions opts = cfg.check_options();
  const std::string& c = v.check;
  DensityValidation dv;
  dv.max_total_dim = cfg.max_total_dim;

  auto state_for = [&](const char* family, const char* dims) -> DensityMatrix {
    if (!v.state_file.empty()) return parse_state(read_file(v.state_file), v.state_file, dv);
    return generate(with_default_family(v.family, family, dims), cfg, rng).state;
  };
  auto mixture_for = [&](const char* family, const char* dims) -> Mixture {
    if (!v.mixture_file.empty()) return parse_mixture(read_file(v.mixture_file), v.mixture_file, dv);
    auto g = generate(with_default_family(v.family, family, dims), cfg, rng);
    if (!g.mixture) throw PreconditionError(c + ": family '" + v.family.family + "' is not a mixture");
    return std::move(*g.mixture);
  };

  if (c == "lemma1") {
    const DensityMatrix rho = state_for(v.expect_product ? "full-product" : "random", "2,2");
    return {verify_lemma1(rho, opts, v.expect_product)};
  }
  if (c == "theorem1") {
    const DensityMatrix rho = state_for("random", "2,2,2");
    if (!v.partition.empty()) {
      return {verify_theorem1(rho, parse_partition(v.partition, rho.n_subsystems()), opts)};
    }
    return verify_theorem1_all_partitions(rho, opts);
  }
  if (c == "corollary1") {
    const DensityMatrix rho = state_for("random", "2,2,2");
    if (!v.tree.empty()) return {verify_corollary1(rho, parse_split_tree(v.tree), opts)};
    return {verify_corollary1(rho, SplitTree::caterpillar(rho.n_subsystems()), opts),
            verify_corollary1(rho, SplitTree::balanced(rho.n_subsystems()), opts)};
  }
  if (c == "ssa") {
    SsaMode mode;
    if (v.mode == "inequality") {
      mode = SsaMode::inequality;
    } else if (v.mode == "equality") {
      mode = SsaMode::equality;
    } else {
      throw PreconditionError("--mode must be inequality or equality");
    }
    const DensityMatrix rho = state_for("random", "2,2,2");
    const std::size_t n = rho.n_subsystems();
    if (!v.a.empty() || !v.b.empty()) {
      return {verify_ssa(rho, parse_index_set(v.a, n), parse_index_set(v.b, n),
                         parse_index_set(v.discard, n), opts, mode)};
    }
    return verify_ssa_all(rho, opts, mode);
  }
  if (c == "eq19") return {verify_eq19_excess_pairing(state_for("random", "2,2,2"), opts)};
  if (c == "corollary2") {
    FamilyArgs f = with_default_family(v.family, "product", "2,2,2,2");
    const DensityMatrix rho = v.state_file.empty() ? generate(f, cfg, rng).state
                                                   : parse_state(read_file(v.state_file), v.state_file, dv);
    const std::size_t n = rho.n_subsystems();
    const std::size_t cut = v.family.cut ? v.family.cut : default_cut(n);
    const IndexSet k = v.k_cluster.empty() ? IndexSet{0} : parse_index_set(v.k_cluster, n);
    IndexSet l;
    if (v.l_cluster.empty()) {
      for (std::size_t i = 1; i < n; ++i) l.push_back(i);
    } else {
      l = parse_index_set(v.l_cluster, n);
    }
    if (!v.l_prime.empty()) return {verify_corollary2(rho, cut, k, l, parse_index_set(v.l_prime, n), opts)};
    IndexSet tail;
    for (std::size_t i = cut; i < n; ++i) tail.push_back(i);
    std::vector<VerificationReport> out;
    for (const auto& removed : nonempty_subsets(tail)) {
      IndexSet lp;
      std::set_difference(l.begin(), l.end(), removed.begin(), removed.end(), std::back_inserter(lp));
      out.push_back(verify_corollary2(rho, cut, k, l, lp, opts));
    }
    return out;
  }
  if (c == "lemma2") {
    if (v.mixture_file.empty() && v.family.blocks.empty()) {
      VerifyArgs vv = v;
      vv.family = with_default_family(v.family, "theorem2", "4,4,2");
      vv.family.blocks = "2,2";
      return run_check(vv, cfg, rng, err);
    }
    return {verify_lemma2(mixture_for("theorem2", "4,4,2"), opts)};
  }
  if (c == "lemma3") {
    if (v.mixture_file.empty() && v.family.blocks.empty()) {
      VerifyArgs vv = v;
      vv.family = with_default_family(v.family, "biorthogonal", "4,4");
      vv.family.blocks = "2,2";
      return run_check(vv, cfg, rng, err);
    }
    return {verify_lemma3(mixture_for("biorthogonal", "4,4"), opts)};
  }
  if (c == "lemma4") {
    const Mixture m = mixture_for("mixture", "2");
    std::vector<VerificationReport> out{verify_lemma4(m, opts)};
    if (v.family.family == "orthogonal") out.push_back(verify_orthogonal_mixing(m, opts));
    return out;
  }
  if (c == "remark1") return {verify_orthogonal_mixing(mixture_for("orthogonal", "4"), opts)};
  if (c == "lemma5") {
    if (v.mixture_file.empty() && v.family.blocks.empty()) {
      VerifyArgs vv = v;
      vv.family = with_default_family(v.family, "monoorthogonal", "4,2");
      vv.family.blocks = "2,2";
      return run_check(vv, cfg, rng, err);
    }
    return {verify_lemma5(mixture_for("monoorthogonal", "4,2"), opts)};
  }
  if (c == "theorem2") {
    FamilyArgs f = with_default_family(v.family, "theorem2", "4,4,2");
    if (f.blocks.empty()) f.blocks = "2,2";
    const Dims d = require_dims(f, 3, "theorem2");
    cfg.check_dims(d);
    const auto alloc = bipartite_blocks(f);
    const ThirdFactor third = parse_third(f.rho3);
    const auto inst = theorem2_family(d, alloc, weights_or_uniform(f, alloc.components()), rng,
                                      third, mixture_options(f));
    return verify_theorem2(inst, third, opts);
  }
  throw PreconditionError("verify: unknown check '" + c +
                          "' (lemma1, theorem1, corollary1, ssa, eq19, corollary2, lemma2, lemma3, "
                          "lemma4, remark1, lemma5, theorem2)");
}

inline int cmd_verify(const VerifyArgs& v, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool from_file = !v.state_file.empty() || !v.mixture_file.empty();
  const std::size_t samples = from_file ? 1 : cfg.samples;
  const std::string timestamp = cfg.timestamp.empty() ? detail::now_utc_iso8601() : cfg.timestamp;

  std::vector<ReportRecord> records;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    Rng rng(seed);
    for (auto& r : run_check(v, cfg, rng, err)) {
      if (!from_file) r.seed = seed;
      records.push_back({std::move(r), timestamp, std::string(kVersion)});
    }
  }

  detail::write_output(v.report, out, [&](std::ostream& os) {
    if (cfg.output_format == OutputFormat::json) {
      write_reports_json(os, records);
    } else {
      write_reports_csv(os, records);
    }
  });

  std::size_t passed = 0, equality_detected = 0;
  for (const auto& rec : records) {
    passed += rec.report.passed;
    auto it = rec.report.context.find("equality_detected");
    equality_detected += it != rec.report.context.end() && it->second == "true";
  }
  std::ostream& summary = (v.report.empty() || v.report == "-") ? err : out;
  summary << "verify " << v.check << ": " << records.size() << " checks, " << passed << " passed, "
          << records.size() - passed << " failed";
  if (v.check == "ssa") summary << ", SSA equality detected in " << equality_detected;
  summary << '\n';
  return passed == records.size() ? kExitPass : kExitFailed;
}

// -----------------------------------------------------------------------------

inline void add_family_options(CLI::App* sub, FamilyArgs& f, bool family_required) {
  auto* opt = sub->add_option("--family", f.family,
                              "random, pure, product, full-product, bell, ghz, w3, max-mixed, "
                              "mixture, orthogonal, biorthogonal, monoorthogonal, theorem2");
  if (family_required) opt->required();
  sub->add_option("--dims", f.dims, "local dimensions, e.g. 4,4,2");
  sub->add_option("--rank", f.rank, "state / component rank (0 = full)");
  sub->add_option("--cut", f.cut, "product cut M: first M subsystems vs the rest");
  sub->add_option("--blocks", f.blocks, "block dimensions per component (subsystem 1)");
  sub->add_option("--blocks2", f.blocks2, "block dimensions on subsystem 2 (default: --blocks)");
  sub->add_option("--weights", f.weights, "mixture weights, e.g. 0.5,0.5");
  sub->add_option("--components", f.components, "number of components for --family mixture");
  sub->add_option("--rho3", f.rho3, "third factors: independent, orthogonal, shared");
  sub->add_flag("--shared-third", f.shared_third, "monoorthogonal: product components with one rho_3");
  sub->add_flag("--local-unitary", f.local_unitary, "conjugate by a seeded product of local unitaries");
}

/// Parses argv and dispatches. Never throws; errors map to exit status 2.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcorr: entropies, correlation information and strong subadditivity checks", "qcorr"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string log_base = "bits", out_format = "json";
  auto add_globals = [&](CLI::App* a) {
    a->add_option("--seed", cfg.seed, "RNG seed (sample i uses seed + i)");
    a->add_option("--samples", cfg.samples, "number of seeded samples");
    a->add_option("--tol", cfg.tol, "equality tolerance");
    a->add_option("--log-base", log_base, "bits or nats")->check(CLI::IsMember({"bits", "nats"}));
    a->add_option("--out", out_format, "report format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    a->add_option("--max-dim", cfg.max_total_dim, "cap on the total Hilbert-space dimension");
    a->add_option("--timestamp", cfg.timestamp, "ISO-8601 timestamp for report records (default: now)");
  };
  add_globals(&app);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a state (and mixture) file");
  add_family_options(gen_cmd, gen.family, true);
  gen_cmd->add_option("-o,--output", gen.output, "state file (default: stdout)");
  gen_cmd->add_option("--mixture-output", gen.mixture_output, "mixture file for mixture families");
  add_globals(gen_cmd);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate an entropy functional on a state file");
  eval_cmd->add_option("state", ev.state_file, "state file")->required();
  eval_cmd->add_option("quantity", ev.quantity,
                       "entropy [C] | corr | mutual A B | within C | among P | excess A B D | decompose T")
      ->required();
  add_globals(eval_cmd);

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "run a verifier over seeded samples or a file");
  verify_cmd->add_option("check", ver.check, "verifier name")->required();
  add_family_options(verify_cmd, ver.family, false);
  verify_cmd->add_option("--state", ver.state_file, "state file target");
  verify_cmd->add_option("--mixture", ver.mixture_file, "mixture file target");
  verify_cmd->add_option("--report", ver.report, "report file (default: stdout)");
  verify_cmd->add_option("--partition", ver.partition, "theorem1: one partition, e.g. {1}|{2,3}");
  verify_cmd->add_option("--tree", ver.tree, "corollary1: split tree, e.g. (1,(2,3))");
  verify_cmd->add_option("--a", ver.a, "ssa: cluster a");
  verify_cmd->add_option("--b", ver.b, "ssa: cluster b");
  verify_cmd->add_option("--discard", ver.discard, "ssa: subsystems discarded from b");
  verify_cmd->add_option("--mode", ver.mode, "ssa: inequality or equality");
  verify_cmd->add_option("--k", ver.k_cluster, "corollary2: cluster C_k");
  verify_cmd->add_option("--l", ver.l_cluster, "corollary2: cluster C_l");
  verify_cmd->add_option("--l-prime", ver.l_prime, "corollary2: C_l with part of the tail removed");
  verify_cmd->add_flag("--expect-product", ver.expect_product, "lemma1: check equality on a full product");
  add_globals(verify_cmd);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "qcorr: " << e.what() << '\n';
    return kExitUsage;
  }
  cfg.log_base = log_base == "nats" ? LogBase::nats : LogBase::bits;
  cfg.output_format = out_format == "csv" ? OutputFormat::csv : OutputFormat::json;

  try {
    cfg.validate();
    if (*gen_cmd) return cmd_gen(gen, cfg, out, err);
    if (*eval_cmd) return cmd_eval(ev, cfg, out, err);
    return cmd_verify(ver, cfg, out, err);
  } catch (const PremiseError& e) {
    err << "qcorr: premise not satisfied: " << e.what() << '\n';
  } catch (const SupportError& e) {
    err << "qcorr: premise not satisfied: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "qcorr: parse error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "qcorr: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace qcorr::cli
