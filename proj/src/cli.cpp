#include "apfree/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "apfree/apcore.hpp"
#include "apfree/cache.hpp"
#include "apfree/extremal.hpp"
#include "apfree/io.hpp"
#include "apfree/pipeline.hpp"

namespace apfree {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string cache;
  unsigned k = 3;
  std::size_t n = 0;
  std::string epsilon = "4/5";
  std::string c;
  std::uint64_t s = 2;
  std::uint64_t universe_bound = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool universe_given = false;
  bool verify = false;
  bool pretty = false;
};

std::string rational_string(const mpq_class& q) { return q.get_str(); }

Json pipeline_report_json(const PipelineReport& r) {
  Json stages = Json::array();
  for (const auto& st : r.stages) {
    stages.push_back({{"stage", st.name},
                      {"input_size", st.input_size},
                      {"output_size", st.output_size},
                      {"nominal_retention", rational_string(st.nominal_retention)},
                      {"nominal_met", st.nominal_met},
                      {"note", st.note}});
  }
  return {{"source_size", r.source_size},
          {"retained", r.retained},
          {"interval_length", int_to_json(r.interval_length)},
          {"loss_fraction", rational_string(r.loss_fraction)},
          {"interval_constant", r.interval_constant},
          {"epsilon", rational_string(r.epsilon)},
          {"delta", rational_string(r.delta)},
          {"c", rational_string(r.c)},
          {"budget_applicable", r.budget_applicable},
          {"loss_within_epsilon", r.loss_within_epsilon},
          {"stages", std::move(stages)}};
}

PipelineConfig pipeline_config(const Options& opt) {
  PipelineConfig cfg;
  cfg.epsilon = parse_rational(opt.epsilon);
  if (!opt.c.empty()) cfg.c = parse_rational(opt.c);
  cfg.s = opt.s;
  cfg.k = opt.k;
  cfg.seed = opt.seed;
  if (opt.seed_given) cfg.point_search = PointSearch::randomized;
  cfg.validate();
  return cfg;
}

IntSet load_set(const Options& opt) {
  if (opt.input.empty()) throw Error(ErrorCode::invalid_input, "--input is required");
  return set_from_json(read_json_file(opt.input), opt.input);
}

std::optional<std::string> cache_path(const Options& opt) {
  if (!opt.cache.empty()) return opt.cache;
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return std::string(env);
  return std::nullopt;
}

// Emits the certificate to --output when given, otherwise embeds it.
void attach_certificate(Json& doc, const CompressionChain& chain, const Options& opt) {
  Json cert = certificate_to_json(chain);
  if (!opt.output.empty()) {
    write_json_file(opt.output, cert);
    doc["certificate_path"] = opt.output;
  } else {
    doc["certificate"] = std::move(cert);
  }
}

struct Outcome {
  Json doc;
  int code = 0;
};

Outcome cmd_aps(const Options& opt) {
  const IntSet set = load_set(opt);
  Json progs = Json::array();
  for (const auto& p : enumerate_progressions(set, opt.k)) {
    Json values = Json::array();
    for (const auto& v : p.values) values.push_back(int_to_json(v));
    progs.push_back(std::move(values));
  }
  Json doc = {{"command", "aps"}, {"k", opt.k}, {"size", set.size()},
              {"count", progs.size()}, {"progressions", std::move(progs)}};
  if (opt.k == 3) doc["matrix"] = second_difference_matrix(set).dense();
  return {std::move(doc)};
}

Outcome cmd_fk(const Options& opt) {
  const IntSet set = load_set(opt);
  const auto r = max_apfree_subset(set, opt.k);
  return {{{"command", "fk"},
           {"k", opt.k},
           {"size", set.size()},
           {"value", r.value},
           {"witness", set_values_json(r.witness)},
           {"method", std::string(to_string(r.method))}}};
}

template <typename F>
auto with_cache(const Options& opt, Json& doc, F&& body) {
  const auto path = cache_path(opt);
  std::optional<GCache> cache;
  if (path) cache = cache_load(*path);
  auto result = body(cache ? &*cache : nullptr);
  if (cache) {
    if (cache->dirty()) cache_store(*path, *cache);
    doc["cache"] = *path;
    if (!cache->warnings().empty()) doc["warnings"] = cache->warnings();
  }
  return result;
}

Outcome cmd_gk(const Options& opt) {
  if (opt.n < 1) throw Error(ErrorCode::invalid_parameter, "--n must be at least 1");
  Json doc = {{"command", "gk"}, {"k", opt.k}, {"n", opt.n}};
  const auto table = with_cache(opt, doc, [&](GCache* c) { return g_table(opt.k, opt.n, c); });
  const auto& last = table.back();
  Json values = Json::array();
  for (const auto& r : table) values.push_back(r.value);
  mpq_class rho(static_cast<unsigned long>(last.value), static_cast<unsigned long>(opt.n));
  rho.canonicalize();
  doc["value"] = last.value;
  doc["witness"] = set_values_json(last.witness);
  doc["method"] = std::string(to_string(last.method));
  doc["density"] = rational_string(rho);
  doc["table"] = std::move(values);
  return {std::move(doc)};
}

Outcome cmd_phik(const Options& opt) {
  if (opt.n < 1) throw Error(ErrorCode::invalid_parameter, "--n must be at least 1");
  const std::uint64_t bound = opt.universe_given ? opt.universe_bound : 2 * (opt.n - 1);
  const auto r = phi_upper_search(opt.n, opt.k, bound);
  return {{{"command", "phik"},
           {"k", opt.k},
           {"n", opt.n},
           {"universe_bound", bound},
           {"value", r.value},
           {"witness", set_values_json(r.witness)},
           {"upper_bound_only", true}}};
}

Outcome cmd_compress(const Options& opt) {
  const IntSet set = load_set(opt);
  const auto result = compress_full(set, pipeline_config(opt));
  Json doc = {{"command", "compress"}, {"report", pipeline_report_json(result.report)},
              {"final", set_values_json(result.chain.final_set)}};
  int code = 0;
  if (opt.verify) {
    const auto report = verify_compression(set, result.chain);
    doc["verification"] = report_to_json(report);
    if (!report.pass()) code = 1;
  }
  attach_certificate(doc, result.chain, opt);
  return {std::move(doc), code};
}

Outcome cmd_verify(const Options& opt) {
  if (opt.input.empty()) throw Error(ErrorCode::invalid_input, "--input is required");
  const auto check = verify_certificate(read_json_file(opt.input));
  Json doc = {{"command", "verify"},
              {"pass", check.pass()},
              {"declared_totals_match", check.declared_totals_match},
              {"verification", report_to_json(check.report)}};
  return {std::move(doc), check.pass() ? 0 : 1};
}

Outcome cmd_extract(const Options& opt) {
  const IntSet set = load_set(opt);
  const auto result = extract_apfree(set, pipeline_config(opt));
  const auto& r = result.report;
  Json doc = {{"command", "extract"},
              {"k", opt.k},
              {"subset", set_values_json(result.subset)},
              {"result_size", r.result_size},
              {"source_size", r.source_size},
              {"ratio", rational_string(r.ratio)},
              {"interval_length", int_to_json(r.interval_length)},
              {"shift", int_to_json(r.shift)},
              {"target_length", int_to_json(r.target_length)},
              {"target_size", r.target_size},
              {"target_method", r.target_method},
              {"progression_free", r.verified_free},
              {"compression", pipeline_report_json(r.compression)}};
  int code = 0;
  if (opt.verify) {
    const auto report = verify_compression(set, result.chain);
    doc["verification"] = report_to_json(report);
    const bool ok = report.pass() && result.subset.is_subset_of(set) &&
                    is_progression_free(result.subset, opt.k);
    if (!ok) code = 1;
  }
  attach_certificate(doc, result.chain, opt);
  return {std::move(doc), code};
}

Outcome cmd_behrend(const Options& opt) {
  if (opt.n < 1) throw Error(ErrorCode::invalid_parameter, "--n must be at least 1");
  const IntSet set = behrend_set(opt.n);
  return {{{"command", "behrend"},
           {"n", opt.n},
           {"size", set.size()},
           {"set", set_values_json(set)},
           {"progression_free", is_progression_free(set, 3)}}};
}

Outcome cmd_product(const Options& opt) {
  if (opt.input.empty()) throw Error(ErrorCode::invalid_input, "--input is required");
  const Json doc = read_json_file(opt.input);
  const auto need = [&](const char* key) -> const Json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw Error(ErrorCode::invalid_input, opt.input + ": missing \"" + key + "\"");
    }
    return doc[key];
  };
  const Int a = int_from_json(need("a"), opt.input + ".a");
  const Int b = int_from_json(need("b"), opt.input + ".b");
  if (a < 1 || b < 1 || !a.fits_ulong_p() || !b.fits_ulong_p()) {
    throw Error(ErrorCode::invalid_input, opt.input + ": a and b must be positive machine integers");
  }
  const IntSet sa = set_from_json(need("set_a"), opt.input + ".set_a");
  const IntSet sb = set_from_json(need("set_b"), opt.input + ".set_b");
  const IntSet out = product_construct(sa, a.get_ui(), sb, b.get_ui(), opt.k);
  return {{{"command", "product"},
           {"k", opt.k},
           {"interval", Json::array({"1", int_to_json(3 * a * b)})},
           {"size", out.size()},
           {"set", set_values_json(out)},
           {"progression_free", is_progression_free(out, opt.k)}}};
}

Outcome cmd_density(const Options& opt) {
  if (opt.n < 1) throw Error(ErrorCode::invalid_parameter, "--n must be at least 1");
  Json doc = {{"command", "density"}, {"k", opt.k}, {"n", opt.n}};
  const mpq_class rho = with_cache(opt, doc, [&](GCache* c) { return density(opt.k, opt.n, c); });
  doc["density"] = rational_string(rho);
  doc["numerator"] = int_to_json(rho.get_num());
  doc["denominator"] = int_to_json(rho.get_den());
  return {std::move(doc)};
}

// Plain-text rendering of a document for --pretty.
void render(std::ostream& os, const Json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const auto scalar = [](const Json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  const auto flat = [&](const Json& arr) {
    return std::all_of(arr.begin(), arr.end(), [](const Json& v) { return v.is_primitive(); });
  };
  if (value.is_object()) {
    for (const auto& [key, v] : value.items()) {
      if (v.is_primitive() || (v.is_array() && flat(v))) {
        os << pad << key << ": ";
        if (v.is_array()) {
          for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << scalar(v[i]);
        } else {
          os << scalar(v);
        }
        os << '\n';
      } else {
        os << pad << key << ":\n";
        render(os, v, indent + 1);
      }
    }
  } else if (value.is_array()) {
    for (const auto& v : value) {
      if (v.is_array() && flat(v)) {
        os << pad << "-";
        for (const auto& x : v) os << ' ' << scalar(x);
        os << '\n';
      } else if (v.is_primitive()) {
        os << pad << "- " << scalar(v) << '\n';
      } else {
        os << pad << "-\n";
        render(os, v, indent + 1);
      }
    }
  } else {
    os << pad << scalar(value) << '\n';
  }
}

void emit(std::ostream& out, const Json& doc, bool pretty) {
  if (pretty) render(out, doc, 0);
  else out << doc.dump(2) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Progression-free sets, compressions and their certificates", "apfree"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--pretty", opt.pretty, "Human-readable output instead of JSON");
  app.add_option("--cache", opt.cache, std::string("g-table cache file (default: $") + kCacheEnvVar + ")");

  const auto input = [&](CLI::App* sub, const char* what) { sub->add_option("--input", opt.input, what); };
  const auto k_opt = [&](CLI::App* sub) {
    sub->add_option("--k", opt.k, "Progression length")->check(CLI::Range(3u, 64u));
  };
  const auto n_opt = [&](CLI::App* sub, const char* what) {
    sub->add_option("--n", opt.n, what)->required();
  };
  const auto pipeline_opts = [&](CLI::App* sub) {
    sub->add_option("--epsilon", opt.epsilon, "Loss budget in (3/4, 1), decimal or p/q");
    sub->add_option("--c", opt.c, "Prime-window constant (default 1/delta)");
    auto* seed = sub->add_option("--seed", opt.seed, "Use the seeded randomized point search");
    seed->each([&](const std::string&) { opt.seed_given = true; });
    sub->add_option("--output", opt.output, "Write the certificate to this file");
    sub->add_flag("--verify", opt.verify, "Replay the certificate before exiting");
  };

  auto* aps = app.add_subcommand("aps", "List k-term progressions of a set");
  input(aps, "Set file");
  k_opt(aps);
  auto* fk = app.add_subcommand("fk", "Largest k-AP-free subset of a set");
  input(fk, "Set file");
  k_opt(fk);
  auto* gk = app.add_subcommand("gk", "g_k(n) for the interval [1, n]");
  k_opt(gk);
  n_opt(gk, "Interval length");
  auto* phik = app.add_subcommand("phik", "Upper bound for phi_k(n) over canonical bounded sets");
  k_opt(phik);
  n_opt(phik, "Set size");
  phik->add_option("--universe-bound", opt.universe_bound, "Largest element of canonical sets")
      ->each([&](const std::string&) { opt.universe_given = true; });
  auto* compress = app.add_subcommand("compress", "Compress a set into an almost-linear interval");
  input(compress, "Set file");
  pipeline_opts(compress);
  auto* verify = app.add_subcommand("verify", "Replay a compression certificate");
  input(verify, "Certificate file");
  auto* extract = app.add_subcommand("extract", "Extract a k-AP-free subset through compression");
  input(extract, "Set file");
  k_opt(extract);
  pipeline_opts(extract);
  extract->add_option("--s", opt.s, "Shift window multiplier")->check(CLI::PositiveNumber);
  auto* behrend = app.add_subcommand("behrend", "Behrend 3-AP-free set in [1, N]");
  n_opt(behrend, "Interval length");
  auto* product = app.add_subcommand("product", "Block product of two progression-free sets");
  input(product, "JSON file with a, set_a, b, set_b");
  k_opt(product);
  auto* dens = app.add_subcommand("density", "Exact density g_k(n) / n");
  k_opt(dens);
  n_opt(dens, "Interval length");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    Outcome result;
    if (*aps) result = cmd_aps(opt);
    else if (*fk) result = cmd_fk(opt);
    else if (*gk) result = cmd_gk(opt);
    else if (*phik) result = cmd_phik(opt);
    else if (*compress) result = cmd_compress(opt);
    else if (*verify) result = cmd_verify(opt);
    else if (*extract) result = cmd_extract(opt);
    else if (*behrend) result = cmd_behrend(opt);
    else if (*product) result = cmd_product(opt);
    else if (*dens) result = cmd_density(opt);
    if (result.doc.contains("warnings")) {
      for (const auto& w : result.doc["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
    }
    emit(out, result.doc, opt.pretty);
    return result.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    emit(out, {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}},
         opt.pretty);
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << '\n';
    emit(out, {{"error", {{"code", "internal"}, {"message", e.what()}}}}, opt.pretty);
    return 1;
  }
}

}  // namespace apfree
