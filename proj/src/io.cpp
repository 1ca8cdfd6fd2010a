#include "apfree/io.hpp"

#include <algorithm>
#include <fstream>

namespace apfree {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << doc.dump(2) << '\n')) {
    throw Error(ErrorCode::invalid_input, path.string() + ": cannot write file");
  }
}

Json int_to_json(const Int& value) { return value.get_str(); }

Int int_from_json(const Json& value, const std::string& where) {
  if (value.is_string()) {
    try {
      return parse_int(value.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_input, where + ": not a decimal integer string");
    }
  }
  if (value.is_number_unsigned()) return Int(std::to_string(value.get<std::uint64_t>()), 10);
  if (value.is_number_integer()) return Int(std::to_string(value.get<std::int64_t>()), 10);
  if (value.is_number_float()) {
    throw Error(ErrorCode::invalid_input,
                where + ": not an exact integer (write large values as decimal strings)");
  }
  throw Error(ErrorCode::invalid_input, where + ": expected an integer, found " +
                                            std::string(value.type_name()));
}

Json set_values_json(const IntSet& set) {
  Json out = Json::array();
  for (const auto& v : set) out.push_back(int_to_json(v));
  return out;
}

Json set_to_json(const IntSet& set, const std::optional<std::string>& label) {
  Json doc = Json::object();
  if (label) doc["label"] = *label;
  doc["elements"] = set_values_json(set);
  return doc;
}

IntSet set_from_json(const Json& doc, const std::string& where) {
  const Json* elements = &doc;
  std::string path = where;
  if (doc.is_object()) {
    if (!doc.contains("elements")) throw Error(ErrorCode::invalid_input, where + ": missing \"elements\"");
    elements = &doc["elements"];
    path += ".elements";
  }
  if (!elements->is_array()) throw Error(ErrorCode::invalid_input, path + ": expected an array");
  std::vector<Int> values;
  values.reserve(elements->size());
  for (std::size_t i = 0; i < elements->size(); ++i) {
    values.push_back(int_from_json((*elements)[i], path + "[" + std::to_string(i) + "]"));
  }
  try {
    return IntSet(std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_input, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

Json u64(std::uint64_t v) { return std::to_string(v); }

Json params_to_json(const StepParams& p) {
  Json out = Json::object();
  if (p.determinant) out["determinant"] = int_to_json(*p.determinant);
  if (p.cube_side) out["cube_side"] = u64(*p.cube_side);
  if (p.shift) out["shift"] = int_to_json(*p.shift);
  if (p.prime) out["prime"] = u64(*p.prime);
  if (p.kept_half) out["kept_half"] = *p.kept_half;
  if (p.rebase) out["rebase"] = int_to_json(*p.rebase);
  if (p.target_met) out["target_met"] = *p.target_met;
  if (p.window_lo) out["window_lo"] = u64(*p.window_lo);
  if (p.window_hi) out["window_hi"] = u64(*p.window_hi);
  if (p.window_primes) out["window_primes"] = u64(*p.window_primes);
  if (p.required_primes) out["required_primes"] = u64(*p.required_primes);
  if (p.triple_count) out["triple_count"] = u64(*p.triple_count);
  if (p.pruned) {
    Json list = Json::array();
    for (const auto& v : *p.pruned) list.push_back(int_to_json(v));
    out["pruned"] = std::move(list);
  }
  return out;
}

std::uint64_t u64_from_json(const Json& v, const std::string& where) {
  const Int x = int_from_json(v, where);
  if (x < 0 || !x.fits_ulong_p()) throw Error(ErrorCode::malformed_certificate, where + ": out of range");
  return x.get_ui();
}

StepParams params_from_json(const Json& p, const std::string& where) {
  StepParams out;
  if (!p.is_object()) throw Error(ErrorCode::malformed_certificate, where + ": expected an object");
  const auto field = [&](const char* key) { return where + "." + key; };
  if (p.contains("determinant")) out.determinant = int_from_json(p["determinant"], field("determinant"));
  if (p.contains("cube_side")) out.cube_side = u64_from_json(p["cube_side"], field("cube_side"));
  if (p.contains("shift")) out.shift = int_from_json(p["shift"], field("shift"));
  if (p.contains("prime")) out.prime = u64_from_json(p["prime"], field("prime"));
  if (p.contains("kept_half")) out.kept_half = static_cast<int>(u64_from_json(p["kept_half"], field("kept_half")));
  if (p.contains("rebase")) out.rebase = int_from_json(p["rebase"], field("rebase"));
  if (p.contains("target_met")) {
    if (!p["target_met"].is_boolean()) throw Error(ErrorCode::malformed_certificate, field("target_met") + ": expected a boolean");
    out.target_met = p["target_met"].get<bool>();
  }
  if (p.contains("window_lo")) out.window_lo = u64_from_json(p["window_lo"], field("window_lo"));
  if (p.contains("window_hi")) out.window_hi = u64_from_json(p["window_hi"], field("window_hi"));
  if (p.contains("window_primes")) out.window_primes = u64_from_json(p["window_primes"], field("window_primes"));
  if (p.contains("required_primes")) out.required_primes = u64_from_json(p["required_primes"], field("required_primes"));
  if (p.contains("triple_count")) out.triple_count = u64_from_json(p["triple_count"], field("triple_count"));
  if (p.contains("pruned")) {
    std::vector<Int> pruned;
    const Json& list = p["pruned"];
    if (!list.is_array()) throw Error(ErrorCode::malformed_certificate, field("pruned") + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      pruned.push_back(int_from_json(list[i], field("pruned") + "[" + std::to_string(i) + "]"));
    }
    out.pruned = std::move(pruned);
  }
  return out;
}

IntSet distinct_images(const ValueMap& map) {
  std::vector<Int> v;
  for (const auto& e : map) v.push_back(e.second);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return IntSet(std::move(v));
}

}  // namespace

Json certificate_to_json(const CompressionChain& chain) {
  Json steps = Json::array();
  for (const auto& step : chain.steps) {
    Json pairs = Json::array();
    for (const auto& [from, to] : step.map) pairs.push_back({int_to_json(from), int_to_json(to)});
    steps.push_back({{"kind", std::string(to_string(step.kind))},
                     {"params", params_to_json(step.params)},
                     {"value_map", std::move(pairs)}});
  }
  Json interval = nullptr;
  if (!chain.final_set.empty()) {
    interval = Json::array({int_to_json(chain.final_set.min()), int_to_json(chain.final_set.max())});
  }
  return {{"format", "apfree-certificate"},
          {"version", 1},
          {"source_size", chain.source.size()},
          {"source", set_values_json(chain.source)},
          {"steps", std::move(steps)},
          {"retained", chain.final_set.size()},
          {"final_interval", std::move(interval)}};
}

CompressionChain certificate_from_json(const Json& doc) {
  const auto malformed = [](const std::string& msg) {
    return Error(ErrorCode::malformed_certificate, msg);
  };
  if (!doc.is_object()) throw malformed("certificate: expected an object");
  if (!doc.contains("steps") || !doc["steps"].is_array()) throw malformed("certificate.steps: expected an array");

  std::vector<CompressionStep> steps;
  const Json& list = doc["steps"];
  for (std::size_t s = 0; s < list.size(); ++s) {
    const std::string where = "certificate.steps[" + std::to_string(s) + "]";
    const Json& item = list[s];
    if (!item.is_object()) throw malformed(where + ": expected an object");
    if (!item.contains("kind") || !item["kind"].is_string()) throw malformed(where + ".kind: missing");
    auto kind = parse_step_kind(item["kind"].get<std::string>());
    if (!kind) throw malformed(where + ".kind: unknown step kind '" + item["kind"].get<std::string>() + "'");

    CompressionStep step;
    step.kind = *kind;
    if (item.contains("params")) step.params = params_from_json(item["params"], where + ".params");
    if (!item.contains("value_map") || !item["value_map"].is_array()) {
      throw malformed(where + ".value_map: expected an array");
    }
    std::vector<ValueMap::Entry> entries;
    const Json& pairs = item["value_map"];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string at = where + ".value_map[" + std::to_string(i) + "]";
      if (!pairs[i].is_array() || pairs[i].size() != 2) throw malformed(at + ": expected a [from, to] pair");
      try {
        entries.emplace_back(int_from_json(pairs[i][0], at + "[0]"), int_from_json(pairs[i][1], at + "[1]"));
      } catch (const Error& e) {
        throw malformed(e.what());
      }
    }
    step.map = ValueMap(std::move(entries));
    steps.push_back(std::move(step));
  }

  CompressionChain chain;
  try {
    if (doc.contains("source")) {
      chain.source = set_from_json(doc["source"], "certificate.source");
    } else if (!steps.empty()) {
      chain.source = steps.front().map.domain();
    }
  } catch (const Error& e) {
    throw malformed(e.what());
  }
  if (doc.contains("source_size")) {
    const Json& size = doc["source_size"];
    if (!size.is_number_unsigned() || size.get<std::size_t>() != chain.source.size()) {
      throw malformed("certificate.source_size: does not match the source set");
    }
  }
  chain.composed = compose_maps(chain.source, steps);
  chain.final_set = distinct_images(chain.composed);
  chain.steps = std::move(steps);
  return chain;
}

CertificateCheck verify_certificate(const Json& doc) {
  const CompressionChain chain = certificate_from_json(doc);
  CertificateCheck out;
  out.report = verify_compression(chain.source, chain);

  bool match = true;
  if (doc.contains("retained")) {
    match = match && doc["retained"].is_number_unsigned() &&
            doc["retained"].get<std::size_t>() == chain.final_set.size();
  }
  if (doc.contains("final_interval")) {
    const Json& iv = doc["final_interval"];
    if (chain.final_set.empty()) {
      match = match && iv.is_null();
    } else {
      try {
        match = match && iv.is_array() && iv.size() == 2 &&
                int_from_json(iv[0], "final_interval[0]") == chain.final_set.min() &&
                int_from_json(iv[1], "final_interval[1]") == chain.final_set.max();
      } catch (const Error&) {
        match = false;
      }
    }
  }
  out.declared_totals_match = match;
  return out;
}

Json report_to_json(const VerificationReport& report) {
  Json steps = Json::array();
  for (const auto& s : report.steps) steps.push_back(report_to_json(s));
  Json violation = nullptr;
  if (report.violation) {
    violation = Json::array();
    for (const auto& v : report.violation->values) violation.push_back(int_to_json(v));
  }
  Json out = {{"pass", report.pass()},
              {"injective", report.injective},
              {"preserves_progressions", report.preserves_progressions},
              {"composition_consistent", report.composition_consistent},
              {"retained", report.retained},
              {"checked_progressions", report.checked_progressions},
              {"max_output", report.max_output ? int_to_json(*report.max_output) : Json(nullptr)},
              {"violation", std::move(violation)}};
  if (!steps.empty()) out["steps"] = std::move(steps);
  return out;
}

}  // namespace apfree
