#pragma once

// JSON file formats. All integer values are written as decimal strings;
// inputs may also give values as JSON integers when they fit.
//
// Set file:
//   {"label": "optional", "elements": ["1", "2", 4, ...]}   (a bare array is accepted)
//
// Certificate file:
//   {"format": "apfree-certificate", "version": 1,
//    "source_size": n, "source": ["..."],
//    "steps": [{"kind": "exponential", "params": {...}, "value_map": [["x", "y"], ...]}, ...],
//    "retained": r, "final_interval": ["lo", "hi"]}

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "apfree/apcore.hpp"

namespace apfree {

using Json = nlohmann::json;

/// Reads and parses a JSON file; errors carry the path and parse position.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

Json int_to_json(const Int& value);
/// Accepts a decimal string or JSON integer. `where` prefixes error messages.
Int int_from_json(const Json& value, const std::string& where);

Json set_to_json(const IntSet& set, const std::optional<std::string>& label = std::nullopt);
Json set_values_json(const IntSet& set);
IntSet set_from_json(const Json& doc, const std::string& where = "set");

Json certificate_to_json(const CompressionChain& chain);
/// Rebuilds the chain from the step maps; throws malformed_certificate.
CompressionChain certificate_from_json(const Json& doc);

struct CertificateCheck {
  VerificationReport report;
  bool declared_totals_match = false;  // "retained" and "final_interval" agree with the replay
  bool pass() const { return report.pass() && declared_totals_match; }
};

CertificateCheck verify_certificate(const Json& doc);

Json report_to_json(const VerificationReport& report);

}  // namespace apfree
