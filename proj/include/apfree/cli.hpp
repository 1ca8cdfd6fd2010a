#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace apfree {

/// Environment variable naming the default g-table cache file.
inline constexpr const char* kCacheEnvVar = "APFREE_CACHE";

/// Runs one CLI invocation. `args` excludes the program name. Writes a single
/// JSON document (or a plain-text rendering with --pretty) to `out`.
/// Returns 0 on success, 1 on verification failure, 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apfree
