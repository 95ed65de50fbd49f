#pragma once

#include <filesystem>
#include <string>

#include "lipgap/errors.hpp"
#include "lipgap/serialize.hpp"

namespace lipgap {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitInternal = 1, kExitInput = 2, kExitGuard = 3, kExitFalsified = 4 };

int exit_code_for(ErrorKind kind);

// {"schema_version", "kind", "name"?, "inputs": {name: path or inline}, "params": {...}, "seed", "expect"?}
struct Scenario {
  Json doc;
  const std::string& kind() const;
};

// Reads the scenario and inlines every input given as a path (relative to base_dir).
// Metric spaces given as .csv files become {"csv": text}.
Scenario load_scenario(const Json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario_file(const std::filesystem::path& path);

struct Certificate {
  Json doc;
  int exit_code = kExitOk;
};

// Never throws for bad input: errors become an error certificate with the matching exit code.
Certificate run_scenario(const Scenario& s);

// the certificate without its wall-clock field, as compared for reproducibility
std::string stable_text(const Json& cert);
std::string certificate_text(const Json& cert);

std::string emit_csv(const Json& cert, const std::string& selector);

void write_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lipgap
