#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "run_config.hpp"

namespace finsler::cli {

enum class Status { Pass, Fail, Trivial };

struct Outcome {
    json report;
    int exit_code = 0;  // 0 pass, 1 check failure
};

Outcome cmd_verify(const RunConfig& c);
Outcome cmd_pde_check(const RunConfig& c);
/// Writes the sample table to `csv`.
Outcome cmd_solve(const RunConfig& c, std::ostream& csv);
/// Full listing, or a single resolved entry. Throws ConfigError for an unknown name.
json cmd_catalog(const std::optional<std::string>& name);

/// {"schema": 1, "error": {"kind": kind, "message": message}}
json error_body(const std::string& kind, const std::string& message);

std::string version();

}  // namespace finsler::cli
