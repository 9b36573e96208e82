#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "banach/json_io.hpp"

namespace banach {

/// Values given on the command line; they win over the job file.
struct JobOverrides {
  std::optional<std::string> command = std::nullopt;
  std::optional<std::uint64_t> seed = std::nullopt;
  std::optional<std::int64_t> cap = std::nullopt;
  std::optional<std::string> scope = std::nullopt;  // "lo:hi,lo:hi" per coordinate, half-open
  std::optional<std::string> suite = std::nullopt;
  std::optional<std::int64_t> max_scale = std::nullopt;  // from DENSITY_MAX_SCALE
};

struct JobOutcome {
  Json document;
  int exit_code = 0;  // 0 ok, 1 a check failed, 2 invalid job
};

/// Runs one job. Never throws for bad input: validation problems come back
/// as exit code 2 with an "error" document.
JobOutcome run_job(const Json& job, const JobOverrides& overrides);

/// Canonical text for a document: sorted keys, two-space indent, newline.
std::string render(const Json& document);

/// Points of the half-open box described by "lo:hi,lo:hi".
std::vector<Element> parse_scope_bounds(const std::string& text);

/// DENSITY_MAX_SCALE, if set; throws invalid-argument on a malformed value.
std::optional<std::int64_t> max_scale_from_env();

}  // namespace banach
