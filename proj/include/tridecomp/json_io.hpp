#pragma once

#include "tridecomp/bounds.hpp"
#include "tridecomp/flow.hpp"
#include "tridecomp/grid.hpp"

#include <json.hpp>

#include <string>

namespace tridecomp {

using Json = nlohmann::ordered_json;

// Current schema version of every report this toolkit emits.
inline constexpr int kSchemaVersion = 1;

std::string iso_timestamp();

// kind "weights": triangle weights "a,b,c" -> "p/q" over the whole input
// graph (peeled triangles at 1/1, uncovered ones at 0/1).
Json weights_report(const Graph& g, const Rat& delta, const DecomposeResult& res);

// kind "decompose_failure": stage, shortfall, and the violated cut of the
// reduced graph (edge ids plus vertex pairs, so it is reconstructible).
Json failure_report(const Graph& g, const Rat& delta, const DecomposeResult& res);

// kind "audit": one entry per BoundReport plus a summary.
Json audit_report(const AuditConfig& cfg, const AuditResult& res);

// kind "grid_verify".
Json grid_report(const GridSpec& spec, const SweepOutcome& sw, const ConstituentBounds& tb,
                 const CertificateResult& cert);

void write_json_file(const std::string& path, const Json& j);

// CSV rows (alpha, tau, mu, case, g, k, diff) for the tracked smallest diffs.
void write_smallest_csv(const std::string& path, const GridSpec& spec, const SweepOutcome& sw);

}  // namespace tridecomp
