#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"
#include "nodalscope/certify.hpp"
#include "nodalscope/doubling.hpp"
#include "nodalscope/fields.hpp"
#include "nodalscope/lift.hpp"
#include "nodalscope/nodal.hpp"
#include "nodalscope/spectrum.hpp"

namespace nodalscope {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// {dim, m, seed, modes: [{k: [...], a, b}]}; lambda is never stored.
Json spec_to_json(const EigenfunctionSpec& spec);
/// Recomputes lambda from m; validates like the EigenfunctionSpec constructor.
EigenfunctionSpec spec_from_json(const Json& j);

EigenfunctionSpec load_spec(const std::filesystem::path& path);
void save_spec(const EigenfunctionSpec& spec, const std::filesystem::path& path);

Json point_to_json(const Point& p);

Json certificate_to_json(const EquidistCertificate& c);
Json doubling_summary_to_json(const DoublingSummary& s);
Json cube_index_to_json(const CubeIndex& c);
Json singular_points_to_json(std::span<const SingularPoint> points);

Json report_to_json(const BoundsReport& report);
BoundsReport report_from_json(const Json& j);

void write_ball_stats_csv(std::ostream& os, std::span<const BallStat> stats);
void write_doubling_csv(std::ostream& os, std::span<const DoublingRecord> records);
void write_segments_csv(std::ostream& os, const NodalSet& ns);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const Json& config);

/// Adds schema_version and config {..., hash} to an artifact.
Json with_provenance(Json artifact, const Json& config);

/// Writes JSON with 2-space indentation and a trailing newline.
void write_json_file(const Json& j, const std::filesystem::path& path);

}  // namespace nodalscope
