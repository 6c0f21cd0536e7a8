#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfshaper/experiments.hpp"
#include "dfshaper/pipeline.hpp"

namespace dfshaper {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kToolName = "dfshaper";
inline constexpr const char* kToolVersion = "0.1.0";

// Shortest representation that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

// --- pipeline configuration ---------------------------------------------

nlohmann::json config_to_json(const PipelineConfig& config);

// Builds a config from JSON. Fields not present fall back to the preset
// defaults; `preset_override` (e.g. a CLI flag) wins over the file's preset.
PipelineConfig config_from_json(const nlohmann::json& j,
                                std::optional<Preset> preset_override = std::nullopt);

// Reads either a bare config document or a manifest (uses its "config" entry).
nlohmann::json load_config_json(const std::filesystem::path& path);

// --- sweep records ---------------------------------------------------------

// CSV with header preset,order,sigma_nm,pm_fwhm_nm,overlap; empty pm field
// when not applicable. Numeric fields round-trip exactly.
std::string records_to_csv(const std::vector<OverlapRecord>& records);
std::vector<OverlapRecord> records_from_csv(const std::string& csv);

nlohmann::json records_to_json(const std::vector<OverlapRecord>& records);
std::vector<OverlapRecord> records_from_json(const nlohmann::json& j);

// --- spectra ----------------------------------------------------------------

// Two-column (wavelength_nm, intensity) plain text with a comment header.
std::string spectrum_to_text(const Spectrum& spectrum);

// --- run manifest -----------------------------------------------------------

// Written alongside every output; the config snapshot plus the recorded
// parameters reproduce the run bit-exactly.
struct RunManifest {
  std::string subcommand;
  std::string timestamp_utc;
  nlohmann::json config;      // full pipeline config snapshot
  nlohmann::json parameters;  // subcommand parameters
  std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace dfshaper
