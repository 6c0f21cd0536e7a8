#include "dfshaper/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dfshaper {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buffer, end);
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

// --- pipeline configuration ---------------------------------------------

namespace {

json grid_to_json(const GridSpec& grid) {
  return json{{"min_nm", grid.min_nm}, {"max_nm", grid.max_nm}, {"step_nm", grid.step_nm}};
}

GridSpec grid_from_json(const json& j, GridSpec base) {
  base.min_nm = j.value("min_nm", base.min_nm);
  base.max_nm = j.value("max_nm", base.max_nm);
  base.step_nm = j.value("step_nm", base.step_nm);
  return base;
}

}  // namespace

json config_to_json(const PipelineConfig& config) {
  json stages{{"envelope", config.stages.envelope},
              {"window", config.stages.window},
              {"shaper_resolution", config.stages.shaper_resolution},
              {"dye_linewidth", config.stages.dye_linewidth},
              {"dual_mode", config.stages.dual_mode},
              {"spectrometer", config.stages.spectrometer}};
  json phasematching;
  if (config.stages.phasematching) {
    phasematching = json{{"mode", "kernel"},
                         {"fwhm_nm", config.phasematching.fwhm_nm},
                         {"shape", to_string(config.phasematching.shape)}};
  } else {
    phasematching = json{{"mode", "folded-into-envelope"}};
  }
  return json{{"schema_version", config.schema_version},
              {"preset", to_string(config.preset)},
              {"scheme",
               {{"input_wavelength_nm", config.scheme.input_wavelength()},
                {"pump_center_nm", config.scheme.pump_center()}}},
              {"envelope_fwhm_nm", config.envelope_fwhm_nm},
              {"shaper_window_nm", {config.window_low_nm, config.window_high_nm}},
              {"shaper_resolution_ghz", config.shaper_resolution_ghz},
              {"spectrometer_resolution_ghz", config.spectrometer_resolution_ghz},
              {"dye_linewidth_ghz", config.dye_linewidth_ghz},
              {"dual_mode_separation_nm", config.dual_mode_separation_nm},
              {"dual_mode_ratio", {config.dual_mode_ratio[0], config.dual_mode_ratio[1]}},
              {"phasematching", phasematching},
              {"stages", stages},
              {"pump_grid", grid_to_json(config.pump_grid)},
              {"output_grid", grid_to_json(config.output_grid)}};
}

PipelineConfig config_from_json(const json& j, std::optional<Preset> preset_override) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

  Preset preset = Preset::CurrentExperiment;
  if (preset_override) {
    preset = *preset_override;
  } else if (j.contains("preset")) {
    preset = preset_from_string(j.at("preset").get<std::string>());
  }
  PipelineConfig config = PipelineConfig::for_preset(preset);

  config.schema_version = j.value("schema_version", config.schema_version);
  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    config.scheme = DfgScheme(s.value("input_wavelength_nm", config.scheme.input_wavelength()),
                              s.value("pump_center_nm", config.scheme.pump_center()));
  }
  config.envelope_fwhm_nm = j.value("envelope_fwhm_nm", config.envelope_fwhm_nm);
  if (j.contains("shaper_window_nm")) {
    const json& w = j.at("shaper_window_nm");
    if (!w.is_array() || w.size() != 2)
      throw std::invalid_argument("config: shaper_window_nm must be [low, high]");
    config.window_low_nm = w[0].get<double>();
    config.window_high_nm = w[1].get<double>();
  }
  config.shaper_resolution_ghz = j.value("shaper_resolution_ghz", config.shaper_resolution_ghz);
  config.spectrometer_resolution_ghz =
      j.value("spectrometer_resolution_ghz", config.spectrometer_resolution_ghz);
  config.dye_linewidth_ghz = j.value("dye_linewidth_ghz", config.dye_linewidth_ghz);
  config.dual_mode_separation_nm =
      j.value("dual_mode_separation_nm", config.dual_mode_separation_nm);
  if (j.contains("dual_mode_ratio")) {
    const json& r = j.at("dual_mode_ratio");
    if (!r.is_array() || r.size() != 2)
      throw std::invalid_argument("config: dual_mode_ratio must be [w1, w2]");
    config.dual_mode_ratio = {r[0].get<double>(), r[1].get<double>()};
  }
  if (j.contains("phasematching")) {
    const json& pm = j.at("phasematching");
    const std::string mode = pm.value("mode", std::string("kernel"));
    if (mode == "folded-into-envelope") {
      config.stages.phasematching = false;
    } else if (mode == "kernel") {
      config.stages.phasematching = true;
      config.phasematching.fwhm_nm = pm.value("fwhm_nm", config.phasematching.fwhm_nm);
      if (pm.contains("shape"))
        config.phasematching.shape = pm_shape_from_string(pm.at("shape").get<std::string>());
    } else {
      throw std::invalid_argument("config: unknown phasematching mode '" + mode + "'");
    }
  }
  if (j.contains("stages")) {
    const json& s = j.at("stages");
    config.stages.envelope = s.value("envelope", config.stages.envelope);
    config.stages.window = s.value("window", config.stages.window);
    config.stages.shaper_resolution = s.value("shaper_resolution", config.stages.shaper_resolution);
    config.stages.dye_linewidth = s.value("dye_linewidth", config.stages.dye_linewidth);
    config.stages.dual_mode = s.value("dual_mode", config.stages.dual_mode);
    config.stages.spectrometer = s.value("spectrometer", config.stages.spectrometer);
  }
  if (j.contains("pump_grid")) config.pump_grid = grid_from_json(j.at("pump_grid"), config.pump_grid);
  if (j.contains("output_grid"))
    config.output_grid = grid_from_json(j.at("output_grid"), config.output_grid);

  config.validate();
  return config;
}

json load_config_json(const std::filesystem::path& path) {
  json j = json::parse(read_file(path));
  if (j.contains("config") && j.contains("subcommand")) return j.at("config");  // a manifest
  return j;
}

// --- sweep records ---------------------------------------------------------

std::string records_to_csv(const std::vector<OverlapRecord>& records) {
  std::string csv = "preset,order,sigma_nm,pm_fwhm_nm,overlap\n";
  for (const OverlapRecord& r : records) {
    csv += to_string(r.preset);
    csv += ',';
    csv += std::to_string(r.order);
    csv += ',';
    csv += format_double(r.sigma_nm);
    csv += ',';
    if (r.pm_fwhm_nm) csv += format_double(*r.pm_fwhm_nm);
    csv += ',';
    csv += format_double(r.overlap);
    csv += '\n';
  }
  return csv;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<OverlapRecord> records_from_csv(const std::string& csv) {
  std::istringstream stream(csv);
  std::string line;
  if (!std::getline(stream, line)) throw std::invalid_argument("records csv: empty document");
  if (split_csv_line(line) != std::vector<std::string>{"preset", "order", "sigma_nm", "pm_fwhm_nm", "overlap"})
    throw std::invalid_argument("records csv: unexpected header");

  std::vector<OverlapRecord> records;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 5) throw std::invalid_argument("records csv: malformed row '" + line + "'");
    OverlapRecord r;
    r.preset = preset_from_string(fields[0]);
    r.order = static_cast<int>(parse_double(fields[1]));
    r.sigma_nm = parse_double(fields[2]);
    if (!fields[3].empty()) r.pm_fwhm_nm = parse_double(fields[3]);
    r.overlap = parse_double(fields[4]);
    records.push_back(r);
  }
  return records;
}

json records_to_json(const std::vector<OverlapRecord>& records) {
  json rows = json::array();
  for (const OverlapRecord& r : records) {
    json row{{"preset", to_string(r.preset)},
             {"order", r.order},
             {"sigma_nm", r.sigma_nm},
             {"pm_fwhm_nm", nullptr},
             {"overlap", r.overlap}};
    if (r.pm_fwhm_nm) row["pm_fwhm_nm"] = *r.pm_fwhm_nm;
    rows.push_back(std::move(row));
  }
  return json{{"schema_version", kConfigSchemaVersion}, {"records", std::move(rows)}};
}

std::vector<OverlapRecord> records_from_json(const json& j) {
  std::vector<OverlapRecord> records;
  for (const json& row : j.at("records")) {
    OverlapRecord r;
    r.preset = preset_from_string(row.at("preset").get<std::string>());
    r.order = row.at("order").get<int>();
    r.sigma_nm = row.at("sigma_nm").get<double>();
    if (!row.at("pm_fwhm_nm").is_null()) r.pm_fwhm_nm = row.at("pm_fwhm_nm").get<double>();
    r.overlap = row.at("overlap").get<double>();
    records.push_back(r);
  }
  return records;
}

// --- spectra ----------------------------------------------------------------

std::string spectrum_to_text(const Spectrum& spectrum) {
  std::string text = "# dfshaper spectrum\n# columns: wavelength_nm intensity\n";
  for (Index i = 0; i < spectrum.size(); ++i) {
    text += format_double(spectrum.grid().wavelength(i));
    text += ' ';
    text += format_double(spectrum.intensity()(i));
    text += '\n';
  }
  return text;
}

// --- run manifest -----------------------------------------------------------

json manifest_to_json(const RunManifest& manifest) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"subcommand", manifest.subcommand},
              {"timestamp_utc", manifest.timestamp_utc},
              {"config", manifest.config},
              {"parameters", manifest.parameters},
              {"outputs", manifest.outputs}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace dfshaper
