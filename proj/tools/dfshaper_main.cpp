#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfshaper/experiments.hpp"
#include "dfshaper/io.hpp"
#include "dfshaper/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dfshaper;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string preset;
  bool no_envelope = false;
  bool no_window = false;
  bool no_shaper_res = false;
  bool no_dual_mode = false;
  bool no_dye_linewidth = false;
  bool no_spectrometer = false;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (a manifest also works)");
  cmd->add_option("--out", opts.out_dir, "output directory (default: current)");
  cmd->add_option("--format", opts.format, "record output format")
      ->check(CLI::IsMember({"csv", "structured"}));
  cmd->add_option("--preset", opts.preset, "ideal | current-experiment | pulsed-outlook");
  cmd->add_flag("--no-envelope", opts.no_envelope, "disable the pump-envelope stage");
  cmd->add_flag("--no-window", opts.no_window, "disable the shaper-window stage");
  cmd->add_flag("--no-shaper-res", opts.no_shaper_res, "disable the shaper-resolution stage");
  cmd->add_flag("--no-dual-mode", opts.no_dual_mode, "disable the dual-mode stage");
  cmd->add_flag("--no-dye-linewidth", opts.no_dye_linewidth, "disable the dye-linewidth stage");
  cmd->add_flag("--no-spectrometer", opts.no_spectrometer, "disable the spectrometer stage");
}

// Precedence: flags > config file > preset defaults.
PipelineConfig resolve_config(const CommonOptions& opts, Preset default_preset) {
  std::optional<Preset> preset_override;
  if (!opts.preset.empty()) preset_override = preset_from_string(opts.preset);

  json j = json::object();
  if (!opts.config_path.empty()) j = load_config_json(opts.config_path);
  if (!preset_override && !j.contains("preset")) preset_override = default_preset;

  PipelineConfig config = config_from_json(j, preset_override);
  if (opts.no_envelope) config.stages.envelope = false;
  if (opts.no_window) config.stages.window = false;
  if (opts.no_shaper_res) config.stages.shaper_resolution = false;
  if (opts.no_dual_mode) config.stages.dual_mode = false;
  if (opts.no_dye_linewidth) config.stages.dye_linewidth = false;
  if (opts.no_spectrometer) config.stages.spectrometer = false;
  config.validate();
  return config;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const PipelineConfig& config, json parameters,
                    std::vector<std::string> outputs) {
  RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.timestamp_utc = utc_timestamp();
  manifest.config = config_to_json(config);
  manifest.parameters = std::move(parameters);
  manifest.outputs = std::move(outputs);
  write_file(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

void report_failures(const SweepResult& result) {
  for (const SweepFailure& f : result.failures) {
    std::cerr << "sweep point skipped: order " << f.order << ", sigma " << f.sigma_nm;
    if (f.pm_fwhm_nm) std::cerr << ", pm " << *f.pm_fwhm_nm;
    std::cerr << ": " << f.message << "\n";
  }
}

int run_shape(const CommonOptions& opts, int order, double sigma) {
  const PipelineConfig config = resolve_config(opts, Preset::CurrentExperiment);
  HgTarget target;
  target.order = order;
  target.center_wavelength_nm = config.scheme.pump_center();
  target.sigma_nm = sigma;

  const ModelResult result = run_pipeline(target, config.scheme, config);

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "programmed_spectrum.txt", spectrum_to_text(result.programmed));
  write_file(out_dir / "modeled_spectrum.txt", spectrum_to_text(result.modeled));

  OverlapRecord record{config.preset, order, sigma, std::nullopt, result.overlap};
  if (config.stages.phasematching) record.pm_fwhm_nm = config.phasematching.fwhm_nm;
  std::string record_file;
  if (opts.format == "csv") {
    record_file = "shape_result.csv";
    write_file(out_dir / record_file, records_to_csv({record}));
  } else {
    record_file = "shape_result.json";
    write_file(out_dir / record_file, records_to_json({record}).dump(2) + "\n");
  }

  write_manifest(out_dir, "shape", config,
                 json{{"order", order}, {"sigma_nm", sigma}, {"format", opts.format}},
                 {"programmed_spectrum.txt", "modeled_spectrum.txt", record_file});
  std::printf("overlap = %.12g\n", result.overlap);
  return 0;
}

int run_sweep(const CommonOptions& opts, const std::vector<int>& orders, double sigma_start,
              double sigma_stop, double sigma_step) {
  const PipelineConfig config = resolve_config(opts, Preset::CurrentExperiment);
  const SweepResult result = sweep_bandwidth(orders, sigma_start, sigma_stop, sigma_step, config);
  report_failures(result);

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  std::string record_file;
  if (opts.format == "csv") {
    record_file = "sweep.csv";
    write_file(out_dir / record_file, records_to_csv(result.records));
  } else {
    record_file = "sweep.json";
    write_file(out_dir / record_file, records_to_json(result.records).dump(2) + "\n");
  }
  write_manifest(out_dir, "sweep", config,
                 json{{"orders", orders},
                      {"sigma_start_nm", sigma_start},
                      {"sigma_stop_nm", sigma_stop},
                      {"sigma_step_nm", sigma_step},
                      {"format", opts.format}},
                 {record_file});
  std::printf("wrote %zu records (%zu failures)\n", result.records.size(), result.failures.size());
  return 0;
}

int run_pm_sweep(const CommonOptions& opts, int order, const std::vector<double>& pm_fwhms,
                 double sigma_start, double sigma_stop, double sigma_step) {
  const PipelineConfig config = resolve_config(opts, Preset::PulsedOutlook);
  const SweepResult result =
      sweep_phasematching(order, pm_fwhms, sigma_start, sigma_stop, sigma_step, config);
  report_failures(result);

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  std::string record_file;
  if (opts.format == "csv") {
    record_file = "pm_sweep.csv";
    write_file(out_dir / record_file, records_to_csv(result.records));
  } else {
    record_file = "pm_sweep.json";
    write_file(out_dir / record_file, records_to_json(result.records).dump(2) + "\n");
  }
  write_manifest(out_dir, "pm-sweep", config,
                 json{{"order", order},
                      {"pm_fwhms_nm", pm_fwhms},
                      {"sigma_start_nm", sigma_start},
                      {"sigma_stop_nm", sigma_stop},
                      {"sigma_step_nm", sigma_step},
                      {"format", opts.format}},
                 {record_file});
  std::printf("wrote %zu records (%zu failures)\n", result.records.size(), result.failures.size());
  return 0;
}

int run_info(const CommonOptions& opts) {
  const PipelineConfig config = resolve_config(opts, Preset::CurrentExperiment);
  const DfgScheme& scheme = config.scheme;
  const double pump_carrier = 0.5 * (config.pump_grid.min_nm + config.pump_grid.max_nm);
  const double out_carrier = 0.5 * (config.output_grid.min_nm + config.output_grid.max_nm);

  std::printf("preset:                 %s\n", to_string(config.preset).c_str());
  std::printf("input wavelength:       %g nm\n", scheme.input_wavelength());
  std::printf("pump center:            %g nm\n", scheme.pump_center());
  std::printf("output center:          %.2f nm\n", scheme.output_center());
  std::printf("width compression:      %.3f (pump-axis widths scale by this on the output axis)\n",
              scheme.width_compression());
  if (config.stages.envelope)
    std::printf("pump envelope:          %g nm fwhm at %g nm\n", config.envelope_fwhm_nm,
                scheme.pump_center());
  else
    std::printf("pump envelope:          disabled\n");
  if (config.stages.window)
    std::printf("shaper window:          %g - %g nm\n", config.window_low_nm, config.window_high_nm);
  else
    std::printf("shaper window:          disabled\n");
  if (config.stages.shaper_resolution)
    std::printf("shaper resolution:      %g GHz -> %.4f nm at %g nm\n", config.shaper_resolution_ghz,
                ghz_to_nm(config.shaper_resolution_ghz, pump_carrier), pump_carrier);
  else
    std::printf("shaper resolution:      disabled\n");
  if (config.stages.phasematching)
    std::printf("phasematching:          %s kernel, %g nm fwhm -> %.4f nm on the output axis\n",
                to_string(config.phasematching.shape).c_str(), config.phasematching.fwhm_nm,
                config.phasematching.fwhm_nm * scheme.width_compression());
  else
    std::printf("phasematching:          folded into the pump envelope\n");
  if (config.stages.dye_linewidth)
    std::printf("dye linewidth:          %g GHz -> %.4f nm at %g nm\n", config.dye_linewidth_ghz,
                ghz_to_nm(config.dye_linewidth_ghz, out_carrier), out_carrier);
  else
    std::printf("dye linewidth:          disabled\n");
  if (config.stages.dual_mode)
    std::printf("dual-mode separation:   %g nm at %g nm -> %.4f nm on the output axis\n",
                config.dual_mode_separation_nm, scheme.input_wavelength(),
                dual_mode_separation_on_output(config.dual_mode_separation_nm, scheme));
  else
    std::printf("dual-mode separation:   disabled\n");
  if (config.stages.spectrometer)
    std::printf("spectrometer:           %g GHz -> %.4f nm at %g nm\n",
                config.spectrometer_resolution_ghz,
                ghz_to_nm(config.spectrometer_resolution_ghz, out_carrier), out_carrier);
  else
    std::printf("spectrometer:           disabled\n");
  std::printf("pump grid:              %g - %g nm, step %g nm\n", config.pump_grid.min_nm,
              config.pump_grid.max_nm, config.pump_grid.step_nm);
  std::printf("output grid:            %g - %g nm, step %g nm\n", config.output_grid.min_nm,
              config.output_grid.max_nm, config.output_grid.step_nm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DFG pulse-shaper fidelity simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOptions shape_opts, sweep_opts, pm_opts, info_opts;

  int shape_order = 0;
  double shape_sigma = 1.0;
  CLI::App* shape = app.add_subcommand("shape", "run one target through the model");
  shape->add_option("--order", shape_order, "Hermite-Gauss order")
      ->required()
      ->check(CLI::Range(0, kMaxHgOrder));
  shape->add_option("--sigma", shape_sigma, "base-Gaussian bandwidth in nm")
      ->required()
      ->check(CLI::PositiveNumber);
  add_common_options(shape, shape_opts);

  std::vector<int> sweep_orders = default_orders();
  double sigma_start = kDefaultSigmaStart, sigma_stop = kDefaultSigmaStop,
         sigma_step = kDefaultSigmaStep;
  CLI::App* sweep = app.add_subcommand("sweep", "overlap vs bandwidth for several orders");
  sweep->add_option("--orders", sweep_orders, "orders to sweep")->delimiter(',');
  sweep->add_option("--sigma-start", sigma_start, "first sigma in nm");
  sweep->add_option("--sigma-stop", sigma_stop, "last sigma in nm");
  sweep->add_option("--sigma-step", sigma_step, "sigma step in nm");
  add_common_options(sweep, sweep_opts);

  int pm_order = 4;
  std::vector<double> pm_fwhms = default_pm_fwhms_nm();
  double pm_sigma_start = kDefaultSigmaStart, pm_sigma_stop = kDefaultSigmaStop,
         pm_sigma_step = kDefaultSigmaStep;
  CLI::App* pm_sweep = app.add_subcommand(
      "pm-sweep", "overlap vs bandwidth for several phasematching bandwidths");
  pm_sweep->add_option("--order", pm_order, "Hermite-Gauss order")->check(CLI::Range(0, kMaxHgOrder));
  pm_sweep->add_option("--pm-fwhms", pm_fwhms, "phasematching fwhm list in nm")->delimiter(',');
  pm_sweep->add_option("--sigma-start", pm_sigma_start, "first sigma in nm");
  pm_sweep->add_option("--sigma-stop", pm_sigma_stop, "last sigma in nm");
  pm_sweep->add_option("--sigma-step", pm_sigma_step, "sigma step in nm");
  add_common_options(pm_sweep, pm_opts);

  CLI::App* info = app.add_subcommand("info", "print derived model quantities");
  add_common_options(info, info_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (shape->parsed()) return run_shape(shape_opts, shape_order, shape_sigma);
    if (sweep->parsed())
      return run_sweep(sweep_opts, sweep_orders, sigma_start, sigma_stop, sigma_step);
    if (pm_sweep->parsed())
      return run_pm_sweep(pm_opts, pm_order, pm_fwhms, pm_sigma_start, pm_sigma_stop, pm_sigma_step);
    if (info->parsed()) return run_info(info_opts);
  } catch (const StageError& e) {
    std::cerr << "pipeline failure at " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
