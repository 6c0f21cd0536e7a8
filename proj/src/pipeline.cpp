#include "dfshaper/pipeline.hpp"

#include <cmath>
#include <utility>

namespace dfshaper {

Index GridSpec::num_points() const {
  return static_cast<Index>(std::llround((max_nm - min_nm) / step_nm)) + 1;
}

SpectralGrid GridSpec::to_grid() const {
  return make_grid(0.5 * (min_nm + max_nm), max_nm - min_nm, num_points());
}

PipelineConfig PipelineConfig::for_preset(Preset preset) {
  PipelineConfig config;
  config.preset = preset;
  switch (preset) {
    case Preset::Ideal:
      break;  // every stage off
    case Preset::CurrentExperiment:
      // Shaper range, shaper resolution, dye linewidth, dual-mode averaging
      // and spectrometer resolution. The pump envelope is compensated when
      // the mask is programmed, so its multiplicative cut stays disabled
      // here; phasematching is folded into that envelope rather than being a
      // separate stage.
      config.stages.window = true;
      config.stages.shaper_resolution = true;
      config.stages.dye_linewidth = true;
      config.stages.dual_mode = true;
      config.stages.spectrometer = true;
      break;
    case Preset::PulsedOutlook:
      // Flat pump and shaper response, shaper resolution negligible; the
      // phasematching acceptance (with input bandwidth chosen <= it) acts as
      // one blur kernel. The spectrometer characterizes rather than shapes,
      // so it stays off.
      config.stages.phasematching = true;
      break;
  }
  return config;
}

void PipelineConfig::validate() const {
  if (schema_version != 1) throw std::invalid_argument("config: unsupported schema_version");
  if (!(window_low_nm < window_high_nm))
    throw std::invalid_argument("config: window low must be < high");
  if (!(envelope_fwhm_nm > 0.0)) throw std::invalid_argument("config: envelope fwhm must be > 0");
  if (shaper_resolution_ghz < 0.0 || spectrometer_resolution_ghz < 0.0 || dye_linewidth_ghz < 0.0)
    throw std::invalid_argument("config: resolutions must be >= 0");
  if (dual_mode_separation_nm < 0.0)
    throw std::invalid_argument("config: dual-mode separation must be >= 0");
  if (dual_mode_ratio[0] < 0.0 || dual_mode_ratio[1] < 0.0 ||
      std::abs(dual_mode_ratio[0] + dual_mode_ratio[1] - 1.0) > 1e-12)
    throw std::invalid_argument("config: dual-mode weights must be nonnegative and sum to 1");
  if (!(phasematching.fwhm_nm > 0.0))
    throw std::invalid_argument("config: phasematching fwhm must be > 0");
  for (const GridSpec& g : {pump_grid, output_grid}) {
    if (!(g.step_nm > 0.0) || !(g.min_nm < g.max_nm) || !(g.min_nm > 0.0))
      throw std::invalid_argument("config: grid must have positive extent and step");
    if (g.num_points() < 2) throw std::invalid_argument("config: grid needs at least 2 points");
  }
  if (output_grid.min_nm <= scheme.input_wavelength())
    throw std::invalid_argument("config: output grid must lie above the input wavelength");
}

Preset preset_from_string(const std::string& name) {
  if (name == "ideal") return Preset::Ideal;
  if (name == "current-experiment") return Preset::CurrentExperiment;
  if (name == "pulsed-outlook") return Preset::PulsedOutlook;
  throw std::invalid_argument("unknown preset: " + name);
}

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::Ideal: return "ideal";
    case Preset::CurrentExperiment: return "current-experiment";
    case Preset::PulsedOutlook: return "pulsed-outlook";
  }
  throw std::logic_error("invalid preset value");
}

std::string to_string(PmShape shape) {
  return shape == PmShape::Gaussian ? "gaussian" : "sinc-squared";
}

PmShape pm_shape_from_string(const std::string& name) {
  if (name == "gaussian") return PmShape::Gaussian;
  if (name == "sinc-squared") return PmShape::SincSquared;
  throw std::invalid_argument("unknown phasematching shape: " + name);
}

StageError::StageError(int stage_index, std::string stage_name, const std::string& message)
    : std::runtime_error("stage " + std::to_string(stage_index) + " (" + stage_name +
                         "): " + message),
      stage_index_(stage_index),
      stage_name_(std::move(stage_name)) {}

double dual_mode_separation_on_output(double separation_nm_at_input, const DfgScheme& scheme) {
  const double delta_nu = nm_to_ghz(separation_nm_at_input, scheme.input_wavelength());
  return ghz_to_nm(delta_nu, scheme.output_center());
}

namespace {

template <typename Fn>
auto stage(int index, const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(index, name, e.what());
  }
}

// Pump grid for one run: the configured grid, widened by whole steps where
// the mode demands more room than the default extent provides.
SpectralGrid working_pump_grid(const HgTarget& target, const PipelineConfig& config) {
  GridSpec spec = config.pump_grid;
  double margin = 0.0;
  if (config.stages.shaper_resolution)
    margin = 5.0 * ghz_to_nm(config.shaper_resolution_ghz, config.scheme.pump_center());
  const double need = hg_required_half_span(target) + margin;
  const double lo_required = target.center_wavelength_nm - need;
  const double hi_required = target.center_wavelength_nm + need;
  if (lo_required < spec.min_nm)
    spec.min_nm -= std::ceil((spec.min_nm - lo_required) / spec.step_nm) * spec.step_nm;
  if (hi_required > spec.max_nm)
    spec.max_nm += std::ceil((hi_required - spec.max_nm) / spec.step_nm) * spec.step_nm;
  return spec.to_grid();
}

}  // namespace

ModelResult run_pipeline(const HgTarget& target, const DfgScheme& scheme,
                         const PipelineConfig& config) {
  config.validate();
  validate(target);

  const SpectralGrid pump_grid = working_pump_grid(target, config);
  const SpectralGrid out_grid = config.output_grid.to_grid();
  const StageToggles& on = config.stages;

  const Spectrum programmed_pump =
      stage(1, "target-generation", [&] { return hg_spectrum(target, pump_grid); });

  Spectrum s = programmed_pump;
  if (on.envelope)
    s = stage(2, "envelope", [&] {
      return multiply(s, pump_envelope(scheme.pump_center(), config.envelope_fwhm_nm, pump_grid));
    });
  if (on.window)
    s = stage(3, "shaper-window",
              [&] { return window(s, config.window_low_nm, config.window_high_nm); });
  if (on.shaper_resolution)
    s = stage(4, "shaper-resolution", [&] {
      const double fwhm = ghz_to_nm(config.shaper_resolution_ghz, pump_grid.center_wavelength());
      return fwhm > 0.0 ? convolve(s, GaussianKernel(fwhm)) : s;
    });
  s = stage(5, "dfg-mapping", [&] { return map_pump_to_output(s, scheme, out_grid); });
  if (on.phasematching)
    s = stage(6, "phasematching", [&] {
      PhasematchingSpec on_output = config.phasematching;
      on_output.fwhm_nm *= scheme.width_compression();
      return convolve(s, phasematching_kernel(on_output, out_grid.spacing()));
    });
  if (on.dye_linewidth)
    s = stage(7, "dye-linewidth", [&] {
      const double fwhm = ghz_to_nm(config.dye_linewidth_ghz, out_grid.center_wavelength());
      return fwhm > 0.0 ? convolve(s, GaussianKernel(fwhm)) : s;
    });
  if (on.dual_mode)
    s = stage(8, "dual-mode", [&] {
      // Two laser modes astride the nominal input line, weighted copies at
      // +-separation/2 on the output axis.
      const double sep = dual_mode_separation_on_output(config.dual_mode_separation_nm, scheme);
      if (sep == 0.0) return s;
      Arrayd summed = config.dual_mode_ratio[0] * shift(s, -0.5 * sep).intensity() +
                      config.dual_mode_ratio[1] * shift(s, +0.5 * sep).intensity();
      return Spectrum(out_grid, std::move(summed));
    });
  if (on.spectrometer)
    s = stage(9, "spectrometer", [&] {
      const double fwhm =
          ghz_to_nm(config.spectrometer_resolution_ghz, out_grid.center_wavelength());
      return fwhm > 0.0 ? convolve(s, GaussianKernel(fwhm)) : s;
    });

  const Spectrum reference =
      stage(5, "dfg-mapping", [&] { return map_pump_to_output(programmed_pump, scheme, out_grid); });
  const double score = stage(10, "overlap", [&] { return overlap(reference, s); });
  return ModelResult{reference, std::move(s), score};
}

}  // namespace dfshaper
