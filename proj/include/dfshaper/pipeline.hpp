#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "dfshaper/dfg.hpp"
#include "dfshaper/modes.hpp"
#include "dfshaper/spectral.hpp"

namespace dfshaper {

enum class Preset { Ideal, CurrentExperiment, PulsedOutlook };

// Per-stage switches. The phasematching stage is controlled separately: when
// disabled the acceptance is considered folded into the pump envelope.
struct StageToggles {
  bool envelope = false;
  bool window = false;
  bool shaper_resolution = false;
  bool phasematching = false;
  bool dye_linewidth = false;
  bool dual_mode = false;
  bool spectrometer = false;
};

// Uniform grid described by its extent and step, min + k*step up to max.
struct GridSpec {
  double min_nm = 0.0;
  double max_nm = 0.0;
  double step_nm = 0.0;

  Index num_points() const;
  SpectralGrid to_grid() const;
};

struct PipelineConfig {
  int schema_version = 1;
  Preset preset = Preset::CurrentExperiment;
  DfgScheme scheme{};

  double envelope_fwhm_nm = 10.0;               // pump axis
  double window_low_nm = 1530.0;                // telecom C-band
  double window_high_nm = 1565.0;
  double shaper_resolution_ghz = 10.0;
  double spectrometer_resolution_ghz = 20.0;    // output axis
  double dye_linewidth_ghz = 5.0;
  double dual_mode_separation_nm = 0.1;         // on the input (557 nm) axis
  std::array<double, 2> dual_mode_ratio{0.5, 0.5};
  PhasematchingSpec phasematching{};

  StageToggles stages{};
  GridSpec pump_grid{1500.0, 1600.0, 0.01};
  GridSpec output_grid{860.0, 880.0, 0.005};

  static PipelineConfig for_preset(Preset preset);

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

Preset preset_from_string(const std::string& name);
std::string to_string(Preset preset);
std::string to_string(PmShape shape);
PmShape pm_shape_from_string(const std::string& name);

// Failure of one pipeline stage, carrying the stage identity so sweeps can
// skip-and-log instead of aborting.
class StageError : public std::runtime_error {
public:
  StageError(int stage_index, std::string stage_name, const std::string& message);
  int stage_index() const { return stage_index_; }
  const std::string& stage_name() const { return stage_name_; }

private:
  int stage_index_;
  std::string stage_name_;
};

struct ModelResult {
  Spectrum programmed;  // ideal target transported to the output axis
  Spectrum modeled;     // after all enabled stages
  double overlap;       // overlap(programmed, modeled)
};

// Run the imperfection model:
//   (1) generate the programmed pump spectrum, (2) multiply by the pump
//   envelope, (3) apply the shaper window, (4) convolve with the shaper
//   resolution, (5) map to the output axis, (6) convolve with the
//   phasematching kernel, (7) convolve with the dye linewidth, (8) sum the
//   two dye-laser mode copies, (9) convolve with the spectrometer
//   resolution, (10) score against the programmed target mapped through
//   stages (1)+(5) alone.
// Stages are skipped when toggled off; failures raise StageError.
ModelResult run_pipeline(const HgTarget& target, const DfgScheme& scheme,
                         const PipelineConfig& config);

// The dye laser's mode separation, stated on the input axis, transported to
// the output axis at fixed pump: one-to-one in frequency.
double dual_mode_separation_on_output(double separation_nm_at_input, const DfgScheme& scheme);

}  // namespace dfshaper
