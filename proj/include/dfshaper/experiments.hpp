#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dfshaper/pipeline.hpp"

namespace dfshaper {

// One sweep point.
struct OverlapRecord {
  Preset preset = Preset::CurrentExperiment;
  int order = 0;
  double sigma_nm = 0.0;
  std::optional<double> pm_fwhm_nm;  // set only by the phasematching sweep
  double overlap = 0.0;
};

struct SweepFailure {
  int order = 0;
  double sigma_nm = 0.0;
  std::optional<double> pm_fwhm_nm;
  int stage_index = 0;
  std::string message;
};

struct SweepResult {
  std::vector<OverlapRecord> records;
  std::vector<SweepFailure> failures;
};

std::vector<int> default_orders();          // 0..4
std::vector<double> default_pm_fwhms_nm();  // {0.2, 0.5, 1.0, 2.0, 4.3}

inline constexpr double kDefaultSigmaStart = 0.25;
inline constexpr double kDefaultSigmaStop = 10.0;
inline constexpr double kDefaultSigmaStep = 0.25;

// start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> sigma_sequence(double start, double stop, double step);

// Overlap-vs-bandwidth sweep; one record per (order, sigma) in canonical
// (order, sigma) order. Per-point failures are logged and skipped.
SweepResult sweep_bandwidth(const std::vector<int>& orders, double sigma_start,
                            double sigma_stop, double sigma_step,
                            const PipelineConfig& config);

// Overlap-vs-bandwidth curves of one order for several phasematching
// bandwidths; requires the pulsed-outlook preset. Canonical (pm, sigma) order.
SweepResult sweep_phasematching(int order, const std::vector<double>& pm_fwhms_nm,
                                double sigma_start, double sigma_stop, double sigma_step,
                                const PipelineConfig& config);

struct FidelityInterval {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

// Maximal contiguous sigma-intervals with overlap >= threshold, per order.
// An order with no qualifying point maps to an empty list.
std::map<int, std::vector<FidelityInterval>> find_fidelity_range(
    const std::vector<OverlapRecord>& records, double threshold);

}  // namespace dfshaper
