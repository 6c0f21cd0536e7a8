#include "dfshaper/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfshaper {

std::vector<int> default_orders() { return {0, 1, 2, 3, 4}; }

std::vector<double> default_pm_fwhms_nm() { return {0.2, 0.5, 1.0, 2.0, 4.3}; }

std::vector<double> sigma_sequence(double start, double stop, double step) {
  if (!(start > 0.0)) throw std::invalid_argument("sigma sweep: start must be > 0");
  if (!(step > 0.0)) throw std::invalid_argument("sigma sweep: step must be > 0");
  if (stop < start) throw std::invalid_argument("sigma sweep: stop must be >= start");
  const auto count = static_cast<Index>(std::floor((stop - start) / step + 0.5 * 1e-9)) + 1;
  std::vector<double> sigmas(count);
  for (Index i = 0; i < count; ++i) sigmas[i] = start + step * static_cast<double>(i);
  return sigmas;
}

namespace {

void run_point(const PipelineConfig& config, int order, double sigma,
               std::optional<double> pm_fwhm, SweepResult& result) {
  HgTarget target;
  target.order = order;
  target.center_wavelength_nm = config.scheme.pump_center();
  target.sigma_nm = sigma;
  try {
    const ModelResult model = run_pipeline(target, config.scheme, config);
    result.records.push_back({config.preset, order, sigma, pm_fwhm, model.overlap});
  } catch (const StageError& e) {
    result.failures.push_back({order, sigma, pm_fwhm, e.stage_index(), e.what()});
  } catch (const std::exception& e) {
    result.failures.push_back({order, sigma, pm_fwhm, 0, e.what()});
  }
}

}  // namespace

SweepResult sweep_bandwidth(const std::vector<int>& orders, double sigma_start, double sigma_stop,
                            double sigma_step, const PipelineConfig& config) {
  config.validate();
  const std::vector<double> sigmas = sigma_sequence(sigma_start, sigma_stop, sigma_step);
  std::vector<int> sorted_orders = orders;
  std::sort(sorted_orders.begin(), sorted_orders.end());

  SweepResult result;
  result.records.reserve(sorted_orders.size() * sigmas.size());
  for (int order : sorted_orders)
    for (double sigma : sigmas) run_point(config, order, sigma, std::nullopt, result);
  return result;
}

SweepResult sweep_phasematching(int order, const std::vector<double>& pm_fwhms_nm,
                                double sigma_start, double sigma_stop, double sigma_step,
                                const PipelineConfig& config) {
  config.validate();
  if (config.preset != Preset::PulsedOutlook || !config.stages.phasematching)
    throw std::invalid_argument("phasematching sweep requires the pulsed-outlook preset");
  const std::vector<double> sigmas = sigma_sequence(sigma_start, sigma_stop, sigma_step);
  std::vector<double> sorted_pm = pm_fwhms_nm;
  std::sort(sorted_pm.begin(), sorted_pm.end());

  SweepResult result;
  result.records.reserve(sorted_pm.size() * sigmas.size());
  for (double pm : sorted_pm) {
    PipelineConfig point_config = config;
    point_config.phasematching.fwhm_nm = pm;
    for (double sigma : sigmas) run_point(point_config, order, sigma, pm, result);
  }
  return result;
}

std::map<int, std::vector<FidelityInterval>> find_fidelity_range(
    const std::vector<OverlapRecord>& records, double threshold) {
  std::map<int, std::vector<OverlapRecord>> by_order;
  for (const OverlapRecord& r : records) by_order[r.order].push_back(r);

  std::map<int, std::vector<FidelityInterval>> intervals;
  for (auto& [order, rs] : by_order) {
    std::stable_sort(rs.begin(), rs.end(),
                     [](const OverlapRecord& a, const OverlapRecord& b) { return a.sigma_nm < b.sigma_nm; });
    std::vector<FidelityInterval>& out = intervals[order];
    bool open = false;
    for (const OverlapRecord& r : rs) {
      if (r.overlap >= threshold) {
        if (!open) {
          out.push_back({r.sigma_nm, r.sigma_nm});
          open = true;
        } else {
          out.back().sigma_max = r.sigma_nm;
        }
      } else {
        open = false;
      }
    }
  }
  return intervals;
}

}  // namespace dfshaper
