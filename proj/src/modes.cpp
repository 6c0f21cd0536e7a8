#include "dfshaper/modes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dfshaper {

void validate(const HgTarget& target) {
  if (target.order < 0 || target.order > kMaxHgOrder)
    throw std::invalid_argument("HgTarget: order must be in [0, 20]");
  if (!(target.sigma_nm > 0.0)) throw std::invalid_argument("HgTarget: sigma must be > 0");
  if (!(target.center_wavelength_nm > 0.0))
    throw std::invalid_argument("HgTarget: center wavelength must be > 0");
}

double hg_required_half_span(const HgTarget& target) {
  return target.sigma_nm * (2.0 * std::sqrt(static_cast<double>(target.order)) + 4.0);
}

double hermite(int n, double x) {
  if (n < 0 || n > kMaxHgOrder) throw std::invalid_argument("hermite: order must be in [0, 20]");
  double h_prev = 0.0, h = 1.0;
  for (int k = 0; k < n; ++k) {
    const double h_next = 2.0 * x * h - 2.0 * static_cast<double>(k) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

Arrayd hermite(int n, const Arrayd& x) {
  if (n < 0 || n > kMaxHgOrder) throw std::invalid_argument("hermite: order must be in [0, 20]");
  Arrayd h_prev = Arrayd::Zero(x.size());
  Arrayd h = Arrayd::Ones(x.size());
  for (int k = 0; k < n; ++k) {
    Arrayd h_next = 2.0 * x * h - 2.0 * static_cast<double>(k) * h_prev;
    h_prev = std::move(h);
    h = std::move(h_next);
  }
  return h;
}

Spectrum hg_spectrum(const HgTarget& target, const SpectralGrid& grid) {
  validate(target);
  const double need = hg_required_half_span(target);
  const double slack = 1e-9 * need;
  if (grid.min_wavelength() > target.center_wavelength_nm - need + slack ||
      grid.max_wavelength() < target.center_wavelength_nm + need - slack)
    throw std::invalid_argument("hg_spectrum: grid too narrow, needs +-" +
                                std::to_string(need) + " nm around the target center");

  const Arrayd u = (grid.wavelengths() - target.center_wavelength_nm) / target.sigma_nm;
  const Arrayd amplitude = hermite(target.order, u) * (-0.5 * u.square()).exp();
  Arrayd intensity = (target.convention == AmplitudeConvention::SquaredAmplitude)
                         ? amplitude.square().eval()
                         : amplitude.abs().eval();
  intensity /= intensity.maxCoeff();
  return Spectrum(grid, std::move(intensity));
}

double overlap(const Spectrum& s, const Spectrum& t) {
  if (s.grid() != t.grid()) throw std::invalid_argument("overlap: grid mismatch");
  if (s.intensity().maxCoeff() == 0.0 || t.intensity().maxCoeff() == 0.0)
    throw std::invalid_argument("overlap: spectrum is identically zero");
  const double h = s.grid().spacing();
  const double st = trapezoid(s.intensity() * t.intensity(), h);
  const double ss = trapezoid(s.intensity() * s.intensity(), h);
  const double tt = trapezoid(t.intensity() * t.intensity(), h);
  return (st * st) / (ss * tt);
}

}  // namespace dfshaper
