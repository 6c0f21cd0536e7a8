#include "dfshaper/dfg.hpp"

#include <cmath>
#include <stdexcept>

namespace dfshaper {

DfgScheme::DfgScheme(double input_wavelength_nm, double pump_center_nm)
    : input_wavelength_(input_wavelength_nm), pump_center_(pump_center_nm) {
  if (!(input_wavelength_nm > 0.0))
    throw std::invalid_argument("DfgScheme: input wavelength must be > 0");
  if (!(input_wavelength_nm < pump_center_nm))
    throw std::invalid_argument("DfgScheme: input wavelength must be below the pump wavelength");
}

double DfgScheme::output_center() const {
  const double inv = 1.0 / input_wavelength_ - 1.0 / pump_center_;
  const double out = 1.0 / inv;
  if (!(out > 0.0) || !std::isfinite(out))
    throw std::domain_error("DfgScheme: output wavelength is not positive and finite");
  return out;
}

double DfgScheme::width_compression() const {
  const double r = output_center() / pump_center_;
  return r * r;
}

double output_center(const DfgScheme& scheme) { return scheme.output_center(); }

Spectrum map_pump_to_output(const Spectrum& pump_spectrum, const DfgScheme& scheme,
                            const SpectralGrid& out_grid) {
  if (out_grid.min_wavelength() <= scheme.input_wavelength())
    throw std::invalid_argument("map_pump_to_output: output grid reaches below the input wavelength");

  const SpectralGrid& pump_grid = pump_spectrum.grid();
  const double inv_in = 1.0 / scheme.input_wavelength();

  // nu_out = nu_in - nu_pump: the source pump wavelength for each output sample.
  const Arrayd pump_source = (inv_in - out_grid.wavelengths().inverse()).inverse();

  // The main feature must land on the output grid; clipped tails are just
  // outside the spectrometer view and are dropped.
  Index peak = 0;
  const double peak_value = pump_spectrum.intensity().maxCoeff(&peak);
  if (peak_value > 0.0) {
    const double peak_image = 1.0 / (inv_in - 1.0 / pump_grid.wavelength(peak));
    if (peak_image < out_grid.min_wavelength() - out_grid.spacing() / 2.0 ||
        peak_image > out_grid.max_wavelength() + out_grid.spacing() / 2.0)
      throw std::domain_error("map_pump_to_output: output grid does not cover the mapped spectrum");
  }

  const Arrayd positions = (pump_source - pump_grid.min_wavelength()) / pump_grid.spacing();
  Arrayd transported = resample_cubic(pump_spectrum.intensity(), positions);

  // Intensity per frequency is conserved; per wavelength this is the Jacobian
  // (lambda_p / lambda_o)^2.
  transported *= (pump_source / out_grid.wavelengths()).square();
  return Spectrum(out_grid, std::move(transported));
}

Spectrum pump_envelope(double center_nm, double fwhm_nm, const SpectralGrid& grid) {
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("pump_envelope: fwhm must be > 0");
  const Arrayd delta = grid.wavelengths() - center_nm;
  return Spectrum(grid, (-4.0 * std::log(2.0) * delta.square() / (fwhm_nm * fwhm_nm)).exp());
}

SampledKernel phasematching_kernel(const PhasematchingSpec& spec, double grid_spacing_nm) {
  return spec.shape == PmShape::Gaussian ? sample_gaussian_kernel(spec.fwhm_nm, grid_spacing_nm)
                                         : sample_sinc2_kernel(spec.fwhm_nm, grid_spacing_nm);
}

}  // namespace dfshaper
