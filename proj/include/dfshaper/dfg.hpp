#pragma once

#include "dfshaper/spectral.hpp"

namespace dfshaper {

// Difference frequency generation wavelength scheme: a quasi-monochromatic
// input is converted with a shaped pump, nu_out = nu_in - nu_pump.
class DfgScheme {
public:
  DfgScheme() : DfgScheme(557.0, 1550.0) {}
  DfgScheme(double input_wavelength_nm, double pump_center_nm);

  double input_wavelength() const { return input_wavelength_; }
  double pump_center() const { return pump_center_; }

  // 1/lambda_out = 1/lambda_in - 1/lambda_pump
  double output_center() const;

  // First-order width ratio between pump-axis and output-axis features,
  // (lambda_out / lambda_pump)^2.
  double width_compression() const;

private:
  double input_wavelength_;
  double pump_center_;
};

double output_center(const DfgScheme& scheme);

// Transport a pump-axis spectrum to the output axis through energy
// conservation. For each output wavelength the source pump wavelength is
// 1/lambda_p = 1/lambda_in - 1/lambda_o; intensity per frequency is conserved,
// so the per-wavelength intensity carries the exact Jacobian (lambda_p/lambda_o)^2.
// nu_out decreases as nu_pump increases, i.e. the axis ordering is mirrored.
Spectrum map_pump_to_output(const Spectrum& pump_spectrum, const DfgScheme& scheme,
                            const SpectralGrid& out_grid);

// Peak-1 Gaussian intensity envelope of the available pump light.
Spectrum pump_envelope(double center_nm, double fwhm_nm, const SpectralGrid& grid);

enum class PmShape { Gaussian, SincSquared };

// Phasematching acceptance parameterized by its FWHM on the pump axis.
// Gaussian by default; sinc^2 models an unapodized grating.
struct PhasematchingSpec {
  double fwhm_nm = 0.2;
  PmShape shape = PmShape::Gaussian;
};

// Area-normalized blur kernel of the stated FWHM (main-lobe FWHM for sinc^2).
// FWHM below the grid spacing yields the identity kernel.
SampledKernel phasematching_kernel(const PhasematchingSpec& spec, double grid_spacing_nm);

}  // namespace dfshaper
