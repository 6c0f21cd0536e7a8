#pragma once

#include <Eigen/Dense>

namespace dfshaper {

using Arrayd = Eigen::ArrayXd;
using Index = Eigen::Index;

// Speed of light in nm*GHz (numerically equal to m/s).
inline constexpr double kSpeedOfLight = 299792458.0;

// FWHM of a Gaussian equals 2*sqrt(2*ln 2)*sigma.
double fwhm_to_sigma(double fwhm);
double sigma_to_fwhm(double sigma);

// Uniform wavelength axis, lambda_i = center - span/2 + i*span/(n-1), all in nm.
// Immutable after construction; equality is exact on (center, span, size).
class SpectralGrid {
public:
  SpectralGrid(double center_wavelength_nm, double span_nm, Index num_points);

  double center_wavelength() const { return center_; }
  double span() const { return span_; }
  Index size() const { return wavelengths_.size(); }
  double spacing() const { return span_ / static_cast<double>(size() - 1); }
  double min_wavelength() const { return wavelengths_(0); }
  double max_wavelength() const { return wavelengths_(size() - 1); }
  const Arrayd& wavelengths() const { return wavelengths_; }
  double wavelength(Index i) const { return wavelengths_(i); }

  bool operator==(const SpectralGrid& other) const;
  bool operator!=(const SpectralGrid& other) const { return !(*this == other); }

private:
  double center_;
  double span_;
  Arrayd wavelengths_;
};

SpectralGrid make_grid(double center_nm, double span_nm, Index num_points);

// Nonnegative, finite intensity samples bound to a SpectralGrid.
class Spectrum {
public:
  Spectrum(SpectralGrid grid, Arrayd intensity);

  const SpectralGrid& grid() const { return grid_; }
  const Arrayd& intensity() const { return intensity_; }
  Index size() const { return intensity_.size(); }

private:
  SpectralGrid grid_;
  Arrayd intensity_;
};

// Gaussian blur kernel identified by its FWHM on the axis it is applied to.
class GaussianKernel {
public:
  explicit GaussianKernel(double fwhm_nm);
  double fwhm() const { return fwhm_; }
  double sigma() const { return fwhm_to_sigma(fwhm_); }

private:
  double fwhm_;
};

// Discrete convolution weights on a uniform grid: odd length, centered,
// normalized to unit sum. A single tap {1} is the identity kernel.
struct SampledKernel {
  Arrayd weights;

  Index radius() const { return (weights.size() - 1) / 2; }
  bool is_identity() const { return weights.size() == 1; }
};

// Gaussian sampled at grid offsets and truncated where the tail is negligible
// (8.5 sigma, tail mass ~1e-17). FWHM below one grid spacing yields the
// identity kernel.
SampledKernel sample_gaussian_kernel(double fwhm_nm, double grid_spacing_nm);

// sinc^2 kernel whose main-lobe FWHM equals fwhm_nm, truncated at 12 FWHM.
SampledKernel sample_sinc2_kernel(double fwhm_nm, double grid_spacing_nm);

enum class ConvolvePath { Auto, Direct, Fft };

// Zero-padded discrete convolution. Direct and FFT paths compute the same
// sum and agree to roundoff; Auto picks by cost. Unit-sum weights preserve
// the spectrum integral up to boundary leakage.
Spectrum convolve(const Spectrum& spectrum, const SampledKernel& kernel,
                  ConvolvePath path = ConvolvePath::Auto);
Spectrum convolve(const Spectrum& spectrum, const GaussianKernel& kernel,
                  ConvolvePath path = ConvolvePath::Auto);

// Pointwise product; both spectra must share one grid.
Spectrum multiply(const Spectrum& a, const Spectrum& b);

// Hard rectangular window [low, high]. Samples strictly inside are untouched
// and samples strictly outside are zeroed; a sample whose grid cell straddles
// an edge is weighted by the covered cell fraction so that the windowed mass
// is second-order accurate in the spacing.
Spectrum window(const Spectrum& spectrum, double low_nm, double high_nm);

// Translate by delta (features move towards +delta), resampled onto the
// original grid; out-of-range samples are zero.
Spectrum shift(const Spectrum& spectrum, double delta_nm);

// Trapezoid-rule integral over the grid.
double integrate(const Spectrum& spectrum);
double trapezoid(const Arrayd& values, double spacing);

// Narrowband width conversions at a stated carrier: dlambda = lambda^2 dnu / c.
double ghz_to_nm(double delta_nu_ghz, double carrier_nm);
double nm_to_ghz(double delta_lambda_nm, double carrier_nm);

// Cubic (Catmull-Rom) resampling at fractional sample positions. Positions
// outside [0, n-1] give zero; integer positions reproduce samples exactly;
// results are clamped to >= 0 so intensities stay valid.
Arrayd resample_cubic(const Arrayd& samples, const Arrayd& positions);

}  // namespace dfshaper
