#include "dfshaper/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace dfshaper {

namespace {

// Gaussian tail beyond 8.5 sigma carries ~1e-17 of the mass.
constexpr double kGaussianSupportSigmas = 8.5;
// sinc^2 tail beyond 12 FWHM carries ~4e-3 of the mass; renormalized away.
constexpr double kSinc2SupportFwhms = 12.0;
// Switch to the FFT path above this many multiply-adds.
constexpr long kDirectCostLimit = 1L << 22;

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

double fwhm_to_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))); }
double sigma_to_fwhm(double sigma) { return sigma * 2.0 * std::sqrt(2.0 * std::log(2.0)); }

SpectralGrid::SpectralGrid(double center_wavelength_nm, double span_nm, Index num_points)
    : center_(center_wavelength_nm), span_(span_nm) {
  if (num_points < 2) throw std::invalid_argument("SpectralGrid: num_points must be >= 2");
  if (!(span_nm > 0.0)) throw std::invalid_argument("SpectralGrid: span must be > 0");
  if (!(center_wavelength_nm > span_nm / 2.0))
    throw std::invalid_argument("SpectralGrid: all wavelengths must be positive");
  const double start = center_ - span_ / 2.0;
  const double step = span_ / static_cast<double>(num_points - 1);
  wavelengths_ = start + step * Arrayd::LinSpaced(num_points, 0.0, static_cast<double>(num_points - 1));
}

bool SpectralGrid::operator==(const SpectralGrid& other) const {
  return center_ == other.center_ && span_ == other.span_ && size() == other.size();
}

SpectralGrid make_grid(double center_nm, double span_nm, Index num_points) {
  return SpectralGrid(center_nm, span_nm, num_points);
}

Spectrum::Spectrum(SpectralGrid grid, Arrayd intensity)
    : grid_(std::move(grid)), intensity_(std::move(intensity)) {
  if (intensity_.size() != grid_.size())
    throw std::invalid_argument("Spectrum: intensity length does not match grid");
  if (!intensity_.allFinite())
    throw std::invalid_argument("Spectrum: intensity must be finite");
  if ((intensity_ < 0.0).any())
    throw std::invalid_argument("Spectrum: intensity must be nonnegative");
}

GaussianKernel::GaussianKernel(double fwhm_nm) : fwhm_(fwhm_nm) {
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("GaussianKernel: fwhm must be > 0");
}

SampledKernel sample_gaussian_kernel(double fwhm_nm, double grid_spacing_nm) {
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("kernel fwhm must be > 0");
  if (!(grid_spacing_nm > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (fwhm_nm < grid_spacing_nm) return SampledKernel{Arrayd::Ones(1)};  // pass-through rule

  const double sigma = fwhm_to_sigma(fwhm_nm);
  const auto radius = static_cast<Index>(std::ceil(kGaussianSupportSigmas * sigma / grid_spacing_nm));
  Arrayd offsets = grid_spacing_nm *
                   Arrayd::LinSpaced(2 * radius + 1, -static_cast<double>(radius), static_cast<double>(radius));
  Arrayd weights = (-offsets.square() / (2.0 * sigma * sigma)).exp();
  weights /= weights.sum();
  return SampledKernel{std::move(weights)};
}

SampledKernel sample_sinc2_kernel(double fwhm_nm, double grid_spacing_nm) {
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("kernel fwhm must be > 0");
  if (!(grid_spacing_nm > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (fwhm_nm < grid_spacing_nm) return SampledKernel{Arrayd::Ones(1)};

  // Solve sin(x)/x = 1/sqrt(2); the half-maximum of sinc^2 sits at +-x_half.
  double lo = 1.0, hi = 1.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::sin(mid) / mid > 1.0 / std::sqrt(2.0) ? lo : hi) = mid;
  }
  const double x_half = 0.5 * (lo + hi);
  const double scale = 2.0 * x_half / fwhm_nm;  // k(x) = sinc^2(scale*x)

  const auto radius = static_cast<Index>(std::ceil(kSinc2SupportFwhms * fwhm_nm / grid_spacing_nm));
  Arrayd weights(2 * radius + 1);
  for (Index i = 0; i < weights.size(); ++i) {
    const double x = scale * grid_spacing_nm * static_cast<double>(i - radius);
    weights(i) = (x == 0.0) ? 1.0 : std::pow(std::sin(x) / x, 2);
  }
  weights /= weights.sum();
  return SampledKernel{std::move(weights)};
}

namespace {

Arrayd convolve_direct(const Arrayd& signal, const Arrayd& weights) {
  const Index n = signal.size();
  const Index radius = (weights.size() - 1) / 2;
  Arrayd out = Arrayd::Zero(n);
  for (Index k = -radius; k <= radius; ++k) {
    const double w = weights(radius + k);
    const Index start = std::max<Index>(0, k);
    const Index len = n - std::abs(k);
    if (len <= 0) continue;
    out.segment(start, len) += w * signal.segment(start - k, len);
  }
  return out;
}

Arrayd convolve_fft(const Arrayd& signal, const Arrayd& weights) {
  const Index n = signal.size();
  const Index radius = (weights.size() - 1) / 2;
  const Index padded = next_pow2(n + 2 * radius);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(padded);
  a.head(n) = signal.matrix();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(padded);
  for (Index k = -radius; k <= radius; ++k) b((k + padded) % padded) = weights(radius + k);

  Eigen::FFT<double> fft;
  Eigen::VectorXcd fa, fb;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  fa = fa.cwiseProduct(fb);
  Eigen::VectorXd conv;
  fft.inv(conv, fa);
  // The round trip can leave tiny negatives.
  return conv.head(n).array().max(0.0);
}

}  // namespace

Spectrum convolve(const Spectrum& spectrum, const SampledKernel& kernel, ConvolvePath path) {
  if (kernel.weights.size() % 2 == 0)
    throw std::invalid_argument("convolve: kernel length must be odd");
  if (kernel.is_identity()) return spectrum;

  const Arrayd& signal = spectrum.intensity();
  const long cost = static_cast<long>(signal.size()) * static_cast<long>(kernel.weights.size());
  if (path == ConvolvePath::Auto)
    path = cost > kDirectCostLimit ? ConvolvePath::Fft : ConvolvePath::Direct;

  Arrayd out = (path == ConvolvePath::Direct) ? convolve_direct(signal, kernel.weights)
                                              : convolve_fft(signal, kernel.weights);
  return Spectrum(spectrum.grid(), std::move(out));
}

Spectrum convolve(const Spectrum& spectrum, const GaussianKernel& kernel, ConvolvePath path) {
  if (kernel.fwhm() > spectrum.grid().span())
    throw std::invalid_argument("convolve: kernel wider than the grid span");
  return convolve(spectrum, sample_gaussian_kernel(kernel.fwhm(), spectrum.grid().spacing()), path);
}

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("multiply: grid mismatch");
  return Spectrum(a.grid(), a.intensity() * b.intensity());
}

Spectrum window(const Spectrum& spectrum, double low_nm, double high_nm) {
  if (!(low_nm < high_nm)) throw std::invalid_argument("window: low must be < high");
  const SpectralGrid& grid = spectrum.grid();
  const double h = grid.spacing();
  if (low_nm <= grid.min_wavelength() - h / 2.0 && high_nm >= grid.max_wavelength() + h / 2.0)
    return spectrum;

  Arrayd out = spectrum.intensity();
  for (Index i = 0; i < grid.size(); ++i) {
    const double lo_cell = grid.wavelength(i) - h / 2.0;
    const double hi_cell = grid.wavelength(i) + h / 2.0;
    if (lo_cell >= low_nm && hi_cell <= high_nm) continue;  // fully inside, untouched
    const double covered = std::min(hi_cell, high_nm) - std::max(lo_cell, low_nm);
    out(i) *= std::clamp(covered / h, 0.0, 1.0);
  }
  return Spectrum(grid, std::move(out));
}

Spectrum shift(const Spectrum& spectrum, double delta_nm) {
  if (delta_nm == 0.0) return spectrum;
  const Index n = spectrum.size();
  const double steps = delta_nm / spectrum.grid().spacing();
  Arrayd positions = Arrayd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) - steps;
  return Spectrum(spectrum.grid(), resample_cubic(spectrum.intensity(), positions));
}

double trapezoid(const Arrayd& values, double spacing) {
  return spacing * (values.sum() - 0.5 * (values(0) + values(values.size() - 1)));
}

double integrate(const Spectrum& spectrum) {
  return trapezoid(spectrum.intensity(), spectrum.grid().spacing());
}

double ghz_to_nm(double delta_nu_ghz, double carrier_nm) {
  if (!(carrier_nm > 0.0)) throw std::invalid_argument("ghz_to_nm: carrier must be > 0");
  if (delta_nu_ghz < 0.0) throw std::invalid_argument("ghz_to_nm: width must be >= 0");
  return carrier_nm * carrier_nm * delta_nu_ghz / kSpeedOfLight;
}

double nm_to_ghz(double delta_lambda_nm, double carrier_nm) {
  if (!(carrier_nm > 0.0)) throw std::invalid_argument("nm_to_ghz: carrier must be > 0");
  if (delta_lambda_nm < 0.0) throw std::invalid_argument("nm_to_ghz: width must be >= 0");
  return kSpeedOfLight * delta_lambda_nm / (carrier_nm * carrier_nm);
}

Arrayd resample_cubic(const Arrayd& samples, const Arrayd& positions) {
  const Index n = samples.size();
  Arrayd out(positions.size());
  auto sample_or_zero = [&](Index j) { return (j >= 0 && j < n) ? samples(j) : 0.0; };
  for (Index q = 0; q < positions.size(); ++q) {
    const double p = positions(q);
    if (!(p >= 0.0) || p > static_cast<double>(n - 1)) {
      out(q) = 0.0;
      continue;
    }
    Index j = static_cast<Index>(std::floor(p));
    if (j > n - 2) j = n - 2;
    const double t = p - static_cast<double>(j);
    if (t == 0.0) {  // exact node, no arithmetic
      out(q) = samples(j);
      continue;
    }
    if (t == 1.0) {
      out(q) = samples(j + 1);
      continue;
    }
    const double ym1 = sample_or_zero(j - 1);
    const double y0 = samples(j);
    const double y1 = samples(j + 1);
    const double y2 = sample_or_zero(j + 2);
    const double val =
        y0 + 0.5 * t * (y1 - ym1 + t * (2.0 * ym1 - 5.0 * y0 + 4.0 * y1 - y2 +
                                        t * (3.0 * (y0 - y1) + y2 - ym1)));
    out(q) = std::max(val, 0.0);
  }
  return out;
}

}  // namespace dfshaper
