#pragma once

#include "dfshaper/spectral.hpp"

namespace dfshaper {

// Whether a target spectrum is the squared Hermite-Gauss envelope (what a
// spectrometer measures) or its absolute value.
enum class AmplitudeConvention { SquaredAmplitude, AbsoluteAmplitude };

// Hermite-Gauss target: order n, central wavelength and base-Gaussian width
// sigma of the envelope H_n((lambda-lambda0)/sigma) * exp(-(lambda-lambda0)^2/(2 sigma^2)).
struct HgTarget {
  int order = 0;
  double center_wavelength_nm = 1550.0;
  double sigma_nm = 1.0;
  AmplitudeConvention convention = AmplitudeConvention::SquaredAmplitude;
};

inline constexpr int kMaxHgOrder = 20;

void validate(const HgTarget& target);

// Half-span a grid must provide around the target center so the mode fits.
double hg_required_half_span(const HgTarget& target);

// Physicists' Hermite polynomial via H0=1, H1=2x, H_{k+1}=2x H_k - 2k H_{k-1}.
double hermite(int n, double x);
Arrayd hermite(int n, const Arrayd& x);

// Target intensity spectrum, peak-normalized to 1. Exactly n interior zeros
// and n+1 lobes; even about the center wavelength for every order.
Spectrum hg_spectrum(const HgTarget& target, const SpectralGrid& grid);

// Overlap OL = (int S*T)^2 / (int S^2 * int T^2) with trapezoid integrals.
// Symmetric, scale-invariant, in [0, 1] up to roundoff; 1 iff proportional.
double overlap(const Spectrum& s, const Spectrum& t);

}  // namespace dfshaper
