#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "tsperiod/series.hpp"

namespace tsperiod {

struct Decomposition {
  std::vector<double> trend;
  std::vector<double> periodic;
  std::vector<double> residual;
  std::size_t m = 0;
};

struct SpectrumCoefficients {
  double a0 = 0.0;
  std::vector<double> a;  // a[i-1] holds a_i
  std::vector<double> b;
  std::size_t m = 0;
  double omega0 = 0.0;
  std::size_t k() const noexcept { return a.size(); }
};

/// OLS line over sample index 1..m; residual stays zero.
Decomposition decompose(std::span<const double> values);
Decomposition decompose(const AbstractSeries& abstract);

std::vector<double> knot_values(const AbstractSeries& abstract);

SpectrumCoefficients fourier_coefficients(std::span<const double> p);
/// Same coefficients through a radix-2 FFT; length must be a power of two.
SpectrumCoefficients fourier_coefficients_fft(std::span<const double> p);

double reconstruct_spectrum(const SpectrumCoefficients& c, std::size_t t);
double fit_residual(std::span<const double> p, const SpectrumCoefficients& c);
double spectrum_variance(const SpectrumCoefficients& c);
std::vector<double> significance(const SpectrumCoefficients& c);

struct DominantPeriod {
  double length = 0.0;  // L = m / i
  double theta_max = 0.0;
  std::size_t index = 0;
};

DominantPeriod dominant_period(const AbstractSeries& abstract);

/// Coefficients with the pair-derived frequency (2*pi*i/(n_a+n_b))*S_ab and phase i*mu.
/// `max_index` = 0 computes all floor(m/2) spectra.
SpectrumCoefficients similarity_adjusted_coefficients(std::span<const double> p, std::size_t len_a,
                                                      std::size_t len_b, double s_ab, double mu,
                                                      std::size_t max_index = 0);

void fft_inplace(std::vector<std::complex<double>>& data);
bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

}  // namespace tsperiod
