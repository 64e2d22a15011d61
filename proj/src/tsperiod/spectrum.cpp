#include "tsperiod/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tsperiod/error.hpp"

namespace tsperiod {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Decomposition decompose(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 4) throw Error(ErrorCode::TooShort, "decomposition needs at least 4 samples");
  const double tbar = (static_cast<double>(m) + 1.0) / 2.0;
  double vbar = 0.0;
  for (double v : values) vbar += v;
  vbar /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dt = static_cast<double>(i + 1) - tbar;
    sxy += dt * (values[i] - vbar);
    sxx += dt * dt;
    scale = std::max(scale, std::abs(values[i]));
  }
  const double slope = sxy / sxx;
  Decomposition d;
  d.m = m;
  d.trend.resize(m);
  d.periodic.resize(m);
  d.residual.assign(m, 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    d.trend[i] = vbar + slope * (static_cast<double>(i + 1) - tbar);
    d.periodic[i] = values[i] - d.trend[i];
    peak = std::max(peak, std::abs(d.periodic[i]));
  }
  // An exact line leaves only rounding noise; treat it as no periodic content.
  if (peak <= 1e-12 * scale) std::fill(d.periodic.begin(), d.periodic.end(), 0.0);
  return d;
}

std::vector<double> knot_values(const AbstractSeries& abstract) {
  std::vector<double> v;
  v.reserve(abstract.size());
  for (const auto& k : abstract.knots()) v.push_back(k.k);
  return v;
}

Decomposition decompose(const AbstractSeries& abstract) { return decompose(knot_values(abstract)); }

SpectrumCoefficients fourier_coefficients(std::span<const double> p) {
  const std::size_t m = p.size();
  if (m < 4) throw Error(ErrorCode::TooShort, "spectrum needs at least 4 samples");
  const std::size_t k = m / 2;
  std::vector<double> cos_t(m), sin_t(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ang = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    cos_t[j] = std::cos(ang);
    sin_t[j] = std::sin(ang);
  }
  SpectrumCoefficients c;
  c.m = m;
  c.omega0 = kTwoPi / static_cast<double>(m);
  double sum = 0.0;
  for (double v : p) sum += v;
  c.a0 = sum / static_cast<double>(m);
  c.a.resize(k);
  c.b.resize(k);
  const double scale = 2.0 / static_cast<double>(m);
  for (std::size_t i = 1; i <= k; ++i) {
    double sa = 0.0, sb = 0.0;
    std::size_t idx = i % m;  // (i * t) mod m for t = 1
    for (std::size_t t = 1; t <= m; ++t) {
      sa += p[t - 1] * cos_t[idx];
      sb += p[t - 1] * sin_t[idx];
      idx += i;
      if (idx >= m) idx -= m;
    }
    c.a[i - 1] = scale * sa;
    c.b[i - 1] = scale * sb;
  }
  return c;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw Error(ErrorCode::ShapeError, "FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  std::vector<std::complex<double>> tw;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    tw.resize(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(len);
      tw[j] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const auto u = data[i + j];
        const auto v = data[i + j + half] * tw[j];
        data[i + j] = u + v;
        data[i + j + half] = u - v;
      }
    }
  }
}

namespace {

// Work (samples x spectra) above which sums run through a chirp-z transform.
constexpr std::size_t kChirpWork = std::size_t{1} << 15;

std::complex<double> unit_phase(long double angle) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const long double r = std::fmod(angle, two_pi);
  return {static_cast<double>(std::cos(r)), static_cast<double>(std::sin(r))};
}

// y[v] = sum_u x[u] * exp(j * alpha * u * v) for v in [0, count).
std::vector<std::complex<double>> chirp_z(std::span<const std::complex<double>> x, double alpha,
                                          std::size_t count) {
  const std::size_t n = x.size();
  const std::size_t len = next_power_of_two(n + count - 1);
  const long double half = static_cast<long double>(alpha) / 2.0L;
  auto chirp = [&](std::size_t d) {
    const long double dd = static_cast<long double>(d);
    return unit_phase(half * dd * dd);
  };
  std::vector<std::complex<double>> a(len), b(len);
  for (std::size_t u = 0; u < n; ++u) a[u] = x[u] * chirp(u);
  for (std::size_t d = 0; d < count; ++d) b[d] = std::conj(chirp(d));
  for (std::size_t d = 1; d < n; ++d) b[len - d] = std::conj(chirp(d));
  fft_inplace(a);
  fft_inplace(b);
  for (std::size_t i = 0; i < len; ++i) a[i] = std::conj(a[i] * b[i]);
  fft_inplace(a);
  const double inv = 1.0 / static_cast<double>(len);
  std::vector<std::complex<double>> y(count);
  for (std::size_t v = 0; v < count; ++v) y[v] = std::conj(a[v]) * inv * chirp(v);
  return y;
}

}  // namespace

SpectrumCoefficients fourier_coefficients_fft(std::span<const double> p) {
  const std::size_t m = p.size();
  if (m < 4) throw Error(ErrorCode::TooShort, "spectrum needs at least 4 samples");
  std::vector<std::complex<double>> buf(p.begin(), p.end());
  fft_inplace(buf);
  const std::size_t k = m / 2;
  SpectrumCoefficients c;
  c.m = m;
  c.omega0 = kTwoPi / static_cast<double>(m);
  c.a0 = buf[0].real() / static_cast<double>(m);
  c.a.resize(k);
  c.b.resize(k);
  const double scale = 2.0 / static_cast<double>(m);
  for (std::size_t i = 1; i <= k; ++i) {
    // Samples are indexed from t = 1, so undo the one-step shift of the DFT origin.
    const double ang = -kTwoPi * static_cast<double>(i) / static_cast<double>(m);
    const auto z = buf[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    c.a[i - 1] = scale * z.real();
    c.b[i - 1] = -scale * z.imag();
  }
  return c;
}

double reconstruct_spectrum(const SpectrumCoefficients& c, std::size_t t) {
  if (t < 1 || t > c.m) throw Error(ErrorCode::IndexError, "reconstruction index out of range");
  double v = c.a0;
  for (std::size_t i = 1; i <= c.k(); ++i) {
    // Reduce the angle exactly in integer arithmetic before scaling.
    const double ang = c.omega0 * static_cast<double>((i * t) % c.m);
    v += c.a[i - 1] * std::cos(ang) + c.b[i - 1] * std::sin(ang);
  }
  return v;
}

double fit_residual(std::span<const double> p, const SpectrumCoefficients& c) {
  if (p.size() != c.m) throw Error(ErrorCode::ShapeError, "length mismatch between series and spectrum");
  const std::size_t m = c.m;
  if (m == 0) return 0.0;
  if (m * c.k() > kChirpWork) {
    std::vector<std::complex<double>> coef(c.k());
    for (std::size_t i = 0; i < c.k(); ++i) coef[i] = {c.a[i], -c.b[i]};
    const auto y = chirp_z(coef, c.omega0, m + 1);
    double q = 0.0;
    for (std::size_t t = 1; t <= m; ++t) {
      const double fit = c.a0 + (y[t] * unit_phase(static_cast<long double>(c.omega0) * t)).real();
      const double e = p[t - 1] - fit;
      q += e * e;
    }
    return q;
  }
  std::vector<double> cos_t(m), sin_t(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ang = c.omega0 * static_cast<double>(j);
    cos_t[j] = std::cos(ang);
    sin_t[j] = std::sin(ang);
  }
  std::vector<double> fit(m, c.a0);
  for (std::size_t i = 1; i <= c.k(); ++i) {
    const double ai = c.a[i - 1], bi = c.b[i - 1];
    if (ai == 0.0 && bi == 0.0) continue;
    std::size_t idx = i % m;
    for (std::size_t t = 1; t <= m; ++t) {
      fit[t - 1] += ai * cos_t[idx] + bi * sin_t[idx];
      idx += i;
      if (idx >= m) idx -= m;
    }
  }
  double q = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double e = p[t] - fit[t];
    q += e * e;
  }
  return q;
}

double spectrum_variance(const SpectrumCoefficients& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.k(); ++i) s += c.a[i] * c.a[i] + c.b[i] * c.b[i];
  return 0.5 * s;
}

std::vector<double> significance(const SpectrumCoefficients& c) {
  const double sp2 = spectrum_variance(c);
  if (!(sp2 > 0.0)) throw Error(ErrorCode::NoPeriodicity, "periodic item has zero variance");
  std::vector<double> theta(c.k());
  const double inv_m = 1.0 / static_cast<double>(c.m);
  for (std::size_t i = 0; i < c.k(); ++i) {
    const double c2 = c.a[i] * c.a[i] + c.b[i] * c.b[i];
    const double denom = sp2 - inv_m * c2;
    if (c2 == 0.0) {
      theta[i] = 0.0;
    } else if (denom <= 1e-12 * sp2) {
      theta[i] = std::numeric_limits<double>::infinity();
    } else {
      theta[i] = c2 / denom;
    }
  }
  return theta;
}

DominantPeriod dominant_period(const AbstractSeries& abstract) {
  const auto d = decompose(abstract);
  const auto c = fourier_coefficients(d.periodic);
  const auto theta = significance(c);
  std::size_t best = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    if (theta[i] > theta[best]) best = i;
  }
  DominantPeriod r;
  r.index = best + 1;
  r.theta_max = theta[best];
  r.length = static_cast<double>(c.m) / static_cast<double>(r.index);
  return r;
}

SpectrumCoefficients similarity_adjusted_coefficients(std::span<const double> p, std::size_t len_a,
                                                      std::size_t len_b, double s_ab, double mu,
                                                      std::size_t max_index) {
  if (len_a + len_b == 0) throw Error(ErrorCode::ShapeError, "empty comparison pair");
  const std::size_t m = p.size();
  if (m < 4) throw Error(ErrorCode::TooShort, "spectrum needs at least 4 samples");
  std::size_t k = m / 2;
  if (max_index != 0) k = std::min(k, max_index);
  SpectrumCoefficients c;
  c.m = m;
  c.omega0 = kTwoPi / static_cast<double>(m);
  double sum = 0.0;
  for (double v : p) sum += v;
  c.a0 = sum / static_cast<double>(m);
  c.a.resize(k);
  c.b.resize(k);
  const double scale = 2.0 / static_cast<double>(m);
  const double base = kTwoPi / static_cast<double>(len_a + len_b) * s_ab;
  if (m * k > kChirpWork) {
    const std::vector<std::complex<double>> x(p.begin(), p.end());
    const auto y = chirp_z(x, base, k + 1);
    const long double shift = static_cast<long double>(base) + static_cast<long double>(mu);
    for (std::size_t i = 1; i <= k; ++i) {
      const auto z = y[i] * unit_phase(shift * static_cast<long double>(i));
      c.a[i - 1] = scale * z.real();
      c.b[i - 1] = scale * z.imag();
    }
    return c;
  }
  constexpr std::size_t kReanchor = 32;
  for (std::size_t i = 1; i <= k; ++i) {
    const double w = base * static_cast<double>(i);
    const double phase = static_cast<double>(i) * mu;
    const std::complex<double> step(std::cos(w), std::sin(w));
    std::complex<double> z;
    double sa = 0.0, sb = 0.0;
    for (std::size_t t = 1; t <= m; ++t) {
      if ((t - 1) % kReanchor == 0) {
        const double ang = w * static_cast<double>(t) + phase;
        z = {std::cos(ang), std::sin(ang)};
      } else {
        z *= step;
      }
      sa += p[t - 1] * z.real();
      sb += p[t - 1] * z.imag();
    }
    c.a[i - 1] = scale * sa;
    c.b[i - 1] = scale * sb;
  }
  return c;
}

}  // namespace tsperiod
