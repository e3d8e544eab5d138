#include "neurogate/signal/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace neurogate::signal {

namespace {

using cd = std::complex<double>;

// Bilinear transform with c = 2 * fs.
cd bilinear(cd s, double c) { return (c + s) / (c - s); }

// Denominator coefficients for a conjugate (or real) pole pair.
void pole_pair_to_section(cd z1, cd z2, BiquadSection& sec) {
  sec.a1 = -(z1 + z2).real();
  sec.a2 = (z1 * z2).real();
}

}  // namespace

ButterworthBandpass::ButterworthBandpass(int order, double lo_hz, double hi_hz,
                                         double sample_rate_hz)
    : sample_rate_hz_(sample_rate_hz), order_(order) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("band-pass order must be even and >= 2");
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("sample rate must be positive");
  if (!(0.0 < lo_hz && lo_hz < hi_hz && hi_hz < sample_rate_hz / 2.0))
    throw std::invalid_argument("band edges must satisfy 0 < lo < hi < sample_rate/2");

  const int n = order / 2;  // low-pass prototype order
  const double c = 2.0 * sample_rate_hz;
  const double wl = c * std::tan(M_PI * lo_hz / sample_rate_hz);
  const double wh = c * std::tan(M_PI * hi_hz / sample_rate_hz);
  const double bw = wh - wl;
  const double w0sq = wl * wh;

  // Analog band-pass poles from the prototype pole p:
  //   s = (bw*p +- sqrt((bw*p)^2 - 4*w0sq)) / 2
  // Each complex prototype pole contributes two sections (one per branch,
  // closed with its conjugate); a real prototype pole contributes one.
  std::vector<std::pair<cd, cd>> pole_pairs;
  for (int k = 0; k < n; ++k) {
    const double theta = M_PI * (2.0 * k + n + 1.0) / (2.0 * n);
    const cd p = std::polar(1.0, theta);
    if (p.imag() < -1e-12) continue;  // conjugate handled with its partner
    const cd a = bw * p * 0.5;
    const cd d = std::sqrt(a * a - w0sq);
    const cd s1 = a + d;
    const cd s2 = a - d;
    if (p.imag() > 1e-12) {
      pole_pairs.emplace_back(s1, std::conj(s1));
      pole_pairs.emplace_back(s2, std::conj(s2));
    } else {
      // real prototype pole: s1 and s2 are either both real or conjugates
      pole_pairs.emplace_back(s1, s2);
    }
  }

  sections_.clear();
  for (auto& [s1, s2] : pole_pairs) {
    BiquadSection sec{1.0, 0.0, -1.0, 0.0, 0.0};  // zeros at z = +1 and z = -1
    pole_pair_to_section(bilinear(s1, c), bilinear(s2, c), sec);
    sections_.push_back(sec);
  }

  // Normalize to unit gain at the (digital) center frequency.
  const double w0d = 2.0 * std::atan(std::sqrt(w0sq) / c);
  const double f0 = w0d * sample_rate_hz / (2.0 * M_PI);
  const double m = magnitude_at(f0);
  if (!(m > 0.0)) throw std::runtime_error("filter design produced zero center gain");
  const double g = std::pow(1.0 / m, 1.0 / double(sections_.size()));
  for (auto& sec : sections_) {
    sec.b0 *= g;
    sec.b1 *= g;
    sec.b2 *= g;
  }
}

double ButterworthBandpass::magnitude_at(double f_hz) const {
  const double w = 2.0 * M_PI * f_hz / sample_rate_hz_;
  const cd z1 = std::polar(1.0, -w);   // z^-1
  const cd z2 = z1 * z1;
  cd h{1.0, 0.0};
  for (const auto& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return std::abs(h);
}

std::vector<double> ButterworthBandpass::apply(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  for (const auto& s : sections_) {
    double z0 = 0.0, z1 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z0;
      z0 = s.b1 * in - s.a1 * out + z1;
      z1 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> ButterworthBandpass::apply_zero_phase(std::span<const double> x) const {
  const std::size_t t = x.size();
  if (t == 0) return {};
  const std::size_t padlen = std::min<std::size_t>(t - 1, std::size_t(3 * (2 * order_ + 1)));

  std::vector<double> ext(t + 2 * padlen);
  for (std::size_t i = 0; i < padlen; ++i)
    ext[i] = 2.0 * x[0] - x[padlen - i];
  std::copy(x.begin(), x.end(), ext.begin() + padlen);
  for (std::size_t i = 0; i < padlen; ++i)
    ext[padlen + t + i] = 2.0 * x[t - 1] - x[t - 2 - i];

  std::vector<double> y = apply(ext);
  std::reverse(y.begin(), y.end());
  y = apply(y);
  std::reverse(y.begin(), y.end());

  return {y.begin() + padlen, y.begin() + padlen + t};
}

}  // namespace neurogate::signal
