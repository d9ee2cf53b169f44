#pragma once

#include "fbmc/rng.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

// Frequency-sampling prototype (PHYDYAS family) of length K*M, unit energy.
// Supported overlap factors: K in {2, 3, 4}.
PrototypeFilter design_prototype(int M, int K);

// System geometry plus the designed prototype. The per-pulse phase convention
// is fixed: phi(m, n) = (m + n) * pi/2 + m * n * pi, and the frequency ramp of
// subcarrier m is referenced to the integer pulse center c = Lg / 2.
struct FbmcConfig {
  int M = 0;
  int K = 0;
  PrototypeFilter proto;

  FbmcConfig(int M, int K);

  int Lg() const { return K * M; }
  int center() const { return K * M / 2; }
  int half_symbol() const { return M / 2; }
};

// Transmit pulse g(m, n) on its support [n*M/2, n*M/2 + Lg):
//   g(m,n)(l) = g(l - n*M/2) * e^{j 2 pi m (l - c) / M} * e^{j phi(m,n)}.
// Returns the Lg samples (local index) and the absolute-time offset n*M/2.
std::pair<Vec, int> pulse(const FbmcConfig& cfg, int m, int n);

// Synthesis filter bank: s(l) = sum_{m,n} d(m,n) g(m,n)(l).
// d is M x N; output length (N-1)*M/2 + Lg.
TimeSignal synthesize(const FbmcConfig& cfg, const Mat& d);

// y(l) = sum_k h(k) s(l-k) + w(l); linear convolution, circularly-symmetric
// complex Gaussian noise of variance sigma2 per complex sample.
TimeSignal apply_channel(const TimeSignal& s, const Vec& h, double sigma2, Rng& rng);
TimeSignal apply_channel(const TimeSignal& s, const Vec& h);  // noiseless

// Analysis filter bank at one symbol instant: y(p, q) = sum_l y(l) g*(p,q)(l).
// The signal must cover the full support of symbol q.
Vec analyze_symbol(const FbmcConfig& cfg, const TimeSignal& y, int q);

// All symbol instants whose support fits inside the signal.
AfbGrid analyze(const FbmcConfig& cfg, const TimeSignal& y);

// Response of the whole transmultiplexer to the one-symbol preamble d (guard,
// d, guard) when the channel is a pure k-sample delay: synthesize -> delay by
// k -> analyze at q = 1. This is the signal-level oracle for the closed-form
// system-matrix columns. Requires 0 <= k <= Lg - 1.
Vec transmux_response(const FbmcConfig& cfg, int k, const Vec& d);

}  // namespace fbmc
