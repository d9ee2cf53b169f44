#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fbmc {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Real, unit-energy pulse of length K*M used to modulate every subcarrier.
struct PrototypeFilter {
  RealVec g;
  double energy = 0.0;

  int length() const { return static_cast<int>(g.size()); }
};

// Complex baseband samples, index origin 0.
struct TimeSignal {
  Vec samples;

  int length() const { return static_cast<int>(samples.size()); }
};

// Demodulated subcarrier samples y(p, q), subcarrier p in [0, M), symbol
// instant q at multiples of M/2 samples.
struct AfbGrid {
  Mat y;  // M x n_symbols

  int M() const { return static_cast<int>(y.rows()); }
  int n_symbols() const { return static_cast<int>(y.cols()); }
};

// Complex channel impulse response taps h[0..L_h-1].
struct ChannelRealization {
  Vec h;

  int taps() const { return static_cast<int>(h.size()); }
};

// Frequency response on the M subcarrier frequencies:
// H(m) = sum_k h(k) e^{-j 2 pi m k / M}  (= sqrt(M) * unitary-DFT columns times h).
Vec cfr(const Vec& h, int M);

// i^e for integer e (exact, no trigonometric rounding).
inline cplx ipow(long long e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Unitary M-point DFT matrix, F(l, m) = e^{-j 2 pi l m / M} / sqrt(M).
Mat dft_matrix(int M);

}  // namespace fbmc
