#pragma once

#include <string>
#include <vector>

#include "fbmc/sysmodel.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

// Result of a single estimation trial, with the frequency-domain error metric
// used throughout the experiments.
struct EstimationResult {
  Vec h_hat;
  Vec H_hat;
  std::string method;
  double nmse = 0.0;
};

// ||H - H_hat||^2 / ||H||^2 on length-M frequency responses.
double nmse(const Vec& H_true, const Vec& H_hat);

// Weighted least-squares (Gauss-Markov) channel estimate from one analysis
// vector y of length M, using the precomputed response matrix and noise
// covariance core held in sys. Throws if the whitened response matrix is
// numerically rank-deficient; the message reports the condition number.
Vec td_estimate(const SystemMatrices& sys, const Vec& y);

// Precomputed estimator matrix E with h_hat = E * y; E = (G~^H G~)^{-1} G~^H P1
// where P1 is the noise whitener and G~ the whitened response matrix.
Mat td_estimator_matrix(const SystemMatrices& sys);

struct SparseEstimate {
  Vec h;
  bool equispaced_fast_path = false;
};

// Sparse-preamble estimator: pilot positions (subcarrier indices), pilot
// values d_P, pulse autocorrelation sequence alpha, received pilot outputs
// y_P, and the number of subcarriers M. Equispaced pilot sets use the
// divide / small IDFT / divide fast path; any other set falls back to the
// generic least-squares solve on the sparse model matrix with a warning.
SparseEstimate td_estimate_sparse(const std::vector<int>& pilot_positions,
                                  const Vec& d_P, const RealVec& alpha,
                                  const Vec& y_P, int M);

// Sparse model matrix Gamma_P[i,k] = d_P[i] * alpha[k] * e^{-j 2 pi p_i k / M}.
Mat sparse_model_matrix(const std::vector<int>& pilot_positions, const Vec& d_P,
                        const RealVec& alpha, int M, int Lh);

// Two-symbol Gauss-Markov estimate from the stacked analysis vector ybar
// (length 2M), applying the inverse covariance through the diagonal
// factorization. Throws if the factorization has a non-positive eigenvalue.
Vec td_estimate_two_symbol(const TwoSymbolMatrices& two,
                           const CbarDecomposition& dec, const Vec& ybar);
Vec td_estimate_two_symbol(const TwoSymbolMatrices& two, const Vec& ybar);

// Flat-subchannel estimate: entrywise division by the pseudo-pilots.
// Throws if any pseudo-pilot is zero.
Vec iam_estimate(const Vec& pseudo_pilots, const Vec& y);

// Project a CFR estimate onto the subspace of responses generated by
// length-Lh impulse responses (inverse DFT, truncate, DFT). Idempotent;
// identity when Lh = M.
Vec dft_interpolate(const Vec& H_hat, int Lh);

enum class BlueVariant { kBlue, kPlain };

// Three-tap sliding-window recombination of per-subcarrier estimates with
// weights from the inverse of the local 3x3 noise covariance (variant kBlue)
// or from the identity (variant kPlain). Windows wrap circularly.
Vec blue_smooth(const Vec& H_hat, const Vec& pseudo_pilots, double beta,
                BlueVariant variant);

// The same smoothing as a linear map W with W * H_hat == blue_smooth(H_hat, ...).
Mat blue_smooth_matrix(const Vec& pseudo_pilots, double beta,
                       BlueVariant variant);

enum class CpofdmMode { kFreq, kTime };

// CP-OFDM least-squares estimate: entrywise division of the received FFT grid
// by the known pilot vector; mode kTime additionally projects onto length-Lh
// impulse responses.
Vec cpofdm_estimate(const Vec& pilot, const Vec& received_fft, int Lh,
                    CpofdmMode mode);

}  // namespace fbmc
