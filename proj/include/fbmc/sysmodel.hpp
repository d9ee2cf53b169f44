#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fbmc/filterbank.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

// Intrinsic-interference weights computed from the prototype filter.
//  beta : magnitude of the frequency-adjacent, same-symbol correlation.
//  gamma, delta, eps : time-adjacent correlations (same subcarrier, one and
//    two subcarriers apart) entering the cross-symbol coupling matrices.
//  corner_sign : +1 when the (0,1) entry of the demodulated-noise covariance
//    core is +j*beta (the assumed convention), -1 otherwise.
struct InterferenceConstants {
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  int corner_sign = +1;
};

InterferenceConstants interference_constants(const PrototypeFilter& proto,
                                             const FbmcConfig& cfg);

// Idealized covariance core: unit diagonal, +-j*beta on the two adjacent
// diagonals with circulant wrap, sign pattern per corner_sign.
Mat build_B(int M, const InterferenceConstants& c);

// Eigenvalues of a circulant matrix via the DFT of its first row (the
// convention under which C = F diag(eig) F^H with the unitary DFT matrix F).
// Throws if the input deviates from circulant structure by more than 1e-9.
Vec eig_circulant(const Mat& C);

// Everything derived from the one-symbol closed-form system response:
//   Gblocks[k](p, m) : response at subcarrier p to a pilot at subcarrier m
//                      when the channel is a k-sample delay.
//   Gcores[k] = W^{-k} Gblocks[k] : circulant cores, W = diag(e^{-j2pi p/M}).
//   B = Gblocks[0]   : demodulated-noise covariance divided by sigma^2.
//   Gamma            : M x Lh, column k = Gblocks[k] * d.
//   lambda           : eigenvalues of B (real positive).
//   lambda_k[k]      : eigenvalues of Gcores[k] (real).
//   Delta_k[k][i]    = lambda_k[i]^2 / (lambda[i] * lambda[(i+k) mod M]).
//   alpha[k]         : lag-k autocorrelation of the prototype, k in [0, M).
struct SystemMatrices {
  int M = 0;
  int K = 0;
  int Lh = 0;
  Mat B;
  std::vector<Mat> Gblocks;
  std::vector<Mat> Gcores;
  Mat Gamma;  // empty when built without a preamble
  Vec d;
  RealVec lambda;
  std::vector<RealVec> lambda_k;
  std::vector<RealVec> Delta_k;
  RealVec alpha;
  Mat F;
};

// Closed-form system response for a general integer delay k (negative delays
// included; used by the two-symbol shift identities).
Mat transmux_core(const FbmcConfig& cfg, int k);

// Column p of the closed-form response to preamble d at delay k, all p.
Vec gamma_column(const FbmcConfig& cfg, const Vec& d, int k);

SystemMatrices build_cores(const FbmcConfig& cfg, int Lh);
SystemMatrices build_gamma(const FbmcConfig& cfg, const Vec& d, int Lh);

// Noise-whitening transform Lambda^{-1/2} F^H and its closed-form effect:
//   dtilde        = Lambda^{1/2} F^H d
//   GammaTilde    : column 0 = dtilde,
//                   column k = Lambda^{-1/2} Z^k Lambda_k Lambda^{-1/2} dtilde
//   delta_k[k]    = dtilde^H Delta_k dtilde (delta_0 = ||dtilde||^2)
struct Whitened {
  Mat transform;
  Mat GammaTilde;
  Vec dtilde;
  RealVec delta_k;
};

Whitened whiten(const SystemMatrices& sys, const Vec& d);

// Down-shift-by-k permutation: (Z^k x)(i) = x((i - k) mod M).
RealMat shift_matrix(int M, int k);

// Two consecutive pilot symbols (at n = 1 and n = 2 of a guarded 4-symbol
// frame). The stacked response GammaBar obeys
//   [y1; y2] = GammaBar h + noise,   cov(noise) = sigma^2 Bbar,
//   Bbar = [[B, S A+], [S A-, B]],   S = diag((-1)^p),
// with A+- the symmetric circulant purely-imaginary cross-symbol couplings.
struct TwoSymbolMatrices {
  int M = 0;
  int K = 0;
  int Lh = 0;
  Vec d1, d2;
  Mat Aplus, Aminus;
  Mat B;
  Mat Bbar;
  Mat GammaBar;
  Mat F;
};

// Exact cross-symbol Gram: entry (p, m) is the inner product of the receive
// pulse (p, q) with the transmit pulse (m, n) delayed by k samples.
Mat cross_gram(const FbmcConfig& cfg, int q, int n, int k);

TwoSymbolMatrices build_two_symbol(const FbmcConfig& cfg, const Vec& d1,
                                   const Vec& d2, int Lh);

// Explicit eigen-factorization of Bbar:
//   Bbar = U diag([Lplus; Lminus]) U^H,
//   U = (I2 (x) F) * blkdiag(Z^{M/2}, -jI) * blkdiag(P, I) * H2
//         * blkdiag(Vplus, Vplus^T),
// where P is the index-reversal parity permutation, H2 the 2x2 block DFT
// butterfly and Vplus a product of Givens rotations pairing indices (i, M-i).
// Each stage is verified during construction; a stage residual above 1e-8
// raises an error naming the stage.
struct CbarDecomposition {
  RealVec lambda;     // eigenvalues of B
  RealVec lamI_plus;  // imaginary parts of the eigenvalues of A+
  RealVec theta;      // Givens angles, index i in [1, M/2)
  RealMat Vplus;
  RealVec Lplus, Lminus;
  Mat U;
  std::vector<std::pair<std::string, double>> stage_residuals;
  double reconstruction_residual = 0.0;
};

CbarDecomposition decompose_Cbar(const TwoSymbolMatrices& two);

// Orthogonality report for the whitened stacked response. zero_lag[k-1] is
// the closed-form inner product of whitened columns 0 and k (the condition
// that must vanish for a preamble pair to be MSE-optimal); pairwise holds the
// inner products of whitened column pairs (k, l) with 1 <= k < l. The
// closed-form values are cross-validated against direct column inner
// products; max_crosscheck_error reports the largest disagreement.
struct TwoSymbolOrthoReport {
  std::vector<cplx> zero_lag;
  std::vector<cplx> pairwise;
  double max_crosscheck_error = 0.0;
};

TwoSymbolOrthoReport check_two_symbol_orthogonality(const FbmcConfig& cfg,
                                                    const TwoSymbolMatrices& two,
                                                    const CbarDecomposition& dec);

// Whitening transform for the stacked two-symbol output, assembled from the
// decomposition chain: Wbar Bbar Wbar^H = I.
Mat two_symbol_whitener(const TwoSymbolMatrices& two, const CbarDecomposition& dec);

}  // namespace fbmc
