#pragma once

#include <string>
#include <vector>

#include "fbmc/sysmodel.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

// A designed preamble: the symbol vector(s), the pilot support for sparse
// designs, the energy budget, and (for the full design) the selected spike
// position and its closed-form cost.
struct PreambleSpec {
  enum class Kind { kFull, kSparse, kTwoSymbol };
  Kind kind = Kind::kFull;
  Vec d;                       // first (or only) preamble symbol, length M
  Vec d2;                      // second symbol (two-symbol designs only)
  std::vector<int> pilot_set;  // pilot subcarrier indices (sparse only)
  double energy = 0.0;         // energy budget E
  int m_opt = -1;              // selected spike index (full design only)
  double cost = 0.0;           // closed-form trace cost at m_opt (full design)
};

// Full preamble minimizing the closed-form estimator trace over single-spike
// transformed preambles: picks m_opt, sets d = sqrt(E/lambda_{m_opt}) f_{m_opt}.
// Ties in the argmin resolve to the lowest index (logged to stderr).
PreambleSpec design_full_optimal(const SystemMatrices& sys, double E);

// Predicted time-domain estimation MSE for the full design at noise level
// sigma2: (sigma2/E) * (1 + cost).
double predicted_full_mse_td(const PreambleSpec& spec, double sigma2);

// Equispaced, equipowered sparse preamble: Lh pilots spaced M/Lh apart
// starting at p0, each of magnitude sqrt(E/Lh) with the given phases
// (defaults to all-zero phases). Lh must divide M.
PreambleSpec design_sparse_optimal(int M, int Lh, double E, int p0 = 0,
                                   const std::vector<double>& phases = {});

// Predicted time-domain MSE of the sparse design: sigma2/E * sum_k 1/alpha_k^2.
double predicted_sparse_mse_td(const RealVec& alpha, int Lh, double E,
                               double sigma2);

// Flat-subchannel-optimal full preamble: the repeated (1, -j, -1, j) pattern
// scaled by sqrt(E / (M (1 + 2 beta))). Requires M divisible by 4.
PreambleSpec design_iamc(int M, double beta, double E);

enum class CpofdmKind { kFull, kSparse };

// CP-OFDM pilot vector on the M tones: full designs use a constant-modulus
// scaled DFT column; sparse designs place Lh equal pilots spaced M/Lh apart.
Vec design_cpofdm(int M, double E, CpofdmKind kind, int Lh = 0);

// Energy at the synthesis filter bank output for a guarded preamble: the
// quadratic form d^H B d (single symbol) or dbar^H Bbar dbar (two symbols).
double sfb_energy(const SystemMatrices& sys, const PreambleSpec& spec);
double sfb_energy(const TwoSymbolMatrices& two, const PreambleSpec& spec);

// CSV round trip for preamble vectors, one "index,re,im" row per entry.
void write_preamble_csv(const std::string& path, const Vec& d);
Vec read_preamble_csv(const std::string& path);

}  // namespace fbmc
