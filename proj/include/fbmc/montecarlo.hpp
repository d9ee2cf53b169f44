#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbmc/preamble.hpp"
#include "fbmc/rng.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

// Power-delay profile for random channel draws; tap_powers sums to one.
struct ChannelProfile {
  std::string label;
  int Lh = 1;
  RealVec tap_powers;
};

// Exponential power-delay profile with the given per-tap decay in dB.
ChannelProfile exponential_profile(int Lh, double decay_db_per_tap);
// Uniform power-delay profile.
ChannelProfile uniform_profile(int Lh);
// Named profiles: "low" (6 taps, 3 dB/tap decay), "high" (16 taps, uniform)
// and "flat" (single tap).
ChannelProfile make_profile(const std::string& label);

// One random channel draw: independent circular complex Gaussian taps with
// variances given by the profile.
ChannelRealization gen_channel(const ChannelProfile& profile, Rng& rng);

// Scale a preamble so that its synthesis-output per-sample power (energy over
// n_slots half-symbol periods of M/2 samples) equals reference_power.
// sfb_energy_value is the preamble's synthesis-output energy before scaling.
PreambleSpec power_normalize(const PreambleSpec& spec, double sfb_energy_value,
                             int n_slots, int M, double reference_power,
                             double* scale_out = nullptr);

struct ExperimentConfig {
  int M = 64;
  int K = 3;
  int Lh_design = 8;            // channel length assumed by designs/estimators
  std::string profile = "low";  // true-channel profile label
  double energy = 0.0;          // energy budget E; defaults to M when <= 0
  std::vector<std::string> methods;
  std::vector<double> snr_db;
  long trials = 2000;
  std::uint64_t seed = 1;
  bool normalize_power = true;
};

struct SweepCell {
  std::string method;
  double snr_db = 0.0;
  double nmse_mean = 0.0;
  double nmse_stderr = 0.0;
  long trials = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered
};

// Known method names accepted by run_sweep.
const std::vector<std::string>& known_methods();

// Run the Monte-Carlo comparison: for each SNR point and trial, draw one
// shared channel, form each method's received data from its own preamble
// with shared noise inside each transmission geometry, estimate, and
// accumulate the frequency-domain NMSE.
SweepResult run_sweep(const ExperimentConfig& cfg);

// CSV with header method,snr_db,nmse_mean,nmse_stderr,trials; the metadata
// goes to <path>.meta as key=value lines.
void write_sweep_csv(const std::string& path, const SweepResult& result);

// Sample the analysis-bank output noise covariance over `trials` white-noise
// realizations (variance sigma2 per time sample) and compare it entrywise
// against sigma2 * model. n_symbols = 1 uses the single-symbol window, 2 the
// two-symbol window (model must then be the stacked 2M x 2M Gram). Returns
// the maximum deviation in units of the per-entry standard error.
double covariance_max_z(const FbmcConfig& cfg, const Mat& model, int n_symbols,
                        long trials, double sigma2, std::uint64_t seed);

}  // namespace fbmc
