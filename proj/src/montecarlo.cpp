#include "fbmc/montecarlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbmc/estimators.hpp"
#include "fbmc/filterbank.hpp"
#include "fbmc/sysmodel.hpp"

#ifndef FBMC_VERSION
#define FBMC_VERSION "unversioned"
#endif

namespace fbmc {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

enum Group { kSingle = 0, kTwo = 1, kOfdm = 2 };

struct MethodPlan {
  std::string name;
  Group group = kSingle;
  std::vector<int> input_rows;  // empty = use every observation row
  Mat Lmap;                     // H_hat = Lmap * selected rows of y
  Mat Gamma_true;               // y = Gamma_true * h + sigma * eta
  double scale = 1.0;
  double energy_eff = 0.0;
  int m_opt = -1;
  std::vector<int> pilot_set;
};

// CFR matrix: C(m, k) = e^{-j 2 pi m k / M}, so H = C * h.
Mat cfr_matrix(int M, int Lh) {
  Mat C(M, Lh);
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < Lh; ++k) {
      const long long r = (static_cast<long long>(m) * k) % M;
      C(m, k) = std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / M);
    }
  }
  return C;
}

// Pulse bank over the guarded transmission window: column p holds the
// analysis pulse of subcarrier p at symbol position q, placed at its
// absolute offset. eta = bank^H * w has covariance sigma^2 * Gram.
Mat pulse_bank(const FbmcConfig& cfg, const std::vector<int>& symbols,
               int window_len) {
  const int M = cfg.M;
  Mat bank = Mat::Zero(window_len, static_cast<int>(symbols.size()) * M);
  int col = 0;
  for (int q : symbols) {
    for (int p = 0; p < M; ++p, ++col) {
      auto [g, off] = pulse(cfg, p, q);
      bank.block(off, col, cfg.Lg(), 1) = g;
    }
  }
  return bank;
}

// Signal-level response column for the two-symbol preamble: synthesize the
// guarded [0, d1, d2, 0] frame, delay by k, and analyze at both symbol slots.
Vec stacked_response(const FbmcConfig& cfg, const Vec& d1, const Vec& d2,
                     int k) {
  const int M = cfg.M;
  Mat grid = Mat::Zero(M, 4);
  grid.col(1) = d1;
  grid.col(2) = d2;
  const TimeSignal s = synthesize(cfg, grid);
  Vec delayed = Vec::Zero(s.length() + k);
  delayed.tail(s.length()) = s.samples;
  TimeSignal y{delayed};
  Vec out(2 * M);
  out.head(M) = analyze_symbol(cfg, y, 1);
  out.tail(M) = analyze_symbol(cfg, y, 2);
  return out;
}

Mat single_response(const FbmcConfig& cfg, const Vec& d, int Lh_true) {
  Mat G(cfg.M, Lh_true);
  for (int k = 0; k < Lh_true; ++k) G.col(k) = transmux_response(cfg, k, d);
  return G;
}

Mat pseudoinverse(const Mat& A, const char* what) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > smax * 1e-12)) {
    throw std::runtime_error(std::string(what) +
                             ": response matrix is numerically rank-deficient");
  }
  return svd.matrixV() *
         svd.singularValues().cwiseInverse().cast<cplx>().asDiagonal() *
         svd.matrixU().adjoint();
}

struct Accum {
  long n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
};

}  // namespace

ChannelProfile exponential_profile(int Lh, double decay_db_per_tap) {
  if (Lh < 1) throw std::invalid_argument("profile needs at least one tap");
  ChannelProfile p;
  p.label = "exp";
  p.Lh = Lh;
  p.tap_powers.resize(Lh);
  for (int k = 0; k < Lh; ++k) {
    p.tap_powers[k] = std::pow(10.0, -decay_db_per_tap * k / 10.0);
  }
  p.tap_powers /= p.tap_powers.sum();
  return p;
}

ChannelProfile uniform_profile(int Lh) {
  if (Lh < 1) throw std::invalid_argument("profile needs at least one tap");
  ChannelProfile p;
  p.label = "uniform";
  p.Lh = Lh;
  p.tap_powers = RealVec::Constant(Lh, 1.0 / Lh);
  return p;
}

ChannelProfile make_profile(const std::string& label) {
  if (label == "low") {
    ChannelProfile p = exponential_profile(6, 3.0);
    p.label = "low";
    return p;
  }
  if (label == "high") {
    ChannelProfile p = uniform_profile(16);
    p.label = "high";
    return p;
  }
  if (label == "flat") {
    ChannelProfile p = uniform_profile(1);
    p.label = "flat";
    return p;
  }
  throw std::invalid_argument("unknown channel profile '" + label +
                              "' (expected low, high, or flat)");
}

ChannelRealization gen_channel(const ChannelProfile& profile, Rng& rng) {
  ChannelRealization ch;
  ch.h.resize(profile.Lh);
  for (int k = 0; k < profile.Lh; ++k) {
    ch.h[k] = rng.cgauss(profile.tap_powers[k]);
  }
  return ch;
}

PreambleSpec power_normalize(const PreambleSpec& spec, double sfb_energy_value,
                             int n_slots, int M, double reference_power,
                             double* scale_out) {
  if (!(sfb_energy_value > 0.0)) {
    throw std::invalid_argument(
        "cannot normalize a preamble with zero transmit energy");
  }
  if (n_slots < 1 || M < 2) {
    throw std::invalid_argument("invalid transmission geometry");
  }
  const double duration = n_slots * (M / 2.0);
  const double rho = std::sqrt(reference_power / (sfb_energy_value / duration));
  PreambleSpec out = spec;
  out.d *= rho;
  if (out.d2.size() > 0) out.d2 *= rho;
  out.energy *= rho * rho;
  if (scale_out != nullptr) *scale_out = rho;
  return out;
}

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names = {
      "td",      "td-sparse", "td-two",     "iamc",   "iamc-td",
      "iamc-blue", "iamc-plain", "cpofdm", "cpofdm-td"};
  return names;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const FbmcConfig fb(cfg.M, cfg.K);
  const int M = cfg.M;
  const double E = cfg.energy > 0.0 ? cfg.energy : static_cast<double>(M);
  const ChannelProfile profile = make_profile(cfg.profile);
  const int Lh_true = profile.Lh;
  if (cfg.trials < 0) throw std::invalid_argument("trial count must be >= 0");

  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    const auto& name = cfg.methods[i];
    if (std::find(known_methods().begin(), known_methods().end(), name) ==
        known_methods().end()) {
      std::string all;
      for (const auto& n : known_methods()) all += (all.empty() ? "" : ", ") + n;
      throw std::invalid_argument("unknown method '" + name + "' (known: " + all +
                                  ")");
    }
    for (std::size_t j = i + 1; j < cfg.methods.size(); ++j) {
      if (cfg.methods[j] == name) {
        throw std::invalid_argument("method '" + name + "' listed twice");
      }
    }
  }

  const double P_ref = E / M;  // reference per-sample transmit power
  const InterferenceConstants ic = interference_constants(fb.proto, fb);
  const SystemMatrices cores = build_cores(fb, cfg.Lh_design);
  const Mat Cd = cfr_matrix(M, cfg.Lh_design);
  const Mat Ct = cfr_matrix(M, Lh_true);
  const Mat Pproj = (Cd * Cd.adjoint()) / static_cast<double>(M);

  std::vector<MethodPlan> plans;
  plans.reserve(cfg.methods.size());
  for (const auto& name : cfg.methods) {
    MethodPlan plan;
    plan.name = name;
    if (name == "td") {
      PreambleSpec spec = design_full_optimal(cores, E);
      if (cfg.normalize_power) {
        spec = power_normalize(spec, sfb_energy(cores, spec), 3, M, P_ref,
                               &plan.scale);
      }
      const SystemMatrices sys = build_gamma(fb, spec.d, cfg.Lh_design);
      plan.Lmap = Cd * td_estimator_matrix(sys);
      plan.Gamma_true = single_response(fb, spec.d, Lh_true);
      plan.group = kSingle;
      plan.energy_eff = spec.energy;
      plan.m_opt = spec.m_opt;
    } else if (name == "td-sparse") {
      PreambleSpec spec = design_sparse_optimal(M, cfg.Lh_design, E);
      if (cfg.normalize_power) {
        spec = power_normalize(spec, sfb_energy(cores, spec), 3, M, P_ref,
                               &plan.scale);
      }
      const int Lh = cfg.Lh_design;
      Vec d_P(Lh);
      for (int i = 0; i < Lh; ++i) d_P[i] = spec.d[spec.pilot_set[i]];
      // The sparse estimator is linear in y_P; probe it with unit vectors.
      Mat Asp(Lh, Lh);
      for (int i = 0; i < Lh; ++i) {
        Vec e = Vec::Zero(Lh);
        e[i] = 1.0;
        Asp.col(i) =
            td_estimate_sparse(spec.pilot_set, d_P, cores.alpha, e, M).h;
      }
      plan.Lmap = Cd * Asp;
      plan.Gamma_true = single_response(fb, spec.d, Lh_true);
      plan.input_rows = spec.pilot_set;
      plan.pilot_set = spec.pilot_set;
      plan.group = kSingle;
      plan.energy_eff = spec.energy;
    } else if (name == "td-two") {
      PreambleSpec base = design_full_optimal(cores, E);
      PreambleSpec spec = base;
      spec.kind = PreambleSpec::Kind::kTwoSymbol;
      spec.d2 = base.d;
      {
        const TwoSymbolMatrices pre =
            build_two_symbol(fb, spec.d, spec.d2, cfg.Lh_design);
        spec.energy = sfb_energy(pre, spec);
      }
      if (cfg.normalize_power) {
        spec = power_normalize(spec, spec.energy, 4, M, P_ref, &plan.scale);
      }
      const TwoSymbolMatrices two =
          build_two_symbol(fb, spec.d, spec.d2, cfg.Lh_design);
      const CbarDecomposition dec = decompose_Cbar(two);
      const Mat Wbar = two_symbol_whitener(two, dec);
      plan.Lmap =
          Cd * pseudoinverse(Wbar * two.GammaBar, "td-two") * Wbar;
      plan.Gamma_true.resize(2 * M, Lh_true);
      for (int k = 0; k < Lh_true; ++k) {
        plan.Gamma_true.col(k) = stacked_response(fb, spec.d, spec.d2, k);
      }
      plan.group = kTwo;
      plan.energy_eff = spec.energy;
      plan.m_opt = base.m_opt;
    } else if (name == "iamc" || name == "iamc-td" || name == "iamc-blue" ||
               name == "iamc-plain") {
      PreambleSpec spec = design_iamc(M, ic.beta, E);
      if (cfg.normalize_power) {
        spec = power_normalize(spec, sfb_energy(cores, spec), 3, M, P_ref,
                               &plan.scale);
      }
      const Vec c = cores.B * spec.d;  // pseudo-pilots
      const Mat Dinv = c.cwiseInverse().asDiagonal();
      if (name == "iamc") {
        plan.Lmap = Dinv;
      } else if (name == "iamc-td") {
        plan.Lmap = Pproj * Dinv;
      } else {
        const BlueVariant variant =
            (name == "iamc-blue") ? BlueVariant::kBlue : BlueVariant::kPlain;
        plan.Lmap = blue_smooth_matrix(c, ic.beta, variant) * Dinv;
      }
      plan.Gamma_true = single_response(fb, spec.d, Lh_true);
      plan.group = kSingle;
      plan.energy_eff = spec.energy;
    } else {  // cpofdm / cpofdm-td
      const Vec X = design_cpofdm(M, E, CpofdmKind::kFull);
      const Mat Dinv = X.cwiseInverse().asDiagonal();
      plan.Lmap = (name == "cpofdm") ? Dinv : Mat(Pproj * Dinv);
      plan.Gamma_true = X.asDiagonal() * Ct;
      plan.group = kOfdm;
      plan.energy_eff = E;
    }
    plans.push_back(std::move(plan));
  }

  bool need_single = false, need_two = false, need_ofdm = false;
  for (const auto& p : plans) {
    need_single |= (p.group == kSingle);
    need_two |= (p.group == kTwo);
    need_ofdm |= (p.group == kOfdm);
  }

  const int T1 = fb.M + fb.Lg();             // 3 half-symbol slots
  const int T2 = 3 * (fb.M / 2) + fb.Lg();   // 4 half-symbol slots
  Mat bank1, bank2;
  if (need_single) bank1 = pulse_bank(fb, {1}, T1);
  if (need_two) bank2 = pulse_bank(fb, {1, 2}, T2);

  SweepResult result;
  auto meta = [&result](const std::string& k, const std::string& v) {
    result.metadata.emplace_back(k, v);
  };
  meta("version", FBMC_VERSION);
  meta("M", std::to_string(M));
  meta("K", std::to_string(cfg.K));
  meta("Lh_design", std::to_string(cfg.Lh_design));
  meta("profile", profile.label);
  meta("Lh_true", std::to_string(Lh_true));
  meta("energy", fmt(E));
  meta("trials", std::to_string(cfg.trials));
  meta("seed", std::to_string(cfg.seed));
  meta("normalize_power", cfg.normalize_power ? "1" : "0");
  meta("snr_definition",
       "snr_db = 10*log10(P_tx / sigma2), P_tx = energy/M per complex sample");
  meta("snr_sbc_note",
       "per-subcarrier SNR for closed forms: (energy_eff/N_pilots)/sigma2");
  meta("noise_model",
       "white circular complex Gaussian, variance sigma2 per complex sample, "
       "added in the time domain and projected through the analysis bank");
  meta("rng", "mt19937_64 streams: 0=channels, 1=single-symbol noise, "
              "2=two-symbol noise, 3=ofdm noise");
  {
    std::string names;
    for (const auto& p : plans) names += (names.empty() ? "" : ";") + p.name;
    meta("methods", names);
  }
  for (const auto& p : plans) {
    meta("scale." + p.name, fmt(p.scale));
    meta("energy." + p.name, fmt(p.energy_eff));
    if (p.m_opt >= 0) meta("m_opt." + p.name, std::to_string(p.m_opt));
    if (!p.pilot_set.empty()) {
      std::string s;
      for (int q : p.pilot_set) s += (s.empty() ? "" : ";") + std::to_string(q);
      meta("pilots." + p.name, s);
    }
    if (p.name.rfind("cpofdm", 0) == 0) {
      meta("cp_length." + p.name, std::to_string(cfg.Lh_design - 1));
    }
  }
  if (cfg.trials > 0 && cfg.trials < 100) {
    meta("warning", "trial count below 100; statistics are unreliable");
  }

  if (cfg.trials == 0 || plans.empty() || cfg.snr_db.empty()) {
    return result;
  }

  Rng rng_ch(cfg.seed, 0);
  Rng rng_single(cfg.seed, 1);
  Rng rng_two(cfg.seed, 2);
  Rng rng_ofdm(cfg.seed, 3);

  std::vector<std::vector<Accum>> stats(
      plans.size(), std::vector<Accum>(cfg.snr_db.size()));

  const long block_max = 512;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
    const double sigma2 = P_ref / std::pow(10.0, cfg.snr_db[s] / 10.0);
    const double sigma = std::sqrt(sigma2);
    long remaining = cfg.trials;
    while (remaining > 0) {
      const long nb = std::min(remaining, block_max);
      remaining -= nb;

      Mat h_block(Lh_true, nb);
      for (long t = 0; t < nb; ++t) {
        h_block.col(t) = gen_channel(profile, rng_ch).h;
      }
      const Mat H_true = Ct * h_block;

      Mat eta1, eta2, etaf;
      if (need_single) {
        Mat W1(T1, nb);
        for (long t = 0; t < nb; ++t) {
          for (int l = 0; l < T1; ++l) W1(l, t) = rng_single.cgauss(1.0);
        }
        eta1 = bank1.adjoint() * W1;
      }
      if (need_two) {
        Mat W2(T2, nb);
        for (long t = 0; t < nb; ++t) {
          for (int l = 0; l < T2; ++l) W2(l, t) = rng_two.cgauss(1.0);
        }
        eta2 = bank2.adjoint() * W2;
      }
      if (need_ofdm) {
        etaf.resize(M, nb);
        for (long t = 0; t < nb; ++t) {
          for (int m = 0; m < M; ++m) etaf(m, t) = rng_ofdm.cgauss(1.0);
        }
      }

      for (std::size_t pi = 0; pi < plans.size(); ++pi) {
        const MethodPlan& plan = plans[pi];
        const Mat& eta =
            (plan.group == kSingle) ? eta1 : (plan.group == kTwo ? eta2 : etaf);
        Mat Y = plan.Gamma_true * h_block + sigma * eta;
        Mat Hhat;
        if (plan.input_rows.empty()) {
          Hhat = plan.Lmap * Y;
        } else {
          Mat Ysel(static_cast<int>(plan.input_rows.size()), nb);
          for (std::size_t r = 0; r < plan.input_rows.size(); ++r) {
            Ysel.row(static_cast<int>(r)) = Y.row(plan.input_rows[r]);
          }
          Hhat = plan.Lmap * Ysel;
        }
        for (long t = 0; t < nb; ++t) {
          const double denom = H_true.col(t).squaredNorm();
          const double err = (Hhat.col(t) - H_true.col(t)).squaredNorm();
          stats[pi][s].add(err / denom);
        }
      }
    }
  }

  for (std::size_t pi = 0; pi < plans.size(); ++pi) {
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
      const Accum& a = stats[pi][s];
      SweepCell cell;
      cell.method = plans[pi].name;
      cell.snr_db = cfg.snr_db[s];
      cell.trials = a.n;
      cell.nmse_mean = a.sum / static_cast<double>(a.n);
      if (a.n > 1) {
        const double var =
            std::max(0.0, (a.sumsq - a.sum * a.sum / a.n) / (a.n - 1));
        cell.nmse_stderr = std::sqrt(var / a.n);
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

double covariance_max_z(const FbmcConfig& cfg, const Mat& model, int n_symbols,
                        long trials, double sigma2, std::uint64_t seed) {
  if (n_symbols != 1 && n_symbols != 2) {
    throw std::invalid_argument("covariance sampling supports 1 or 2 symbols");
  }
  if (trials < 2) throw std::invalid_argument("need at least 2 realizations");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const int M = cfg.M;
  const int rows = n_symbols * M;
  if (model.rows() != rows || model.cols() != rows) {
    throw std::invalid_argument("model dimension does not match the window");
  }
  const int T = (n_symbols + 1) * (M / 2) + cfg.Lg();
  const Mat bank = (n_symbols == 1) ? pulse_bank(cfg, {1}, T)
                                    : pulse_bank(cfg, {1, 2}, T);
  Rng rng(seed, 7);
  Mat Cs = Mat::Zero(rows, rows);
  const long block_max = 512;
  long remaining = trials;
  const double sigma = std::sqrt(sigma2);
  while (remaining > 0) {
    const long nb = std::min(remaining, block_max);
    remaining -= nb;
    Mat W(T, nb);
    for (long t = 0; t < nb; ++t) {
      for (int l = 0; l < T; ++l) W(l, t) = sigma * rng.cgauss(1.0);
    }
    const Mat Y = bank.adjoint() * W;
    Cs.noalias() += Y * Y.adjoint();
  }
  Cs /= static_cast<double>(trials);

  double max_z = 0.0;
  for (int p = 0; p < rows; ++p) {
    for (int q = 0; q < rows; ++q) {
      const double se =
          sigma2 * std::sqrt((model(p, p).real() * model(q, q).real() +
                              std::norm(model(p, q))) /
                             static_cast<double>(trials));
      const double dev = std::abs(Cs(p, q) - sigma2 * model(p, q));
      max_z = std::max(max_z, dev / se);
    }
  }
  return max_z;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "method,snr_db,nmse_mean,nmse_stderr,trials\n";
  for (const auto& c : result.cells) {
    out << c.method << "," << fmt(c.snr_db) << "," << fmt(c.nmse_mean) << ","
        << fmt(c.nmse_stderr) << "," << c.trials << "\n";
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
  std::ofstream metaout(path + ".meta");
  if (!metaout) {
    throw std::runtime_error("cannot open '" + path + ".meta' for writing");
  }
  for (const auto& [k, v] : result.metadata) metaout << k << "=" << v << "\n";
  if (!metaout) throw std::runtime_error("failed writing '" + path + ".meta'");
}

}  // namespace fbmc
