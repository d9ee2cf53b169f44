#include "fbmc/preamble.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fbmc {

PreambleSpec design_full_optimal(const SystemMatrices& sys, double E) {
  if (E <= 0.0) throw std::invalid_argument("energy budget must be positive");
  const int M = sys.M;
  RealVec cost(M);
  for (int m = 0; m < M; ++m) {
    double acc = 0.0;
    for (int k = 1; k < sys.Lh; ++k) {
      const double lk = sys.lambda_k[static_cast<std::size_t>(k)][m];
      acc += sys.lambda[(m + k) % M] / (lk * lk);
    }
    cost[m] = sys.lambda[m] * acc;
  }
  int m_opt = 0;
  for (int m = 1; m < M; ++m) {
    if (cost[m] < cost[m_opt]) m_opt = m;
  }
  int ties = 0;
  for (int m = 0; m < M; ++m) {
    if (cost[m] == cost[m_opt]) ++ties;
  }
  if (ties > 1) {
    std::cerr << "[fbmc] note: " << ties
              << " spike positions share the minimum cost; choosing the lowest "
                 "index m_opt="
              << m_opt << "\n";
  }

  PreambleSpec spec;
  spec.kind = PreambleSpec::Kind::kFull;
  spec.energy = E;
  spec.m_opt = m_opt;
  spec.cost = cost[m_opt];
  spec.d = std::sqrt(E / sys.lambda[m_opt]) * sys.F.col(m_opt);
  return spec;
}

double predicted_full_mse_td(const PreambleSpec& spec, double sigma2) {
  if (spec.kind != PreambleSpec::Kind::kFull) {
    throw std::invalid_argument("prediction applies to the full design only");
  }
  return sigma2 / spec.energy * (1.0 + spec.cost);
}

PreambleSpec design_sparse_optimal(int M, int Lh, double E, int p0,
                                   const std::vector<double>& phases) {
  if (E <= 0.0) throw std::invalid_argument("energy budget must be positive");
  if (Lh < 1 || Lh > M) {
    throw std::invalid_argument("pilot count must satisfy 1 <= Lh <= M");
  }
  if (M % Lh != 0) {
    int best = 1;
    for (int cand = 1; cand <= M; ++cand) {
      if (M % cand == 0 &&
          std::abs(cand - Lh) < std::abs(best - Lh)) {
        best = cand;
      }
    }
    std::ostringstream msg;
    msg << "equispaced pilots need Lh to divide M (got Lh=" << Lh << ", M=" << M
        << "); nearest admissible pilot count is " << best;
    throw std::invalid_argument(msg.str());
  }
  const int Q = M / Lh;
  if (p0 < 0 || p0 >= Q) {
    std::ostringstream msg;
    msg << "first pilot position must lie in [0, " << Q << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!phases.empty() && static_cast<int>(phases.size()) != Lh) {
    throw std::invalid_argument("phase list must have one entry per pilot");
  }

  PreambleSpec spec;
  spec.kind = PreambleSpec::Kind::kSparse;
  spec.energy = E;
  spec.d = Vec::Zero(M);
  const double amp = std::sqrt(E / Lh);
  for (int i = 0; i < Lh; ++i) {
    const int p = p0 + i * Q;
    spec.pilot_set.push_back(p);
    const double th = phases.empty() ? 0.0 : phases[static_cast<std::size_t>(i)];
    spec.d[p] = std::polar(amp, th);
  }
  return spec;
}

double predicted_sparse_mse_td(const RealVec& alpha, int Lh, double E,
                               double sigma2) {
  if (alpha.size() < Lh) {
    throw std::invalid_argument(
        "autocorrelation sequence shorter than the channel length");
  }
  double acc = 0.0;
  for (int k = 0; k < Lh; ++k) acc += 1.0 / (alpha[k] * alpha[k]);
  return sigma2 / E * acc;
}

PreambleSpec design_iamc(int M, double beta, double E) {
  if (E <= 0.0) throw std::invalid_argument("energy budget must be positive");
  if (M % 4 != 0) {
    throw std::invalid_argument(
        "the repeated (1,-j,-1,j) pattern requires M divisible by 4");
  }
  PreambleSpec spec;
  spec.kind = PreambleSpec::Kind::kFull;
  spec.energy = E;
  spec.d.resize(M);
  const double amp = std::sqrt(E / (M * (1.0 + 2.0 * beta)));
  for (int m = 0; m < M; ++m) {
    spec.d[m] = amp * ipow(-m);  // (1, -j, -1, j) repeated
  }
  return spec;
}

Vec design_cpofdm(int M, double E, CpofdmKind kind, int Lh) {
  if (E <= 0.0) throw std::invalid_argument("energy budget must be positive");
  Vec X = Vec::Zero(M);
  if (kind == CpofdmKind::kFull) {
    // Scaled DFT column: constant modulus across the tones.
    const double amp = std::sqrt(E / M);
    for (int m = 0; m < M; ++m) {
      X[m] = amp * std::polar(1.0, 2.0 * kPi * m / M);
    }
  } else {
    if (Lh < 1 || Lh > M || M % Lh != 0) {
      throw std::invalid_argument(
          "sparse pilots need a pilot count that divides M");
    }
    const int Q = M / Lh;
    const double amp = std::sqrt(E / Lh);
    for (int i = 0; i < Lh; ++i) X[i * Q] = amp;
  }
  return X;
}

double sfb_energy(const SystemMatrices& sys, const PreambleSpec& spec) {
  if (spec.d.size() != sys.M) {
    throw std::invalid_argument("preamble length must equal M");
  }
  const cplx q = spec.d.dot(sys.B * spec.d);
  return q.real();
}

double sfb_energy(const TwoSymbolMatrices& two, const PreambleSpec& spec) {
  if (spec.d.size() != two.M || spec.d2.size() != two.M) {
    throw std::invalid_argument("both preamble symbols must have length M");
  }
  Vec dbar(2 * two.M);
  dbar.head(two.M) = spec.d;
  dbar.tail(two.M) = spec.d2;
  const cplx q = dbar.dot(two.Bbar * dbar);
  return q.real();
}

void write_preamble_csv(const std::string& path, const Vec& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "index,re,im\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out << i << "," << d[i].real() << "," << d[i].imag() << "\n";
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Vec read_preamble_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  std::vector<std::pair<int, cplx>> entries;
  int max_index = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("index", 0) == 0) continue;  // header
    }
    std::istringstream row(line);
    std::string tok;
    int idx;
    double re, im;
    if (!std::getline(row, tok, ',')) continue;
    idx = std::stoi(tok);
    if (!std::getline(row, tok, ',')) {
      throw std::runtime_error("malformed preamble row: " + line);
    }
    re = std::stod(tok);
    if (!std::getline(row, tok, ',')) {
      throw std::runtime_error("malformed preamble row: " + line);
    }
    im = std::stod(tok);
    entries.emplace_back(idx, cplx(re, im));
    max_index = std::max(max_index, idx);
  }
  if (max_index < 0) throw std::runtime_error("preamble file has no entries");
  Vec d = Vec::Zero(max_index + 1);
  for (const auto& [idx, v] : entries) d[idx] = v;
  return d;
}

}  // namespace fbmc
