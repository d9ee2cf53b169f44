#include "fbmc/filterbank.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace fbmc {

Vec cfr(const Vec& h, int M) {
  Vec H(M);
  for (int m = 0; m < M; ++m) {
    cplx acc = 0.0;
    for (int k = 0; k < h.size(); ++k) {
      acc += h[k] * std::polar(1.0, -2.0 * kPi * m * k / M);
    }
    H[m] = acc;
  }
  return H;
}

Mat dft_matrix(int M) {
  Mat F(M, M);
  const double s = 1.0 / std::sqrt(static_cast<double>(M));
  for (int l = 0; l < M; ++l) {
    for (int m = 0; m < M; ++m) {
      const long long r = (static_cast<long long>(l) * m) % M;
      F(l, m) = s * std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / M);
    }
  }
  return F;
}

namespace {

// e^{j 2 pi t / M} for integer t, via a shared exact table.
class RootTable {
 public:
  explicit RootTable(int M) : M_(M), w_(M) {
    for (int r = 0; r < M; ++r) {
      w_[r] = std::polar(1.0, 2.0 * kPi * r / M);
    }
  }
  cplx operator()(long long t) const {
    long long r = t % M_;
    if (r < 0) r += M_;
    return w_[static_cast<std::size_t>(r)];
  }

 private:
  int M_;
  std::vector<cplx> w_;
};

// e^{j phi(m,n)} with phi(m,n) = (m+n) pi/2 + m n pi, exact.
cplx phase_factor(int m, int n) {
  cplx p = ipow(m + n);
  if ((static_cast<long long>(m) * n) % 2 != 0) p = -p;
  return p;
}

}  // namespace

PrototypeFilter design_prototype(int M, int K) {
  // Frequency-sampling coefficients P_0..P_{K-1}; the published PHYDYAS
  // values. P_k pairs satisfy P_k^2 + P_{K-k}^2 = 1.
  static const std::map<int, std::vector<double>> kCoef = {
      {2, {1.0, std::sqrt(2.0) / 2.0}},
      {3, {1.0, 0.911438, 0.411438}},
      {4, {1.0, 0.97195983, std::sqrt(2.0) / 2.0, 0.23514695}},
  };
  const auto it = kCoef.find(K);
  if (it == kCoef.end()) {
    std::ostringstream msg;
    msg << "unsupported overlap factor K=" << K << "; supported values: 2, 3, 4";
    throw std::invalid_argument(msg.str());
  }
  if (M <= 0 || M % 2 != 0) {
    throw std::invalid_argument("subcarrier count M must be even and positive");
  }
  const int Lg = K * M;
  RealVec g(Lg);
  for (int l = 0; l < Lg; ++l) {
    double v = it->second[0];
    for (int k = 1; k < K; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      v += 2.0 * sign * it->second[k] * std::cos(2.0 * kPi * k * l / Lg);
    }
    g[l] = v;
  }
  g /= g.norm();
  return PrototypeFilter{g, g.squaredNorm()};
}

FbmcConfig::FbmcConfig(int M_, int K_) : M(M_), K(K_), proto(design_prototype(M_, K_)) {
  if (M < 8) {
    throw std::invalid_argument("subcarrier count M must be at least 8");
  }
}

std::pair<Vec, int> pulse(const FbmcConfig& cfg, int m, int n) {
  const int Lg = cfg.Lg();
  const int off = n * cfg.half_symbol();
  const RootTable root(cfg.M);
  const cplx ph = phase_factor(m, n);
  Vec p(Lg);
  for (int l = 0; l < Lg; ++l) {
    const long long t = static_cast<long long>(m) * (l + off - cfg.center());
    p[l] = cfg.proto.g[l] * root(t) * ph;
  }
  return {p, off};
}

TimeSignal synthesize(const FbmcConfig& cfg, const Mat& d) {
  if (d.rows() != cfg.M) {
    std::ostringstream msg;
    msg << "symbol grid has " << d.rows() << " rows, expected M=" << cfg.M;
    throw std::invalid_argument(msg.str());
  }
  const int N = static_cast<int>(d.cols());
  const int Lg = cfg.Lg();
  const int len = (N - 1) * cfg.half_symbol() + Lg;
  Vec s = Vec::Zero(len);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < cfg.M; ++m) {
      if (d(m, n) == cplx(0.0, 0.0)) continue;
      const auto [p, off] = pulse(cfg, m, n);
      s.segment(off, Lg) += d(m, n) * p;
    }
  }
  return TimeSignal{std::move(s)};
}

TimeSignal apply_channel(const TimeSignal& s, const Vec& h, double sigma2, Rng& rng) {
  const int Lh = static_cast<int>(h.size());
  if (Lh < 1) throw std::invalid_argument("channel must have at least one tap");
  if (sigma2 < 0.0) throw std::invalid_argument("noise variance must be non-negative");
  const int len = s.length() + Lh - 1;
  Vec y = Vec::Zero(len);
  for (int k = 0; k < Lh; ++k) {
    if (h[k] == cplx(0.0, 0.0)) continue;
    y.segment(k, s.length()) += h[k] * s.samples;
  }
  if (sigma2 > 0.0) {
    for (int l = 0; l < len; ++l) {
      y[l] += rng.cgauss(sigma2);
    }
  }
  return TimeSignal{std::move(y)};
}

TimeSignal apply_channel(const TimeSignal& s, const Vec& h) {
  Rng unused(0);
  return apply_channel(s, h, 0.0, unused);
}

Vec analyze_symbol(const FbmcConfig& cfg, const TimeSignal& y, int q) {
  const int Lg = cfg.Lg();
  const int off = q * cfg.half_symbol();
  if (q < 0 || off + Lg > y.length()) {
    std::ostringstream msg;
    msg << "symbol instant q=" << q << " is not covered by a signal of length "
        << y.length() << " (need samples [" << off << ", " << off + Lg << "))";
    throw std::out_of_range(msg.str());
  }
  Vec out(cfg.M);
  for (int p = 0; p < cfg.M; ++p) {
    const auto [gp, o] = pulse(cfg, p, q);
    out[p] = gp.dot(y.samples.segment(o, Lg));  // sum_l y(l) g*(p,q)(l)
  }
  return out;
}

AfbGrid analyze(const FbmcConfig& cfg, const TimeSignal& y) {
  const int Lg = cfg.Lg();
  if (y.length() < Lg) {
    throw std::out_of_range("signal shorter than one pulse; no symbol instant is covered");
  }
  const int n_symbols = (y.length() - Lg) / cfg.half_symbol() + 1;
  Mat grid(cfg.M, n_symbols);
  for (int q = 0; q < n_symbols; ++q) {
    grid.col(q) = analyze_symbol(cfg, y, q);
  }
  return AfbGrid{std::move(grid)};
}

Vec transmux_response(const FbmcConfig& cfg, int k, const Vec& d) {
  if (k < 0 || k > cfg.Lg() - 1) {
    std::ostringstream msg;
    msg << "delay k=" << k << " outside [0, Lg-1] = [0, " << cfg.Lg() - 1 << "]";
    throw std::invalid_argument(msg.str());
  }
  Mat grid = Mat::Zero(cfg.M, 3);
  grid.col(1) = d;
  const TimeSignal s = synthesize(cfg, grid);
  TimeSignal delayed;
  delayed.samples = Vec::Zero(s.length() + k);
  delayed.samples.tail(s.length()) = s.samples;
  return analyze_symbol(cfg, delayed, 1);
}

}  // namespace fbmc
