#include "fbmc/sysmodel.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

namespace fbmc {

namespace {

cplx unit_root(int M, long long t) {
  long long r = t % M;
  if (r < 0) r += M;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / M);
}

// One entry of the cross-symbol Gram: <g(p,q), delay_k g(m,n)> in absolute time.
cplx cross_inner(const FbmcConfig& cfg, const Vec& gp, int op, const Vec& gm, int om,
                 int k) {
  const int Lg = cfg.Lg();
  const int lo = std::max(op, om + k);
  const int hi = std::min(op + Lg, om + k + Lg);
  cplx acc = 0.0;
  for (int t = lo; t < hi; ++t) {
    acc += std::conj(gp[t - op]) * gm[t - om - k];
  }
  return acc;
}

RealMat parity_matrix(int M) {
  RealMat P = RealMat::Zero(M, M);
  P(0, 0) = 1.0;
  for (int i = 1; i < M; ++i) P(i, M - i) = 1.0;
  return P;
}

Mat kron_I2(const Mat& A) {
  const auto n = A.rows();
  Mat out = Mat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = A;
  out.bottomRightCorner(n, n) = A;
  return out;
}

}  // namespace

InterferenceConstants interference_constants(const PrototypeFilter& proto,
                                             const FbmcConfig& cfg) {
  if (std::abs(proto.energy - 1.0) > 1e-9) {
    throw std::invalid_argument("prototype filter must have unit energy");
  }
  FbmcConfig local = cfg;
  local.proto = proto;

  const auto [g01, o01] = pulse(local, 0, 1);
  const auto [g11, o11] = pulse(local, 1, 1);
  const cplx b01 = g01.dot(g11);  // entry (0,1) of the same-symbol Gram

  const auto [g02, o02] = pulse(local, 0, 2);
  const auto [g12, o12] = pulse(local, 1, 2);
  const auto [g22, o22] = pulse(local, 2, 2);

  InterferenceConstants c;
  c.beta = std::abs(b01);
  c.corner_sign = (b01.imag() >= 0.0) ? +1 : -1;
  if (std::abs(b01.real()) > 1e-9 * (1.0 + std::abs(b01.imag()))) {
    std::cerr << "[fbmc] warning: frequency-adjacent correlation is not purely "
                 "imaginary (re = "
              << b01.real() << "); covariance model may be inaccurate\n";
  }
  if (c.corner_sign < 0) {
    std::cerr << "[fbmc] warning: computed corner sign is negative; building the "
                 "covariance core from the measured sign instead of the assumed "
                 "convention\n";
  }

  // Time-adjacent couplings, read off the (0, m) entries of the cross-symbol
  // Gram (rows scaled by S = diag((-1)^p), trivial at p = 0).
  c.gamma = cross_inner(local, g01, o01, g02, o02, 0).imag();
  c.delta = cross_inner(local, g01, o01, g12, o12, 0).imag();
  c.eps = -cross_inner(local, g01, o01, g22, o22, 0).imag();

  if (!(c.gamma > c.delta && c.delta > std::abs(c.eps))) {
    std::ostringstream msg;
    msg << "interference constants violate the expected ordering gamma > delta > "
           "|eps|: gamma="
        << c.gamma << " delta=" << c.delta << " eps=" << c.eps;
    throw std::runtime_error(msg.str());
  }
  return c;
}

Mat build_B(int M, const InterferenceConstants& c) {
  if (M < 2 || M % 2 != 0) {
    throw std::invalid_argument("M must be even and at least 2");
  }
  Mat B = Mat::Identity(M, M);
  const cplx jb(0.0, c.corner_sign * c.beta);
  for (int p = 0; p < M; ++p) {
    B(p, (p + 1) % M) = jb;
    B(p, (p + M - 1) % M) = -jb;
  }
  return B;
}

Vec eig_circulant(const Mat& C) {
  const int M = static_cast<int>(C.rows());
  if (C.cols() != M) throw std::invalid_argument("matrix must be square");
  double dev = 0.0;
  for (int p = 0; p < M; ++p) {
    for (int q = 0; q < M; ++q) {
      dev = std::max(dev, std::abs(C(p, q) - C((p + 1) % M, (q + 1) % M)));
    }
  }
  if (dev > 1e-9) {
    std::ostringstream msg;
    msg << "matrix is not circulant: max row-shift deviation " << dev
        << " exceeds 1e-9";
    throw std::invalid_argument(msg.str());
  }
  Vec lam(M);
  for (int m = 0; m < M; ++m) {
    cplx acc = 0.0;
    for (int r = 0; r < M; ++r) {
      acc += C(0, r) * unit_root(M, -static_cast<long long>(r) * m);
    }
    lam[m] = acc;
  }
  return lam;
}

Mat transmux_core(const FbmcConfig& cfg, int k) {
  const int M = cfg.M;
  const int Lg = cfg.Lg();
  Mat G = Mat::Zero(M, M);
  if (std::abs(k) >= Lg) return G;  // pulses no longer overlap
  // Overlap spectrum s(u) = sum_l g(l-k) g(l) e^{j 2 pi u l / M} over the
  // common support of the delayed and undelayed pulse.
  const int lo = std::max(k, 0);
  const int hi = std::min(Lg, Lg + k);
  std::vector<cplx> s(M);
  for (int u = 0; u < M; ++u) {
    cplx acc = 0.0;
    for (int l = lo; l < hi; ++l) {
      acc += cfg.proto.g[l - k] * cfg.proto.g[l] *
             unit_root(M, static_cast<long long>(u) * l);
    }
    s[u] = acc;
  }
  const int c = cfg.center();
  for (int p = 0; p < M; ++p) {
    for (int m = 0; m < M; ++m) {
      const long long u = m - p;
      long long um = u % M;
      if (um < 0) um += M;
      G(p, m) = ipow(u) * unit_root(M, -static_cast<long long>(m) * k) *
                unit_root(M, -u * c) * s[static_cast<std::size_t>(um)];
    }
  }
  return G;
}

Vec gamma_column(const FbmcConfig& cfg, const Vec& d, int k) {
  if (d.size() != cfg.M) {
    throw std::invalid_argument("preamble length must equal M");
  }
  return transmux_core(cfg, k) * d;
}

SystemMatrices build_cores(const FbmcConfig& cfg, int Lh) {
  if (Lh < 1) throw std::invalid_argument("channel length must be at least 1");
  if (Lh > cfg.M) {
    std::ostringstream msg;
    msg << "channel length L_h=" << Lh << " exceeds M=" << cfg.M
        << "; delays this large leave the well-supported region of the filter "
           "and are not supported";
    throw std::invalid_argument(msg.str());
  }
  if (cfg.M % 4 != 0) {
    throw std::invalid_argument(
        "the circulant core structure requires M divisible by 4");
  }
  SystemMatrices sys;
  sys.M = cfg.M;
  sys.K = cfg.K;
  sys.Lh = Lh;
  sys.F = dft_matrix(cfg.M);

  sys.Gblocks.reserve(Lh);
  sys.Gcores.reserve(Lh);
  for (int k = 0; k < Lh; ++k) {
    sys.Gblocks.push_back(transmux_core(cfg, k));
    Mat core = sys.Gblocks.back();
    for (int p = 0; p < cfg.M; ++p) {
      // W^{-k} row scaling, W = diag(e^{-j 2 pi p / M})
      core.row(p) *= unit_root(cfg.M, static_cast<long long>(p) * k);
    }
    sys.Gcores.push_back(std::move(core));
  }
  sys.B = sys.Gblocks[0];

  const Vec lamB = eig_circulant(sys.B);
  if (lamB.imag().cwiseAbs().maxCoeff() > 1e-9) {
    throw std::runtime_error("covariance core has non-real eigenvalues");
  }
  sys.lambda = lamB.real();
  if (sys.lambda.minCoeff() <= 0.0) {
    throw std::runtime_error("covariance core is not positive definite");
  }

  sys.lambda_k.reserve(Lh);
  for (int k = 0; k < Lh; ++k) {
    const Vec lam = eig_circulant(sys.Gcores[static_cast<std::size_t>(k)]);
    if (lam.imag().cwiseAbs().maxCoeff() > 1e-9) {
      std::ostringstream msg;
      msg << "core eigenvalues for delay k=" << k << " are not real";
      throw std::runtime_error(msg.str());
    }
    sys.lambda_k.push_back(lam.real());
  }

  sys.alpha = RealVec::Zero(cfg.M);
  const int Lg = cfg.Lg();
  for (int k = 0; k < cfg.M; ++k) {
    double acc = 0.0;
    for (int l = k; l < Lg; ++l) acc += cfg.proto.g[l - k] * cfg.proto.g[l];
    sys.alpha[k] = acc;
  }

  sys.Delta_k.reserve(Lh);
  for (int k = 0; k < Lh; ++k) {
    RealVec D(cfg.M);
    for (int i = 0; i < cfg.M; ++i) {
      D[i] = sys.lambda_k[static_cast<std::size_t>(k)][i] *
             sys.lambda_k[static_cast<std::size_t>(k)][i] /
             (sys.lambda[i] * sys.lambda[(i + k) % cfg.M]);
    }
    sys.Delta_k.push_back(std::move(D));
  }
  return sys;
}

SystemMatrices build_gamma(const FbmcConfig& cfg, const Vec& d, int Lh) {
  if (d.size() != cfg.M) {
    throw std::invalid_argument("preamble length must equal M");
  }
  SystemMatrices sys = build_cores(cfg, Lh);
  sys.d = d;
  sys.Gamma.resize(cfg.M, Lh);
  for (int k = 0; k < Lh; ++k) {
    sys.Gamma.col(k) = sys.Gblocks[static_cast<std::size_t>(k)] * d;
  }
  return sys;
}

RealMat shift_matrix(int M, int k) {
  RealMat Z = RealMat::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    Z(i, ((i - k) % M + M) % M) = 1.0;
  }
  return Z;
}

namespace {

Vec shift_down(const Vec& x, int k) {
  const int M = static_cast<int>(x.size());
  Vec out(M);
  for (int i = 0; i < M; ++i) out[i] = x[((i - k) % M + M) % M];
  return out;
}

}  // namespace

Whitened whiten(const SystemMatrices& sys, const Vec& d) {
  if (sys.lambda.size() == 0 || sys.lambda.minCoeff() <= 0.0) {
    throw std::runtime_error("whitening requires a positive-definite covariance core");
  }
  const int M = sys.M;
  const RealVec sqrt_lam = sys.lambda.cwiseSqrt();
  const RealVec inv_sqrt_lam = sqrt_lam.cwiseInverse();

  Whitened w;
  w.transform = inv_sqrt_lam.cast<cplx>().asDiagonal() * sys.F.adjoint();
  w.dtilde = sqrt_lam.cast<cplx>().cwiseProduct(sys.F.adjoint() * d);

  w.GammaTilde.resize(M, sys.Lh);
  w.GammaTilde.col(0) = w.dtilde;
  for (int k = 1; k < sys.Lh; ++k) {
    Vec v = inv_sqrt_lam.cast<cplx>().cwiseProduct(w.dtilde);
    v = sys.lambda_k[static_cast<std::size_t>(k)].cast<cplx>().cwiseProduct(v);
    v = shift_down(v, k);
    w.GammaTilde.col(k) = inv_sqrt_lam.cast<cplx>().cwiseProduct(v);
  }

  w.delta_k.resize(sys.Lh);
  w.delta_k[0] = w.dtilde.squaredNorm();
  for (int k = 1; k < sys.Lh; ++k) {
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
      acc += std::norm(w.dtilde[i]) * sys.Delta_k[static_cast<std::size_t>(k)][i];
    }
    w.delta_k[k] = acc;
  }
  return w;
}

Mat cross_gram(const FbmcConfig& cfg, int q, int n, int k) {
  const int M = cfg.M;
  const int Lg = cfg.Lg();
  std::vector<Vec> gq(static_cast<std::size_t>(M)), gn(static_cast<std::size_t>(M));
  int oq = 0, on = 0;
  for (int m = 0; m < M; ++m) {
    auto [pq, offq] = pulse(cfg, m, q);
    gq[static_cast<std::size_t>(m)] = std::move(pq);
    oq = offq;
    auto [pn, offn] = pulse(cfg, m, n);
    gn[static_cast<std::size_t>(m)] = std::move(pn);
    on = offn;
  }
  Mat out(M, M);
  const int lo = std::max(oq, on + k);
  const int hi = std::min(oq + Lg, on + k + Lg);
  for (int p = 0; p < M; ++p) {
    for (int m = 0; m < M; ++m) {
      cplx acc = 0.0;
      for (int t = lo; t < hi; ++t) {
        acc += std::conj(gq[static_cast<std::size_t>(p)][t - oq]) *
               gn[static_cast<std::size_t>(m)][t - on - k];
      }
      out(p, m) = acc;
    }
  }
  return out;
}

TwoSymbolMatrices build_two_symbol(const FbmcConfig& cfg, const Vec& d1,
                                   const Vec& d2, int Lh) {
  const int M = cfg.M;
  if (d1.size() != M || d2.size() != M) {
    throw std::invalid_argument("preamble symbols must have length M");
  }
  if (Lh < 1 || Lh > M / 2) {
    std::ostringstream msg;
    msg << "two-symbol estimation requires 1 <= L_h <= M/2 (got L_h=" << Lh
        << ", M=" << M << ")";
    throw std::invalid_argument(msg.str());
  }
  if (M % 4 != 0) {
    throw std::invalid_argument(
        "the circulant core structure requires M divisible by 4");
  }

  TwoSymbolMatrices two;
  two.M = M;
  two.K = cfg.K;
  two.Lh = Lh;
  two.d1 = d1;
  two.d2 = d2;
  two.F = dft_matrix(M);
  two.B = transmux_core(cfg, 0);

  const Mat C12 = cross_gram(cfg, 1, 2, 0);
  const Mat C21 = cross_gram(cfg, 2, 1, 0);
  RealVec sgn(M);
  for (int p = 0; p < M; ++p) sgn[p] = (p % 2 == 0) ? 1.0 : -1.0;
  two.Aplus = sgn.cast<cplx>().asDiagonal() * C12;
  two.Aminus = sgn.cast<cplx>().asDiagonal() * C21;

  two.Bbar.resize(2 * M, 2 * M);
  two.Bbar.topLeftCorner(M, M) = two.B;
  two.Bbar.topRightCorner(M, M) = C12;  // = S * Aplus
  two.Bbar.bottomLeftCorner(M, M) = C21;
  two.Bbar.bottomRightCorner(M, M) = two.B;

  // Stacked response via the half-symbol shift identities: the cross blocks
  // are plain response columns at delays k +- M/2 scaled by +-j.
  const cplx j(0.0, 1.0);
  two.GammaBar.resize(2 * M, Lh);
  for (int k = 0; k < Lh; ++k) {
    const Vec top =
        gamma_column(cfg, d1, k) + j * gamma_column(cfg, d2, k + M / 2);
    const Vec bottom =
        gamma_column(cfg, d2, k) - j * gamma_column(cfg, d1, k - M / 2);
    two.GammaBar.col(k).head(M) = top;
    two.GammaBar.col(k).tail(M) = bottom;
  }
  return two;
}

CbarDecomposition decompose_Cbar(const TwoSymbolMatrices& two) {
  const int M = two.M;
  const Mat& F = two.F;
  CbarDecomposition dec;

  const Vec lamB = eig_circulant(two.B);
  dec.lambda = lamB.real();
  const Vec lamP = eig_circulant(two.Aplus);
  if (lamP.real().cwiseAbs().maxCoeff() > 1e-8) {
    throw std::runtime_error(
        "cross-symbol coupling eigenvalues are not purely imaginary");
  }
  dec.lamI_plus = lamP.imag();

  auto record = [&dec](const std::string& stage, double residual) {
    dec.stage_residuals.emplace_back(stage, residual);
    if (residual > 1e-8) {
      std::ostringstream msg;
      msg << "covariance decomposition failed at stage '" << stage
          << "': residual " << residual << " exceeds 1e-8";
      throw std::runtime_error(msg.str());
    }
  };

  // Eigenvalues of A- must be the negated half-shift of those of A+.
  const Vec lamMinus = eig_circulant(two.Aminus);
  double rshift = 0.0;
  for (int i = 0; i < M; ++i) {
    rshift = std::max(rshift, std::abs(lamMinus[i] + lamP[(i + M / 2) % M]));
  }
  record("eigenvalue half-shift (A-)", rshift);

  const Mat ZH = shift_matrix(M, M / 2).cast<cplx>();
  const Mat LamP = (cplx(0, 1) * dec.lamI_plus.cast<cplx>()).asDiagonal();
  const Mat Lam = dec.lambda.cast<cplx>().asDiagonal();

  Mat Kmat(2 * M, 2 * M);
  Kmat.topLeftCorner(M, M) = Lam;
  Kmat.topRightCorner(M, M) = ZH * LamP;
  Kmat.bottomLeftCorner(M, M) = -LamP * ZH;
  Kmat.bottomRightCorner(M, M) = Lam;
  const Mat I2F = kron_I2(F);
  record("block DFT",
         (I2F * Kmat * I2F.adjoint() - two.Bbar).cwiseAbs().maxCoeff());

  Mat T1 = Mat::Zero(2 * M, 2 * M);
  T1.topLeftCorner(M, M) = ZH;
  T1.bottomRightCorner(M, M) = cplx(0, -1) * Mat::Identity(M, M);
  const Mat LamI = dec.lamI_plus.cast<cplx>().asDiagonal();
  Mat Mt(2 * M, 2 * M);
  Mt.topLeftCorner(M, M) = ZH * Lam * ZH;
  Mt.topRightCorner(M, M) = LamI;
  Mt.bottomLeftCorner(M, M) = LamI;
  Mt.bottomRightCorner(M, M) = Lam;
  record("half-shift rotation",
         (T1 * Mt * T1.adjoint() - Kmat).cwiseAbs().maxCoeff());

  const Mat P = parity_matrix(M).cast<cplx>();
  Mat TP = Mat::Zero(2 * M, 2 * M);
  TP.topLeftCorner(M, M) = P;
  TP.bottomRightCorner(M, M) = Mat::Identity(M, M);
  Mat M2(2 * M, 2 * M);
  M2.topLeftCorner(M, M) = Lam;
  M2.topRightCorner(M, M) = P * LamI;
  M2.bottomLeftCorner(M, M) = P * LamI;
  M2.bottomRightCorner(M, M) = Lam;
  record("parity conjugation", (TP * M2 * TP - Mt).cwiseAbs().maxCoeff());

  Mat H2 = Mat::Zero(2 * M, 2 * M);
  const double is2 = 1.0 / std::sqrt(2.0);
  H2.topLeftCorner(M, M) = is2 * Mat::Identity(M, M);
  H2.topRightCorner(M, M) = is2 * Mat::Identity(M, M);
  H2.bottomLeftCorner(M, M) = is2 * Mat::Identity(M, M);
  H2.bottomRightCorner(M, M) = -is2 * Mat::Identity(M, M);

  const RealMat Preal = parity_matrix(M);
  const RealMat Nplus =
      RealMat(dec.lambda.asDiagonal()) + Preal * RealMat(dec.lamI_plus.asDiagonal());
  const RealMat Nminus =
      RealMat(dec.lambda.asDiagonal()) - Preal * RealMat(dec.lamI_plus.asDiagonal());
  Mat NN = Mat::Zero(2 * M, 2 * M);
  NN.topLeftCorner(M, M) = Nplus.cast<cplx>();
  NN.bottomRightCorner(M, M) = Nminus.cast<cplx>();
  record("two-point butterfly", (H2 * NN * H2 - M2).cwiseAbs().maxCoeff());

  // Givens rotations pairing indices (i, M-i); entries 0 and M/2 are already
  // scalar blocks.
  dec.theta = RealVec::Zero(M / 2);
  dec.Vplus = RealMat::Identity(M, M);
  for (int i = 1; i < M / 2; ++i) {
    const double a = Nplus(i, i);
    const double b = Nplus(i, M - i);
    const double dd = Nplus(M - i, M - i);
    // When the pair is already uncoupled keep the angle at zero instead of
    // letting atan2(0, negative) produce a spurious eigenvalue swap.
    const bool uncoupled =
        std::abs(b) < 1e-15 * std::max(1.0, std::abs(a) + std::abs(dd));
    const double th = uncoupled ? 0.0 : 0.5 * std::atan2(2.0 * b, dd - a);
    dec.theta[i] = th;
    RealMat G = RealMat::Identity(M, M);
    G(i, i) = std::cos(th);
    G(i, M - i) = std::sin(th);
    G(M - i, i) = -std::sin(th);
    G(M - i, M - i) = std::cos(th);
    dec.Vplus = dec.Vplus * G;
  }
  const RealMat Lp = dec.Vplus.transpose() * Nplus * dec.Vplus;
  const RealMat Lm = dec.Vplus * Nminus * dec.Vplus.transpose();
  double offp = 0.0, offm = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int jcol = 0; jcol < M; ++jcol) {
      if (i == jcol) continue;
      offp = std::max(offp, std::abs(Lp(i, jcol)));
      offm = std::max(offm, std::abs(Lm(i, jcol)));
    }
  }
  record("Givens diagonalization", std::max(offp, offm));
  dec.Lplus = Lp.diagonal();
  dec.Lminus = Lm.diagonal();

  Mat V2 = Mat::Zero(2 * M, 2 * M);
  V2.topLeftCorner(M, M) = dec.Vplus.cast<cplx>();
  V2.bottomRightCorner(M, M) = dec.Vplus.transpose().cast<cplx>();
  dec.U = I2F * T1 * TP * H2 * V2;

  Vec Lfull(2 * M);
  Lfull.head(M) = dec.Lplus.cast<cplx>();
  Lfull.tail(M) = dec.Lminus.cast<cplx>();
  dec.reconstruction_residual =
      (dec.U * Lfull.asDiagonal() * dec.U.adjoint() - two.Bbar)
          .cwiseAbs()
          .maxCoeff();
  record("full reconstruction", dec.reconstruction_residual);
  return dec;
}

Mat two_symbol_whitener(const TwoSymbolMatrices& two, const CbarDecomposition& dec) {
  const int M = two.M;
  if (dec.Lplus.minCoeff() <= 0.0 || dec.Lminus.minCoeff() <= 0.0) {
    throw std::runtime_error(
        "stacked covariance has a non-positive eigenvalue; cannot whiten");
  }
  RealVec Lfull(2 * M);
  Lfull.head(M) = dec.Lplus;
  Lfull.tail(M) = dec.Lminus;
  // Inverse of the unitary chain applied left-to-right, scaled by L^{-1/2}.
  return Lfull.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
         dec.U.adjoint();
}

TwoSymbolOrthoReport check_two_symbol_orthogonality(const FbmcConfig& cfg,
                                                    const TwoSymbolMatrices& two,
                                                    const CbarDecomposition& dec) {
  TwoSymbolOrthoReport report;
  const int M = two.M;
  const int Lh = two.Lh;
  if (Lh <= 1) return report;

  const Mat Wbar = two_symbol_whitener(two, dec);
  const Mat Gt = Wbar * two.GammaBar;

  RealVec sgn(M);
  for (int p = 0; p < M; ++p) sgn[p] = (p % 2 == 0) ? 1.0 : -1.0;
  const Mat Sdiag = sgn.cast<cplx>().asDiagonal();

  Vec dtb(2 * M);
  dtb.head(M) = two.F.adjoint() * two.d1;
  dtb.tail(M) = two.F.adjoint() * two.d2;

  const Mat ZH = shift_matrix(M, M / 2).cast<cplx>();
  for (int k = 1; k < Lh; ++k) {
    const Mat Zk = shift_matrix(M, k).cast<cplx>();
    Mat Gk = transmux_core(cfg, k);
    Mat Gk12 = Sdiag * cross_gram(cfg, 1, 2, k);
    Mat Gk21 = Sdiag * cross_gram(cfg, 2, 1, k);
    for (int p = 0; p < M; ++p) {
      const cplx w = std::polar(1.0, 2.0 * kPi * p * k / M);  // W^{-k} rows
      Gk.row(p) *= w;
      Gk12.row(p) *= w;
      Gk21.row(p) *= w;
    }
    const Mat LamK = eig_circulant(Gk).asDiagonal();
    const Mat Lam12 = eig_circulant(Gk12).asDiagonal();
    const Mat Lam21 = eig_circulant(Gk21).asDiagonal();

    Mat blk(2 * M, 2 * M);
    blk.topLeftCorner(M, M) = Zk * LamK;
    blk.topRightCorner(M, M) = Zk * ZH * Lam12;
    blk.bottomLeftCorner(M, M) = Zk * ZH * Lam21;
    blk.bottomRightCorner(M, M) = Zk * LamK;

    const cplx formula = dtb.dot(blk * dtb);
    const cplx direct = Gt.col(0).dot(Gt.col(k));
    report.zero_lag.push_back(formula);
    report.max_crosscheck_error =
        std::max(report.max_crosscheck_error, std::abs(formula - direct));
  }

  for (int k = 1; k < Lh; ++k) {
    for (int l = k + 1; l < Lh; ++l) {
      report.pairwise.push_back(Gt.col(k).dot(Gt.col(l)));
    }
  }
  return report;
}

}  // namespace fbmc
