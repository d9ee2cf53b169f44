#include "fbmc/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace fbmc {

namespace {

cplx unit_root(int M, long long t) {
  long long r = t % M;
  if (r < 0) r += M;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / M);
}

// Least-squares solve with a rank check; reports the condition number when
// the system is numerically rank-deficient.
Vec checked_lstsq(const Mat& A, const Vec& b, const char* what) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > smax * 1e-12)) {
    std::ostringstream msg;
    msg << what << ": response matrix is numerically rank-deficient "
        << "(condition number "
        << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity())
        << ")";
    throw std::runtime_error(msg.str());
  }
  return svd.solve(b);
}

Mat whitening_transform(const SystemMatrices& sys) {
  if (sys.lambda.size() == 0 || sys.lambda.minCoeff() <= 0.0) {
    throw std::runtime_error(
        "noise covariance core is not positive definite; cannot whiten");
  }
  return sys.lambda.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
         sys.F.adjoint();
}

}  // namespace

double nmse(const Vec& H_true, const Vec& H_hat) {
  const double denom = H_true.squaredNorm();
  if (denom == 0.0) {
    throw std::invalid_argument("reference response has zero energy");
  }
  return (H_hat - H_true).squaredNorm() / denom;
}

Vec td_estimate(const SystemMatrices& sys, const Vec& y) {
  if (sys.Gamma.size() == 0) {
    throw std::invalid_argument(
        "system matrices carry no response matrix; build them from a preamble");
  }
  if (y.size() != sys.M) {
    throw std::invalid_argument("analysis vector must have length M");
  }
  const Mat P1 = whitening_transform(sys);
  return checked_lstsq(P1 * sys.Gamma, P1 * y, "td_estimate");
}

Mat td_estimator_matrix(const SystemMatrices& sys) {
  if (sys.Gamma.size() == 0) {
    throw std::invalid_argument(
        "system matrices carry no response matrix; build them from a preamble");
  }
  const Mat P1 = whitening_transform(sys);
  const Mat Gt = P1 * sys.Gamma;
  Eigen::JacobiSVD<Mat> svd(Gt, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > smax * 1e-12)) {
    throw std::runtime_error(
        "td_estimator_matrix: response matrix is numerically rank-deficient");
  }
  const Mat pinv =
      svd.matrixV() *
      svd.singularValues().cwiseInverse().cast<cplx>().asDiagonal() *
      svd.matrixU().adjoint();
  return pinv * P1;
}

Mat sparse_model_matrix(const std::vector<int>& pilot_positions, const Vec& d_P,
                        const RealVec& alpha, int M, int Lh) {
  const int n = static_cast<int>(pilot_positions.size());
  Mat G(n, Lh);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < Lh; ++k) {
      G(i, k) = d_P[i] * alpha[k] *
                unit_root(M, -static_cast<long long>(pilot_positions[i]) * k);
    }
  }
  return G;
}

SparseEstimate td_estimate_sparse(const std::vector<int>& pilot_positions,
                                  const Vec& d_P, const RealVec& alpha,
                                  const Vec& y_P, int M) {
  const int Lh = static_cast<int>(pilot_positions.size());
  if (Lh < 1) throw std::invalid_argument("pilot set is empty");
  if (d_P.size() != Lh || y_P.size() != Lh) {
    throw std::invalid_argument(
        "pilot values and received samples must match the pilot set size");
  }
  if (alpha.size() < Lh) {
    throw std::invalid_argument(
        "autocorrelation sequence shorter than the pilot set");
  }
  for (int i = 0; i < Lh; ++i) {
    if (std::abs(d_P[i]) == 0.0) {
      throw std::invalid_argument("pilot value at a used position is zero");
    }
    if (pilot_positions[static_cast<std::size_t>(i)] < 0 ||
        pilot_positions[static_cast<std::size_t>(i)] >= M) {
      throw std::invalid_argument("pilot position outside [0, M)");
    }
  }
  for (int k = 0; k < Lh; ++k) {
    if (alpha[k] == 0.0) {
      throw std::invalid_argument("autocorrelation value alpha_k is zero");
    }
  }

  bool equispaced = (M % Lh == 0);
  if (equispaced) {
    const int Q = M / Lh;
    const int p0 = pilot_positions[0];
    for (int i = 0; i < Lh; ++i) {
      if (pilot_positions[static_cast<std::size_t>(i)] != (p0 + i * Q) % M) {
        equispaced = false;
        break;
      }
    }
  }

  SparseEstimate out;
  if (!equispaced) {
    std::cerr << "[fbmc] warning: pilot set is not equispaced; using the "
                 "generic least-squares path\n";
    const Mat G = sparse_model_matrix(pilot_positions, d_P, alpha, M, Lh);
    out.h = checked_lstsq(G, y_P, "td_estimate_sparse");
    out.equispaced_fast_path = false;
    return out;
  }

  // Fast path: divide by the pilots, invert the small DFT, divide by alpha.
  const int p0 = pilot_positions[0];
  Vec Ha(Lh);
  for (int i = 0; i < Lh; ++i) Ha[i] = y_P[i] / d_P[i];
  out.h.resize(Lh);
  for (int k = 0; k < Lh; ++k) {
    cplx acc = 0.0;
    for (int i = 0; i < Lh; ++i) {
      acc += Ha[i] * unit_root(Lh, static_cast<long long>(i) * k);
    }
    acc /= static_cast<double>(Lh);
    out.h[k] = acc * unit_root(M, static_cast<long long>(p0) * k) / alpha[k];
  }
  out.equispaced_fast_path = true;
  return out;
}

Vec td_estimate_two_symbol(const TwoSymbolMatrices& two,
                           const CbarDecomposition& dec, const Vec& ybar) {
  if (ybar.size() != 2 * two.M) {
    throw std::invalid_argument("stacked analysis vector must have length 2M");
  }
  const Mat Wbar = two_symbol_whitener(two, dec);
  return checked_lstsq(Wbar * two.GammaBar, Wbar * ybar,
                       "td_estimate_two_symbol");
}

Vec td_estimate_two_symbol(const TwoSymbolMatrices& two, const Vec& ybar) {
  const CbarDecomposition dec = decompose_Cbar(two);
  return td_estimate_two_symbol(two, dec, ybar);
}

Vec iam_estimate(const Vec& pseudo_pilots, const Vec& y) {
  if (pseudo_pilots.size() != y.size()) {
    throw std::invalid_argument("pseudo-pilot and analysis vectors differ in length");
  }
  const auto M = pseudo_pilots.size();
  Vec H(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    if (std::abs(pseudo_pilots[m]) == 0.0) {
      std::ostringstream msg;
      msg << "pseudo-pilot at subcarrier " << m << " is zero";
      throw std::invalid_argument(msg.str());
    }
    H[m] = y[m] / pseudo_pilots[m];
  }
  return H;
}

Vec dft_interpolate(const Vec& H_hat, int Lh) {
  const int M = static_cast<int>(H_hat.size());
  if (Lh < 1 || Lh > M) {
    throw std::invalid_argument("interpolation length must satisfy 1 <= Lh <= M");
  }
  if (Lh == M) return H_hat;
  // h = IDFT(H), truncated to the first Lh taps; back to the CFR.
  Vec h(Lh);
  for (int k = 0; k < Lh; ++k) {
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m) {
      acc += H_hat[m] * unit_root(M, static_cast<long long>(m) * k);
    }
    h[k] = acc / static_cast<double>(M);
  }
  return cfr(h, M);
}

Vec blue_smooth(const Vec& H_hat, const Vec& pseudo_pilots, double beta,
                BlueVariant variant) {
  const int M = static_cast<int>(H_hat.size());
  if (M < 3) {
    throw std::invalid_argument("three-tap smoothing requires M >= 3");
  }
  if (pseudo_pilots.size() != M) {
    throw std::invalid_argument("pseudo-pilot vector must have length M");
  }

  Eigen::Matrix3cd B3i;
  if (variant == BlueVariant::kBlue) {
    Eigen::Matrix3cd B3;
    const cplx jb(0.0, beta);
    B3 << 1.0, jb, 0.0, -jb, 1.0, jb, 0.0, -jb, 1.0;
    B3i = B3.inverse();
  } else {
    B3i = Eigen::Matrix3cd::Identity();
  }

  Vec out(M);
  for (int m = 0; m < M; ++m) {
    Eigen::Vector3cd cm, ym;
    for (int t = -1; t <= 1; ++t) {
      const int idx = ((m + t) % M + M) % M;
      cm[t + 1] = pseudo_pilots[idx];
      ym[t + 1] = pseudo_pilots[idx] * H_hat[idx];
    }
    const cplx den = cm.dot(B3i * cm);
    if (std::abs(den) < 1e-300) {
      std::ostringstream msg;
      msg << "smoothing denominator vanishes at subcarrier " << m;
      throw std::runtime_error(msg.str());
    }
    out[m] = cm.dot(B3i * ym) / den;
  }
  return out;
}

Mat blue_smooth_matrix(const Vec& pseudo_pilots, double beta,
                       BlueVariant variant) {
  const int M = static_cast<int>(pseudo_pilots.size());
  if (M < 3) {
    throw std::invalid_argument("three-tap smoothing requires M >= 3");
  }
  Eigen::Matrix3cd B3i;
  if (variant == BlueVariant::kBlue) {
    Eigen::Matrix3cd B3;
    const cplx jb(0.0, beta);
    B3 << 1.0, jb, 0.0, -jb, 1.0, jb, 0.0, -jb, 1.0;
    B3i = B3.inverse();
  } else {
    B3i = Eigen::Matrix3cd::Identity();
  }
  Mat W = Mat::Zero(M, M);
  for (int m = 0; m < M; ++m) {
    Eigen::Vector3cd cm;
    int idx[3];
    for (int t = -1; t <= 1; ++t) {
      idx[t + 1] = ((m + t) % M + M) % M;
      cm[t + 1] = pseudo_pilots[idx[t + 1]];
    }
    const cplx den = cm.dot(B3i * cm);
    if (std::abs(den) < 1e-300) {
      std::ostringstream msg;
      msg << "smoothing denominator vanishes at subcarrier " << m;
      throw std::runtime_error(msg.str());
    }
    const Eigen::RowVector3cd wrow = cm.adjoint() * B3i;
    for (int t = 0; t < 3; ++t) {
      W(m, idx[t]) += wrow[t] * pseudo_pilots[idx[t]] / den;
    }
  }
  return W;
}

Vec cpofdm_estimate(const Vec& pilot, const Vec& received_fft, int Lh,
                    CpofdmMode mode) {
  if (pilot.size() != received_fft.size()) {
    throw std::invalid_argument("pilot and received grids differ in length");
  }
  const auto M = pilot.size();
  Vec H(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    if (std::abs(pilot[m]) == 0.0) {
      std::ostringstream msg;
      msg << "pilot tone " << m << " is zero";
      throw std::invalid_argument(msg.str());
    }
    H[m] = received_fft[m] / pilot[m];
  }
  if (mode == CpofdmMode::kTime) {
    return dft_interpolate(H, Lh);
  }
  return H;
}

}  // namespace fbmc
