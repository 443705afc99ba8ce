#include "ddtopo/interface_precond.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace ddtopo {

FractionalNorm fractional_norm_dense(const Mat& L, const Mat& M, double theta) {
  if (L.rows() != L.cols() || M.rows() != M.cols() || L.rows() != M.rows())
    throw std::invalid_argument("fractional_norm_dense: size mismatch");
  if (L.rows() > kDenseInterfaceLimit)
    throw std::runtime_error("fractional_norm_dense: pencil too large");

  FractionalNorm norm;
  norm.theta = theta;
  if (theta == 1.0) {
    norm.H = M;
    return norm;
  }
  if (theta == 0.0) {
    norm.H = L;
    return norm;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> eig(L, M);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("fractional_norm_dense: generalized eigensolve failed");
  const Vec powered = eig.eigenvalues().array().pow(1.0 - theta);
  const Mat MZ = M * eig.eigenvectors();
  norm.H = MZ * powered.asDiagonal() * MZ.transpose();
  norm.H = 0.5 * (norm.H + norm.H.transpose());
  return norm;
}

Mat PencilFactorization::T() const {
  const int n = k();
  Mat T = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < n) {
      T(i, i + 1) = beta[i];
      T(i + 1, i) = beta[i];
    }
  }
  return T;
}

PencilFactorization generalized_lanczos(const SpMat& L, const SpMat& M, int k,
                                        const Vec& start) {
  const int n = static_cast<int>(L.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("generalized_lanczos: need 1 <= k <= n");

  Eigen::SimplicialLDLT<SpMat> mchol(M);
  if (mchol.info() != Eigen::Success)
    throw std::runtime_error("generalized_lanczos: mass matrix factorization failed");

  PencilFactorization fact;
  fact.V.resize(n, k);
  std::vector<double> alpha, beta;

  Vec v = start;
  double vnorm = std::sqrt(v.dot(M * v));
  if (!(vnorm > 0.0))
    throw std::invalid_argument("generalized_lanczos: start vector has zero M-norm");
  v /= vnorm;

  Vec v_prev = Vec::Zero(n);
  double beta_prev = 0.0;
  int j = 0;
  for (; j < k; ++j) {
    fact.V.col(j) = v;
    const Vec Lv = L * v;
    const double a = v.dot(Lv);
    alpha.push_back(a);

    Vec w = mchol.solve(Lv) - a * v - beta_prev * v_prev;
    // Full reorthogonalization in the M-inner product; k stays small.
    for (int pass = 0; pass < 2; ++pass) {
      const Vec corr = fact.V.leftCols(j + 1).transpose() * (M * w);
      w -= fact.V.leftCols(j + 1) * corr;
    }
    const double b = std::sqrt(std::max(0.0, w.dot(M * w)));
    const double tol = 1e-14 * std::max(1.0, std::abs(a));
    if (b <= tol || j + 1 == n) {
      if (b <= tol) {
        fact.breakdown = true;
      } else if (j + 1 < k) {
        // Invariant subspace reached before the requested depth.
        fact.breakdown = true;
      }
      ++j;
      break;
    }
    if (j + 1 == k) {
      fact.next_beta = b;
      fact.next_v = w / b;
      ++j;
      break;
    }
    beta.push_back(b);
    beta_prev = b;
    v_prev = fact.V.col(j);
    v = w / b;
  }

  const int depth = j;
  fact.V.conservativeResize(n, depth);
  fact.alpha = Eigen::Map<Vec>(alpha.data(), depth);
  fact.beta = Eigen::Map<Vec>(beta.data(), static_cast<int>(beta.size()));
  return fact;
}

int default_lanczos_k(int n_gamma) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_gamma))));
}

namespace {

// [S22, 1; 1^T, 0], the constraint blocks kept verbatim in every variant.
Mat border_matrix(const SchurBlocks& blocks) {
  const int N = static_cast<int>(blocks.S22.rows());
  Mat B = Mat::Zero(N + 1, N + 1);
  B.topLeftCorner(N, N) = blocks.S22;
  B.topRightCorner(N, 1).setOnes();
  B.bottomLeftCorner(1, N).setOnes();
  return B;
}

Mat bordered_dense(const Mat& block11, const SchurBlocks& blocks) {
  const int ng = static_cast<int>(block11.rows());
  const int N = static_cast<int>(blocks.S22.rows());
  Mat S = Mat::Zero(ng + N + 1, ng + N + 1);
  S.topLeftCorner(ng, ng) = block11;
  S.block(0, ng, ng, N) = blocks.S12;
  S.block(ng, 0, N, ng) = blocks.S12.transpose();
  S.bottomRightCorner(N + 1, N + 1) = border_matrix(blocks);
  return S;
}

Mat tridiagonal_power(const PencilFactorization& fact, double exponent) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(fact.T());
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_schur_approx: eigensolve of T_k failed");
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("build_schur_approx: T_k not positive definite");
  const Vec powered = eig.eigenvalues().array().pow(exponent);
  return eig.eigenvectors() * powered.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace

SchurApprox build_schur_approx(SchurVariant variant, const SchurBlocks& blocks,
                               const SchurApproxInputs& inputs, double theta, int lanczos_k) {
  SchurApprox approx;
  approx.variant = variant;
  approx.n_gamma = static_cast<int>(blocks.S12.rows());
  approx.N = static_cast<int>(blocks.S22.rows());

  switch (variant) {
    case SchurVariant::exact:
      approx.dense = blocks.dense_S();
      approx.dense_lu.compute(approx.dense);
      return approx;
    case SchurVariant::s0: {
      if (!inputs.elastic_schur)
        throw std::invalid_argument("build_schur_approx: s0 needs the elasticity Schur block");
      approx.dense = bordered_dense(*inputs.elastic_schur, blocks);
      approx.dense_lu.compute(approx.dense);
      return approx;
    }
    case SchurVariant::s1: {
      if (!inputs.pencil)
        throw std::invalid_argument("build_schur_approx: s1 needs the interface pencil");
      const int g = approx.n_gamma / 2;
      const FractionalNorm norm =
          fractional_norm_dense(Mat(inputs.pencil->L), Mat(inputs.pencil->M), theta);
      Mat H = Mat::Zero(approx.n_gamma, approx.n_gamma);
      H.topLeftCorner(g, g) = norm.H;
      H.bottomRightCorner(g, g) = norm.H;
      approx.dense = bordered_dense(H, blocks);
      approx.dense_lu.compute(approx.dense);
      return approx;
    }
    case SchurVariant::s2: {
      if (!inputs.pencil)
        throw std::invalid_argument("build_schur_approx: s2 needs the interface pencil");
      const int g = approx.n_gamma / 2;
      const int depth = std::min(lanczos_k > 0 ? lanczos_k : default_lanczos_k(approx.n_gamma), g);
      // Both displacement components share one pencil factorization.
      const PencilFactorization fact =
          generalized_lanczos(inputs.pencil->L, inputs.pencil->M, depth, Vec::Ones(g));
      const int kk = fact.k();
      approx.Vk = fact.V;
      const Mat Tpow = tridiagonal_power(fact, 1.0 - theta);

      Mat CtV(approx.N + 1, 2 * kk);
      CtV.setZero();
      CtV.topLeftCorner(approx.N, kk) =
          blocks.S12.topRows(g).transpose() * fact.V;
      CtV.block(0, kk, approx.N, kk) =
          blocks.S12.bottomRows(g).transpose() * fact.V;
      Eigen::HouseholderQR<Mat> qr(CtV);
      approx.Uk = qr.householderQ();
      const Mat R = approx.Uk.transpose() * CtV;
      const Mat D = approx.Uk.transpose() * border_matrix(blocks) * approx.Uk;

      const int nt = 2 * kk + approx.N + 1;
      approx.Tcal = Mat::Zero(nt, nt);
      approx.Tcal.block(0, 0, kk, kk) = Tpow;
      approx.Tcal.block(kk, kk, kk, kk) = Tpow;
      approx.Tcal.block(0, 2 * kk, 2 * kk, approx.N + 1) = R.transpose();
      approx.Tcal.block(2 * kk, 0, approx.N + 1, 2 * kk) = R;
      approx.Tcal.bottomRightCorner(approx.N + 1, approx.N + 1) = D;
      approx.tcal_lu.compute(approx.Tcal);
      if (!approx.tcal_lu.isInvertible())
        throw std::runtime_error(
            "build_schur_approx: singular reduced matrix; increase the Lanczos depth");
      return approx;
    }
  }
  throw std::logic_error("build_schur_approx: unknown variant");
}

Vec SchurApprox::apply_inverse(const Vec& v) const {
  if (v.size() != size())
    throw std::invalid_argument("SchurApprox::apply_inverse: size mismatch");
  if (variant != SchurVariant::s2) return dense_lu.solve(v);

  const int g = n_gamma / 2;
  const int kk = static_cast<int>(Vk.cols());
  Vec w(2 * kk + N + 1);
  w.head(kk) = Vk.transpose() * v.head(g);
  w.segment(kk, kk) = Vk.transpose() * v.segment(g, g);
  w.tail(N + 1) = Uk.transpose() * v.tail(N + 1);
  const Vec y = tcal_lu.solve(w);
  Vec out(size());
  out.head(g) = Vk * y.head(kk);
  out.segment(g, g) = Vk * y.segment(kk, kk);
  out.tail(N + 1) = Uk * y.tail(N + 1);
  return out;
}

Vec SchurApprox::apply(const Vec& v) const {
  if (variant == SchurVariant::s2) {
    const int g = n_gamma / 2;
    const int kk = static_cast<int>(Vk.cols());
    Vec w(2 * kk + N + 1);
    w.head(kk) = Vk.transpose() * v.head(g);
    w.segment(kk, kk) = Vk.transpose() * v.segment(g, g);
    w.tail(N + 1) = Uk.transpose() * v.tail(N + 1);
    const Vec y = Tcal * w;
    Vec out(size());
    out.head(g) = Vk * y.head(kk);
    out.segment(g, g) = Vk * y.segment(kk, kk);
    out.tail(N + 1) = Uk * y.tail(N + 1);
    return out;
  }
  return dense * v;
}

EigpropReport eigprop_check(const Mat& K, const Mat& G, const Mat& D, const Mat& F,
                            double unit_tol) {
  const int ng = static_cast<int>(K.rows());
  const int N = static_cast<int>(F.rows());

  auto bordered = [&](const Mat& block11) {
    Mat B = Mat::Zero(ng + N + 1, ng + N + 1);
    B.topLeftCorner(ng, ng) = block11;
    B.block(0, ng, ng, N) = D;
    B.block(ng, 0, N, ng) = D.transpose();
    B.block(ng, ng, N, N) = F;
    B.block(ng, ng + N, N, 1).setOnes();
    B.block(ng + N, ng, 1, N).setOnes();
    return B;
  };

  EigpropReport report;
  report.unit_tol = unit_tol;

  Eigen::GeneralizedEigenSolver<Mat> full(bordered(K), bordered(G));
  if (full.info() != Eigen::Success)
    throw std::runtime_error("eigprop_check: QZ on the bordered pair failed");
  report.spectrum = full.eigenvalues();

  // Z spans the nullspace of 1_N^T.
  Mat Z = Mat::Zero(N, N - 1);
  for (int i = 0; i < N - 1; ++i) {
    Z(i, i) = 1.0;
    Z(i + 1, i) = -1.0;
  }
  const Mat DZ = D * Z;
  const Mat Q = DZ * (Z.transpose() * F * Z).fullPivLu().solve(DZ.transpose());
  Eigen::GeneralizedEigenSolver<Mat> reduced(K - Q, G - Q);
  if (reduced.info() != Eigen::Success)
    throw std::runtime_error("eigprop_check: QZ on the deflated pair failed");
  report.reduced_spectrum = reduced.eigenvalues();

  std::vector<std::complex<double>> evs(report.spectrum.data(),
                                        report.spectrum.data() + report.spectrum.size());
  for (const auto& ev : evs)
    if (std::abs(ev - 1.0) <= unit_tol) ++report.unit_count;

  // Drop the N+1 eigenvalues nearest to 1, then match the remainder against
  // the deflated spectrum as multisets.
  std::sort(evs.begin(), evs.end(), [](const auto& a, const auto& b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  std::vector<std::complex<double>> rest(evs.begin() + (N + 1), evs.end());
  std::vector<std::complex<double>> target(
      report.reduced_spectrum.data(),
      report.reduced_spectrum.data() + report.reduced_spectrum.size());
  double worst = 0.0;
  for (const auto& ev : rest) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double d = std::abs(ev - target[i]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    worst = std::max(worst, best_dist);
    target.erase(target.begin() + static_cast<long>(best));
  }
  report.max_match_distance = worst;
  return report;
}

} // namespace ddtopo
