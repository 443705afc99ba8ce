#pragma once

#include <complex>
#include <optional>

#include "ddtopo/assembly.hpp"
#include "ddtopo/schur.hpp"
#include "ddtopo/types.hpp"

namespace ddtopo {

enum class SchurVariant { exact, s0, s1, s2 };

/// Discrete interpolation norm H_theta = M (M^{-1} L)^{1-theta}, computed
/// from the generalized eigendecomposition of the pencil (L, M).
struct FractionalNorm {
  double theta = 0.5;
  Mat H;
};

FractionalNorm fractional_norm_dense(const Mat& L, const Mat& M, double theta);

/// Generalized Lanczos decomposition of the pencil (L, M):
/// V^T L V = T tridiagonal, V^T M V = I, with full reorthogonalization.
struct PencilFactorization {
  Mat V;      // n x k, M-orthonormal
  Vec alpha;  // T diagonal
  Vec beta;   // T off-diagonal, k-1 entries
  bool breakdown = false;
  // Residual term of the three-term recurrence, empty past breakdown or at
  // full depth: L V = M V T + next_beta * M next_v e_k^T.
  Vec next_v;
  double next_beta = 0.0;

  int k() const { return static_cast<int>(alpha.size()); }
  Mat T() const;
};

PencilFactorization generalized_lanczos(const SpMat& L, const SpMat& M, int k,
                                        const Vec& start);

/// Interface preconditioner: the bordered Schur matrix with its (1,1) block
/// replaced per variant. exact/s0/s1 hold a dense factorization; s2 applies
/// the partial constrained Lanczos factorization W_k Tcal_k^{-1} W_k^T.
struct SchurApprox {
  SchurVariant variant = SchurVariant::s0;
  int n_gamma = 0;
  int N = 0;

  // exact / s0 / s1
  Mat dense;
  Eigen::PartialPivLU<Mat> dense_lu;

  // s2
  Mat Vk;     // per-component Lanczos vectors, g x k
  Mat Uk;     // (N+1) x (N+1) orthogonal factor
  Mat Tcal;   // (2k + N + 1) bordered reduced matrix
  Eigen::FullPivLU<Mat> tcal_lu;

  int size() const { return n_gamma + N + 1; }
  Vec apply_inverse(const Vec& v) const;
  // Forward application, available for the dense variants.
  Vec apply(const Vec& v) const;
};

struct SchurApproxInputs {
  const InterfacePencil* pencil = nullptr;  // s1, s2
  const Mat* elastic_schur = nullptr;       // s0: dense S_GammaGamma
};

SchurApprox build_schur_approx(SchurVariant variant, const SchurBlocks& blocks,
                               const SchurApproxInputs& inputs, double theta, int lanczos_k);

/// Number of Lanczos vectors per component used by s2 unless overridden.
int default_lanczos_k(int n_gamma);

/// Numerical check of the constraint-preconditioner spectrum: the bordered
/// pair (K|D|1, G|D|1) must show N+1 unit eigenvalues, the rest matching
/// eig(K - Q, G - Q) with Q = DZ (Z^T F Z)^{-1} (DZ)^T.
struct EigpropReport {
  Eigen::VectorXcd spectrum;          // full bordered problem
  Eigen::VectorXcd reduced_spectrum;  // deflated problem
  int unit_count = 0;                 // |lambda - 1| <= unit_tol
  double max_match_distance = 0.0;    // multiset match of the remaining part
  double unit_tol = 1e-8;
};

EigpropReport eigprop_check(const Mat& K, const Mat& G, const Mat& D, const Mat& F,
                            double unit_tol = 1e-8);

} // namespace ddtopo
