#include "ddtopo/schur.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

namespace ddtopo {

Vec BlockJacobian::apply(const Vec& v) const {
  Vec out(size());
  for (int k = 0; k < N; ++k) {
    const int off = interior_offset[k];
    const int sz = JII[k].rows();
    out.segment(off, sz) = JII[k] * v.segment(off, sz);
  }
  out.head(n_interior) += JIG * v.tail(n_interface);
  out.tail(n_interface) = JGI * v.head(n_interior) + JGG * v.tail(n_interface);
  return out;
}

Mat BlockJacobian::dense() const {
  Mat full = Mat::Zero(size(), size());
  for (int k = 0; k < N; ++k) {
    const int off = interior_offset[k];
    full.block(off, off, JII[k].rows(), JII[k].cols()) = Mat(JII[k]);
  }
  full.topRightCorner(n_interior, n_interface) = Mat(JIG);
  full.bottomLeftCorner(n_interface, n_interior) = Mat(JGI);
  full.bottomRightCorner(n_interface, n_interface) = Mat(JGG);
  return full;
}

SubdomainFactorizations factor_interior(const BlockJacobian& J) {
  SubdomainFactorizations F;
  F.lu.reserve(J.N);
  for (int k = 0; k < J.N; ++k) {
    auto lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu->compute(J.JII[k]);
    if (lu->info() != Eigen::Success)
      throw std::runtime_error("factor_interior: singular interior block in subdomain " +
                               std::to_string(k));
    F.lu.push_back(std::move(lu));
  }
  return F;
}

Vec apply_interior_inverse(const BlockJacobian& J, const SubdomainFactorizations& F,
                           const Vec& v) {
  Vec out(J.n_interior);
  for (int k = 0; k < J.N; ++k) {
    const int off = J.interior_offset[k];
    const int sz = J.JII[k].rows();
    out.segment(off, sz) = F.lu[k]->solve(v.segment(off, sz));
  }
  return out;
}

SchurBlocks compute_schur_blocks(const BlockJacobian& J, const SubdomainFactorizations& F) {
  SchurBlocks blocks;
  blocks.J = &J;
  blocks.F = &F;
  const int N = J.N;
  blocks.S12 = Mat::Zero(J.n_gamma, N);
  blocks.S22 = Mat::Zero(N, N);

  // Column mu_k of J_IG only touches subdomain k (the -1 against lambda_k),
  // so each column of [S12; S22] costs one subdomain solve.
  for (int k = 0; k < N; ++k) {
    const int off = J.interior_offset[k];
    const int sz = J.JII[k].rows();
    const Vec col = Vec(J.JIG.col(J.n_gamma + k)).segment(off, sz);
    const Vec z = F.lu[k]->solve(col);
    Vec full = Vec::Zero(J.n_interior);
    full.segment(off, sz) = z;
    const Vec s_col = -(J.JGI * full);
    blocks.S12.col(k) = s_col.head(J.n_gamma);
    blocks.S22.col(k) = s_col.segment(J.n_gamma, N);
  }
  return blocks;
}

Vec SchurBlocks::apply_S11(const Vec& v) const {
  Vec ext = Vec::Zero(J->n_interface);
  ext.head(J->n_gamma) = v;
  const Vec t = apply_interior_inverse(*J, *F, J->JIG * ext);
  return Vec(J->JGG * ext - J->JGI * t).head(J->n_gamma);
}

Vec SchurBlocks::apply_S(const Vec& v) const {
  const Vec t = apply_interior_inverse(*J, *F, J->JIG * v);
  return J->JGG * v - J->JGI * t;
}

Mat SchurBlocks::dense_S() const {
  const int n = J->n_interface;
  if (n > kDenseInterfaceLimit)
    throw std::runtime_error("dense_S: interface too large to materialize (" +
                             std::to_string(n) + ")");
  Mat S(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    S.col(j) = apply_S(e);
    e[j] = 0.0;
  }
  return S;
}

Mat dense_elastic_schur(const GridMesh& mesh, const Partition& part, const SpMat& A) {
  const int n_gamma = part.n_gamma();
  if (n_gamma > kDenseInterfaceLimit)
    throw std::runtime_error("dense_elastic_schur: interface too large (" +
                             std::to_string(n_gamma) + " DOFs)");
  const int g = part.gamma_count();

  // Component-blocked interface index, interior DOFs numbered consecutively.
  const int n_u = mesh.dof_count();
  std::vector<int> ifc(n_u, -1), intr(n_u, -1);
  for (int node = 0; node < mesh.node_count; ++node) {
    const int r = part.gamma_rank[node];
    if (r >= 0) {
      ifc[2 * node] = r;
      ifc[2 * node + 1] = r + g;
    }
  }
  int n_int = 0;
  for (int dof = 0; dof < n_u; ++dof)
    if (ifc[dof] < 0) intr[dof] = n_int++;

  std::vector<Triplet> tII, tIG, tGI;
  Mat AGG = Mat::Zero(n_gamma, n_gamma);
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      if (ifc[r] < 0 && ifc[c] < 0)
        tII.emplace_back(intr[r], intr[c], it.value());
      else if (ifc[r] < 0)
        tIG.emplace_back(intr[r], ifc[c], it.value());
      else if (ifc[c] < 0)
        tGI.emplace_back(ifc[r], intr[c], it.value());
      else
        AGG(ifc[r], ifc[c]) += it.value();
    }
  }
  SpMat AII(n_int, n_int), AIG(n_int, n_gamma), AGI(n_gamma, n_int);
  AII.setFromTriplets(tII.begin(), tII.end());
  AIG.setFromTriplets(tIG.begin(), tIG.end());
  AGI.setFromTriplets(tGI.begin(), tGI.end());

  Eigen::SimplicialLDLT<SpMat> chol(AII);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error("dense_elastic_schur: interior elasticity factorization failed");
  const Mat X = chol.solve(Mat(AIG));
  Mat S = AGG - Mat(AGI) * X;
  return 0.5 * (S + S.transpose());
}

Vec apply_P_inverse(const BlockJacobian& J, const SubdomainFactorizations& F,
                    const std::function<Vec(const Vec&)>& stilde_inverse, const Vec& v) {
  Vec out(J.size());
  const Vec xB = stilde_inverse(v.tail(J.n_interface));
  const Vec t = v.head(J.n_interior) - J.JIG * xB;
  out.head(J.n_interior) = apply_interior_inverse(J, F, t);
  out.tail(J.n_interface) = xB;
  return out;
}

} // namespace ddtopo
