#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseLU>

#include "ddtopo/assembly.hpp"
#include "ddtopo/mesh.hpp"
#include "ddtopo/types.hpp"

namespace ddtopo {

/// Newton matrix split by the interior/interface permutation. The interior
/// block is a direct sum of one sparse block per subdomain.
struct BlockJacobian {
  int N = 0;
  int n_interior = 0;
  int n_interface = 0;
  int n_gamma = 0;
  std::vector<int> interior_offset;
  std::vector<SpMat> JII;  // one block per subdomain
  SpMat JIG;               // stacked interior rows x interface columns
  SpMat JGI;
  SpMat JGG;

  int size() const { return n_interior + n_interface; }
  Vec apply(const Vec& v) const;
  Mat dense() const;
};

struct SubdomainFactorizations {
  std::vector<std::unique_ptr<Eigen::SparseLU<SpMat>>> lu;
};

SubdomainFactorizations factor_interior(const BlockJacobian& J);

/// Blockwise J_II^{-1} v, one independent solve per subdomain.
Vec apply_interior_inverse(const BlockJacobian& J, const SubdomainFactorizations& F, const Vec& v);

/// Interface Schur complement S = J_GG - J_GI J_II^{-1} J_IG in its bordered
/// 3x3 form. S12 and S22 are formed explicitly with one subdomain solve
/// each; S11 stays implicit.
struct SchurBlocks {
  const BlockJacobian* J = nullptr;
  const SubdomainFactorizations* F = nullptr;
  Mat S12;  // n_gamma x N
  Mat S22;  // N x N, diagonal for the direct-sum interior and negative definite

  Vec apply_S11(const Vec& v) const;
  Vec apply_S(const Vec& v) const;
  // Column-by-column materialization, guarded for desk-scale use.
  Mat dense_S() const;
};

SchurBlocks compute_schur_blocks(const BlockJacobian& J, const SubdomainFactorizations& F);

/// Elasticity-only interface Schur complement A_GG - A_GI A_II^{-1} A_IG at
/// the current density, dense on the interface displacement DOFs.
Mat dense_elastic_schur(const GridMesh& mesh, const Partition& part, const SpMat& A);

/// x = P^{-1} v for the block upper-triangular preconditioner
/// P = [J_II, J_IG; 0, S~]: interface solve, boundary-to-domain update,
/// then independent interior solves.
Vec apply_P_inverse(const BlockJacobian& J, const SubdomainFactorizations& F,
                    const std::function<Vec(const Vec&)>& stilde_inverse, const Vec& v);

/// Largest dense interface problem we are willing to materialize.
inline constexpr int kDenseInterfaceLimit = 4096;

} // namespace ddtopo
