#pragma once

#include <array>
#include <vector>

#include "ddtopo/types.hpp"

namespace ddtopo {

/// Structured quadrilateral mesh of the cantilever design domain [0,2]x[0,1].
/// The left edge (x=0) is clamped; a unit point load acts at the middle of
/// the right edge, which requires ny to be even.
struct GridMesh {
  int ny = 0;          // elements in the vertical direction
  int nx = 0;          // elements in the horizontal direction, nx = 2*ny
  double h = 0.0;      // element size, h = 1/ny
  int node_count = 0;  // (nx+1)*(ny+1)
  int element_count = 0;  // nx*ny
  std::vector<int> dirichlet_nodes;   // all nodes with x = 0
  std::vector<char> dirichlet_mask;   // node -> clamped?
  int load_node = -1;                 // node at (2, 1/2)

  int node_id(int ix, int iy) const { return ix * (ny + 1) + iy; }
  int elem_id(int ex, int ey) const { return ex * ny + ey; }
  int elem_x(int e) const { return e / ny; }
  int elem_y(int e) const { return e % ny; }

  // Corner nodes counterclockwise from the lower-left corner.
  std::array<int, 4> element_nodes(int e) const {
    const int ex = elem_x(e), ey = elem_y(e);
    return {node_id(ex, ey), node_id(ex + 1, ey), node_id(ex + 1, ey + 1),
            node_id(ex, ey + 1)};
  }
  std::array<int, 8> element_dofs(int e) const {
    const auto n = element_nodes(e);
    return {2 * n[0], 2 * n[0] + 1, 2 * n[1], 2 * n[1] + 1,
            2 * n[2], 2 * n[2] + 1, 2 * n[3], 2 * n[3] + 1};
  }
  int dof_count() const { return 2 * node_count; }
  bool dof_is_dirichlet(int dof) const { return dirichlet_mask[dof / 2] != 0; }
};

/// Regular decomposition into p x p rectangular subdomains.
///
/// Interface nodes are the mesh nodes lying on an internal subdomain
/// boundary line. The ones on the clamped edge are kept in gamma_dirichlet
/// and never enter the interface unknowns.
struct Partition {
  int p = 1;
  int N = 1;  // p*p
  std::vector<std::vector<int>> tau;  // element indices per subdomain
  std::vector<std::vector<int>> nu;   // non-interface, non-clamped nodes per subdomain
  std::vector<std::vector<int>> dirichlet_in;  // clamped nodes grouped with a subdomain
  std::vector<int> gamma_nodes;       // interface nodes, ascending
  std::vector<int> gamma_dirichlet;   // interface-line nodes on the clamped edge
  std::vector<int> gamma_rank;        // node -> index into gamma_nodes, or -1
  std::vector<int> subdomain_of_element;  // element -> subdomain

  int m_k(int k) const { return static_cast<int>(tau[k].size()); }
  int gamma_count() const { return static_cast<int>(gamma_nodes.size()); }
  int n_gamma() const { return 2 * gamma_count(); }
};

/// Composition of the Newton unknown y = (u, lambda_1..N, rho, phi, psi,
/// mu_1..N, lambda_0) in its natural block order.
struct UnknownLayout {
  int n_u = 0;
  int m = 0;
  int N = 0;
  int lam_off = 0;
  int rho_off = 0;
  int phi_off = 0;
  int psi_off = 0;
  int mu_off = 0;
  int lam0_off = 0;
  int n = 0;

  static UnknownLayout create(const GridMesh& mesh, const Partition& part) {
    UnknownLayout l;
    l.n_u = mesh.dof_count();
    l.m = mesh.element_count;
    l.N = part.N;
    l.lam_off = l.n_u;
    l.rho_off = l.lam_off + l.N;
    l.phi_off = l.rho_off + l.m;
    l.psi_off = l.phi_off + l.m;
    l.mu_off = l.psi_off + l.m;
    l.lam0_off = l.mu_off + l.N;
    l.n = l.lam0_off + 1;
    return l;
  }
};

/// Permutation from the natural unknown order to
///   [per-subdomain interior groups (u, lambda_k, rho, phi, psi)] followed by
///   [u on Gamma (x components, then y components), mu_1..N, lambda_0].
struct DofOrdering {
  int n = 0;
  int n_interior = 0;
  int n_interface = 0;  // n_gamma + N + 1
  int n_gamma = 0;
  std::vector<int> new_of_old;
  std::vector<int> old_of_new;
  std::vector<int> interior_offset;  // per subdomain, into the permuted vector
  std::vector<int> interior_size;
  // natural index -> owning interior block (or -1 for interface) and local index
  std::vector<int> block_of;
  std::vector<int> local_of;

  Vec permute(const Vec& natural) const {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[new_of_old[i]] = natural[i];
    return out;
  }
  Vec unpermute(const Vec& permuted) const {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = permuted[new_of_old[i]];
    return out;
  }
};

GridMesh build_mesh(int ny);
Partition build_partition(const GridMesh& mesh, int p);
DofOrdering build_permutation(const GridMesh& mesh, const Partition& part);

/// Closed form for the interface DOF count of a p x p split of an
/// (nx=2*ny) x ny grid, clamped DOFs excluded.
int interface_dof_count(int ny, int p);

/// 2*node_count + 3*m + 2*N + 1.
long total_unknown_count(int ny, int N);

} // namespace ddtopo
