#include "ddtopo/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddtopo {

ElementStiffness element_stiffness(double E, double nu, double h) {
  if (E <= 0.0 || nu < 0.0 || nu >= 0.5)
    throw std::invalid_argument("element_stiffness: need E > 0 and 0 <= nu < 0.5");

  Eigen::Matrix3d D;
  D << 1.0, nu, 0.0,
       nu, 1.0, 0.0,
       0.0, 0.0, (1.0 - nu) / 2.0;
  D *= E / (1.0 - nu * nu);

  ElementStiffness elem;
  elem.E = E;
  elem.nu = nu;
  elem.h = h;
  elem.Ke = Mat::Zero(8, 8);

  const double g = 1.0 / std::sqrt(3.0);  // 2x2 Gauss points on [-1,1]^2
  const double xi_node[4] = {-1.0, 1.0, 1.0, -1.0};
  const double eta_node[4] = {-1.0, -1.0, 1.0, 1.0};
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        // dN/dx = (2/h) dN/dxi on a square of size h
        const double dNdx = 0.25 * xi_node[a] * (1.0 + eta_node[a] * eta) * 2.0 / h;
        const double dNdy = 0.25 * eta_node[a] * (1.0 + xi_node[a] * xi) * 2.0 / h;
        B(0, 2 * a) = dNdx;
        B(1, 2 * a + 1) = dNdy;
        B(2, 2 * a) = dNdy;
        B(2, 2 * a + 1) = dNdx;
      }
      elem.Ke += (h * h / 4.0) * B.transpose() * D * B;
    }
  }
  elem.Ke = 0.5 * (elem.Ke + elem.Ke.transpose());
  return elem;
}

SpMat assemble_stiffness(const GridMesh& mesh, const ElementStiffness& elem, const Vec& rho) {
  if (rho.size() != mesh.element_count)
    throw std::invalid_argument("assemble_stiffness: density size mismatch");
  if ((rho.array() <= 0.0).any())
    throw std::invalid_argument("assemble_stiffness: densities must be positive");

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.element_count) * 64 + mesh.dirichlet_nodes.size() * 2);
  for (int e = 0; e < mesh.element_count; ++e) {
    const auto dofs = mesh.element_dofs(e);
    for (int a = 0; a < 8; ++a) {
      if (mesh.dof_is_dirichlet(dofs[a])) continue;
      for (int b = 0; b < 8; ++b) {
        if (mesh.dof_is_dirichlet(dofs[b])) continue;
        trips.emplace_back(dofs[a], dofs[b], rho[e] * elem.Ke(a, b));
      }
    }
  }
  for (int node : mesh.dirichlet_nodes) {
    trips.emplace_back(2 * node, 2 * node, 1.0);
    trips.emplace_back(2 * node + 1, 2 * node + 1, 1.0);
  }
  SpMat A(mesh.dof_count(), mesh.dof_count());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SpMat assemble_B(const GridMesh& mesh, const ElementStiffness& elem, const Vec& u) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.element_count) * 8);
  for (int e = 0; e < mesh.element_count; ++e) {
    const auto dofs = mesh.element_dofs(e);
    Eigen::Matrix<double, 8, 1> ue;
    for (int a = 0; a < 8; ++a)
      ue[a] = mesh.dof_is_dirichlet(dofs[a]) ? 0.0 : u[dofs[a]];
    const Eigen::Matrix<double, 8, 1> col = elem.Ke * ue;
    for (int a = 0; a < 8; ++a) {
      if (mesh.dof_is_dirichlet(dofs[a])) continue;
      trips.emplace_back(dofs[a], e, col[a]);
    }
  }
  SpMat B(mesh.dof_count(), mesh.element_count);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

LoadVector assemble_load(const GridMesh& mesh) {
  LoadVector load;
  load.f = Vec::Zero(mesh.dof_count());
  load.f[2 * mesh.load_node + 1] = -1.0;
  load.q = Vec::Constant(mesh.element_count, mesh.h * mesh.h);
  return load;
}

InterfacePencil assemble_pencil_segments(int n_nodes,
                                         const std::vector<std::pair<int, int>>& segments,
                                         double h) {
  std::vector<Triplet> lt, mt;
  lt.reserve(segments.size() * 4);
  mt.reserve(segments.size() * 4);
  const double me[2][2] = {{2.0 * h / 6.0, h / 6.0}, {h / 6.0, 2.0 * h / 6.0}};
  const double le[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
  for (const auto& [i, j] : segments) {
    const int idx[2] = {i, j};
    for (int a = 0; a < 2; ++a) {
      if (idx[a] < 0) continue;
      for (int b = 0; b < 2; ++b) {
        if (idx[b] < 0) continue;
        lt.emplace_back(idx[a], idx[b], le[a][b]);
        mt.emplace_back(idx[a], idx[b], me[a][b]);
      }
    }
  }
  InterfacePencil pencil;
  pencil.L.resize(n_nodes, n_nodes);
  pencil.M.resize(n_nodes, n_nodes);
  pencil.L.setFromTriplets(lt.begin(), lt.end());
  pencil.M.setFromTriplets(mt.begin(), mt.end());
  return pencil;
}

InterfacePencil assemble_interface_pencil(const GridMesh& mesh, const Partition& part) {
  if (part.gamma_nodes.empty())
    throw std::invalid_argument("assemble_interface_pencil: partition has no interface (N=1)");

  const int wx = mesh.nx / part.p;
  const int wy = mesh.ny / part.p;
  // Rank of an interface node, -1 for eliminated (clamped) line nodes.
  auto rank = [&](int ix, int iy) { return part.gamma_rank[mesh.node_id(ix, iy)]; };

  std::vector<std::pair<int, int>> segments;
  for (int j = 1; j < part.p; ++j) {
    const int ix = j * wx;
    for (int iy = 0; iy < mesh.ny; ++iy)
      segments.emplace_back(rank(ix, iy), rank(ix, iy + 1));
  }
  for (int j = 1; j < part.p; ++j) {
    const int iy = j * wy;
    for (int ix = 0; ix < mesh.nx; ++ix)
      segments.emplace_back(rank(ix, iy), rank(ix + 1, iy));
  }

  InterfacePencil pencil = assemble_pencil_segments(part.gamma_count(), segments, mesh.h);
  if (part.gamma_dirichlet.empty()) {
    // No eliminated nodes: the Laplacian has the constant in its kernel,
    // shift by the mass matrix to restore definiteness.
    pencil.L = pencil.L + pencil.M;
  }
  return pencil;
}

} // namespace ddtopo
