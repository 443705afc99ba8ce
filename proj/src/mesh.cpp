#include "ddtopo/mesh.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ddtopo {

GridMesh build_mesh(int ny) {
  if (ny < 2 || ny % 2 != 0)
    throw std::invalid_argument("build_mesh: ny must be a positive even integer, got " +
                                std::to_string(ny));
  GridMesh mesh;
  mesh.ny = ny;
  mesh.nx = 2 * ny;
  mesh.h = 1.0 / ny;
  mesh.node_count = (mesh.nx + 1) * (ny + 1);
  mesh.element_count = mesh.nx * ny;
  mesh.dirichlet_mask.assign(mesh.node_count, 0);
  for (int iy = 0; iy <= ny; ++iy) {
    const int node = mesh.node_id(0, iy);
    mesh.dirichlet_nodes.push_back(node);
    mesh.dirichlet_mask[node] = 1;
  }
  mesh.load_node = mesh.node_id(mesh.nx, ny / 2);
  return mesh;
}

Partition build_partition(const GridMesh& mesh, int p) {
  if (p < 1 || mesh.ny % p != 0)
    throw std::invalid_argument("build_partition: p must divide ny, got p=" +
                                std::to_string(p) + ", ny=" + std::to_string(mesh.ny));
  const int wx = mesh.nx / p;  // elements per subdomain, horizontal
  const int wy = mesh.ny / p;

  Partition part;
  part.p = p;
  part.N = p * p;
  part.tau.resize(part.N);
  part.nu.resize(part.N);
  part.dirichlet_in.resize(part.N);
  part.gamma_rank.assign(mesh.node_count, -1);
  part.subdomain_of_element.assign(mesh.element_count, -1);

  for (int e = 0; e < mesh.element_count; ++e) {
    const int k = (mesh.elem_y(e) / wy) * p + (mesh.elem_x(e) / wx);
    part.tau[k].push_back(e);
    part.subdomain_of_element[e] = k;
  }

  auto on_interface_line = [&](int ix, int iy) {
    return (ix % wx == 0 && ix > 0 && ix < mesh.nx) ||
           (iy % wy == 0 && iy > 0 && iy < mesh.ny);
  };
  // Subdomain owning a non-interface node; outer-boundary nodes go with the
  // adjacent subdomain.
  auto owner = [&](int ix, int iy) {
    const int sx = (ix == mesh.nx) ? p - 1 : std::min(ix / wx, p - 1);
    const int sy = (iy == mesh.ny) ? p - 1 : std::min(iy / wy, p - 1);
    return sy * p + sx;
  };

  for (int ix = 0; ix <= mesh.nx; ++ix) {
    for (int iy = 0; iy <= mesh.ny; ++iy) {
      const int node = mesh.node_id(ix, iy);
      if (mesh.dirichlet_mask[node]) {
        if (on_interface_line(ix, iy))
          part.gamma_dirichlet.push_back(node);
        part.dirichlet_in[owner(ix, iy)].push_back(node);
      } else if (on_interface_line(ix, iy)) {
        part.gamma_nodes.push_back(node);
      } else {
        part.nu[owner(ix, iy)].push_back(node);
      }
    }
  }
  std::sort(part.gamma_nodes.begin(), part.gamma_nodes.end());
  std::sort(part.gamma_dirichlet.begin(), part.gamma_dirichlet.end());
  for (int k = 0; k < part.N; ++k) {
    std::sort(part.nu[k].begin(), part.nu[k].end());
    std::sort(part.dirichlet_in[k].begin(), part.dirichlet_in[k].end());
  }
  for (std::size_t r = 0; r < part.gamma_nodes.size(); ++r)
    part.gamma_rank[part.gamma_nodes[r]] = static_cast<int>(r);
  return part;
}

DofOrdering build_permutation(const GridMesh& mesh, const Partition& part) {
  const UnknownLayout layout = UnknownLayout::create(mesh, part);
  DofOrdering ord;
  ord.n = layout.n;
  ord.n_gamma = part.n_gamma();
  ord.n_interface = ord.n_gamma + layout.N + 1;
  ord.n_interior = ord.n - ord.n_interface;
  ord.new_of_old.assign(ord.n, -1);
  ord.old_of_new.assign(ord.n, -1);
  ord.block_of.assign(ord.n, -1);
  ord.local_of.assign(ord.n, -1);
  ord.interior_offset.resize(layout.N);
  ord.interior_size.resize(layout.N);

  int pos = 0;
  for (int k = 0; k < layout.N; ++k) {
    ord.interior_offset[k] = pos;
    const int start = pos;
    auto place = [&](int natural) {
      ord.new_of_old[natural] = pos;
      ord.block_of[natural] = k;
      ord.local_of[natural] = pos - start;
      ++pos;
    };
    std::vector<int> nodes = part.nu[k];
    nodes.insert(nodes.end(), part.dirichlet_in[k].begin(), part.dirichlet_in[k].end());
    std::sort(nodes.begin(), nodes.end());
    for (int node : nodes) {
      place(2 * node);
      place(2 * node + 1);
    }
    place(layout.lam_off + k);
    for (int e : part.tau[k]) place(layout.rho_off + e);
    for (int e : part.tau[k]) place(layout.phi_off + e);
    for (int e : part.tau[k]) place(layout.psi_off + e);
    ord.interior_size[k] = pos - start;
  }

  const int ifc = pos;
  auto place_ifc = [&](int natural) {
    ord.new_of_old[natural] = pos;
    ord.block_of[natural] = -1;
    ord.local_of[natural] = pos - ifc;
    ++pos;
  };
  // Interface displacements, component-blocked: x components of all gamma
  // nodes first, then y components, so H_theta(+)H_theta matches the layout.
  for (int node : part.gamma_nodes) place_ifc(2 * node);
  for (int node : part.gamma_nodes) place_ifc(2 * node + 1);
  for (int k = 0; k < layout.N; ++k) place_ifc(layout.mu_off + k);
  place_ifc(layout.lam0_off);

  for (int i = 0; i < ord.n; ++i) ord.old_of_new[ord.new_of_old[i]] = i;
  return ord;
}

int interface_dof_count(int ny, int p) {
  const int nx = 2 * ny;
  const int nodes = (p - 1) * (ny + 1) + (p - 1) * (nx + 1) - (p - 1) * (p - 1);
  return 2 * nodes - 2 * (p - 1);
}

long total_unknown_count(int ny, int N) {
  const long nx = 2L * ny;
  const long node_count = (nx + 1) * (ny + 1);
  const long m = nx * ny;
  return 2 * node_count + 3 * m + 2L * N + 1;
}

} // namespace ddtopo
