#pragma once

#include <utility>
#include <vector>

#include "ddtopo/mesh.hpp"
#include "ddtopo/types.hpp"

namespace ddtopo {

/// 8x8 stiffness matrix of one square bilinear element, plane stress,
/// unit density, from 2x2 Gauss quadrature (exact for this integrand).
struct ElementStiffness {
  Mat Ke;  // 8x8, symmetric PSD with a 3-dimensional rigid-body nullspace
  double E = 1.0;
  double nu = 0.3;
  double h = 0.0;
};

ElementStiffness element_stiffness(double E, double nu, double h);

/// A(rho) = sum_i rho_i * A_i with clamped rows/columns replaced by unit
/// diagonal entries. SPD for strictly positive densities.
SpMat assemble_stiffness(const GridMesh& mesh, const ElementStiffness& elem, const Vec& rho);

/// B(u): column i holds A_i u restricted to free DOFs (clamped components of
/// u are masked so that B(u) rho = A(rho) u minus the clamped identity part).
SpMat assemble_B(const GridMesh& mesh, const ElementStiffness& elem, const Vec& u);

struct LoadVector {
  Vec f;  // single downward unit force at the load node
  Vec q;  // element areas, q_i = h^2
};

LoadVector assemble_load(const GridMesh& mesh);

/// 1D P1 mass and stiffness matrices on the interface skeleton, one copy per
/// displacement component. Clamped interface-line nodes are eliminated.
struct InterfacePencil {
  SpMat L;  // tangential Laplacian
  SpMat M;  // mass
};

InterfacePencil assemble_interface_pencil(const GridMesh& mesh, const Partition& part);

/// Segment-level assembler behind assemble_interface_pencil. Each segment is
/// a pair of node indices in [0, n_nodes), with -1 marking an eliminated end.
InterfacePencil assemble_pencil_segments(int n_nodes,
                                         const std::vector<std::pair<int, int>>& segments,
                                         double h);

} // namespace ddtopo
