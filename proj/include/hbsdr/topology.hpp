#pragma once

#include <vector>

#include "hbsdr/sparse.hpp"

namespace hbsdr {

// Subset of cells of an n1 x n2 grid.
class CellSet {
 public:
  CellSet() = default;
  CellSet(int n1, int n2) : n1_(n1), n2_(n2), mask_(static_cast<size_t>(n1) * n2, 0) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  bool get(int i, int j) const { return mask_[static_cast<size_t>(j) * n1_ + i] != 0; }
  void set(int i, int j, bool v = true) { mask_[static_cast<size_t>(j) * n1_ + i] = v ? 1 : 0; }
  void set_box(int i0, int i1, int j0, int j1, bool v = true);  // half-open [i0,i1) x [j0,j1)

  int count() const;
  bool empty() const { return count() == 0; }
  bool any_outside_box(int i0, int i1, int j0, int j1) const;

  bool contains(const CellSet& other) const;      // other subset of this
  CellSet complement() const;                     // within the n1 x n2 grid
  CellSet intersect(const CellSet& other) const;
  CellSet unite(const CellSet& other) const;
  bool intersects_rect(int i0, int i1, int j0, int j1) const;
  bool contains_rect(int i0, int i1, int j0, int j1) const;

  // Same region described on the doubled grid (each cell split into 2x2).
  CellSet refined() const;

  bool operator==(const CellSet& other) const = default;

 private:
  int n1_ = 0, n2_ = 0;
  std::vector<std::uint8_t> mask_;
};

struct GridTopology {
  int components = 0;
  int holes = 0;       // summed per component
  int euler = 0;       // summed per-component V - E + F
  bool manifold = true;  // false when two cells meet only at a corner
};

// Connected components via edge adjacency; holes from per-component Euler
// characteristics (holes_c = 1 - chi_c); pinched corners flagged non-manifold.
GridTopology analyze(const CellSet& cells);

// Incidence complex of the cell set with zero trace on its whole boundary:
// D0 maps interior vertices to interior edges, D1 maps interior edges to cells.
// Entity numbering: vertices (i,j) -> j*(n1+1)+i; x-edges before y-edges;
// edges oriented toward increasing coordinate, cells counterclockwise.
struct CellComplex {
  RationalSparse d0;  // interior_edges x interior_vertices
  RationalSparse d1;  // cells_in_set  x interior_edges
  std::vector<int> interior_vertices;  // global vertex ids, ascending
  std::vector<int> interior_edges;     // global edge ids, ascending
  std::vector<int> cells;              // global cell ids, ascending
};
CellComplex cellset_complex(const CellSet& cells);

// Cohomology dimensions (h0, h1, h2) of a two-step complex D1 o D0 = 0,
// computed from ranks over Q (randomized modular, seeded).
struct CohomologyDims {
  int h0 = 0, h1 = 0, h2 = 0;
};
CohomologyDims cohomology_dims(const RationalSparse& d0, const RationalSparse& d1,
                               std::uint64_t seed = 12345);

// One closed, non-exact edge cochain per hole (gradient of the indicator of the
// hole's boundary circle), expressed on the interior edges of cellset_complex.
// Requires a manifold cell set.
std::vector<std::vector<Rational>> h1_generators(const CellSet& cells);

}  // namespace hbsdr
