#pragma once

#include <array>
#include <vector>

#include "hbsdr/formspace.hpp"
#include "hbsdr/topology.hpp"

namespace hbsdr {

// Nested sequence of dyadically refined levels over [0,1]^2, with shrinking
// refinement subdomains.  refine_mask[l] lives on the level-l element grid and
// defines the subdomain of level l+1; each subdomain must be contained in the
// previous one.
struct LevelLadder {
  std::array<int, 2> degree{};
  std::array<int, 2> base_elements{};
  Conforming conf = Conforming::curl;
  bool zero_boundary = false;
  std::vector<ComplexLevel> level;   // size num_levels()
  std::vector<CellSet> refine_mask;  // size num_levels() - 1

  int num_levels() const { return static_cast<int>(level.size()); }
  // Subdomain of level l on the level-`res` element grid (res >= l-1).
  // l == num_levels() gives the empty trailing subdomain.
  CellSet omega_at(int l, int res) const;
};

LevelLadder make_ladder(std::array<int, 2> degree, std::array<int, 2> base_elements,
                        Conforming conf, bool zero_boundary,
                        std::vector<CellSet> refine_masks);

// Active (kept) basis functions of the multi-level space, per form degree,
// level, and component.  A level-l function is active iff its support lies in
// the level-l subdomain but not in the level-(l+1) subdomain.
struct ActiveSets {
  struct CompActive {
    int m1 = 0, m2 = 0;               // full tensor index ranges of the component
    std::vector<int> pos;             // m1*m2 entries: local position or -1
    std::vector<std::array<int, 2>> list;  // active (i1, i2), first index fastest
    int offset = 0;                   // global offset of this block
    int local(int i1, int i2) const { return pos[static_cast<size_t>(i2) * m1 + i1]; }
  };
  // act[l][k][c]
  std::vector<std::array<std::vector<CompActive>, 3>> act;
  std::array<int, 3> dim{0, 0, 0};

  // Global index of a level-l component function; -1 when inactive.
  int global_index(int k, int l, int c, int i1, int i2) const {
    const CompActive& a = act[l][k][c];
    int loc = a.local(i1, i2);
    return loc < 0 ? -1 : a.offset + loc;
  }
};
ActiveSets build_active_sets(const LevelLadder& ladder);

// Elements of the multi-level mesh: level-l elements inside the level-l
// subdomain but outside the level-(l+1) subdomain.  They partition [0,1]^2.
struct HierElement {
  int level = 0, e1 = 0, e2 = 0;
};
std::vector<HierElement> build_hier_mesh(const LevelLadder& ladder);

// Mask of level-l functions whose support lies in the level-lp subdomain
// (l <= lp), for every entity of the level-l site grid.  Mask grids are sized
// by the full tensor ranges; only boundary-admissible functions are marked.
struct GrevilleSubgrid {
  CellSet vertices;  // m1 x m2           (0-form functions)
  CellSet xedges;    // (m1-1) x m2       (reduced degree in direction 1)
  CellSet yedges;    // m1 x (m2-1)       (reduced degree in direction 2)
  CellSet cells;     // (m1-1) x (m2-1)   (2-form functions)
};
GrevilleSubgrid greville_subgrid(const LevelLadder& ladder, int l, int lp);

// Differentiation matrix between the multi-level bases of form degrees k and
// k+1: level-wise coefficient differentiation, with contributions landing on
// inactive functions pushed down through two-scale refinement until every term
// is active.  Exact rational arithmetic throughout.
RationalSparse hier_diff_matrix(const LevelLadder& ladder, const ActiveSets& active, int k);

// Refinement matrix of one scalar factor between consecutive levels in one
// direction, with the unit-integral normalization of reduced-degree directions
// folded in.
TwoScaleMatrix component_two_scale(const FormComponent& coarse, const FormComponent& fine,
                                   int dir);

}  // namespace hbsdr
