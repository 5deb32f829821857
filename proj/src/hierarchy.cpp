#include "hbsdr/hierarchy.hpp"

#include <stdexcept>

namespace hbsdr {

CellSet LevelLadder::omega_at(int l, int res) const {
  const int N1 = base_elements[0] << res, N2 = base_elements[1] << res;
  if (l <= 0) {
    CellSet full(N1, N2);
    full.set_box(0, N1, 0, N2);
    return full;
  }
  if (l >= num_levels()) return CellSet(N1, N2);  // trailing empty subdomain
  if (res < l - 1) throw std::invalid_argument("omega_at: resolution coarser than storage");
  CellSet s = refine_mask[l - 1];
  for (int r = l - 1; r < res; ++r) s = s.refined();
  return s;
}

LevelLadder make_ladder(std::array<int, 2> degree, std::array<int, 2> base_elements,
                        Conforming conf, bool zero_boundary,
                        std::vector<CellSet> refine_masks) {
  LevelLadder lad;
  lad.degree = degree;
  lad.base_elements = base_elements;
  lad.conf = conf;
  lad.zero_boundary = zero_boundary;
  lad.refine_mask = std::move(refine_masks);
  const int levels = static_cast<int>(lad.refine_mask.size()) + 1;
  for (int l = 0; l < levels; ++l) {
    lad.level.push_back(make_complex_level(
        degree, {base_elements[0] << l, base_elements[1] << l}, conf, zero_boundary));
    if (l < static_cast<int>(lad.refine_mask.size())) {
      const CellSet& m = lad.refine_mask[l];
      if (m.n1() != base_elements[0] << l || m.n2() != base_elements[1] << l)
        throw std::invalid_argument("make_ladder: refinement mask has wrong grid size");
    }
  }
  for (size_t l = 1; l < lad.refine_mask.size(); ++l)
    if (!lad.refine_mask[l - 1].refined().contains(lad.refine_mask[l]))
      throw std::invalid_argument("make_ladder: subdomains not nested");
  return lad;
}

namespace {

// Support of a tensor function as a half-open element box at level resolution
// `res` (the function lives at level l, res >= l).
struct Box {
  int i0, i1, j0, j1;
};
Box support_box(const FormComponent& c, int i1, int i2, int scale_shift) {
  auto s1 = c.kv[0].support(i1);
  auto s2 = c.kv[1].support(i2);
  return {s1.lo << scale_shift, (s1.hi + 1) << scale_shift, s2.lo << scale_shift,
          (s2.hi + 1) << scale_shift};
}

}  // namespace

ActiveSets build_active_sets(const LevelLadder& ladder) {
  ActiveSets as;
  const int levels = ladder.num_levels();
  as.act.resize(levels);
  std::array<int, 3> offset{0, 0, 0};
  for (int l = 0; l < levels; ++l) {
    CellSet omega_l = ladder.omega_at(l, l);
    CellSet omega_next = ladder.omega_at(l + 1, l);
    for (int k = 0; k < 3; ++k) {
      const FormSpace& fs = ladder.level[l].x[k];
      for (size_t c = 0; c < fs.comps.size(); ++c) {
        const FormComponent& fc = fs.comps[c];
        ActiveSets::CompActive ca;
        ca.m1 = fc.kv[0].num_basis();
        ca.m2 = fc.kv[1].num_basis();
        ca.pos.assign(static_cast<size_t>(ca.m1) * ca.m2, -1);
        ca.offset = offset[k];
        for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
          for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1) {
            Box b = support_box(fc, i1, i2, 0);
            if (l > 0 && !omega_l.contains_rect(b.i0, b.i1, b.j0, b.j1)) continue;
            if (l + 1 < levels && omega_next.contains_rect(b.i0, b.i1, b.j0, b.j1)) continue;
            ca.pos[static_cast<size_t>(i2) * ca.m1 + i1] = static_cast<int>(ca.list.size());
            ca.list.push_back({i1, i2});
          }
        offset[k] += static_cast<int>(ca.list.size());
        as.act[l][k].push_back(std::move(ca));
      }
    }
  }
  as.dim = offset;
  return as;
}

std::vector<HierElement> build_hier_mesh(const LevelLadder& ladder) {
  std::vector<HierElement> mesh;
  for (int l = 0; l < ladder.num_levels(); ++l) {
    CellSet omega_l = ladder.omega_at(l, l);
    CellSet omega_next = ladder.omega_at(l + 1, l);
    for (int j = 0; j < omega_l.n2(); ++j)
      for (int i = 0; i < omega_l.n1(); ++i)
        if (omega_l.get(i, j) && !omega_next.get(i, j)) mesh.push_back({l, i, j});
  }
  return mesh;
}

GrevilleSubgrid greville_subgrid(const LevelLadder& ladder, int l, int lp) {
  if (l < 0 || lp < l || lp >= ladder.num_levels())
    throw std::invalid_argument("greville_subgrid: level pair out of range");
  const int res = std::max(l, lp - 1);
  const int shift = res - l;
  CellSet omega = ladder.omega_at(lp, res);

  const ComplexLevel& lv = ladder.level[l];
  auto mask_of = [&](const FormComponent& fc) {
    CellSet m(fc.kv[0].num_basis(), fc.kv[1].num_basis());
    for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
      for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1) {
        Box b = support_box(fc, i1, i2, shift);
        if (omega.contains_rect(b.i0, b.i1, b.j0, b.j1)) m.set(i1, i2);
      }
    return m;
  };

  GrevilleSubgrid g;
  g.vertices = mask_of(lv.x[0].comps[0]);
  g.cells = mask_of(lv.x[2].comps[0]);
  const FormComponent& a = lv.x[1].comps[0];
  const FormComponent& b = lv.x[1].comps[1];
  // the component with reduced degree in direction 1 sits on x-oriented edges
  if (!a.full[0]) {
    g.xedges = mask_of(a);
    g.yedges = mask_of(b);
  } else {
    g.xedges = mask_of(b);
    g.yedges = mask_of(a);
  }
  return g;
}

TwoScaleMatrix component_two_scale(const FormComponent& coarse, const FormComponent& fine,
                                   int dir) {
  if (coarse.full[dir] != fine.full[dir])
    throw std::invalid_argument("component_two_scale: mismatched direction types");
  TwoScaleMatrix t = two_scale_matrix(coarse.kv[dir], fine.kv[dir]);
  if (!coarse.full[dir]) {
    // both bases carry unit-integral normalization: rescale rows and columns
    std::vector<Rational> wc = curry_schoenberg_weights(coarse.kv[dir]);
    std::vector<Rational> wf = curry_schoenberg_weights(fine.kv[dir]);
    for (int i = 0; i < t.rows; ++i)
      for (size_t a = 0; a < t.row[i].w.size(); ++a) {
        int j = t.row[i].start + static_cast<int>(a);
        t.row[i].w[a] = t.row[i].w[a] * wc[i] / wf[j];
      }
  }
  return t;
}

RationalSparse hier_diff_matrix(const LevelLadder& ladder, const ActiveSets& active, int k) {
  if (k < 0 || k > 1) throw std::invalid_argument("hier_diff_matrix: k must be 0 or 1");
  const int levels = ladder.num_levels();
  RationalSparse out(active.dim[k + 1], active.dim[k]);

  // carry: level-l target-form coefficients (flat over the level's form space)
  // per global source column, represented sparsely
  RationalSparse carry(ladder.level[0].x[k + 1].dim(), active.dim[k]);

  for (int l = 0; l < levels; ++l) {
    const FormSpace& tgt = ladder.level[l].x[k + 1];

    // contributions of this level's active source functions
    RationalSparse inc =
        (k == 0) ? incidence_d0(ladder.level[l]) : incidence_d1(ladder.level[l]);
    RationalSparse inc_t = inc.transposed();
    std::vector<size_t> row_begin(inc_t.rows() + 1, 0);
    for (const auto& e : inc_t.entries()) ++row_begin[e.r + 1];
    for (int r = 0; r < inc_t.rows(); ++r) row_begin[r + 1] += row_begin[r];
    const FormSpace& src = ladder.level[l].x[k];
    for (size_t c = 0; c < src.comps.size(); ++c) {
      const ActiveSets::CompActive& ca = active.act[l][k][c];
      int col_off = src.comp_offset(static_cast<int>(c));
      for (const auto& ij : ca.list) {
        int g = active.global_index(k, l, static_cast<int>(c), ij[0], ij[1]);
        int level_col = col_off + src.comps[c].flat(ij[0], ij[1]);
        // column of the level incidence = row slice of its transpose
        for (size_t e = row_begin[level_col]; e < row_begin[level_col + 1]; ++e)
          carry.add(inc_t.entries()[e].c, g, inc_t.entries()[e].v);
      }
    }
    carry.finalize();

    // split rows into active (emit) and inactive (push to the next level)
    RationalSparse next(l + 1 < levels ? ladder.level[l + 1].x[k + 1].dim() : 0,
                        active.dim[k]);
    std::array<std::array<TwoScaleMatrix, 2>, 2> ts;  // [component][direction]
    if (l + 1 < levels)
      for (size_t c = 0; c < tgt.comps.size(); ++c)
        for (int d = 0; d < 2; ++d)
          ts[c][d] = component_two_scale(tgt.comps[c], ladder.level[l + 1].x[k + 1].comps[c], d);

    for (const auto& e : carry.entries()) {
      // decompose the level row into (component, i1, i2)
      int c = 0;
      int local = e.r;
      while (local >= tgt.comps[c].dim()) {
        local -= tgt.comps[c].dim();
        ++c;
      }
      const FormComponent& fc = tgt.comps[c];
      int i1 = fc.lo[0] + local % fc.width(0);
      int i2 = fc.lo[1] + local / fc.width(0);
      int g = active.global_index(k + 1, l, c, i1, i2);
      if (g >= 0) {
        out.add(g, e.c, e.v);
        continue;
      }
      if (l + 1 >= levels)
        throw std::logic_error("hier_diff_matrix: inactive function at the finest level");
      const FormComponent& ff = ladder.level[l + 1].x[k + 1].comps[c];
      int row_off = ladder.level[l + 1].x[k + 1].comp_offset(c);
      const TwoScaleMatrix& t1 = ts[c][0];
      const TwoScaleMatrix& t2 = ts[c][1];
      for (size_t a = 0; a < t1.row[i1].w.size(); ++a) {
        int j1 = t1.row[i1].start + static_cast<int>(a);
        if (t1.row[i1].w[a].is_zero()) continue;
        for (size_t bw = 0; bw < t2.row[i2].w.size(); ++bw) {
          int j2 = t2.row[i2].start + static_cast<int>(bw);
          if (t2.row[i2].w[bw].is_zero()) continue;
          if (j1 < ff.lo[0] || j1 >= ff.hi[0] || j2 < ff.lo[1] || j2 >= ff.hi[1])
            throw std::logic_error("hier_diff_matrix: refinement leaves the trace window");
          next.add(row_off + ff.flat(j1, j2), e.c, e.v * t1.row[i1].w[a] * t2.row[i2].w[bw]);
        }
      }
    }
    carry = std::move(next);
  }
  out.finalize();
  return out;
}

}  // namespace hbsdr
