#include "hbsdr/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hbsdr {

void CellSet::set_box(int i0, int i1, int j0, int j1, bool v) {
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i) set(i, j, v);
}

int CellSet::count() const {
  int c = 0;
  for (auto m : mask_) c += m;
  return c;
}

bool CellSet::any_outside_box(int i0, int i1, int j0, int j1) const {
  for (int j = 0; j < n2_; ++j)
    for (int i = 0; i < n1_; ++i)
      if (get(i, j) && (i < i0 || i >= i1 || j < j0 || j >= j1)) return true;
  return false;
}

bool CellSet::contains(const CellSet& other) const {
  if (n1_ != other.n1_ || n2_ != other.n2_)
    throw std::invalid_argument("CellSet::contains: grid mismatch");
  for (size_t i = 0; i < mask_.size(); ++i)
    if (other.mask_[i] && !mask_[i]) return false;
  return true;
}

CellSet CellSet::complement() const {
  CellSet c(n1_, n2_);
  for (size_t i = 0; i < mask_.size(); ++i) c.mask_[i] = mask_[i] ? 0 : 1;
  return c;
}

CellSet CellSet::intersect(const CellSet& other) const {
  if (n1_ != other.n1_ || n2_ != other.n2_)
    throw std::invalid_argument("CellSet::intersect: grid mismatch");
  CellSet c(n1_, n2_);
  for (size_t i = 0; i < mask_.size(); ++i) c.mask_[i] = (mask_[i] && other.mask_[i]) ? 1 : 0;
  return c;
}

CellSet CellSet::unite(const CellSet& other) const {
  if (n1_ != other.n1_ || n2_ != other.n2_)
    throw std::invalid_argument("CellSet::unite: grid mismatch");
  CellSet c(n1_, n2_);
  for (size_t i = 0; i < mask_.size(); ++i) c.mask_[i] = (mask_[i] || other.mask_[i]) ? 1 : 0;
  return c;
}

bool CellSet::intersects_rect(int i0, int i1, int j0, int j1) const {
  for (int j = std::max(0, j0); j < std::min(n2_, j1); ++j)
    for (int i = std::max(0, i0); i < std::min(n1_, i1); ++i)
      if (get(i, j)) return true;
  return false;
}

bool CellSet::contains_rect(int i0, int i1, int j0, int j1) const {
  if (i0 < 0 || j0 < 0 || i1 > n1_ || j1 > n2_) return false;
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i)
      if (!get(i, j)) return false;
  return true;
}

CellSet CellSet::refined() const {
  CellSet c(2 * n1_, 2 * n2_);
  for (int j = 0; j < n2_; ++j)
    for (int i = 0; i < n1_; ++i)
      if (get(i, j)) c.set_box(2 * i, 2 * i + 2, 2 * j, 2 * j + 2);
  return c;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

GridTopology analyze(const CellSet& cells) {
  const int n1 = cells.n1(), n2 = cells.n2();
  GridTopology t;
  UnionFind uf(n1 * n2);
  auto cid = [n1](int i, int j) { return j * n1 + i; };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (!cells.get(i, j)) continue;
      if (i + 1 < n1 && cells.get(i + 1, j)) uf.unite(cid(i, j), cid(i + 1, j));
      if (j + 1 < n2 && cells.get(i, j + 1)) uf.unite(cid(i, j), cid(i, j + 1));
    }

  // collect component labels
  std::vector<int> label(n1 * n2, -1);
  std::vector<int> roots;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (!cells.get(i, j)) continue;
      int r = uf.find(cid(i, j));
      auto it = std::find(roots.begin(), roots.end(), r);
      if (it == roots.end()) {
        roots.push_back(r);
        label[cid(i, j)] = static_cast<int>(roots.size()) - 1;
      } else {
        label[cid(i, j)] = static_cast<int>(it - roots.begin());
      }
    }
  t.components = static_cast<int>(roots.size());

  // per-component Euler characteristic: entities shared between two components
  // (pinched corners) are counted once in each component
  std::vector<std::set<int>> verts(t.components), edges(t.components);
  std::vector<int> faces(t.components, 0);
  auto vid = [n1](int i, int j) { return j * (n1 + 1) + i; };
  const int nxe = n1 * (n2 + 1);
  auto xedge = [n1](int i, int j) { return j * n1 + i; };
  auto yedge = [n1, nxe](int i, int j) { return nxe + j * (n1 + 1) + i; };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (!cells.get(i, j)) continue;
      int c = label[cid(i, j)];
      ++faces[c];
      verts[c].insert(vid(i, j));
      verts[c].insert(vid(i + 1, j));
      verts[c].insert(vid(i, j + 1));
      verts[c].insert(vid(i + 1, j + 1));
      edges[c].insert(xedge(i, j));
      edges[c].insert(xedge(i, j + 1));
      edges[c].insert(yedge(i, j));
      edges[c].insert(yedge(i + 1, j));
    }
  for (int c = 0; c < t.components; ++c) {
    int chi = static_cast<int>(verts[c].size()) - static_cast<int>(edges[c].size()) + faces[c];
    t.euler += chi;
    t.holes += 1 - chi;
  }

  // pinched corner: two cells diagonal at a vertex, the other two absent
  for (int j = 0; j + 1 < n2 && t.manifold; ++j)
    for (int i = 0; i + 1 < n1; ++i) {
      bool sw = cells.get(i, j), se = cells.get(i + 1, j);
      bool nw = cells.get(i, j + 1), ne = cells.get(i + 1, j + 1);
      if ((sw && ne && !se && !nw) || (se && nw && !sw && !ne)) {
        t.manifold = false;
        break;
      }
    }
  return t;
}

CellComplex cellset_complex(const CellSet& cells) {
  const int n1 = cells.n1(), n2 = cells.n2();
  auto vid = [n1](int i, int j) { return j * (n1 + 1) + i; };
  const int nxe = n1 * (n2 + 1);
  auto xedge = [n1](int i, int j) { return j * n1 + i; };
  auto yedge = [n1, nxe](int i, int j) { return nxe + j * (n1 + 1) + i; };
  auto cell_at = [&](int i, int j) {
    return i >= 0 && i < n1 && j >= 0 && j < n2 && cells.get(i, j);
  };

  CellComplex cx;
  // interior vertex: all 4 incident cells present; interior edge: both sides present
  std::vector<int> vmap(static_cast<size_t>(n1 + 1) * (n2 + 1), -1);
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i <= n1; ++i)
      if (cell_at(i - 1, j - 1) && cell_at(i, j - 1) && cell_at(i - 1, j) && cell_at(i, j)) {
        vmap[vid(i, j)] = static_cast<int>(cx.interior_vertices.size());
        cx.interior_vertices.push_back(vid(i, j));
      }
  std::vector<int> emap(static_cast<size_t>(nxe) + static_cast<size_t>(n1 + 1) * n2, -1);
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i < n1; ++i)
      if (cell_at(i, j - 1) && cell_at(i, j)) {
        emap[xedge(i, j)] = static_cast<int>(cx.interior_edges.size());
        cx.interior_edges.push_back(xedge(i, j));
      }
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i <= n1; ++i)
      if (cell_at(i - 1, j) && cell_at(i, j)) {
        emap[yedge(i, j)] = static_cast<int>(cx.interior_edges.size());
        cx.interior_edges.push_back(yedge(i, j));
      }
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i)
      if (cells.get(i, j)) cx.cells.push_back(j * n1 + i);

  cx.d0 = RationalSparse(static_cast<int>(cx.interior_edges.size()),
                         static_cast<int>(cx.interior_vertices.size()));
  auto add_d0 = [&](int eid, int v_tail, int v_head) {
    if (emap[eid] < 0) return;
    if (vmap[v_tail] >= 0) cx.d0.add(emap[eid], vmap[v_tail], Rational(-1));
    if (vmap[v_head] >= 0) cx.d0.add(emap[eid], vmap[v_head], Rational(1));
  };
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i < n1; ++i) add_d0(xedge(i, j), vid(i, j), vid(i + 1, j));
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i <= n1; ++i) add_d0(yedge(i, j), vid(i, j), vid(i, j + 1));
  cx.d0.finalize();

  cx.d1 = RationalSparse(static_cast<int>(cx.cells.size()), static_cast<int>(cx.interior_edges.size()));
  int row = 0;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (!cells.get(i, j)) continue;
      // counterclockwise: +bottom, +right, -top, -left
      if (emap[xedge(i, j)] >= 0) cx.d1.add(row, emap[xedge(i, j)], Rational(1));
      if (emap[yedge(i + 1, j)] >= 0) cx.d1.add(row, emap[yedge(i + 1, j)], Rational(1));
      if (emap[xedge(i, j + 1)] >= 0) cx.d1.add(row, emap[xedge(i, j + 1)], Rational(-1));
      if (emap[yedge(i, j)] >= 0) cx.d1.add(row, emap[yedge(i, j)], Rational(-1));
      ++row;
    }
  cx.d1.finalize();
  return cx;
}

CohomologyDims cohomology_dims(const RationalSparse& d0, const RationalSparse& d1,
                               std::uint64_t seed) {
  if (d0.cols() > 0 && d1.cols() > 0 && d0.rows() != d1.cols())
    throw std::invalid_argument("cohomology_dims: shape mismatch");
  if (!d1.multiply(d0).is_zero()) throw std::invalid_argument("cohomology_dims: D1*D0 != 0");
  int r0 = rational_rank(d0, seed);
  int r1 = rational_rank(d1, seed + 1);
  CohomologyDims h;
  h.h0 = d0.cols() - r0;
  h.h1 = d0.rows() - r1 - r0;  // dim ker D1 - rank D0
  h.h2 = d1.rows() - r1;
  return h;
}

std::vector<std::vector<Rational>> h1_generators(const CellSet& cells) {
  GridTopology t = analyze(cells);
  if (!t.manifold) throw std::invalid_argument("h1_generators: non-manifold cell set");
  CellComplex cx = cellset_complex(cells);
  const int n1 = cells.n1(), n2 = cells.n2();
  auto vid = [n1](int i, int j) { return j * (n1 + 1) + i; };
  const int nxe = n1 * (n2 + 1);
  auto cell_at = [&](int i, int j) {
    return i >= 0 && i < n1 && j >= 0 && j < n2 && cells.get(i, j);
  };

  // boundary edges: exactly one incident cell; group their vertices into circles
  std::vector<std::pair<int, int>> bedges;  // (tail vid, head vid)
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i < n1; ++i)
      if (cell_at(i, j - 1) != cell_at(i, j)) bedges.emplace_back(vid(i, j), vid(i + 1, j));
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i <= n1; ++i)
      if (cell_at(i - 1, j) != cell_at(i, j)) bedges.emplace_back(vid(i, j), vid(i, j + 1));

  UnionFind uf(static_cast<int>(static_cast<size_t>(n1 + 1) * (n2 + 1)));
  for (auto [a, b] : bedges) uf.unite(a, b);

  std::vector<int> circle_root;
  std::vector<char> on_boundary(static_cast<size_t>(n1 + 1) * (n2 + 1), 0);
  for (auto [a, b] : bedges) {
    on_boundary[a] = on_boundary[b] = 1;
  }
  for (int v = 0; v < static_cast<int>(on_boundary.size()); ++v)
    if (on_boundary[v]) {
      int r = uf.find(v);
      if (std::find(circle_root.begin(), circle_root.end(), r) == circle_root.end())
        circle_root.push_back(r);
    }

  // outer circles: those reachable from the outside; equivalently, a circle is a
  // hole boundary iff the region lies *outside* it.  Find each complement
  // component of the grid not touching the frame; its boundary circle is a hole.
  // Simpler: a circle is "outer" for its cell component iff it contains that
  // component's lexicographically smallest boundary vertex.
  std::vector<int> comp_of_vertex(static_cast<size_t>(n1 + 1) * (n2 + 1), -1);
  {
    // label cells
    UnionFind cu(n1 * n2);
    auto cid = [n1](int i, int j) { return j * n1 + i; };
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        if (!cells.get(i, j)) continue;
        if (i + 1 < n1 && cells.get(i + 1, j)) cu.unite(cid(i, j), cid(i + 1, j));
        if (j + 1 < n2 && cells.get(i, j + 1)) cu.unite(cid(i, j), cid(i, j + 1));
      }
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        if (!cells.get(i, j)) continue;
        int r = cu.find(cid(i, j));
        for (int dj = 0; dj <= 1; ++dj)
          for (int di = 0; di <= 1; ++di) {
            int v = vid(i + di, j + dj);
            if (on_boundary[v]) comp_of_vertex[v] = r;
          }
      }
  }
  std::vector<int> outer_of_comp;  // circle roots that are outer boundaries
  {
    std::vector<int> comps;
    for (int v = 0; v < static_cast<int>(comp_of_vertex.size()); ++v) {
      int c = comp_of_vertex[v];
      if (c < 0) continue;
      if (std::find(comps.begin(), comps.end(), c) == comps.end()) {
        comps.push_back(c);
        outer_of_comp.push_back(uf.find(v));  // smallest boundary vertex of this component
      }
    }
  }

  std::vector<std::vector<Rational>> gens;
  for (int root : circle_root) {
    if (std::find(outer_of_comp.begin(), outer_of_comp.end(), root) != outer_of_comp.end())
      continue;  // outer boundary, not a hole
    // indicator of this circle's vertices, differentiated onto interior edges
    std::vector<Rational> g(cx.interior_edges.size(), Rational(0));
    auto ind = [&](int v) { return on_boundary[v] && uf.find(v) == root ? 1 : 0; };
    for (size_t e = 0; e < cx.interior_edges.size(); ++e) {
      int id = cx.interior_edges[e];
      int tail, head;
      if (id < nxe) {
        int i = id % n1, j = id / n1;
        tail = vid(i, j);
        head = vid(i + 1, j);
      } else {
        int k = id - nxe;
        int i = k % (n1 + 1), j = k / (n1 + 1);
        tail = vid(i, j);
        head = vid(i, j + 1);
      }
      int d = ind(head) - ind(tail);
      if (d != 0) g[e] = Rational(d);
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace hbsdr
