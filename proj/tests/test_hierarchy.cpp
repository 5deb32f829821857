#include "doctest.h"
#include "hbsdr/hierarchy.hpp"
#include "oracles.hpp"

#include <set>
#include <tuple>

using hbsdr::CellSet;
using hbsdr::Conforming;
using hbsdr::LevelLadder;
using hbsdr::Rational;
using hbsdr::RationalSparse;

namespace {

CellSet box_mask(int n1, int n2, int i0, int i1, int j0, int j1) {
  CellSet s(n1, n2);
  s.set_box(i0, i1, j0, j1);
  return s;
}

LevelLadder two_block_ladder(Conforming conf, bool bc) {
  // 9x9 base, one refinement over two 4x4 blocks overlapping in a 2x2 square
  CellSet m(9, 9);
  m.set_box(2, 6, 2, 6);
  m.set_box(4, 8, 4, 8);
  return hbsdr::make_ladder({3, 3}, {9, 9}, conf, bc, {m});
}

using FnKey = std::tuple<int, int, int, int>;  // level, comp, i1, i2

// Direct implementation of the two-phase keep/add recursion over the levels.
std::set<FnKey> recursion_oracle(const LevelLadder& lad, int k) {
  std::set<FnKey> H;
  // supp tested against a region given on the level-`res` grid (res >= fl)
  auto supp_in = [&](int fl, int c, int i1, int i2, const CellSet& region, int res) {
    const auto& fc = lad.level[fl].x[k].comps[c];
    auto s1 = fc.kv[0].support(i1);
    auto s2 = fc.kv[1].support(i2);
    int sh = res - fl;
    return region.contains_rect(s1.lo << sh, (s1.hi + 1) << sh, s2.lo << sh,
                                (s2.hi + 1) << sh);
  };
  for (size_t c = 0; c < lad.level[0].x[k].comps.size(); ++c) {
    const auto& fc = lad.level[0].x[k].comps[c];
    for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
      for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1)
        H.insert({0, static_cast<int>(c), i1, i2});
  }
  for (int l = 0; l + 1 < lad.num_levels(); ++l) {
    CellSet omega_next = lad.omega_at(l + 1, l);        // on the level-l grid
    CellSet omega_next_f = lad.omega_at(l + 1, l + 1);  // on the level-(l+1) grid
    std::set<FnKey> keep;
    for (const auto& [fl, c, i1, i2] : H)
      if (!supp_in(fl, c, i1, i2, omega_next, l)) keep.insert({fl, c, i1, i2});
    for (size_t c = 0; c < lad.level[l + 1].x[k].comps.size(); ++c) {
      const auto& fc = lad.level[l + 1].x[k].comps[c];
      for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
        for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1)
          if (supp_in(l + 1, static_cast<int>(c), i1, i2, omega_next_f, l + 1))
            keep.insert({l + 1, static_cast<int>(c), i1, i2});
    }
    H = std::move(keep);
  }
  return H;
}

std::set<FnKey> active_as_set(const LevelLadder& lad, const hbsdr::ActiveSets& as, int k) {
  std::set<FnKey> s;
  for (int l = 0; l < lad.num_levels(); ++l)
    for (size_t c = 0; c < as.act[l][k].size(); ++c)
      for (const auto& ij : as.act[l][k][c].list)
        s.insert({l, static_cast<int>(c), ij[0], ij[1]});
  return s;
}

// kron(T2, T1) over the active windows of the components, rows = fine flat.
RationalSparse window_kron(const hbsdr::FormComponent& coarse, const hbsdr::FormComponent& fine) {
  auto t1 = hbsdr::component_two_scale(coarse, fine, 0);
  auto t2 = hbsdr::component_two_scale(coarse, fine, 1);
  RationalSparse m(fine.dim(), coarse.dim());
  for (int i2 = coarse.lo[1]; i2 < coarse.hi[1]; ++i2)
    for (int i1 = coarse.lo[0]; i1 < coarse.hi[0]; ++i1)
      for (int j1 = fine.lo[0]; j1 < fine.hi[0]; ++j1) {
        Rational a = t1.at(i1, j1);
        if (a.is_zero()) continue;
        for (int j2 = fine.lo[1]; j2 < fine.hi[1]; ++j2) {
          Rational b = t2.at(i2, j2);
          if (!b.is_zero()) m.add(fine.flat(j1, j2), coarse.flat(i1, i2), a * b);
        }
      }
  m.finalize();
  return m;
}

}  // namespace

TEST_CASE("ladder validation") {
  CHECK_THROWS(hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true,
                                  {box_mask(3, 4, 0, 2, 0, 2)}));  // wrong grid
  // non-nested second mask
  CHECK_THROWS(hbsdr::make_ladder(
      {2, 2}, {4, 4}, Conforming::curl, true,
      {box_mask(4, 4, 0, 2, 0, 2), box_mask(8, 8, 3, 6, 0, 2)}));
  auto ok = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true,
                               {box_mask(4, 4, 0, 2, 0, 2), box_mask(8, 8, 1, 4, 0, 3)});
  CHECK(ok.num_levels() == 3);
}

TEST_CASE("trivial subdomains give single-level spaces") {
  auto single = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true, {});
  auto single_as = hbsdr::build_active_sets(single);
  {
    auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true,
                                  {CellSet(4, 4)});  // empty refinement
    auto as = hbsdr::build_active_sets(lad);
    for (int k = 0; k < 3; ++k) CHECK(as.dim[k] == single_as.dim[k]);
    for (size_t c = 0; c < as.act[1][0].size(); ++c)
      CHECK(as.act[1][0][c].list.empty());
  }
  {
    CellSet full(4, 4);
    full.set_box(0, 4, 0, 4);
    auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true, {full});
    auto as = hbsdr::build_active_sets(lad);
    auto fine = hbsdr::make_ladder({2, 2}, {8, 8}, Conforming::curl, true, {});
    auto fine_as = hbsdr::build_active_sets(fine);
    for (int k = 0; k < 3; ++k) CHECK(as.dim[k] == fine_as.dim[k]);
    for (size_t c = 0; c < as.act[0][0].size(); ++c)
      CHECK(as.act[0][0][c].list.empty());
  }
}

TEST_CASE("half-domain refinement keeps the documented index pattern") {
  // left-half refinement; per transverse index the kept coarse functions are
  // {2..5} of 6 and the added fine functions are {0..3} of 10
  auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, false,
                                {box_mask(4, 4, 0, 2, 0, 4)});
  auto as = hbsdr::build_active_sets(lad);
  const auto& c0 = as.act[0][0][0];
  const auto& c1 = as.act[1][0][0];
  for (int i2 = 0; i2 < 6; ++i2)
    for (int i1 = 0; i1 < 6; ++i1)
      CHECK((c0.local(i1, i2) >= 0) == (i1 >= 2));
  for (int i2 = 0; i2 < 10; ++i2)
    for (int i1 = 0; i1 < 10; ++i1)
      CHECK((c1.local(i1, i2) >= 0) == (i1 <= 3));
  CHECK(as.dim[0] == 4 * 6 + 4 * 10);
}

TEST_CASE("active sets match the keep/add recursion") {
  std::vector<LevelLadder> cases;
  cases.push_back(two_block_ladder(Conforming::curl, true));
  cases.push_back(hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::div, false,
                                     {box_mask(4, 4, 1, 3, 1, 3)}));
  cases.push_back(hbsdr::make_ladder(
      {2, 3}, {4, 4}, Conforming::curl, true,
      {box_mask(4, 4, 0, 3, 0, 3), box_mask(8, 8, 1, 4, 1, 4)}));
  for (const auto& lad : cases) {
    auto as = hbsdr::build_active_sets(lad);
    for (int k = 0; k < 3; ++k) {
      auto direct = active_as_set(lad, as, k);
      auto rec = recursion_oracle(lad, k);
      CHECK(direct == rec);
    }
  }
}

TEST_CASE("two overlapping refined blocks: multi-level dimensions") {
  auto lad = two_block_ladder(Conforming::curl, true);
  auto as = hbsdr::build_active_sets(lad);
  CHECK(as.dim[0] == 147);
  CHECK(as.dim[1] == 328);
  CHECK(as.dim[2] == 181);
  CHECK(as.dim[0] - as.dim[1] + as.dim[2] == 0);  // one short of contractible
}

TEST_CASE("multi-level mesh partitions the domain") {
  auto check_partition = [](const LevelLadder& lad) {
    auto mesh = hbsdr::build_hier_mesh(lad);
    Rational area(0);
    for (const auto& q : mesh) {
      CellSet omega_l = lad.omega_at(q.level, q.level);
      CellSet omega_n = lad.omega_at(q.level + 1, q.level);
      CHECK(omega_l.get(q.e1, q.e2));
      CHECK(!omega_n.get(q.e1, q.e2));
      area += Rational(1, static_cast<std::int64_t>(lad.base_elements[0]) *
                              lad.base_elements[1] * (1LL << (2 * q.level)));
    }
    CHECK(area == Rational(1));
  };
  check_partition(two_block_ladder(Conforming::curl, true));
  {
    auto lad = hbsdr::make_ladder({2, 2}, {2, 2}, Conforming::curl, false,
                                  {box_mask(2, 2, 0, 1, 0, 1)});
    auto mesh = hbsdr::build_hier_mesh(lad);
    CHECK(mesh.size() == 7);  // 3 coarse + 4 fine
    check_partition(lad);
  }
}

TEST_CASE("site subgrid of the full subdomain is the whole interior") {
  auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true, {});
  auto g = hbsdr::greville_subgrid(lad, 0, 0);
  CHECK(g.cells.count() == 25);
  CHECK(g.vertices.count() == 16);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i)
      CHECK(g.vertices.get(i, j) == (i >= 1 && i <= 4 && j >= 1 && j <= 4));
  CHECK(g.xedges.count() == 20);
  CHECK(g.yedges.count() == 20);
}

TEST_CASE("site subgrid of an interior window") {
  // 6x5 base, window of elements [1,5) x [1,4)
  auto lad = hbsdr::make_ladder({2, 2}, {6, 5}, Conforming::curl, true,
                                {box_mask(6, 5, 1, 5, 1, 4)});
  auto g = hbsdr::greville_subgrid(lad, 0, 1);
  CHECK(g.cells.count() == 6);
  for (int j1 = 0; j1 < 7; ++j1)
    for (int j2 = 0; j2 < 6; ++j2)
      CHECK(g.cells.get(j1, j2) == (j1 >= 2 && j1 <= 4 && j2 >= 2 && j2 <= 3));
  CHECK(g.vertices.count() == 2);
  CHECK(g.vertices.get(3, 3));
  CHECK(g.vertices.get(4, 3));
  CHECK(g.xedges.count() == 3);
  CHECK(g.yedges.count() == 4);
}

TEST_CASE("subgrid entities are exactly the interior of the cell mask") {
  auto verify = [](const LevelLadder& lad) {
    for (int l = 0; l + 1 < lad.num_levels(); ++l)
      for (int lp = l; lp < lad.num_levels(); ++lp) {
        auto g = hbsdr::greville_subgrid(lad, l, lp);
        auto cell_at = [&](int i, int j) {
          return i >= 0 && i < g.cells.n1() && j >= 0 && j < g.cells.n2() && g.cells.get(i, j);
        };
        for (int j = 0; j < g.vertices.n2(); ++j)
          for (int i = 0; i < g.vertices.n1(); ++i)
            CHECK(g.vertices.get(i, j) == (cell_at(i - 1, j - 1) && cell_at(i, j - 1) &&
                                           cell_at(i - 1, j) && cell_at(i, j)));
        for (int j = 0; j < g.xedges.n2(); ++j)
          for (int i = 0; i < g.xedges.n1(); ++i)
            CHECK(g.xedges.get(i, j) == (cell_at(i, j - 1) && cell_at(i, j)));
        for (int j = 0; j < g.yedges.n2(); ++j)
          for (int i = 0; i < g.yedges.n1(); ++i)
            CHECK(g.yedges.get(i, j) == (cell_at(i - 1, j) && cell_at(i, j)));
      }
  };
  verify(two_block_ladder(Conforming::curl, true));
  verify(two_block_ladder(Conforming::div, true));
  verify(hbsdr::make_ladder({2, 3}, {4, 4}, Conforming::curl, true,
                            {box_mask(4, 4, 0, 3, 1, 4), box_mask(8, 8, 1, 5, 3, 8)}));
}

TEST_CASE("single-level differentiation matrix equals the level incidence") {
  auto lad = hbsdr::make_ladder({2, 2}, {3, 3}, Conforming::curl, true, {});
  auto as = hbsdr::build_active_sets(lad);
  auto h0 = hbsdr::hier_diff_matrix(lad, as, 0);
  auto i0 = hbsdr::incidence_d0(lad.level[0]);
  REQUIRE(h0.rows() == i0.rows());
  REQUIRE(h0.cols() == i0.cols());
  REQUIRE(h0.entries().size() == i0.entries().size());
  for (size_t e = 0; e < h0.entries().size(); ++e) {
    CHECK(h0.entries()[e].r == i0.entries()[e].r);
    CHECK(h0.entries()[e].c == i0.entries()[e].c);
    CHECK(h0.entries()[e].v == i0.entries()[e].v);
  }
}

TEST_CASE("multi-level differentiation chains to zero exactly") {
  std::vector<LevelLadder> cases;
  cases.push_back(two_block_ladder(Conforming::curl, true));
  cases.push_back(two_block_ladder(Conforming::div, true));
  cases.push_back(hbsdr::make_ladder(
      {2, 2}, {4, 4}, Conforming::curl, false,
      {box_mask(4, 4, 0, 3, 0, 3), box_mask(8, 8, 1, 4, 1, 4)}));
  for (const auto& lad : cases) {
    auto as = hbsdr::build_active_sets(lad);
    auto h0 = hbsdr::hier_diff_matrix(lad, as, 0);
    auto h1 = hbsdr::hier_diff_matrix(lad, as, 1);
    CHECK(h0.rows() == as.dim[1]);
    CHECK(h1.rows() == as.dim[2]);
    CHECK(h1.multiply(h0).is_zero());
  }
}

TEST_CASE("multi-level gradient matches pointwise differentiation") {
  auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, false,
                                {box_mask(4, 4, 1, 3, 1, 3)});
  auto as = hbsdr::build_active_sets(lad);
  auto h0 = hbsdr::hier_diff_matrix(lad, as, 0);

  std::vector<Rational> coef(as.dim[0]);
  for (auto& c : coef)
    c = Rational(static_cast<int>(oracle::rand_unit() * 9) - 4,
                 1 + static_cast<int>(oracle::rand_unit() * 2));
  std::vector<Rational> grad(as.dim[1], Rational(0));
  for (const auto& e : h0.entries()) grad[e.r] += e.v * coef[e.c];

  // evaluate a multi-level field: sum over active functions of every level
  auto eval_field = [&](int k, const std::vector<Rational>& v, int comp, double x, double y,
                        int dx, int dy) {
    double total = 0.0;
    for (int l = 0; l < lad.num_levels(); ++l) {
      const auto& fc = lad.level[l].x[k].comps[comp];
      std::array<std::vector<Rational>, 2> w;
      for (int d = 0; d < 2; ++d)
        if (!fc.full[d]) w[d] = hbsdr::curry_schoenberg_weights(fc.kv[d]);
      for (const auto& ij : as.act[l][k][comp].list) {
        int g = as.global_index(k, l, comp, ij[0], ij[1]);
        double b1 = hbsdr::eval_one_basis(fc.kv[0], ij[0], x, dx);
        double b2 = hbsdr::eval_one_basis(fc.kv[1], ij[1], y, dy);
        if (!fc.full[0]) b1 *= w[0][ij[0]].to_double();
        if (!fc.full[1]) b2 *= w[1][ij[1]].to_double();
        total += v[g].to_double() * b1 * b2;
      }
    }
    return total;
  };

  for (int s = 0; s < 100; ++s) {
    double x = oracle::rand_unit(), y = oracle::rand_unit();
    CHECK(eval_field(1, grad, 0, x, y, 0, 0) ==
          doctest::Approx(eval_field(0, coef, 0, x, y, 1, 0)).epsilon(1e-11));
    CHECK(eval_field(1, grad, 1, x, y, 0, 0) ==
          doctest::Approx(eval_field(0, coef, 0, x, y, 0, 1)).epsilon(1e-11));
  }
}

TEST_CASE("refined span intersection has the predicted dimension") {
  // dim(span of coarse level in fine coordinates  ∩  fine functions supported
  // in the subdomain) equals the number of coarse functions supported there
  auto lad = hbsdr::make_ladder({2, 2}, {4, 4}, Conforming::curl, true,
                                {box_mask(4, 4, 1, 4, 1, 4)});
  for (int k : {0, 2}) {
    const auto& coarse = lad.level[0].x[k].comps[0];
    const auto& fine = lad.level[1].x[k].comps[0];
    RationalSparse U = window_kron(coarse, fine);

    CellSet omega1 = lad.omega_at(1, 1);
    auto supp_in = [&](const hbsdr::FormComponent& fc, int i1, int i2, const CellSet& reg,
                       int shift) {
      auto s1 = fc.kv[0].support(i1);
      auto s2 = fc.kv[1].support(i2);
      return reg.contains_rect(s1.lo << shift, (s1.hi + 1) << shift, s2.lo << shift,
                               (s2.hi + 1) << shift);
    };
    int coarse_in = 0;
    for (int i2 = coarse.lo[1]; i2 < coarse.hi[1]; ++i2)
      for (int i1 = coarse.lo[0]; i1 < coarse.hi[0]; ++i1)
        if (supp_in(coarse, i1, i2, omega1, 1)) ++coarse_in;

    RationalSparse UV(fine.dim(), U.cols() + fine.dim());
    for (const auto& e : U.entries()) UV.add(e.r, e.c, e.v);
    int v_cols = 0;
    std::vector<int> v_col_of(fine.dim(), -1);
    for (int i2 = fine.lo[1]; i2 < fine.hi[1]; ++i2)
      for (int i1 = fine.lo[0]; i1 < fine.hi[0]; ++i1)
        if (supp_in(fine, i1, i2, omega1, 0)) {
          UV.add(fine.flat(i1, i2), U.cols() + v_cols, Rational(1));
          v_col_of[fine.flat(i1, i2)] = v_cols++;
        }
    UV.finalize();
    int rank_u = hbsdr::rational_rank(U, 21);
    int rank_uv = hbsdr::rational_rank(UV, 22);
    CHECK(rank_u == U.cols());  // refinement is injective
    CHECK(rank_u + v_cols - rank_uv == coarse_in);
  }
}
