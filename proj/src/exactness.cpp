#include "hbsdr/exactness.hpp"

#include <sstream>

namespace hbsdr {

CoverageResult check_subdomain_coverage(const LevelLadder& lad, int l) {
  CellSet omega = lad.omega_at(l + 1, l);
  CellSet covered(omega.n1(), omega.n2());
  const auto& fc = lad.level[l].x[2].comps[0];
  for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
    for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1) {
      auto s1 = fc.kv[0].support(i1);
      auto s2 = fc.kv[1].support(i2);
      if (omega.contains_rect(s1.lo, s1.hi + 1, s2.lo, s2.hi + 1))
        covered.set_box(s1.lo, s1.hi + 1, s2.lo, s2.hi + 1);
    }
  CoverageResult r;
  for (int j = 0; j < omega.n2(); ++j)
    for (int i = 0; i < omega.n1(); ++i)
      if (omega.get(i, j) && !covered.get(i, j)) {
        r.pass = false;
        r.uncovered.push_back({i, j});
      }
  return r;
}

OverlapResult check_overlap_shape(const LevelLadder& lad, int l) {
  CellSet omega = lad.omega_at(l + 1, l);
  OverlapResult r;
  for (int k = 0; k < 3; ++k)
    for (size_t c = 0; c < lad.level[l].x[k].comps.size(); ++c) {
      const auto& fc = lad.level[l].x[k].comps[c];
      for (int i2 = fc.lo[1]; i2 < fc.hi[1]; ++i2)
        for (int i1 = fc.lo[0]; i1 < fc.hi[0]; ++i1) {
          auto s1 = fc.kv[0].support(i1);
          auto s2 = fc.kv[1].support(i2);
          CellSet overlap(s1.hi - s1.lo + 1, s2.hi - s2.lo + 1);
          bool any = false;
          for (int j = 0; j < overlap.n2(); ++j)
            for (int i = 0; i < overlap.n1(); ++i)
              if (!omega.get(s1.lo + i, s2.lo + j)) {
                overlap.set(i, j);
                any = true;
              }
          if (!any) continue;  // support fully refined away: nothing to constrain
          GridTopology t = analyze(overlap);
          if (t.components > 1 || t.holes != 0) {
            r.pass = false;
            r.fail_k = k;
            r.fail_comp = static_cast<int>(c);
            r.fail_index = {i1, i2};
            r.fail_shape = t;
            return r;
          }
        }
    }
  return r;
}

SubgridCompare compare_site_subgrids(const LevelLadder& lad, int l) {
  auto g1 = greville_subgrid(lad, l, l + 1);
  auto g2 = greville_subgrid(lad, l + 1, l + 1);
  GridTopology t1 = analyze(g1.cells);
  GridTopology t2 = analyze(g2.cells);
  SubgridCompare r;
  r.coarse = {t1.components, t1.holes, t1.manifold};
  r.fine = {t2.components, t2.holes, t2.manifold};
  r.components_match = t1.components == t2.components;
  r.holes_match = t1.holes == t2.holes;
  return r;
}

std::array<int, 3> cohomology_of_hierarchy(const LevelLadder& lad, const ActiveSets& active,
                                           std::uint64_t seed) {
  RationalSparse d0 = hier_diff_matrix(lad, active, 0);
  RationalSparse d1 = hier_diff_matrix(lad, active, 1);
  CohomologyDims h = cohomology_dims(d0, d1, seed);
  return {h.h0, h.h1, h.h2};
}

ExactnessReport exactness_report(const LevelLadder& lad, std::uint64_t seed) {
  ExactnessReport rep;
  ActiveSets active = build_active_sets(lad);
  rep.dims = active.dim;
  rep.residual = static_cast<std::int64_t>(rep.dims[0]) - rep.dims[1] + rep.dims[2] - 1;
  rep.expected = lad.zero_boundary ? std::array<int, 3>{0, 0, 1} : std::array<int, 3>{1, 0, 0};
  rep.cohomology = cohomology_of_hierarchy(lad, active, seed);
  for (int l = 0; l + 1 < lad.num_levels(); ++l) {
    LevelCheck lc;
    lc.level = l;
    lc.betti = compare_site_subgrids(lad, l);
    lc.coverage = check_subdomain_coverage(lad, l);
    lc.overlap = check_overlap_shape(lad, l);
    bool conditions = lc.coverage.pass && lc.overlap.pass;
    rep.conditions_hold = rep.conditions_hold && conditions;
    // A component-count mismatch is decisive; a hole-count mismatch is decisive
    // only when both subgrids are free of pinched corners, where the cell-set
    // hole count equals the dimension used by the isomorphism argument.
    bool trust_holes = lc.betti.coarse.manifold && lc.betti.fine.manifold;
    if (!lc.betti.components_match || (!lc.betti.holes_match && trust_holes))
      lc.verdict = Verdict::not_exact;
    else if (conditions)
      lc.verdict = Verdict::exact;
    else
      lc.verdict = Verdict::unverified;
    rep.levels.push_back(lc);
  }
  rep.verdict = rep.cohomology == rep.expected ? Verdict::exact : Verdict::not_exact;
  return rep;
}

std::string format_report(const ExactnessReport& rep) {
  std::ostringstream os;
  os << "space dimensions (0-/1-/2-forms): " << rep.dims[0] << " / " << rep.dims[1] << " / "
     << rep.dims[2] << "\n";
  os << "alternating-sum residual (d0 - d1 + d2 - 1): " << rep.residual
     << (rep.residual == 0 ? "  [necessary condition holds]" : "  [necessary condition VIOLATED]")
     << "\n";
  os << "cohomology dimensions (rank oracle): " << rep.cohomology[0] << " / " << rep.cohomology[1]
     << " / " << rep.cohomology[2] << "   expected for an exact sequence: " << rep.expected[0]
     << " / " << rep.expected[1] << " / " << rep.expected[2] << "\n";
  for (const auto& lc : rep.levels) {
    os << "levels " << lc.level << " -> " << lc.level + 1 << ":\n";
    auto pair = [&](const BettiPair& b) {
      std::ostringstream p;
      p << b.components << " component" << (b.components == 1 ? "" : "s") << " / " << b.holes
        << " hole" << (b.holes == 1 ? "" : "s");
      if (!b.manifold) p << " (pinched corner present)";
      return p.str();
    };
    os << "  site subgrids: coarse " << pair(lc.betti.coarse) << "; fine " << pair(lc.betti.fine)
       << "  ["
       << (lc.betti.components_match && lc.betti.holes_match ? "match" : "MISMATCH") << "]\n";
    os << "  refined-region coverage by contained supports: "
       << (lc.coverage.pass ? "pass" : "FAIL");
    if (!lc.coverage.pass) {
      os << " (" << lc.coverage.uncovered.size() << " uncovered element"
         << (lc.coverage.uncovered.size() == 1 ? "" : "s") << ", first at ("
         << lc.coverage.uncovered[0][0] << "," << lc.coverage.uncovered[0][1] << "))";
    }
    os << "\n";
    os << "  support-overlap shape (connected, no holes): "
       << (lc.overlap.pass ? "pass" : "FAIL");
    if (!lc.overlap.pass) {
      os << " at " << lc.overlap.fail_k << "-form component " << lc.overlap.fail_comp
         << " index (" << lc.overlap.fail_index[0] << "," << lc.overlap.fail_index[1]
         << "): overlap has " << lc.overlap.fail_shape.components << " components / "
         << lc.overlap.fail_shape.holes << " holes";
    }
    os << "\n";
    const char* v = lc.verdict == Verdict::exact
                        ? "exact at this level"
                        : (lc.verdict == Verdict::not_exact ? "NOT exact"
                                                            : "undecided by level checks");
    os << "  level verdict: " << v << "\n";
  }
  os << "overall verdict: " << (rep.verdict == Verdict::exact ? "EXACT" : "NOT EXACT") << "\n";
  return os.str();
}

}  // namespace hbsdr
