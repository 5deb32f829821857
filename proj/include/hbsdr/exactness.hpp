#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hbsdr/hierarchy.hpp"
#include "hbsdr/topology.hpp"

namespace hbsdr {

// Does the next-level subdomain equal a union of level-l two-form supports
// contained in it?  Failing elements are reported in level-l indices.
struct CoverageResult {
  bool pass = true;
  std::vector<std::array<int, 2>> uncovered;
};
CoverageResult check_subdomain_coverage(const LevelLadder& lad, int l);

// Is the part of every level-l basis-function support lying outside the
// next-level subdomain connected with no holes?  First offender reported.
struct OverlapResult {
  bool pass = true;
  int fail_k = -1;
  int fail_comp = -1;
  std::array<int, 2> fail_index{-1, -1};
  GridTopology fail_shape{};
};
OverlapResult check_overlap_shape(const LevelLadder& lad, int l);

// Connectivity comparison of the two site subgrids straddling level l.
struct BettiPair {
  int components = 0;
  int holes = 0;
  bool manifold = true;
};
struct SubgridCompare {
  BettiPair coarse;  // functions of level l supported in the level-(l+1) subdomain
  BettiPair fine;    // functions of level l+1 supported there
  bool components_match = true;
  bool holes_match = true;
};
SubgridCompare compare_site_subgrids(const LevelLadder& lad, int l);

// Ground truth: cohomology dimensions of the assembled hierarchical complex.
std::array<int, 3> cohomology_of_hierarchy(const LevelLadder& lad, const ActiveSets& active,
                                           std::uint64_t seed = 12345);

enum class Verdict { exact, not_exact, unverified };

struct LevelCheck {
  int level = 0;  // comparison between levels `level` and `level + 1`
  SubgridCompare betti;
  CoverageResult coverage;
  OverlapResult overlap;
  Verdict verdict = Verdict::unverified;
};

struct ExactnessReport {
  std::array<int, 3> dims{0, 0, 0};
  std::int64_t residual = 0;  // dims[0] - dims[1] + dims[2] - 1
  std::array<int, 3> cohomology{0, 0, 0};
  std::array<int, 3> expected{0, 0, 0};  // (0,0,1) zero-trace, (1,0,0) free-boundary
  std::vector<LevelCheck> levels;
  bool conditions_hold = true;  // coverage and overlap pass at every level
  Verdict verdict = Verdict::unverified;
};

ExactnessReport exactness_report(const LevelLadder& lad, std::uint64_t seed = 12345);

std::string format_report(const ExactnessReport& rep);

}  // namespace hbsdr
