#include <stdexcept>

#include "doctest.h"
#include "hbsdr/exactness.hpp"
#include "hbsdr/meshspec.hpp"

using hbsdr::Conforming;
using hbsdr::MeshSpec;

namespace {

MeshSpec two_block_spec() {
  MeshSpec s;
  s.degree = {3, 3};
  s.level0 = {9, 9};
  s.levels = {{{2, 6, 2, 6}, {4, 8, 4, 8}}};
  s.note = "two overlapping blocks";
  return s;
}

}  // namespace

TEST_CASE("mesh description json round trip") {
  auto s = two_block_spec();
  auto text = hbsdr::meshspec_to_json(s);
  auto s2 = hbsdr::meshspec_from_json(text);
  CHECK(s2.degree == s.degree);
  CHECK(s2.level0 == s.level0);
  CHECK(s2.levels == s.levels);
  CHECK(s2.note == s.note);
  CHECK(hbsdr::meshspec_to_json(s2) == text);
  CHECK_THROWS_AS(hbsdr::meshspec_from_json("not json"), std::runtime_error);
  CHECK_THROWS_AS(hbsdr::meshspec_from_json("{\"degree\":[2,2]}"), std::runtime_error);
  CHECK_THROWS_AS(hbsdr::load_meshspec("/nonexistent/path.json"), std::runtime_error);
}

TEST_CASE("validation localizes problems") {
  auto s = two_block_spec();
  CHECK(hbsdr::validate_meshspec(s).empty());

  auto bad = s;
  bad.levels[0][1] = {4, 10, 4, 8};  // beyond the 9x9 grid
  auto errs = hbsdr::validate_meshspec(bad);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("levels[0] box 1") != std::string::npos);

  auto empty_box = s;
  empty_box.levels[0][0] = {3, 3, 2, 6};
  errs = hbsdr::validate_meshspec(empty_box);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("empty") != std::string::npos);

  auto non_nested = s;
  non_nested.levels.push_back({{0, 4, 0, 4}});  // level-1 corner not inside refined blocks
  errs = hbsdr::validate_meshspec(non_nested);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("levels[1] box 0") != std::string::npos);
  CHECK_THROWS(hbsdr::ladder_from_spec(non_nested, Conforming::curl, true));
}

TEST_CASE("ladder from description reproduces dimensions") {
  auto lad = hbsdr::ladder_from_spec(two_block_spec(), Conforming::curl, true);
  auto as = hbsdr::build_active_sets(lad);
  CHECK(as.dim == std::array<int, 3>{147, 328, 181});
}

TEST_CASE("canonical decomposition round trips") {
  auto lad = hbsdr::ladder_from_spec(two_block_spec(), Conforming::curl, true);
  auto canon = hbsdr::spec_from_ladder(lad);
  auto lad2 = hbsdr::ladder_from_spec(canon, Conforming::curl, true);
  REQUIRE(lad2.refine_mask.size() == lad.refine_mask.size());
  CHECK(lad2.refine_mask[0] == lad.refine_mask[0]);
  // a second pass is textually identical
  auto canon2 = hbsdr::spec_from_ladder(lad2);
  CHECK(hbsdr::meshspec_to_json(canon2) == hbsdr::meshspec_to_json(canon));
}

TEST_CASE("diagonal generator") {
  auto s = hbsdr::generate_mesh("diagonal", R"({"n":10,"b":4,"k":1})");
  REQUIRE(s.levels.size() == 1);
  REQUIRE(s.levels[0].size() == 3);
  CHECK(s.levels[0][0] == MeshSpec::Box{0, 4, 0, 4});
  CHECK(s.levels[0][1] == MeshSpec::Box{3, 7, 3, 7});
  CHECK(s.levels[0][2] == MeshSpec::Box{6, 10, 6, 10});

  auto k2 = hbsdr::generate_mesh("diagonal", R"({"n":10,"b":4,"k":2})");
  REQUIRE(k2.levels[0].size() == 4);
  CHECK(k2.levels[0][3] == MeshSpec::Box{6, 10, 6, 10});

  auto inset = hbsdr::generate_mesh("diagonal", R"({"n":16,"b":4,"k":2,"inset":2})");
  REQUIRE(inset.levels[0].size() == 5);
  CHECK(inset.levels[0][0] == MeshSpec::Box{2, 6, 2, 6});
  CHECK(inset.levels[0][4] == MeshSpec::Box{10, 14, 10, 14});

  CHECK_THROWS(hbsdr::generate_mesh("diagonal", R"({"n":10,"b":4,"k":4})"));
  CHECK_THROWS(hbsdr::generate_mesh("nonsense", "{}"));
  CHECK_THROWS(hbsdr::generate_mesh("diagonal", "[1,2"));

  for (int k : {1, 2, 3})
    for (int levels : {3, 4, 5, 6}) {
      auto ml = hbsdr::generate_mesh("diagonal", R"({"n":10,"b":4,"k":)" + std::to_string(k) +
                                                     R"(,"levels":)" + std::to_string(levels) +
                                                     "}");
      CHECK(hbsdr::validate_meshspec(ml).empty());
      CHECK(ml.levels.size() == static_cast<size_t>(levels - 1));
    }
}

TEST_CASE("comb and bulge generators") {
  auto lines = hbsdr::generate_mesh("three_lines", R"({"n":16})");
  REQUIRE(lines.levels.size() == 1);
  REQUIRE(lines.levels[0].size() == 3);  // three separate full-width bands
  CHECK(lines.levels[0][0] == MeshSpec::Box{0, 16, 0, 2});
  CHECK(lines.levels[0][1] == MeshSpec::Box{0, 16, 7, 9});
  CHECK(lines.levels[0][2] == MeshSpec::Box{0, 16, 14, 16});

  auto mb = hbsdr::generate_mesh("three_lines_bulge", R"({"n":16})");
  REQUIRE(mb.levels[0].size() == 4);
  CHECK(mb.levels[0][3] == MeshSpec::Box{5, 9, 7, 11});

  auto sb = hbsdr::generate_mesh("bulge", R"({"n":10})");
  REQUIRE(sb.levels[0].size() == 5);  // three lines + spine + finger
  CHECK(sb.levels[0][0] == MeshSpec::Box{0, 10, 0, 2});
  CHECK(sb.levels[0][2] == MeshSpec::Box{0, 10, 8, 10});
  CHECK(sb.levels[0][3] == MeshSpec::Box{0, 2, 0, 10});
  CHECK(sb.levels[0][4] == MeshSpec::Box{4, 5, 3, 6});
}

TEST_CASE("corners generator matches the reference element count") {
  auto s = hbsdr::generate_mesh("corners", R"({"n":32})");
  CHECK(s.levels.size() == 3);
  auto lad = hbsdr::ladder_from_spec(s, Conforming::div, true);
  auto mesh = hbsdr::build_hier_mesh(lad);
  CHECK(mesh.size() == 1924);
  CHECK_THROWS(hbsdr::generate_mesh("corners", R"({"n":8,"c":5})"));
}

TEST_CASE("custom generator passes boxes through") {
  auto s = hbsdr::generate_mesh(
      "custom", R"({"degree":[2,2],"level0":[6,5],"levels":[[{"i0":1,"i1":4,"j0":1,"j1":4}]]})");
  CHECK(s.level0 == std::array<int, 2>{6, 5});
  REQUIRE(s.levels.size() == 1);
  CHECK(s.levels[0][0] == MeshSpec::Box{1, 4, 1, 4});
}
