#pragma once

#include <array>
#include <string>
#include <vector>

#include "hbsdr/hierarchy.hpp"

namespace hbsdr {

// Serializable description of a refinement hierarchy: degree, base grid, and
// per-level subdomains as unions of half-open element-index boxes, each given
// in the PREVIOUS level's element indexing (so every subdomain is a union of
// previous-level elements by construction).
struct MeshSpec {
  std::array<int, 2> degree{2, 2};
  std::array<int, 2> level0{4, 4};
  struct Box {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;  // cells [i0,i1) x [j0,j1)
    bool operator==(const Box&) const = default;
  };
  std::vector<std::vector<Box>> levels;  // levels[l] describes subdomain l+1
  std::string note;                      // free-form provenance/parameters
};

std::string meshspec_to_json(const MeshSpec& spec);
MeshSpec meshspec_from_json(const std::string& text);  // throws std::runtime_error
MeshSpec load_meshspec(const std::string& path);       // throws std::runtime_error
void save_meshspec(const MeshSpec& spec, const std::string& path);

// Localized problems ("levels[1] box 0: ..."); empty result means valid.
std::vector<std::string> validate_meshspec(const MeshSpec& spec);

LevelLadder ladder_from_spec(const MeshSpec& spec, Conforming conf, bool zero_boundary);

// Canonical box decomposition of the ladder's subdomain masks (greedy
// row-run merge); round-trips through ladder_from_spec to equal masks.
MeshSpec spec_from_ladder(const LevelLadder& lad);

// name in {diagonal, three_lines, three_lines_bulge, bulge, corners, custom};
// params_json is a JSON object; throws std::runtime_error on bad parameters
// or when the produced spec fails validation.
MeshSpec generate_mesh(const std::string& name, const std::string& params_json);

}  // namespace hbsdr
