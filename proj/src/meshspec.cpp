#include "hbsdr/meshspec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hbsdr {

using nlohmann::json;

std::string meshspec_to_json(const MeshSpec& spec) {
  json j;
  j["degree"] = spec.degree;
  j["level0_elements"] = spec.level0;
  j["levels"] = json::array();
  for (const auto& lvl : spec.levels) {
    json boxes = json::array();
    for (const auto& b : lvl)
      boxes.push_back({{"i0", b.i0}, {"i1", b.i1}, {"j0", b.j0}, {"j1", b.j1}});
    j["levels"].push_back(boxes);
  }
  if (!spec.note.empty()) j["note"] = spec.note;
  return j.dump(2) + "\n";
}

static MeshSpec parse_spec(const json& j) {
  if (!j.is_object()) throw std::runtime_error("mesh description must be a JSON object");
  MeshSpec spec;
  try {
    if (j.contains("generator")) {
      const json& g = j.at("generator");
      spec = generate_mesh(g.at("name").get<std::string>(),
                           g.contains("params") ? g.at("params").dump() : "{}");
      if (j.contains("degree")) spec.degree = j.at("degree").get<std::array<int, 2>>();
      if (j.contains("note")) spec.note = j.at("note").get<std::string>();
      return spec;
    }
    spec.degree = j.at("degree").get<std::array<int, 2>>();
    spec.level0 = j.at("level0_elements").get<std::array<int, 2>>();
    if (j.contains("levels")) {
      for (const auto& lvl : j.at("levels")) {
        std::vector<MeshSpec::Box> boxes;
        for (const auto& b : lvl)
          boxes.push_back({b.at("i0").get<int>(), b.at("i1").get<int>(), b.at("j0").get<int>(),
                           b.at("j1").get<int>()});
        spec.levels.push_back(std::move(boxes));
      }
    }
    if (j.contains("note")) spec.note = j.at("note").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad mesh description: ") + e.what());
  }
  return spec;
}

MeshSpec meshspec_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("mesh description is not valid JSON");
  return parse_spec(j);
}

MeshSpec load_meshspec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return meshspec_from_json(ss.str());
}

void save_meshspec(const MeshSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << meshspec_to_json(spec);
}

std::vector<std::string> validate_meshspec(const MeshSpec& spec) {
  std::vector<std::string> errs;
  for (int d = 0; d < 2; ++d) {
    if (spec.degree[d] < 1) errs.push_back("degree must be at least 1 in each direction");
    if (spec.level0[d] < 1) errs.push_back("level-0 element counts must be positive");
  }
  if (!errs.empty()) return errs;

  std::vector<CellSet> masks;
  for (size_t l = 0; l < spec.levels.size(); ++l) {
    int n1 = spec.level0[0] << l, n2 = spec.level0[1] << l;
    CellSet mask(n1, n2);
    for (size_t b = 0; b < spec.levels[l].size(); ++b) {
      const auto& box = spec.levels[l][b];
      std::string where = "levels[" + std::to_string(l) + "] box " + std::to_string(b);
      if (box.i0 >= box.i1 || box.j0 >= box.j1) {
        errs.push_back(where + ": empty box");
        continue;
      }
      if (box.i0 < 0 || box.j0 < 0 || box.i1 > n1 || box.j1 > n2) {
        errs.push_back(where + ": outside the " + std::to_string(n1) + "x" + std::to_string(n2) +
                       " grid of that level");
        continue;
      }
      if (l > 0) {
        CellSet prev_refined = masks[l - 1].refined();
        bool inside = true;
        for (int j = box.j0; j < box.j1 && inside; ++j)
          for (int i = box.i0; i < box.i1 && inside; ++i)
            if (!prev_refined.get(i, j)) inside = false;
        if (!inside)
          errs.push_back(where + ": not contained in the refinement of the previous subdomain");
      }
      mask.set_box(box.i0, box.i1, box.j0, box.j1);
    }
    masks.push_back(std::move(mask));
  }
  return errs;
}

LevelLadder ladder_from_spec(const MeshSpec& spec, Conforming conf, bool zero_boundary) {
  auto errs = validate_meshspec(spec);
  if (!errs.empty()) throw std::invalid_argument("invalid mesh description: " + errs.front());
  std::vector<CellSet> masks;
  for (size_t l = 0; l < spec.levels.size(); ++l) {
    CellSet mask(spec.level0[0] << l, spec.level0[1] << l);
    for (const auto& box : spec.levels[l]) mask.set_box(box.i0, box.i1, box.j0, box.j1);
    masks.push_back(std::move(mask));
  }
  return make_ladder(spec.degree, spec.level0, conf, zero_boundary, std::move(masks));
}

static std::vector<MeshSpec::Box> decompose(const CellSet& m) {
  std::vector<MeshSpec::Box> out;
  for (int j = 0; j < m.n2(); ++j) {
    int i = 0;
    while (i < m.n1()) {
      if (!m.get(i, j)) {
        ++i;
        continue;
      }
      int a = i;
      while (i < m.n1() && m.get(i, j)) ++i;
      bool merged = false;
      for (auto& b : out)
        if (b.i0 == a && b.i1 == i && b.j1 == j) {
          b.j1 = j + 1;
          merged = true;
          break;
        }
      if (!merged) out.push_back({a, i, j, j + 1});
    }
  }
  return out;
}

MeshSpec spec_from_ladder(const LevelLadder& lad) {
  MeshSpec spec;
  spec.degree = lad.degree;
  spec.level0 = lad.base_elements;
  for (const auto& mask : lad.refine_mask) spec.levels.push_back(decompose(mask));
  return spec;
}

namespace {

int param_int(const json& p, const char* key, int fallback) {
  return p.contains(key) ? p.at(key).get<int>() : fallback;
}

std::array<int, 2> param_degree(const json& p) {
  if (p.contains("degree")) return p.at("degree").get<std::array<int, 2>>();
  return {3, 3};
}

// offsets of b-wide diagonal blocks on an n-wide grid, stepping `step`,
// starting at `inset` and right-anchored at n - b - inset
std::vector<int> diagonal_offsets(int n, int b, int step, int inset) {
  std::vector<int> offs;
  int last = n - b - inset;
  for (int o = inset; o < last; o += step) offs.push_back(o);
  if (last >= inset) offs.push_back(last);
  return offs;
}

// three full-width horizontal bands of the given thickness; a left spine of
// width `spine` joins them when positive; inset shifts the outer bands away
// from the bottom/top edges
std::vector<MeshSpec::Box> comb_boxes(int n, int thickness, int inset, int spine) {
  int rows[3] = {inset, n / 2 - 1, n - thickness - inset};
  std::vector<MeshSpec::Box> boxes;
  for (int r : rows) boxes.push_back({0, n, r, r + thickness});
  if (spine > 0) boxes.push_back({0, spine, rows[0], rows[2] + thickness});
  return boxes;
}

}  // namespace

MeshSpec generate_mesh(const std::string& name, const std::string& params_json) {
  json p = json::parse(params_json.empty() ? "{}" : params_json, nullptr, false);
  if (p.is_discarded()) throw std::runtime_error("generator parameters are not valid JSON");

  MeshSpec spec;
  spec.degree = param_degree(p);
  int n = param_int(p, "n", 10);
  spec.level0 = {n, n};

  if (name == "diagonal") {
    int b = param_int(p, "b", 4);
    int k = param_int(p, "k", 1);
    int levels = param_int(p, "levels", 2);
    int inset = param_int(p, "inset", 0);
    if (k >= b) throw std::runtime_error("overlap k must be smaller than block size b");
    if (k < 0 || b < 1 || levels < 2) throw std::runtime_error("bad diagonal parameters");
    for (int l = 0; l + 1 < levels; ++l) {
      int nl = n << l, il = inset << l;
      std::vector<MeshSpec::Box> boxes;
      for (int o : diagonal_offsets(nl, b, b - k, il)) boxes.push_back({o, o + b, o, o + b});
      spec.levels.push_back(std::move(boxes));
    }
    spec.note = "diagonal blocks: b=" + std::to_string(b) + " overlap k=" + std::to_string(k) +
                " levels=" + std::to_string(levels) + " inset=" + std::to_string(inset);
  } else if (name == "three_lines" || name == "three_lines_bulge" || name == "bulge") {
    int thickness = param_int(p, "thickness", 2);
    int inset = param_int(p, "inset", 0);
    int spine = param_int(p, "spine", name == "bulge" ? 2 : 0);
    auto boxes = comb_boxes(n, thickness, inset, spine);
    spec.note = std::string(spine > 0 ? "three joined lines" : "three separate lines") +
                ": thickness=" + std::to_string(thickness) + " inset=" + std::to_string(inset);
    if (name == "three_lines_bulge") {
      MeshSpec::Box bb{param_int(p, "bulge_i0", 5), param_int(p, "bulge_i1", 9),
                       param_int(p, "bulge_j0", 7), param_int(p, "bulge_j1", 11)};
      boxes.push_back(bb);
      spec.note += " + bulge";
    } else if (name == "bulge") {
      MeshSpec::Box bb{param_int(p, "bulge_i0", 4), param_int(p, "bulge_i1", 5),
                       param_int(p, "bulge_j0", 3), param_int(p, "bulge_j1", 6)};
      boxes.push_back(bb);
      spec.note += " + bulge";
    }
    spec.levels.push_back(std::move(boxes));
  } else if (name == "corners") {
    int c = param_int(p, "c", std::max(1, 5 * n / 32));
    int sub = param_int(p, "sublevels", 3);
    if (2 * c > n) throw std::runtime_error("corner boxes overlap");
    for (int l = 0; l < sub; ++l) {
      int nl = n << l;
      spec.levels.push_back({{0, c, 0, c},
                             {nl - c, nl, 0, c},
                             {0, c, nl - c, nl},
                             {nl - c, nl, nl - c, nl}});
    }
    spec.note = "corner boxes: c=" + std::to_string(c) + " sublevels=" + std::to_string(sub);
  } else if (name == "custom") {
    if (p.contains("level0")) spec.level0 = p.at("level0").get<std::array<int, 2>>();
    if (p.contains("levels")) {
      for (const auto& lvl : p.at("levels")) {
        std::vector<MeshSpec::Box> boxes;
        for (const auto& b : lvl)
          boxes.push_back({b.at("i0").get<int>(), b.at("i1").get<int>(), b.at("j0").get<int>(),
                           b.at("j1").get<int>()});
        spec.levels.push_back(std::move(boxes));
      }
    }
    spec.note = "custom";
  } else {
    throw std::runtime_error("unknown generator: " + name);
  }

  auto errs = validate_meshspec(spec);
  if (!errs.empty())
    throw std::runtime_error("generated mesh fails validation: " + errs.front());
  return spec;
}

}  // namespace hbsdr
