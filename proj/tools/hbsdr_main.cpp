// Command-line front end: mesh generation and validation, space dimensions,
// exactness reports, square-cavity resonance spectra, pressure-velocity
// stability constants, and a driven-cavity flow solve.  Numeric tables can be
// written as CSV; exit codes are 0 (ok), 2 (invalid input), 3 (numerical
// failure).
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbsdr/assembly.hpp"
#include "hbsdr/eigensolve.hpp"
#include "hbsdr/exactness.hpp"
#include "hbsdr/hierarchy.hpp"
#include "hbsdr/meshspec.hpp"

namespace {

using namespace hbsdr;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

// Input problems exit with code 2, numerical failures with code 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips a double; identical runs produce
// byte-identical CSV.
std::string d2s(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ----- mesh inputs ----------------------------------------------------------

struct MeshOptions {
  std::vector<std::string> files;
  std::string gen;
  std::string params = "{}";
  std::vector<int> degree;
};

void add_mesh_options(CLI::App* cmd, MeshOptions& mo) {
  cmd->add_option("mesh", mo.files, "mesh description file(s), JSON");
  auto* g = cmd->add_option("--gen", mo.gen,
                            "built-in generator instead of a file (diagonal, three_lines, "
                            "three_lines_bulge, bulge, corners, custom)");
  cmd->add_option("--params", mo.params, "generator parameters, JSON object")->needs(g);
  cmd->add_option("--degree", mo.degree, "override the polynomial degree (two integers)")
      ->expected(2);
}

struct NamedSpec {
  std::string label;
  MeshSpec spec;
};

std::vector<NamedSpec> load_inputs(const MeshOptions& mo, int min_count, int max_count) {
  std::vector<NamedSpec> out;
  try {
    for (const auto& f : mo.files) out.push_back({f, load_meshspec(f)});
    if (!mo.gen.empty()) out.push_back({"generator:" + mo.gen, generate_mesh(mo.gen, mo.params)});
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
  if (static_cast<int>(out.size()) < min_count)
    throw ValidationError("need at least " + std::to_string(min_count) +
                          " mesh input(s): pass file paths or --gen");
  if (max_count > 0 && static_cast<int>(out.size()) > max_count)
    throw ValidationError("this command takes at most " + std::to_string(max_count) +
                          " mesh input(s)");
  if (!mo.degree.empty())
    for (auto& ns : out) ns.spec.degree = {mo.degree[0], mo.degree[1]};
  for (const auto& ns : out) {
    auto errs = validate_meshspec(ns.spec);
    if (!errs.empty()) throw ValidationError(ns.label + ": " + errs.front());
  }
  return out;
}

std::uint64_t digest_of(const std::vector<NamedSpec>& in) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& ns : in) h = fnv1a(h, meshspec_to_json(ns.spec));
  return h;
}

void print_record(const char* command, std::uint64_t digest, const Stopwatch& sw) {
  std::printf("record: command=%s input=%016llx wall=%.3fs\n", command,
              static_cast<unsigned long long>(digest), sw.seconds());
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write output file: " + path);
  f << content;
  std::printf("wrote %s\n", path.c_str());
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::exact:
      return "exact";
    case Verdict::not_exact:
      return "not_exact";
    default:
      return "unverified";
  }
}

// ----- command options ------------------------------------------------------

struct Options {
  MeshOptions mesh;
  std::string family = "curl";
  bool no_bc = false;
  std::uint64_t seed = 12345;
  double zero_tol = 1e-8;
  double spurious_tol = 0.02;
  int first_n = 10;
  double cpen = 0.0;
  bool cpen_set = false;  // unset: use 5 * max degree
  double nu = 1.0;
  std::vector<double> probe{0.0, 0.95};
  std::vector<double> lid{1.0, 0.0};
  std::string out;
  std::string gname;
  std::string gparams = "{}";
};

double effective_cpen(const Options& o, const MeshSpec& spec) {
  return o.cpen_set ? o.cpen : 5.0 * std::max(spec.degree[0], spec.degree[1]);
}

Conforming family_of(const Options& o) {
  return o.family == "div" ? Conforming::div : Conforming::curl;
}

// ----- commands -------------------------------------------------------------

int run_generate(const Options& o) {
  MeshSpec spec;
  try {
    spec = generate_mesh(o.gname, o.gparams);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
  if (!o.mesh.degree.empty()) spec.degree = {o.mesh.degree[0], o.mesh.degree[1]};
  auto errs = validate_meshspec(spec);
  if (!errs.empty()) throw ValidationError("generated mesh fails validation: " + errs.front());
  if (o.out.empty()) {
    std::fputs(meshspec_to_json(spec).c_str(), stdout);
  } else {
    save_meshspec(spec, o.out);
    std::printf("wrote %s\n", o.out.c_str());
  }
  return 0;
}

int run_validate(const Options& o) {
  MeshSpec spec;
  try {
    spec = load_meshspec(o.mesh.files.at(0));
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
  auto errs = validate_meshspec(spec);
  if (!errs.empty()) {
    for (const auto& e : errs) std::fprintf(stderr, "invalid: %s\n", e.c_str());
    return 2;
  }
  LevelLadder lad = ladder_from_spec(spec, Conforming::curl, false);
  MeshSpec canon = spec_from_ladder(lad);
  MeshSpec canon2 = spec_from_ladder(ladder_from_spec(canon, Conforming::curl, false));
  if (canon.levels != canon2.levels)
    throw std::runtime_error("canonical box decomposition failed to round-trip");
  std::printf("valid: degree %d %d, base %d x %d, levels %d, elements %zu\n", spec.degree[0],
              spec.degree[1], spec.level0[0], spec.level0[1], lad.num_levels(),
              build_hier_mesh(lad).size());
  return 0;
}

int run_dims(const Options& o) {
  Stopwatch sw;
  auto inputs = load_inputs(o.mesh, 1, -1);
  std::string csv = "mesh,family,zero_boundary,dim0,dim1,dim2,residual\n";
  for (const auto& ns : inputs) {
    LevelLadder lad = ladder_from_spec(ns.spec, family_of(o), !o.no_bc);
    ActiveSets act = build_active_sets(lad);
    long long residual = static_cast<long long>(act.dim[0]) - act.dim[1] + act.dim[2] - 1;
    std::printf("mesh: %s\n", ns.label.c_str());
    std::printf("dims: %d %d %d\n", act.dim[0], act.dim[1], act.dim[2]);
    std::printf("residual: %lld (%s)\n", residual,
                residual == 0 ? "necessary condition holds" : "necessary condition violated");
    csv += ns.label + "," + o.family + "," + (o.no_bc ? "0" : "1") + "," +
           std::to_string(act.dim[0]) + "," + std::to_string(act.dim[1]) + "," +
           std::to_string(act.dim[2]) + "," + std::to_string(residual) + "\n";
  }
  write_out(o.out, csv);
  print_record("dims", digest_of(inputs), sw);
  return 0;
}

int run_exactness(const Options& o) {
  Stopwatch sw;
  auto inputs = load_inputs(o.mesh, 1, -1);
  std::string csv =
      "mesh,dim0,dim1,dim2,residual,h0,h1,h2,expected0,expected1,expected2,"
      "conditions_hold,verdict\n";
  for (const auto& ns : inputs) {
    LevelLadder lad = ladder_from_spec(ns.spec, family_of(o), !o.no_bc);
    ExactnessReport rep = exactness_report(lad, o.seed);
    std::printf("mesh: %s\n", ns.label.c_str());
    std::fputs(format_report(rep).c_str(), stdout);
    csv += ns.label;
    for (int v : rep.dims) csv += "," + std::to_string(v);
    csv += "," + std::to_string(rep.residual);
    for (int v : rep.cohomology) csv += "," + std::to_string(v);
    for (int v : rep.expected) csv += "," + std::to_string(v);
    csv += std::string(",") + (rep.conditions_hold ? "1" : "0") + "," + verdict_str(rep.verdict) +
           "\n";
  }
  write_out(o.out, csv);
  print_record("exactness", digest_of(inputs), sw);
  return 0;
}

int run_maxwell(const Options& o) {
  Stopwatch sw;
  auto inputs = load_inputs(o.mesh, 1, 1);
  const NamedSpec& ns = inputs[0];
  LevelLadder lad = ladder_from_spec(ns.spec, Conforming::curl, true);
  ActiveSets act = build_active_sets(lad);
  AssemblyContext ctx{&lad, &act, GeometryMap{{kPi, kPi}, {0.0, 0.0}}, 0};
  MatrixXd A = MatrixXd(curl_energy_matrix(ctx));
  MatrixXd M1 = MatrixXd(mass_matrix(ctx, 1));
  MatrixXd C = MatrixXd(d0_pairing(ctx));
  MatrixXd g1 = MatrixXd(d1_pairing(ctx));
  MatrixXd M2 = MatrixXd(mass_matrix(ctx, 2));
  VectorXd mom = form_moments(ctx, 2);

  VectorXd plain = sym_gen_eig(A, M1).values;
  VectorXd cons = constrained_curl_eigenvalues(A, M1, C);
  VectorXd dual = schur_eigenvalues(g1, M1, M2, mom);
  int zp = count_zero_eigenvalues(plain, o.zero_tol);
  int zc = count_zero_eigenvalues(cons, o.zero_tol);
  int zd = count_zero_eigenvalues(dual, o.zero_tol);

  std::vector<double> nonzero;
  for (int i = zc; i < cons.size() && static_cast<int>(nonzero.size()) < o.first_n; ++i)
    nonzero.push_back(cons[i]);
  std::vector<double> reference = maxwell_square_spectrum(o.first_n + 16);
  SpuriousReport sp = detect_spurious(nonzero, reference, o.spurious_tol);

  std::printf("mesh: %s\n", ns.label.c_str());
  std::printf("dims: %d %d %d\n", act.dim[0], act.dim[1], act.dim[2]);
  std::printf("zero counts: plain %d  constrained %d  dual %d\n", zp, zc, zd);
  std::printf("first %zu nonzero:", nonzero.size());
  for (double v : nonzero) std::printf(" %.6f", v);
  std::printf("\nreference:       ");
  for (size_t i = 0; i < nonzero.size() && i < reference.size(); ++i)
    std::printf(" %g", reference[i]);
  std::printf("\nspurious ranks:");
  if (sp.spurious_ranks.empty()) std::printf(" none");
  for (int r : sp.spurious_ranks) std::printf(" %d", r);
  std::printf("  missed: %d\n", sp.missed);

  std::string csv = "rank,plain,constrained,dual,reference,spurious\n";
  for (int r = 0; r < o.first_n; ++r) {
    csv += std::to_string(r + 1);
    csv += ",";
    if (zp + r < plain.size()) csv += d2s(plain[zp + r]);
    csv += ",";
    if (zc + r < cons.size()) csv += d2s(cons[zc + r]);
    csv += ",";
    if (zd + r < dual.size()) csv += d2s(dual[zd + r]);
    csv += ",";
    if (r < static_cast<int>(reference.size())) csv += d2s(reference[r]);
    bool flagged = false;
    for (int s : sp.spurious_ranks) flagged = flagged || s == r + 1;
    csv += std::string(",") + (flagged ? "1" : "0") + "\n";
  }
  write_out(o.out, csv);
  print_record("maxwell-eig", digest_of(inputs), sw);
  return 0;
}

int run_infsup(const Options& o) {
  Stopwatch sw;
  auto inputs = load_inputs(o.mesh, 1, -1);
  std::string csv = "mesh,velocity_dofs,pressure_dofs,cpen,beta\n";
  for (const auto& ns : inputs) {
    LevelLadder lad = ladder_from_spec(ns.spec, Conforming::div, true);
    ActiveSets act = build_active_sets(lad);
    AssemblyContext ctx{&lad, &act, GeometryMap{}, 0};
    double cpen = effective_cpen(o, ns.spec);
    MatrixXd B = MatrixXd(d1_pairing(ctx));
    MatrixXd G = MatrixXd(velocity_norm_gram(ctx, cpen));
    MatrixXd Mp = MatrixXd(mass_matrix(ctx, 2));
    VectorXd mom = form_moments(ctx, 2);
    double beta = infsup_constant(B, G, Mp, mom);
    std::printf("mesh: %s  velocity %d  pressure %d  cpen %g  beta %.6f\n", ns.label.c_str(),
                act.dim[1], act.dim[2], cpen, beta);
    csv += ns.label + "," + std::to_string(act.dim[1]) + "," + std::to_string(act.dim[2]) + "," +
           d2s(cpen) + "," + d2s(beta) + "\n";
  }
  write_out(o.out, csv);
  print_record("infsup", digest_of(inputs), sw);
  return 0;
}

int run_cavity(const Options& o) {
  Stopwatch sw;
  auto inputs = load_inputs(o.mesh, 1, 1);
  const NamedSpec& ns = inputs[0];
  LevelLadder lad = ladder_from_spec(ns.spec, Conforming::div, true);
  ActiveSets act = build_active_sets(lad);
  LevelLadder free_lad = ladder_from_spec(ns.spec, Conforming::div, false);
  ActiveSets free_act = build_active_sets(free_lad);
  int elements = static_cast<int>(build_hier_mesh(lad).size());
  // Reported unknowns count the velocity-pressure pair before the normal
  // traces are eliminated, matching the usual reporting convention.
  int unknowns = free_act.dim[1] + free_act.dim[2];
  double cpen = effective_cpen(o, ns.spec);
  AssemblyContext ctx{&lad, &act, GeometryMap{}, 0};
  StokesResult res =
      stokes_solve(ctx, o.nu, cpen, {{{0, 0}, {0, 0}, {0, 0}, {o.lid[0], o.lid[1]}}});
  VectorSample s =
      evaluate_vector_form(lad, act, res.velocity, GeometryMap{}, o.probe[0], o.probe[1]);
  std::printf("mesh: %s\n", ns.label.c_str());
  std::printf("elements: %d\n", elements);
  std::printf("unknowns: %d\n", unknowns);
  std::printf("vorticity(%g, %g): %.5f\n", o.probe[0], o.probe[1], s.curl());
  std::printf("divergence residual: %.3e\n", res.div_residual);
  std::string csv =
      "mesh,elements,unknowns,nu,cpen,probe_x,probe_y,vorticity,div_residual,multiplier\n";
  csv += ns.label + "," + std::to_string(elements) + "," + std::to_string(unknowns) + "," +
         d2s(o.nu) + "," + d2s(cpen) + "," + d2s(o.probe[0]) + "," + d2s(o.probe[1]) + "," +
         d2s(s.curl()) + "," + d2s(res.div_residual) + "," + d2s(res.multiplier) + "\n";
  write_out(o.out, csv);
  print_record("cavity", digest_of(inputs), sw);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hierarchical spline complex toolkit: mesh descriptions, space dimensions, "
      "exactness reports, square-cavity resonance spectra, stability constants, "
      "and a driven-cavity flow solve"};
  app.require_subcommand(1);
  Options o;

  auto* g = app.add_subcommand("generate", "produce a mesh description from a named generator");
  g->add_option("--name", o.gname,
                "generator: diagonal, three_lines, three_lines_bulge, bulge, corners, custom")
      ->required();
  g->add_option("--params", o.gparams, "generator parameters, JSON object");
  g->add_option("--degree", o.mesh.degree, "polynomial degree (two integers)")->expected(2);
  g->add_option("--out", o.out, "write the mesh description here instead of stdout");

  auto* v = app.add_subcommand("validate", "check a mesh description file");
  v->add_option("mesh", o.mesh.files, "mesh description file")->required()->expected(1);

  auto* d = app.add_subcommand("dims", "space dimensions and the alternating-sum residual");
  add_mesh_options(d, o.mesh);
  d->add_option("--family", o.family, "complex family: curl or div")
      ->check(CLI::IsMember({"curl", "div"}));
  d->add_flag("--no-bc", o.no_bc, "use the free-boundary spaces");
  d->add_option("--out", o.out, "write a CSV table here");

  auto* e = app.add_subcommand("exactness", "full exactness report per mesh");
  add_mesh_options(e, o.mesh);
  e->add_option("--family", o.family, "complex family: curl or div")
      ->check(CLI::IsMember({"curl", "div"}));
  e->add_flag("--no-bc", o.no_bc, "use the free-boundary spaces");
  e->add_option("--seed", o.seed, "seed for the modular rank checks");
  e->add_option("--out", o.out, "write a CSV table here");

  auto* m = app.add_subcommand("maxwell-eig",
                               "resonance spectra of the square cavity on (0,pi)^2");
  add_mesh_options(m, o.mesh);
  m->add_option("--first-n", o.first_n, "how many nonzero eigenvalues to report")
      ->check(CLI::PositiveNumber);
  m->add_option("--zero-tol", o.zero_tol, "relative threshold separating zero eigenvalues");
  m->add_option("--spurious-tol", o.spurious_tol,
                "relative tolerance for matching the reference spectrum");
  m->add_option("--out", o.out, "write the spectra as CSV here");

  auto* s = app.add_subcommand("infsup", "pressure-velocity stability constant per mesh");
  add_mesh_options(s, o.mesh);
  s->add_option("--cpen", o.cpen, "boundary penalty constant (default 5 * max degree)");
  s->add_option("--out", o.out, "write a CSV table here");

  auto* c = app.add_subcommand("cavity",
                               "driven-cavity flow: vorticity probe and divergence residual");
  add_mesh_options(c, o.mesh);
  c->add_option("--cpen", o.cpen, "boundary penalty constant (default 5 * max degree)");
  c->add_option("--nu", o.nu, "viscosity");
  c->add_option("--probe", o.probe, "probe point x y")->expected(2);
  c->add_option("--lid", o.lid, "lid velocity ux uy")->expected(2);
  c->add_option("--out", o.out, "write a CSV table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex);
    return code == 0 ? 0 : 2;
  }
  o.cpen_set = s->count("--cpen") > 0 || c->count("--cpen") > 0;

  try {
    if (app.got_subcommand(g)) return run_generate(o);
    if (app.got_subcommand(v)) return run_validate(o);
    if (app.got_subcommand(d)) return run_dims(o);
    if (app.got_subcommand(e)) return run_exactness(o);
    if (app.got_subcommand(m)) return run_maxwell(o);
    if (app.got_subcommand(s)) return run_infsup(o);
    if (app.got_subcommand(c)) return run_cavity(o);
  } catch (const ValidationError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "numerical failure: %s\n", ex.what());
    return 3;
  }
  return 0;
}
