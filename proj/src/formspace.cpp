#include "hbsdr/formspace.hpp"

#include <stdexcept>

namespace hbsdr {

std::vector<Rational> FormComponent::active_greville(int dir) const {
  std::vector<Rational> all = greville_sites(kv[dir]);
  return std::vector<Rational>(all.begin() + lo[dir], all.begin() + hi[dir]);
}

int FormSpace::dim() const {
  int d = 0;
  for (const auto& c : comps) d += c.dim();
  return d;
}

int FormSpace::comp_offset(int c) const {
  int off = 0;
  for (int a = 0; a < c; ++a) off += comps[a].dim();
  return off;
}

namespace {

FormComponent make_component(const KnotVector& full1, const KnotVector& red1,
                             const KnotVector& full2, const KnotVector& red2,
                             bool full_dir1, bool full_dir2, bool zero_boundary) {
  FormComponent c;
  c.kv[0] = full_dir1 ? full1 : red1;
  c.kv[1] = full_dir2 ? full2 : red2;
  c.full = {full_dir1, full_dir2};
  for (int d = 0; d < 2; ++d) {
    int m = c.kv[d].num_basis();
    int cut = (zero_boundary && c.full[d]) ? 1 : 0;
    c.lo[d] = cut;
    c.hi[d] = m - cut;
  }
  return c;
}

}  // namespace

ComplexLevel make_complex_level(std::array<int, 2> degree, std::array<int, 2> elements,
                                Conforming conf, bool zero_boundary) {
  if (degree[0] < 1 || degree[1] < 1)
    throw std::invalid_argument("make_complex_level: degree must be at least 1");
  ComplexLevel lv;
  lv.degree = degree;
  lv.elements = elements;
  lv.conf = conf;
  lv.zero_boundary = zero_boundary;

  KnotVector full1 = make_uniform_open_knots(degree[0], elements[0]);
  KnotVector full2 = make_uniform_open_knots(degree[1], elements[1]);
  KnotVector red1 = derive_knot_vector(full1);
  KnotVector red2 = derive_knot_vector(full2);

  auto& x0 = lv.x[0];
  x0.form = 0;
  x0.conf = conf;
  x0.zero_boundary = zero_boundary;
  x0.comps = {make_component(full1, red1, full2, red2, true, true, zero_boundary)};

  auto& x1 = lv.x[1];
  x1.form = 1;
  x1.conf = conf;
  x1.zero_boundary = zero_boundary;
  if (conf == Conforming::curl)
    x1.comps = {make_component(full1, red1, full2, red2, false, true, zero_boundary),
                make_component(full1, red1, full2, red2, true, false, zero_boundary)};
  else
    x1.comps = {make_component(full1, red1, full2, red2, true, false, zero_boundary),
                make_component(full1, red1, full2, red2, false, true, zero_boundary)};

  auto& x2 = lv.x[2];
  x2.form = 2;
  x2.conf = conf;
  x2.zero_boundary = zero_boundary;
  x2.comps = {make_component(full1, red1, full2, red2, false, false, zero_boundary)};
  return lv;
}

namespace {

// Forward difference along `dir` from a full-degree source component to a
// reduced-degree target component; identity along the other direction.
void add_difference_block(RationalSparse& m, int row_offset, const FormComponent& dst,
                          int col_offset, const FormComponent& src, int dir, int sign) {
  const int other = 1 - dir;
  if (dst.lo[other] != src.lo[other] || dst.hi[other] != src.hi[other])
    throw std::logic_error("difference block: transverse windows differ");
  for (int i2 = dst.lo[1]; i2 < dst.hi[1]; ++i2)
    for (int i1 = dst.lo[0]; i1 < dst.hi[0]; ++i1) {
      std::array<int, 2> j{i1, i2};
      const int row = row_offset + dst.flat(i1, i2);
      // d_j = c_{j+1} - c_j in the differenced direction
      j[dir] += 1;
      if (j[dir] >= src.lo[dir] && j[dir] < src.hi[dir])
        m.add(row, col_offset + src.flat(j[0], j[1]), Rational(sign));
      j[dir] -= 1;
      if (j[dir] >= src.lo[dir] && j[dir] < src.hi[dir])
        m.add(row, col_offset + src.flat(j[0], j[1]), Rational(-sign));
    }
}

}  // namespace

RationalSparse incidence_d0(const ComplexLevel& lv) {
  const FormSpace& x0 = lv.x[0];
  const FormSpace& x1 = lv.x[1];
  RationalSparse m(x1.dim(), x0.dim());
  if (lv.conf == Conforming::curl) {
    // gradient: (du/dx1, du/dx2)
    add_difference_block(m, x1.comp_offset(0), x1.comps[0], 0, x0.comps[0], 0, +1);
    add_difference_block(m, x1.comp_offset(1), x1.comps[1], 0, x0.comps[0], 1, +1);
  } else {
    // vector curl: (du/dx2, -du/dx1)
    add_difference_block(m, x1.comp_offset(0), x1.comps[0], 0, x0.comps[0], 1, +1);
    add_difference_block(m, x1.comp_offset(1), x1.comps[1], 0, x0.comps[0], 0, -1);
  }
  m.finalize();
  return m;
}

RationalSparse incidence_d1(const ComplexLevel& lv) {
  const FormSpace& x1 = lv.x[1];
  const FormSpace& x2 = lv.x[2];
  RationalSparse m(x2.dim(), x1.dim());
  if (lv.conf == Conforming::curl) {
    // scalar curl: dv2/dx1 - dv1/dx2
    add_difference_block(m, 0, x2.comps[0], x1.comp_offset(1), x1.comps[1], 0, +1);
    add_difference_block(m, 0, x2.comps[0], x1.comp_offset(0), x1.comps[0], 1, -1);
  } else {
    // divergence: dv1/dx1 + dv2/dx2
    add_difference_block(m, 0, x2.comps[0], x1.comp_offset(0), x1.comps[0], 0, +1);
    add_difference_block(m, 0, x2.comps[0], x1.comp_offset(1), x1.comps[1], 1, +1);
  }
  m.finalize();
  return m;
}

std::vector<Rational> apply_derivative(const ComplexLevel& lv, int k,
                                       const std::vector<Rational>& coeff) {
  if (k < 0 || k > 1) throw std::invalid_argument("apply_derivative: k must be 0 or 1");
  RationalSparse d = (k == 0) ? incidence_d0(lv) : incidence_d1(lv);
  if (static_cast<int>(coeff.size()) != d.cols())
    throw std::invalid_argument("apply_derivative: coefficient size mismatch");
  std::vector<Rational> out(d.rows(), Rational(0));
  for (const auto& e : d.entries()) out[e.r] += e.v * coeff[e.c];
  return out;
}

}  // namespace hbsdr
