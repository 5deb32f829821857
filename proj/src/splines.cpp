#include "hbsdr/splines.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hbsdr {

void KnotVector::finalize() {
  if (static_cast<int>(knots.size()) < 2 * (degree + 1))
    throw std::invalid_argument("KnotVector: too few knots");
  for (size_t i = 1; i < knots.size(); ++i)
    if (knots[i] < knots[i - 1]) throw std::invalid_argument("KnotVector: knots not sorted");
  for (int i = 0; i <= degree; ++i) {
    if (!(knots[i] == knots[0]) || !(knots[knots.size() - 1 - i] == knots.back()))
      throw std::invalid_argument("KnotVector: not open");
  }
  knots_d.resize(knots.size());
  breakpoints.clear();
  knot_breakpoint.resize(knots.size());
  for (size_t i = 0; i < knots.size(); ++i) {
    knots_d[i] = knots[i].to_double();
    if (breakpoints.empty() || !(breakpoints.back() == knots[i])) breakpoints.push_back(knots[i]);
    knot_breakpoint[i] = static_cast<int>(breakpoints.size()) - 1;
  }
  element_span.assign(num_elements(), -1);
  for (size_t i = 0; i + 1 < knots.size(); ++i)
    if (knots[i] < knots[i + 1]) element_span[knot_breakpoint[i]] = static_cast<int>(i);
  if (num_basis() < 1) throw std::invalid_argument("KnotVector: empty basis");
}

KnotVector::ElemRange KnotVector::support(int i) const {
  assert(i >= 0 && i < num_basis());
  return {knot_breakpoint[i], knot_breakpoint[i + degree + 1] - 1};
}

KnotVector make_uniform_open_knots(int degree, int n) {
  if (degree < 0 || n < 1) throw std::invalid_argument("make_uniform_open_knots: bad arguments");
  KnotVector kv;
  kv.degree = degree;
  for (int i = 0; i < degree; ++i) kv.knots.emplace_back(0);
  for (int i = 0; i <= n; ++i) kv.knots.emplace_back(i, n);
  for (int i = 0; i < degree; ++i) kv.knots.emplace_back(1);
  kv.finalize();
  return kv;
}

KnotVector derive_knot_vector(const KnotVector& kv) {
  if (kv.degree < 1) throw std::invalid_argument("derive_knot_vector: degree must be >= 1");
  KnotVector d;
  d.degree = kv.degree - 1;
  d.knots.assign(kv.knots.begin() + 1, kv.knots.end() - 1);
  d.finalize();
  return d;
}

std::vector<Rational> greville_sites(const KnotVector& kv) {
  if (kv.degree < 1) throw std::invalid_argument("greville_sites: degree must be >= 1");
  std::vector<Rational> g(kv.num_basis());
  for (int i = 0; i < kv.num_basis(); ++i) {
    Rational s(0);
    for (int a = 1; a <= kv.degree; ++a) s += kv.knots[i + a];
    g[i] = s / Rational(kv.degree);
  }
  return g;
}

std::vector<Rational> curry_schoenberg_weights(const KnotVector& derived) {
  int q = derived.degree;
  std::vector<Rational> w(derived.num_basis());
  for (int j = 0; j < derived.num_basis(); ++j) {
    Rational span = derived.knots[j + q + 1] - derived.knots[j];
    if (span.is_zero()) throw std::domain_error("curry_schoenberg_weights: zero-span function");
    w[j] = Rational(q + 1) / span;
  }
  return w;
}

namespace {

// Index j of the span [knots[j], knots[j+1]) containing x, right-continuous,
// clamped so that the span is non-empty and x = 1 lands in the last element.
int find_span(const KnotVector& kv, double x) {
  int p = kv.degree;
  int m = kv.num_basis();
  if (x <= kv.knots_d.front()) {
    int j = p;
    while (kv.knots_d[j + 1] <= kv.knots_d[j]) ++j;
    return j;
  }
  if (x >= kv.knots_d.back()) {
    int j = m - 1;
    while (kv.knots_d[j + 1] <= kv.knots_d[j]) --j;
    return j;
  }
  // last j with knots[j] <= x
  int j = static_cast<int>(std::upper_bound(kv.knots_d.begin(), kv.knots_d.end(), x) -
                           kv.knots_d.begin()) -
          1;
  j = std::clamp(j, p, m - 1);
  while (kv.knots_d[j + 1] <= kv.knots_d[j]) --j;
  return j;
}

}  // namespace

BasisEval eval_basis(const KnotVector& kv, double x, int max_deriv) {
  const int p = kv.degree;
  const auto& U = kv.knots_d;
  const int span = find_span(kv, x);
  const int nd = std::min(max_deriv, p);

  // Cox-de Boor triangle with all intermediate degrees kept (NURBS book A2.3).
  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
  std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      double temp = ndu[j][r] > 0.0 ? ndu[r][j - 1] / ndu[j][r] : 0.0;
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  BasisEval out;
  out.first = span - p;
  out.ders.assign(max_deriv + 1, std::vector<double>(p + 1, 0.0));
  for (int a = 0; a <= p; ++a) out.ders[0][a] = ndu[a][p];

  std::vector<std::vector<double>> work(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    work[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      int rk = r - k, pk = p - k;
      if (r >= k) {
        work[s2][0] = ndu[pk + 1][rk] > 0.0 ? work[s1][0] / ndu[pk + 1][rk] : 0.0;
        d = work[s2][0] * ndu[rk][pk];
      }
      int j1 = rk >= -1 ? 1 : -rk;
      int j2 = r - 1 <= pk ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        work[s2][j] = ndu[pk + 1][rk + j] > 0.0 ? (work[s1][j] - work[s1][j - 1]) / ndu[pk + 1][rk + j]
                                                : 0.0;
        d += work[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        work[s2][k] = ndu[pk + 1][r] > 0.0 ? -work[s1][k - 1] / ndu[pk + 1][r] : 0.0;
        d += work[s2][k] * ndu[r][pk];
      }
      out.ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int a = 0; a <= p; ++a) out.ders[k][a] *= factor;
    factor *= (p - k);
  }
  return out;
}

double eval_one_basis(const KnotVector& kv, int i, double x, int deriv) {
  BasisEval e = eval_basis(kv, x, deriv);
  int a = i - e.first;
  if (a < 0 || a > kv.degree) return 0.0;
  return e.ders[deriv][a];
}

Rational TwoScaleMatrix::at(int i, int j) const {
  const Row& r = row[i];
  if (j < r.start || j >= r.start + static_cast<int>(r.w.size())) return Rational(0);
  return r.w[j - r.start];
}

TwoScaleMatrix two_scale_matrix(const KnotVector& coarse, const KnotVector& fine) {
  if (coarse.degree != fine.degree)
    throw std::invalid_argument("two_scale_matrix: degree mismatch");
  // multiset inclusion check
  {
    size_t fi = 0;
    for (const Rational& k : coarse.knots) {
      while (fi < fine.knots.size() && fine.knots[fi] < k) ++fi;
      if (fi >= fine.knots.size() || !(fine.knots[fi] == k))
        throw std::invalid_argument("two_scale_matrix: knots not nested");
      ++fi;
    }
  }

  const int p = coarse.degree;
  TwoScaleMatrix R;
  R.rows = coarse.num_basis();
  R.cols = fine.num_basis();
  R.row.resize(R.rows);
  for (int i = 0; i < R.rows; ++i) {
    R.row[i].start = i;
    R.row[i].w = {Rational(1)};
  }

  // Insert the missing fine knots one by one (Boehm), composing the banded maps.
  std::vector<Rational> cur = coarse.knots;
  size_t fi = 0;
  for (const Rational& knot : fine.knots) {
    if (fi < cur.size() && cur[fi] == knot) {
      ++fi;
      continue;
    }
    // insert `knot` into cur before position fi; span index k = fi - 1
    int k = static_cast<int>(fi) - 1;
    int m = static_cast<int>(cur.size()) - p - 1;  // current basis count
    // alpha_j for blended range k-p+1 .. k
    std::vector<Rational> alpha(m + 1, Rational(0));
    auto alpha_at = [&](int j) -> Rational {
      if (j <= k - p) return Rational(1);
      if (j >= k + 1) return Rational(0);
      Rational den = cur[j + p] - cur[j];
      return (knot - cur[j]) / den;
    };
    for (int j = 0; j <= m; ++j) alpha[j] = alpha_at(j);

    // Old basis i spreads to new i (weight alpha_i) and new i+1 (weight 1-alpha_{i+1}).
    for (int r = 0; r < R.rows; ++r) {
      TwoScaleMatrix::Row& row = R.row[r];
      std::vector<Rational> nw(row.w.size() + 1, Rational(0));
      for (size_t a = 0; a < row.w.size(); ++a) {
        int i = row.start + static_cast<int>(a);
        const Rational& c = row.w[a];
        if (c.is_zero()) continue;
        Rational wi = alpha[i];
        if (!wi.is_zero()) nw[a] += c * wi;
        Rational wi1 = Rational(1) - alpha[i + 1];
        if (!wi1.is_zero()) nw[a + 1] += c * wi1;
      }
      row.w = std::move(nw);
      // trim leading/trailing zeros
      size_t lead = 0;
      while (lead + 1 < row.w.size() && row.w[lead].is_zero()) ++lead;
      size_t tail = row.w.size();
      while (tail > lead + 1 && row.w[tail - 1].is_zero()) --tail;
      row.w = std::vector<Rational>(row.w.begin() + lead, row.w.begin() + tail);
      row.start += static_cast<int>(lead);
    }
    cur.insert(cur.begin() + fi, knot);
    ++fi;
  }
  return R;
}

}  // namespace hbsdr
