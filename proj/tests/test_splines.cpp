#include "doctest.h"
#include "hbsdr/splines.hpp"
#include "oracles.hpp"

#include <vector>

using hbsdr::KnotVector;
using hbsdr::Rational;

namespace {

std::vector<double> sample_points(const KnotVector& kv, int n_random) {
  std::vector<double> xs;
  for (const auto& b : kv.breakpoints) xs.push_back(b.to_double());
  for (int k = 0; k < n_random; ++k) xs.push_back(oracle::rand_unit());
  return xs;
}

}  // namespace

TEST_CASE("uniform open knot vector structure") {
  for (int p = 1; p <= 4; ++p) {
    for (int n : {1, 2, 5, 8}) {
      KnotVector kv = hbsdr::make_uniform_open_knots(p, n);
      CHECK(kv.degree == p);
      CHECK(static_cast<int>(kv.knots.size()) == n - 1 + 2 * (p + 1));
      CHECK(kv.num_basis() == n + p);
      CHECK(kv.num_elements() == n);
      CHECK(kv.knots.front() == Rational(0));
      CHECK(kv.knots.back() == Rational(1));
      for (int k = 0; k <= p; ++k) {
        CHECK(kv.knots[k] == Rational(0));
        CHECK(kv.knots[kv.knots.size() - 1 - k] == Rational(1));
      }
      for (int e = 0; e < n; ++e) CHECK(kv.breakpoints[e] == Rational(e, n));
    }
  }
}

TEST_CASE("basis evaluation matches textbook recursion") {
  for (int p = 1; p <= 4; ++p) {
    KnotVector kv = hbsdr::make_uniform_open_knots(p, 5);
    const auto& U = kv.knots_d;
    for (double x : sample_points(kv, 25)) {
      double sum = 0.0;
      for (int i = 0; i < kv.num_basis(); ++i) {
        for (int d = 0; d <= 2; ++d) {
          double ref = oracle::naive_bspline_der(U, i, p, x, d);
          CHECK(hbsdr::eval_one_basis(kv, i, x, d) == doctest::Approx(ref).epsilon(1e-11));
        }
        sum += hbsdr::eval_one_basis(kv, i, x);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));  // partition of unity
    }
  }
}

TEST_CASE("eval_basis window agrees with eval_one_basis") {
  KnotVector kv = hbsdr::make_uniform_open_knots(3, 6);
  for (double x : sample_points(kv, 15)) {
    hbsdr::BasisEval be = hbsdr::eval_basis(kv, x, 2);
    REQUIRE(static_cast<int>(be.ders.size()) == 3);
    REQUIRE(static_cast<int>(be.ders[0].size()) == kv.degree + 1);
    for (int d = 0; d <= 2; ++d)
      for (int a = 0; a <= kv.degree; ++a)
        CHECK(be.ders[d][a] ==
              doctest::Approx(hbsdr::eval_one_basis(kv, be.first + a, x, d)).epsilon(1e-12));
  }
}

TEST_CASE("endpoint interpolation") {
  KnotVector kv = hbsdr::make_uniform_open_knots(3, 4);
  CHECK(hbsdr::eval_one_basis(kv, 0, 0.0) == doctest::Approx(1.0));
  CHECK(hbsdr::eval_one_basis(kv, kv.num_basis() - 1, 1.0) == doctest::Approx(1.0));
  for (int i = 1; i < kv.num_basis(); ++i) CHECK(hbsdr::eval_one_basis(kv, i, 0.0) == 0.0);
  for (int i = 0; i + 1 < kv.num_basis(); ++i) CHECK(hbsdr::eval_one_basis(kv, i, 1.0) == 0.0);
}

TEST_CASE("support ranges are sharp") {
  for (int p = 1; p <= 4; ++p) {
    KnotVector kv = hbsdr::make_uniform_open_knots(p, 6);
    for (int i = 0; i < kv.num_basis(); ++i) {
      auto s = kv.support(i);
      for (int e = 0; e < kv.num_elements(); ++e) {
        double mid = (kv.breakpoints[e].to_double() + kv.breakpoints[e + 1].to_double()) / 2;
        double v = oracle::naive_bspline(kv.knots_d, i, p, mid);
        if (e >= s.lo && e <= s.hi)
          CHECK(v > 0.0);
        else
          CHECK(v == 0.0);
      }
    }
  }
}

TEST_CASE("greville abscissae") {
  KnotVector kv = hbsdr::make_uniform_open_knots(3, 4);
  auto g = hbsdr::greville_sites(kv);
  std::vector<Rational> expect = {Rational(0),      Rational(1, 12), Rational(3, 12),
                                  Rational(6, 12),  Rational(9, 12), Rational(11, 12),
                                  Rational(1)};
  REQUIRE(g.size() == expect.size());
  for (size_t i = 0; i < g.size(); ++i) CHECK(g[i] == expect[i]);

  // generic: strictly increasing, symmetric about 1/2 for uniform knots
  for (int p = 1; p <= 4; ++p) {
    KnotVector kw = hbsdr::make_uniform_open_knots(p, 7);
    auto gs = hbsdr::greville_sites(kw);
    REQUIRE(static_cast<int>(gs.size()) == kw.num_basis());
    for (size_t i = 0; i + 1 < gs.size(); ++i) CHECK(gs[i] < gs[i + 1]);
    for (size_t i = 0; i < gs.size(); ++i)
      CHECK(gs[i] + gs[gs.size() - 1 - i] == Rational(1));
  }
}

TEST_CASE("derived knot vector") {
  for (int p = 1; p <= 4; ++p) {
    KnotVector kv = hbsdr::make_uniform_open_knots(p, 5);
    KnotVector dkv = hbsdr::derive_knot_vector(kv);
    CHECK(dkv.degree == p - 1);
    CHECK(dkv.knots.size() == kv.knots.size() - 2);
    CHECK(dkv.num_basis() == kv.num_basis() - 1);
    for (size_t k = 0; k < dkv.knots.size(); ++k) CHECK(dkv.knots[k] == kv.knots[k + 1]);
  }
}

TEST_CASE("normalized derived basis has unit integral") {
  auto g8 = oracle::gauss8();
  for (int p = 2; p <= 4; ++p) {
    KnotVector kv = hbsdr::make_uniform_open_knots(p, 5);
    KnotVector dkv = hbsdr::derive_knot_vector(kv);
    auto w = hbsdr::curry_schoenberg_weights(dkv);
    REQUIRE(static_cast<int>(w.size()) == dkv.num_basis());
    for (int j = 0; j < dkv.num_basis(); ++j) {
      double total = 0.0;
      for (int e = 0; e < dkv.num_elements(); ++e) {
        double a = dkv.breakpoints[e].to_double(), b = dkv.breakpoints[e + 1].to_double();
        for (size_t q = 0; q < g8.x.size(); ++q) {
          double x = a + (b - a) * (g8.x[q] + 1) / 2;
          total += g8.w[q] * (b - a) / 2 * oracle::naive_bspline(dkv.knots_d, j, dkv.degree, x);
        }
      }
      CHECK(w[j].to_double() * total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivative equals difference of normalized derived basis") {
  for (int p = 2; p <= 4; ++p) {
    KnotVector kv = hbsdr::make_uniform_open_knots(p, 6);
    KnotVector dkv = hbsdr::derive_knot_vector(kv);
    auto w = hbsdr::curry_schoenberg_weights(dkv);
    auto D = [&](int j, double x) {
      if (j < 0 || j >= dkv.num_basis()) return 0.0;
      return w[j].to_double() * hbsdr::eval_one_basis(dkv, j, x);
    };
    for (double x : sample_points(kv, 20))
      for (int i = 0; i < kv.num_basis(); ++i)
        CHECK(hbsdr::eval_one_basis(kv, i, x, 1) ==
              doctest::Approx(D(i - 1, x) - D(i, x)).epsilon(1e-10));
  }
}

TEST_CASE("two-scale matrix reproduces coarse basis exactly") {
  for (int p = 1; p <= 4; ++p) {
    KnotVector kc = hbsdr::make_uniform_open_knots(p, 3);
    KnotVector kf = hbsdr::make_uniform_open_knots(p, 6);
    hbsdr::TwoScaleMatrix C = hbsdr::two_scale_matrix(kc, kf);
    REQUIRE(C.rows == kc.num_basis());
    REQUIRE(C.cols == kf.num_basis());
    // entries nonnegative, columns sum to one (partition of unity preserved)
    for (int j = 0; j < C.cols; ++j) {
      Rational colsum(0);
      for (int i = 0; i < C.rows; ++i) {
        Rational cij = C.at(i, j);
        CHECK(cij >= Rational(0));
        colsum += cij;
      }
      CHECK(colsum == Rational(1));
    }
    for (double x : sample_points(kf, 20))
      for (int i = 0; i < C.rows; ++i) {
        double lhs = hbsdr::eval_one_basis(kc, i, x);
        double rhs = 0.0;
        for (int j = 0; j < C.cols; ++j)
          rhs += C.at(i, j).to_double() * hbsdr::eval_one_basis(kf, j, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
  }
}

TEST_CASE("two-scale matrix composes across levels") {
  for (int p = 2; p <= 3; ++p) {
    KnotVector k0 = hbsdr::make_uniform_open_knots(p, 2);
    KnotVector k1 = hbsdr::make_uniform_open_knots(p, 4);
    KnotVector k2 = hbsdr::make_uniform_open_knots(p, 8);
    auto C01 = hbsdr::two_scale_matrix(k0, k1);
    auto C12 = hbsdr::two_scale_matrix(k1, k2);
    auto C02 = hbsdr::two_scale_matrix(k0, k2);
    for (int i = 0; i < C02.rows; ++i)
      for (int j = 0; j < C02.cols; ++j) {
        Rational acc(0);
        for (int k = 0; k < C01.cols; ++k) acc += C01.at(i, k) * C12.at(k, j);
        CHECK(acc == C02.at(i, j));
      }
  }
}

TEST_CASE("two-scale matrix of identical knot vectors is the identity") {
  KnotVector kv = hbsdr::make_uniform_open_knots(3, 4);
  auto C = hbsdr::two_scale_matrix(kv, kv);
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j) CHECK(C.at(i, j) == (i == j ? Rational(1) : Rational(0)));
}
