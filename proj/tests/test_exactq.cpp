#include <catch2/catch_amalgamated.hpp>

#include <wss/matrix.hpp>
#include <wss/rational.hpp>
#include <wss/rng.hpp>

#include "oracle_bareiss.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

using wss::Mat;
using wss::Rat;
using wss::Vec;

namespace {

// Scale each row by the lcm of its denominators: row scaling preserves rank,
// and the result is an integer matrix the oracle can digest.
oracle::IntRows to_int_rows(const Mat& a) {
  oracle::IntRows out(a.rows(), std::vector<oracle::Int>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    oracle::Int scale = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      scale = boost::multiprecision::lcm(scale, denominator(a.at(i, j)));
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rat scaled = a.at(i, j) * Rat(scale);
      REQUIRE(denominator(scaled) == 1);
      out[i][j] = numerator(scaled);
    }
  }
  return out;
}

Mat random_matrix(wss::SplitMix64& rng, std::size_t rows, std::size_t cols) {
  Mat a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::int64_t num = static_cast<std::int64_t>(rng.below(11)) - 5;
      const std::int64_t dens[] = {1, 1, 1, 2, 3};
      a.at(i, j) = Rat(num, dens[rng.below(5)]);
    }
  }
  return a;
}

bool is_zero_vec(const Vec& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rational formatting") {
  CHECK(wss::to_string(Rat(-1, 2)) == "-1/2");
  CHECK(wss::to_string(Rat(7)) == "7");
  CHECK(wss::to_string(Rat(0)) == "0");
  CHECK(wss::to_string(Rat(2, 4)) == "1/2");
  CHECK(wss::to_string(wss::parse_rat("-6/-4")) == "3/2");
}

TEST_CASE("rational parsing") {
  CHECK(wss::parse_rat("-1/2") == Rat(-1, 2));
  CHECK(wss::parse_rat("2/4") == Rat(1, 2));
  CHECK(wss::parse_rat("1/-2") == Rat(-1, 2));
  CHECK(wss::parse_rat("7") == Rat(7));
  CHECK(wss::parse_rat("-0") == Rat(0));
  CHECK(wss::parse_rat("+3/5") == Rat(3, 5));

  CHECK_THROWS_AS(wss::parse_rat("1/0"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("-3/0"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat(""), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("/2"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("3/"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("1.5"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("1/2/3"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat(" 1"), wss::ParseError);
  CHECK_THROWS_AS(wss::parse_rat("x"), wss::ParseError);

  // round trip on a spread of values
  for (int num = -9; num <= 9; ++num) {
    for (int den = 1; den <= 7; ++den) {
      const Rat x(num, den);
      CHECK(wss::parse_rat(wss::to_string(x)) == x);
    }
  }
}

TEST_CASE("matrix arithmetic basics") {
  const Mat a{{1, 2}, {3, 4}};
  const Mat b{{0, 1}, {1, 0}};
  CHECK(a * b == Mat{{2, 1}, {4, 3}});
  CHECK(a + b == Mat{{1, 3}, {4, 4}});
  CHECK(a - a == Mat::zero(2, 2));
  CHECK(Mat::identity(2) * a == a);
  CHECK(a.transpose() == Mat{{1, 3}, {2, 4}});
  CHECK((a * Rat(2)) == Mat{{2, 4}, {6, 8}});
  CHECK(a.apply(Vec{Rat(1), Rat(1)}) == Vec{Rat(3), Rat(7)});

  const Mat wide{{1, 2, 3}};
  CHECK_THROWS_AS(a + wide, wss::DimensionError);
  CHECK_THROWS_AS(wide * wide, wss::DimensionError);
  CHECK_THROWS_AS(a.apply(Vec{Rat(1)}), wss::DimensionError);

  CHECK(wss::hconcat(a, b).cols() == 4);
  CHECK(wss::vconcat(a, b).rows() == 4);
  CHECK_THROWS_AS(wss::hconcat(a, wide), wss::DimensionError);
}

TEST_CASE("rref structure agrees with fraction-free oracle") {
  wss::SplitMix64 rng(0x5eedu);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng.below(6);
    const std::size_t cols = 1 + rng.below(8);
    const Mat a = random_matrix(rng, rows, cols);
    const auto res = wss::rref(a);

    // Rank matches the independent integer elimination.
    CHECK(res.pivots.size() == oracle::bareiss_rank(to_int_rows(a)));

    // Reduced-echelon shape: pivot columns strictly increase, pivot entries
    // are 1 and alone in their column, zero rows trail.
    for (std::size_t r = 0; r < res.pivots.size(); ++r) {
      if (r > 0) CHECK(res.pivots[r] > res.pivots[r - 1]);
      CHECK(res.R.at(r, res.pivots[r]) == 1);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i != r) CHECK(res.R.at(i, res.pivots[r]) == 0);
      }
      for (std::size_t j = 0; j < res.pivots[r]; ++j) {
        CHECK(res.R.at(r, j) == 0);
      }
    }
    for (std::size_t i = res.pivots.size(); i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) CHECK(res.R.at(i, j) == 0);
    }

    // Row space is preserved: stacking A on R does not increase rank.
    CHECK(oracle::bareiss_rank(to_int_rows(wss::vconcat(a, res.R))) ==
          res.pivots.size());

    // Idempotence.
    CHECK(wss::rref(res.R).R == res.R);
  }
}

TEST_CASE("kernel basis is exact, independent and complete") {
  wss::SplitMix64 rng(0xba5e5u);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng.below(5);
    const std::size_t cols = 1 + rng.below(7);
    const Mat a = random_matrix(rng, rows, cols);
    const auto basis = wss::kernel_basis(a);

    // Completeness by rank–nullity against the oracle rank.
    CHECK(basis.size() == cols - oracle::bareiss_rank(to_int_rows(a)));

    // Exactness: every basis vector is annihilated.
    for (const auto& v : basis) CHECK(is_zero_vec(a.apply(v)));

    // Independence.
    if (!basis.empty()) {
      CHECK(oracle::bareiss_rank(to_int_rows(Mat::from_columns(basis))) ==
            basis.size());
    }
  }

  // Zero-row matrix: everything is in the kernel.
  CHECK(wss::kernel_basis(Mat(0, 3)).size() == 3);
  // Identity: nothing is.
  CHECK(wss::kernel_basis(Mat::identity(3)).empty());
}

TEST_CASE("affine solve reproduces the fixed pushforward row") {
  // One equation in four unknowns with coefficient row (-2, 2, -2, 2):
  // the canonical particular solution sets all free variables to zero.
  const Mat a{{-2, 2, -2, 2}};
  const auto sol = wss::solve_affine(a, Vec{Rat(1)});
  REQUIRE(sol.feasible);
  CHECK(sol.particular == Vec{Rat(-1, 2), Rat(0), Rat(0), Rat(0)});
  CHECK(sol.nullspace.size() == 3);
  for (const auto& v : sol.nullspace) CHECK(is_zero_vec(a.apply(v)));
}

TEST_CASE("affine solve feasibility matches rank comparison") {
  wss::SplitMix64 rng(0xfeedu);
  int feasible_seen = 0;
  int infeasible_seen = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t rows = 1 + rng.below(5);
    const std::size_t cols = 1 + rng.below(6);
    const Mat a = random_matrix(rng, rows, cols);
    Vec b(rows);
    for (auto& x : b) x = Rat(static_cast<std::int64_t>(rng.below(7)) - 3);

    const auto sol = wss::solve_affine(a, b);
    const auto rank_a = oracle::bareiss_rank(to_int_rows(a));
    const auto rank_aug =
        oracle::bareiss_rank(to_int_rows(wss::hconcat(a, Mat::column(b))));
    CHECK(sol.feasible == (rank_a == rank_aug));
    if (sol.feasible) {
      ++feasible_seen;
      CHECK(a.apply(sol.particular) == b);
      CHECK(sol.nullspace.size() == cols - rank_a);
    } else {
      ++infeasible_seen;
    }

    // A right-hand side manufactured from a known solution is always feasible.
    Vec x0(cols);
    for (auto& x : x0) x = Rat(static_cast<std::int64_t>(rng.below(9)) - 4);
    const auto sol2 = wss::solve_affine(a, a.apply(x0));
    REQUIRE(sol2.feasible);
    CHECK(a.apply(sol2.particular) == a.apply(x0));
  }
  CHECK(feasible_seen > 0);
  CHECK(infeasible_seen > 0);
}

TEST_CASE("cycle incidence matrices have corank one") {
  // Oriented incidence of an n-cycle: rank n-1, kernel spanned by all-ones.
  for (std::size_t n : {4u, 5u, 6u}) {
    Mat inc(n, n);
    for (std::size_t e = 0; e < n; ++e) {
      inc.at(e, e) = 1;
      inc.at(e, (e + 1) % n) = -1;
    }
    const auto res = wss::rref(inc);
    CHECK(res.pivots.size() == n - 1);
    const auto ker = wss::kernel_basis(inc);
    REQUIRE(ker.size() == 1);
    // Proportional to the all-ones vector.
    for (std::size_t j = 1; j < n; ++j) CHECK(ker[0][j] == ker[0][0]);
    CHECK(ker[0][0] != 0);
  }
}

TEST_CASE("quotient dimension") {
  const Vec e1{Rat(1), Rat(0), Rat(0), Rat(0)};
  const Vec e12{Rat(1), Rat(1), Rat(0), Rat(0)};
  CHECK(wss::quotient_dim(4, {e1, e12}) == 2);
  CHECK(wss::quotient_dim(4, {}) == 4);
  // Dependent spanning vectors must not over-count.
  const Vec e1_3{Rat(1), Rat(0), Rat(0)};
  const Vec e1_3_twice{Rat(2), Rat(0), Rat(0)};
  CHECK(wss::quotient_dim(3, {e1_3, e1_3_twice}) == 2);
  CHECK_THROWS_AS(wss::quotient_dim(3, {e1}), wss::DimensionError);
}

TEST_CASE("subquotient coordinates") {
  const Vec e1{Rat(1), Rat(0), Rat(0)};
  const Vec e2{Rat(0), Rat(1), Rat(0)};
  const Vec e3{Rat(0), Rat(0), Rat(1)};
  Vec e1p2(3);
  e1p2[0] = 1;
  e1p2[1] = 1;

  const wss::Subquotient q({e1, e2}, {e1p2}, 3);
  REQUIRE(q.dim() == 1);
  // [e1] and [e2] are opposite classes modulo span(e1+e2).
  const Vec c1 = q.coords(e1);
  const Vec c2 = q.coords(e2);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0] == -c2[0]);
  CHECK(c1[0] != 0);
  CHECK(q.coords(e1p2) == Vec{Rat(0)});
  CHECK_THROWS_AS(q.coords(e3), wss::Error);

  // Trivial quotient.
  const wss::Subquotient full({e1, e2, e3}, {e1, e2, e3}, 3);
  CHECK(full.dim() == 0);
}

TEST_CASE("span membership") {
  const Vec e1{Rat(1), Rat(0)};
  const Vec e2{Rat(0), Rat(1)};
  Vec diag{Rat(1), Rat(1)};
  CHECK(wss::in_span({e1, e2}, diag));
  CHECK(wss::in_span({e1}, Vec{Rat(5), Rat(0)}));
  CHECK_FALSE(wss::in_span({e1}, diag));
  CHECK(wss::in_span({}, Vec{Rat(0), Rat(0)}));
  CHECK_FALSE(wss::in_span({}, diag));
}

TEST_CASE("matrix inverse") {
  const Mat a{{2, 1}, {1, 1}};
  const Mat ai = wss::inverse(a);
  CHECK(a * ai == Mat::identity(2));
  CHECK(ai * a == Mat::identity(2));
  CHECK(wss::inverse(Mat::identity(3)) == Mat::identity(3));
  CHECK_THROWS_AS(wss::inverse(Mat{{1, 2}, {2, 4}}), wss::Error);
  CHECK_THROWS_AS(wss::inverse(Mat{{1, 2}}), wss::DimensionError);

  wss::SplitMix64 rng(0x1234u);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    // Random unimodular: elementary row operations applied to the identity.
    Mat u = Mat::identity(n);
    for (int op = 0; op < 6; ++op) {
      const std::size_t i = rng.below(n), j = rng.below(n);
      if (i == j) continue;
      const Rat c(static_cast<std::int64_t>(rng.below(5)) - 2);
      for (std::size_t col = 0; col < n; ++col) {
        u.at(i, col) += c * u.at(j, col);
      }
    }
    CHECK(u * wss::inverse(u) == Mat::identity(n));
  }
}

TEST_CASE("kronecker product") {
  const Mat a{{1, 2}, {3, 4}};
  const Mat b{{0, 5}, {6, 7}};
  const Mat k = wss::kron(a, b);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 4);
  CHECK(k.at(0, 1) == 5);   // A(0,0)*B(0,1)
  CHECK(k.at(0, 3) == 10);  // A(0,1)*B(0,1)
  CHECK(k.at(3, 2) == 4 * 6);
  // Mixed-product property against plain multiplication.
  const Mat c{{1, 1}, {0, 1}};
  const Mat d{{2, 0}, {1, 1}};
  CHECK(wss::kron(a * c, b * d) == wss::kron(a, b) * wss::kron(c, d));
}

TEST_CASE("deterministic rng") {
  wss::SplitMix64 a(2026), b(2026), c(7);
  bool diverged = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    if (x != c.next()) diverged = true;
  }
  CHECK(diverged);
  wss::SplitMix64 d(99);
  for (int i = 0; i < 100; ++i) CHECK(d.below(13) < 13);
}
