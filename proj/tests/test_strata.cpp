#include <catch2/catch_amalgamated.hpp>

#include <wss/index_set.hpp>
#include <wss/strata.hpp>

#include <string>
#include <vector>

using wss::IndexSet;
using wss::Mat;
using wss::Rat;
using wss::StrataComplex;

namespace {

// Special fibre of a one-parameter family of rational curves after blowing up
// a point of the central fibre: two (-1)-curves meeting transversally in one
// point, together with the ambient surface germ as the empty-set stratum.
// Every identity the validator checks holds on the nose.
StrataComplex two_curves() {
  StrataComplex x;
  x.n_components = 2;
  x.add_stratum({}, {{0, 1}, {2, 2}});  // germ of the total space
  x.add_stratum({0}, {{0, 1}, {2, 1}});
  x.add_stratum({1}, {{0, 1}, {2, 1}});
  x.add_stratum({0, 1}, {{0, 1}});

  x.set_rest({}, 0, 0, Mat{{1}});
  x.set_rest({}, 1, 0, Mat{{1}});
  x.set_rest({}, 0, 2, Mat{{1, 0}});
  x.set_rest({}, 1, 2, Mat{{0, 1}});
  x.set_rest({0}, 1, 0, Mat{{1}});
  x.set_rest({1}, 0, 0, Mat{{1}});

  // Divisor classes against the intersection matrix [[-1,1],[1,-1]].
  x.set_gysin({0}, 0, 0, Mat{{-1}, {1}});
  x.set_gysin({1}, 1, 0, Mat{{1}, {-1}});
  x.set_gysin({0, 1}, 1, 0, Mat{{1}});  // point class into the first curve
  x.set_gysin({0, 1}, 0, 0, Mat{{1}});

  x.set_cup({}, 0, 0, Mat{{1}});
  x.set_cup({}, 0, 2, Mat::identity(2));
  x.set_cup({}, 2, 0, Mat::identity(2));
  for (int i = 0; i < 2; ++i) {
    x.set_cup({i}, 0, 0, Mat{{1}});
    x.set_cup({i}, 0, 2, Mat{{1}});
    x.set_cup({i}, 2, 0, Mat{{1}});
  }
  x.set_cup({0, 1}, 0, 0, Mat{{1}});
  return x;
}

}  // namespace

TEST_CASE("index set basics") {
  const IndexSet i{1, 3, 5};
  CHECK(i.size() == 3);
  CHECK(i.contains(3));
  CHECK_FALSE(i.contains(2));
  CHECK(i.max() == 5);
  CHECK(i.min() == 1);
  CHECK(i.with(2) == IndexSet{1, 2, 3, 5});
  CHECK(i.without(3) == IndexSet{1, 5});
  CHECK_THROWS_AS(i.with(3), wss::Error);
  CHECK_THROWS_AS(i.without(2), wss::Error);
  CHECK(IndexSet{1, 3}.subset_of(i));
  CHECK_FALSE(IndexSet{1, 2}.subset_of(i));
  CHECK(i.unite(IndexSet{0, 3}) == IndexSet{0, 1, 3, 5});
  CHECK(i.to_string() == "{1,3,5}");
  CHECK(IndexSet{}.to_string() == "{}");
  CHECK(IndexSet{1, 3} < IndexSet{1, 4});
  CHECK(IndexSet{1, 4} < IndexSet{2});

  CHECK_THROWS_AS(IndexSet(std::vector<int>{2, 2}), wss::Error);
  CHECK_THROWS_AS(IndexSet(std::vector<int>{-1}), wss::Error);
  // Unsorted input is accepted and normalized.
  CHECK(IndexSet(std::vector<int>{5, 1, 3}) == i);
}

TEST_CASE("crossing count sigma") {
  const IndexSet i{1, 3, 5};
  CHECK(wss::sigma(i, 0) == 0);
  CHECK(wss::sigma(i, 1) == 0);
  CHECK(wss::sigma(i, 2) == 1);
  CHECK(wss::sigma(i, 4) == 2);
  CHECK(wss::sigma(i, 6) == 3);
  CHECK(wss::sigma(IndexSet{}, 7) == 0);
}

TEST_CASE("admissible pairs") {
  CHECK(wss::admissible(IndexSet{0, 1}, IndexSet{1}));
  CHECK_FALSE(wss::admissible(IndexSet{0, 1}, IndexSet{0}));
  CHECK(wss::admissible(IndexSet{1, 2, 5}, IndexSet{2, 5, 7}));
  CHECK_FALSE(wss::admissible(IndexSet{1, 2, 5}, IndexSet{3, 5}));
  CHECK(wss::admissible(IndexSet{0, 1, 4}, IndexSet{4}));
  CHECK_FALSE(wss::admissible(IndexSet{0, 1, 4}, IndexSet{3, 4}));
  // the largest element of the first set must appear in the second
  CHECK_FALSE(wss::admissible(IndexSet{0, 1, 4}, IndexSet{0, 1}));
  CHECK_FALSE(wss::admissible(IndexSet{}, IndexSet{1}));
  CHECK_FALSE(wss::admissible(IndexSet{1}, IndexSet{}));
}

TEST_CASE("product sign exponent") {
  // Frozen hand evaluations of a = b_0 + ... + b_{p-1} + (|I|-1)p, where the
  // r-th element of the overlap sits at position b_r inside the first set.
  CHECK(wss::a_exponent(IndexSet{0, 6, 7}, IndexSet{0, 7}) == 2);    // even: +
  CHECK(wss::a_exponent(IndexSet{0, 6, 7}, IndexSet{6, 7}) == 3);    // odd: -
  CHECK(wss::a_exponent(IndexSet{0, 1, 4}, IndexSet{4}) == 0);       // p = 0
  CHECK(wss::a_exponent(IndexSet{0, 1}, IndexSet{1}) == 0);
  CHECK(wss::a_exponent(IndexSet{0, 1}, IndexSet{0, 1}) == 1);       // b_0=0, m=1, p=1
  CHECK(wss::a_exponent(IndexSet{1, 2, 5}, IndexSet{2, 5, 7}) == 3); // b_0=1, m=2, p=1
}

TEST_CASE("graded space") {
  wss::GradedSpace g;
  g.dims[0] = 1;
  g.dims[2] = 3;
  CHECK(g.dim(0) == 1);
  CHECK(g.dim(1) == 0);
  CHECK(g.dim(2) == 3);
  CHECK(g.top_degree() == 2);
  CHECK(wss::GradedSpace{}.top_degree() == -1);
}

TEST_CASE("strata complex accessors") {
  const StrataComplex x = two_curves();
  CHECK(x.h({0}, 0) == 1);
  CHECK(x.h({0}, 1) == 0);
  CHECK(x.h({0, 1}, 0) == 1);
  CHECK(x.h({2}, 0) == 0);  // absent stratum
  CHECK(x.has_stratum({0, 1}));
  CHECK_FALSE(x.has_stratum({2}));

  // Stored maps come back; unset maps are zero with the right shape.
  CHECK(x.restriction({0}, 1, 0) == Mat{{1}});
  CHECK(x.restriction({0}, 1, 2).rows() == 0);  // H^2 of the point is 0
  CHECK(x.gysin_map({0, 1}, 1, 0) == Mat{{1}});
  const Mat unset = x.restriction({1}, 0, 2);
  CHECK(unset.rows() == 0);
  CHECK(unset.cols() == 1);

  CHECK(x.strata_of_size(1).size() == 2);
  CHECK(x.strata_of_size(2).size() == 1);
  CHECK(x.max_stratum_size() == 2);

  // Setters reject maps whose shape disagrees with the graded pieces.
  StrataComplex bad = two_curves();
  CHECK_THROWS_AS(bad.set_rest({0}, 1, 0, Mat{{1}, {1}}), wss::DimensionError);
  CHECK_THROWS_AS(bad.set_gysin({0, 1}, 2, 0, Mat{{1}}), wss::Error);
}

TEST_CASE("validator passes a consistent complex") {
  const auto report = wss::validate(two_curves());
  CHECK(report.errors.empty());
  CHECK(report.warnings.empty());
  CHECK(report.ok());
  CHECK(report.clean());
}

TEST_CASE("validator flags a broken projection formula") {
  StrataComplex x = two_curves();
  // Scaling the unit cup on one curve breaks g(r(x) . y) = x . g(y).
  x.set_cup({0}, 0, 2, Mat{{2}});
  const auto report = wss::validate(x);
  REQUIRE_FALSE(report.errors.empty());
  bool mentions_projection = false;
  for (const auto& e : report.errors) {
    if (e.find("projection") != std::string::npos) mentions_projection = true;
  }
  CHECK(mentions_projection);
}

TEST_CASE("validator flags a broken commuting square as an error") {
  // Three components through a common point; deliberately inconsistent
  // restrictions around a square with all intermediate pieces nonzero.
  StrataComplex x;
  x.n_components = 3;
  x.add_stratum({0}, {{0, 1}});
  x.add_stratum({1}, {{0, 1}});
  x.add_stratum({2}, {{0, 1}});
  x.add_stratum({0, 1}, {{0, 1}});
  x.add_stratum({0, 2}, {{0, 1}});
  x.add_stratum({1, 2}, {{0, 1}});
  x.add_stratum({0, 1, 2}, {{0, 1}});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      x.set_rest(IndexSet{i}, j, 0, Mat{{1}});
    }
  }
  x.set_rest({0, 1}, 2, 0, Mat{{1}});
  x.set_rest({0, 2}, 1, 0, Mat{{-1}});  // poisoned route
  x.set_rest({1, 2}, 0, 0, Mat{{1}});
  const auto report = wss::validate(x);
  REQUIRE_FALSE(report.errors.empty());
  bool mentions_square = false;
  for (const auto& e : report.errors) {
    if (e.find("square") != std::string::npos) mentions_square = true;
  }
  CHECK(mentions_square);
}

TEST_CASE("validator downgrades zero-piece mismatches to truncation warnings") {
  // One route of a restriction square factors through a graded piece of
  // dimension zero; the mismatch cannot be blamed on either stored map.
  StrataComplex x;
  x.n_components = 3;
  x.add_stratum({0}, {{0, 1}});
  x.add_stratum({1}, {{0, 1}});
  x.add_stratum({2}, {{0, 1}});
  x.add_stratum({0, 1}, {{0, 1}});
  x.add_stratum({0, 2}, {});  // stratum present, degree-0 piece dropped
  x.add_stratum({1, 2}, {{0, 1}});
  x.add_stratum({0, 1, 2}, {{0, 1}});
  x.set_rest({0}, 1, 0, Mat{{1}});
  x.set_rest({0}, 2, 0, Mat(0, 1));
  x.set_rest({1}, 0, 0, Mat{{1}});
  x.set_rest({1}, 2, 0, Mat{{1}});
  x.set_rest({2}, 0, 0, Mat(0, 1));
  x.set_rest({2}, 1, 0, Mat{{1}});
  x.set_rest({0, 1}, 2, 0, Mat{{1}});
  x.set_rest({0, 2}, 1, 0, Mat(1, 0));
  x.set_rest({1, 2}, 0, 0, Mat{{1}});
  const auto report = wss::validate(x);
  CHECK(report.errors.empty());
  REQUIRE_FALSE(report.warnings.empty());
  bool mentions_truncation = false;
  for (const auto& w : report.warnings) {
    if (w.find("truncation") != std::string::npos) mentions_truncation = true;
  }
  CHECK(mentions_truncation);
}

TEST_CASE("validator structural checks") {
  StrataComplex x;
  x.n_components = 2;
  x.add_stratum({0, 1}, {{0, 1}});  // superset present, subsets missing
  auto report = wss::validate(x);
  CHECK_FALSE(report.errors.empty());

  StrataComplex y = two_curves();
  y.multiplicities = {1};  // wrong length
  report = wss::validate(y);
  CHECK_FALSE(report.errors.empty());

  StrataComplex z = two_curves();
  z.multiplicities = {1, 0};  // non-positive
  report = wss::validate(z);
  CHECK_FALSE(report.errors.empty());

  StrataComplex w;
  w.n_components = 1;
  w.add_stratum({4}, {{0, 1}});  // index out of range
  report = wss::validate(w);
  CHECK_FALSE(report.errors.empty());
}

TEST_CASE("principal one-cycle relation is reported as warning only") {
  // Poison a divisor-class column: the principal relation fails on the first
  // curve, while every square and projection identity still holds.
  StrataComplex x = two_curves();
  x.set_gysin({0}, 0, 0, Mat{{-2}, {1}});
  const auto report = wss::validate(x);
  bool principal_warning = false;
  for (const auto& w : report.warnings) {
    if (w.find("principal") != std::string::npos) principal_warning = true;
  }
  CHECK(principal_warning);
  CHECK(report.errors.empty());
}

TEST_CASE("principal relation uses declared multiplicities") {
  // Doubling a component's multiplicity unbalances the relation.
  StrataComplex x = two_curves();
  x.multiplicities = {2, 1};
  const auto report = wss::validate(x);
  CHECK(report.errors.empty());
  bool principal_warning = false;
  for (const auto& w : report.warnings) {
    if (w.find("principal") != std::string::npos) principal_warning = true;
  }
  CHECK(principal_warning);
}
