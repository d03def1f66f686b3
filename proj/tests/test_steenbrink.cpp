#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oracle_bareiss.hpp"
#include "wss/models.hpp"
#include "wss/steenbrink.hpp"

using wss::IndexSet;
using wss::Mat;
using wss::StrataComplex;
using wss::Vec;

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// Independent oracle: Betti numbers of a multigraph from its vertex-edge
// incidence matrix, rank computed by fraction-free integer elimination.
std::pair<std::size_t, std::size_t> graph_betti(
    std::size_t vertices, const std::vector<std::pair<int, int>>& edges) {
  oracle::IntRows inc(vertices, std::vector<oracle::Int>(edges.size(), 0));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[static_cast<std::size_t>(edges[e].first)][e] -= 1;
    inc[static_cast<std::size_t>(edges[e].second)][e] += 1;
  }
  const std::size_t r = oracle::bareiss_rank(inc);
  return {vertices - r, edges.size() - r};
}

// Independent oracle: Betti numbers of the boundary complex of a solid
// 3-simplex (vertices {0,1,2,3}, all six edges, all four triangles) built
// from scratch with alternating-sign simplicial boundary maps.
std::array<std::size_t, 3> tetrahedron_boundary_betti() {
  std::vector<std::array<int, 2>> edges;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) edges.push_back({a, b});
  }
  std::vector<std::array<int, 3>> faces;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (int c = b + 1; c < 4; ++c) faces.push_back({a, b, c});
    }
  }
  auto edge_index = [&](int a, int b) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e][0] == a && edges[e][1] == b) return e;
    }
    FAIL("missing edge");
    return std::size_t{0};
  };

  oracle::IntRows d1(4, std::vector<oracle::Int>(edges.size(), 0));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    d1[static_cast<std::size_t>(edges[e][0])][e] -= 1;
    d1[static_cast<std::size_t>(edges[e][1])][e] += 1;
  }
  oracle::IntRows d2(edges.size(), std::vector<oracle::Int>(faces.size(), 0));
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto [a, b, c] = faces[f];
    d2[edge_index(b, c)][f] += 1;
    d2[edge_index(a, c)][f] -= 1;
    d2[edge_index(a, b)][f] += 1;
  }
  const std::size_t r1 = oracle::bareiss_rank(d1);
  const std::size_t r2 = oracle::bareiss_rank(d2);
  return {4 - r1, edges.size() - r1 - r2, faces.size() - r2};
}

std::vector<std::pair<int, int>> cycle_edges(int n) {
  std::vector<std::pair<int, int>> edges;
  if (n == 2) return {{0, 1}, {0, 1}};
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return edges;
}

std::vector<std::pair<int, int>> chain_edges(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return edges;
}

std::vector<StrataComplex> formal_identity_fixtures() {
  std::vector<StrataComplex> out;
  out.push_back(wss::cycle_of_p1(2));
  out.push_back(wss::cycle_of_p1(3));
  out.push_back(wss::cycle_of_p1(5));
  out.push_back(wss::chain_of_p1(1));
  out.push_back(wss::chain_of_p1(3));
  out.push_back(wss::tetrahedron_nerve_model());
  out.push_back(wss::disjoint_union(wss::chain_of_p1(2), wss::cycle_of_p1(2)));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    out.push_back(wss::random_valid_complex(seed));
  }
  return out;
}

}  // namespace

TEST_CASE("first page slots enumerate strata by twist, stratum and degree") {
  const auto page = wss::build_e1(wss::cycle_of_p1(3));

  CHECK(page.dim(0, 0) == 3);   // component classes
  CHECK(page.dim(1, 1) == 3);   // double points, twist 0
  CHECK(page.dim(-1, 1) == 3);  // double points, twist 1
  CHECK(page.dim(0, 1) == 0);   // rational components have no odd classes
  CHECK(page.dim(0, 2) == 3);   // component top classes
  CHECK(page.dim(1, 0) == 0);
  CHECK(page.dim(5, 5) == 0);   // far off the page

  // Basis order inside a slot: twist ascending, then stratum, then internal.
  const auto* s = page.find_summand(0, 2, 0, IndexSet{1});
  REQUIRE(s != nullptr);
  CHECK(s->degree == 2);
  CHECK(s->offset == 1);
  CHECK(s->dim == 1);

  const auto toy = wss::build_e1(wss::tetrahedron_nerve_model());
  // Degree-2 slot at weight 0: four zero-dimensional surface pieces first,
  // then the four triple strata in lexicographic order.
  CHECK(toy.dim(0, 2) == 4);
  const auto* t = toy.find_summand(0, 2, 1, IndexSet{0, 1, 2});
  REQUIRE(t != nullptr);
  CHECK(t->offset == 0);
  const auto* t2 = toy.find_summand(0, 2, 1, IndexSet{0, 1, 3});
  REQUIRE(t2 != nullptr);
  CHECK(t2->offset == 1);
}

TEST_CASE("page differential squares to zero and intertwines the twist maps") {
  for (const auto& x : formal_identity_fixtures()) {
    const wss::E1Page page = wss::build_e1(x);  // throws if d1*d1 != 0
    for (const auto& [key, slot] : page.slots()) {
      const int r = key.r, n = key.n;
      // d1 then d1 vanishes (also enforced at build time).
      CHECK((page.d1(r - 1, n + 1) * page.d1(r, n)).is_zero());
      // The twist is a map of complexes: nu d1 == d1 nu.
      CHECK(page.nu(r - 1, n + 1) * page.d1(r, n) ==
            page.d1(r - 2, n) * page.nu(r, n));
      // The block partial inverse: N M N == N.
      CHECK(page.nu(r, n) ==
            page.nu(r, n) * page.nu_partial_inverse(r - 2, n) *
                page.nu(r, n));
    }
  }
}

TEST_CASE("page euler characteristic matches the strata count") {
  for (const auto& x : formal_identity_fixtures()) {
    const auto page = wss::build_e1(x);
    CHECK(page.euler_characteristic() == wss::strata_euler_characteristic(x));
    // Rank-nullity: passing to cohomology preserves the alternating sum.
    const auto e2 = wss::compute_e2(page);
    long e2_euler = 0;
    for (const auto& [key, slot] : e2.slots()) {
      const long sign = (key.n % 2 == 0) ? 1 : -1;
      e2_euler += sign * static_cast<long>(e2.dim(key.r, key.n));
    }
    CHECK(e2_euler == page.euler_characteristic());
  }
  // Frozen values: cycles cancel exactly, chains leave the sphere.
  CHECK(wss::build_e1(wss::cycle_of_p1(4)).euler_characteristic() == 0);
  CHECK(wss::build_e1(wss::chain_of_p1(3)).euler_characteristic() == 2);
  CHECK(wss::build_e1(wss::tetrahedron_nerve_model()).euler_characteristic() ==
        4);
}

TEST_CASE("dual complex cohomology matches brute-force incidence ranks") {
  for (int n = 2; n <= 6; ++n) {
    const auto betti = wss::dual_complex_cohomology(wss::cycle_of_p1(n));
    const auto [b0, b1] = graph_betti(static_cast<std::size_t>(n),
                                      cycle_edges(n));
    REQUIRE(betti.size() == 2);
    CHECK(betti[0] == b0);
    CHECK(betti[1] == b1);
    CHECK(betti[0] == 1);
    CHECK(betti[1] == 1);
  }
  for (int n = 2; n <= 4; ++n) {
    const auto betti = wss::dual_complex_cohomology(wss::chain_of_p1(n));
    const auto [b0, b1] = graph_betti(static_cast<std::size_t>(n),
                                      chain_edges(n));
    REQUIRE(betti.size() == 2);
    CHECK(betti[0] == b0);
    CHECK(betti[1] == b1);
  }
  CHECK(wss::dual_complex_cohomology(wss::chain_of_p1(1)) ==
        std::vector<std::size_t>{1});

  const auto toy = wss::dual_complex_cohomology(wss::tetrahedron_nerve_model());
  const auto oracle_betti = tetrahedron_boundary_betti();
  REQUIRE(toy.size() == 3);
  CHECK(toy[0] == oracle_betti[0]);
  CHECK(toy[1] == oracle_betti[1]);
  CHECK(toy[2] == oracle_betti[2]);
  CHECK(toy == (std::vector<std::size_t>{1, 0, 1}));
}

TEST_CASE("second page of a cycle degeneration") {
  for (int n : {2, 3, 5}) {
    INFO("cycle length " << n);
    const auto x = wss::cycle_of_p1(n);
    const auto page = wss::build_e1(x);
    const auto e2 = wss::compute_e2(page);

    // Weight-graded pieces of the degree-1 limit.
    CHECK(e2.dim(1, 1) == 1);
    CHECK(e2.dim(0, 1) == 0);
    CHECK(e2.dim(-1, 1) == 1);
    CHECK(e2.limit_dim(1) == 2);
    CHECK(e2.limit_dim(0) == 1);
    CHECK(e2.dim(0, 2) == 1);
    CHECK(e2.limit_dim(2) == 1);

    // The twist sends the weight-2 line isomorphically onto the weight-0 line.
    const Mat block = e2.induced_nu(1, 1);
    REQUIRE(block.rows() == 1);
    REQUIRE(block.cols() == 1);
    CHECK(block.at(0, 0) != 0);

    // First-sequence bookkeeping: the kernel of the twist on the degree-1
    // limit has the dimension of the special fibre's degree-1 cohomology,
    // which the incidence oracle computes as the graph's first Betti number.
    const Mat total = e2.limit_nu(1);
    const auto [b0, b1] = graph_betti(static_cast<std::size_t>(n),
                                      cycle_edges(n));
    CHECK(total.cols() - wss::rank(total) == b1);
    CHECK(wss::rank(total) == 1);

    // Weight symmetry holds on the nose for these fibres.
    CHECK(wss::monodromy_weight_check(page, e2).ok());
  }
}

TEST_CASE("second page coordinates name cocycles") {
  const auto x = wss::cycle_of_p1(2);
  const auto page = wss::build_e1(x);
  const auto e2 = wss::compute_e2(page);

  // The weight-2 slot is spanned by the difference of the two double points.
  REQUIRE(page.dim(1, 1) == 2);
  const Vec cocycle{wss::Rat(1), wss::Rat(-1)};
  const Vec cls = e2.coords(1, 1, cocycle);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0] != 0);

  const Vec not_closed{wss::Rat(1), wss::Rat(0)};
  CHECK_THROWS_AS(e2.coords(1, 1, not_closed), wss::NotCocycle);

  // Boundaries are named zero: the image of the component classes.
  const Mat d = page.d1(0, 0);
  REQUIRE(d.cols() == 2);
  Vec boundary(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) boundary[i] = d.at(i, 0);
  const Vec zero_class = e2.coords(-1, 1, boundary);
  REQUIRE(zero_class.size() == 1);
  CHECK(zero_class[0] == 0);
}

TEST_CASE("monodromy criteria agree with the induced twist operators") {
  const auto actual_ranks = [](const StrataComplex& x) {
    const auto e2 = wss::compute_e2(wss::build_e1(x));
    const Mat n1 = e2.limit_nu(1);
    const Mat n2 = e2.limit_nu(2);
    return std::array<std::size_t, 3>{wss::rank(n1), wss::rank(n2),
                                      wss::rank(n2 * n2)};
  };

  const auto cross_check = [&](const StrataComplex& x) {
    const auto crit = wss::monodromy_criteria(x);
    const auto [rank_n1, rank_n2, rank_n2_sq] = actual_ranks(x);
    CHECK(crit.n_zero_h1 == (rank_n1 == 0));
    CHECK(crit.n_zero_h2 == (rank_n2 == 0));
    CHECK(crit.n_squared_zero_h2 == (rank_n2_sq == 0));
  };

  SECTION("cycle fibres keep degree-1 monodromy") {
    const auto crit = wss::monodromy_criteria(wss::cycle_of_p1(3));
    CHECK_FALSE(crit.n_zero_h1);
    CHECK(crit.n_zero_h2);
    CHECK(crit.n_squared_zero_h2);
    CHECK(crit.dual_betti == (std::vector<std::size_t>{1, 1}));
    cross_check(wss::cycle_of_p1(3));
    cross_check(wss::cycle_of_p1(2));
  }

  SECTION("tree fibres are monodromy free") {
    const auto crit = wss::monodromy_criteria(wss::chain_of_p1(3));
    CHECK(crit.n_zero_h1);
    CHECK(crit.n_zero_h2);
    CHECK(crit.n_squared_zero_h2);
    cross_check(wss::chain_of_p1(3));
  }

  SECTION("a spherical nerve keeps degree-2 monodromy of full order") {
    const auto crit = wss::monodromy_criteria(wss::tetrahedron_nerve_model());
    CHECK(crit.n_zero_h1);
    CHECK_FALSE(crit.n_zero_h2);
    CHECK_FALSE(crit.n_squared_zero_h2);
    CHECK(crit.dual_betti == (std::vector<std::size_t>{1, 0, 1}));
    cross_check(wss::tetrahedron_nerve_model());
  }

  SECTION("random unions satisfy the criteria piecewise") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      INFO("seed " << seed);
      cross_check(wss::random_valid_complex(seed));
    }
  }

  SECTION("degree bound") {
    StrataComplex deep;
    deep.n_components = 1;
    deep.add_stratum(IndexSet{0}, {{0, 1}, {6, 1}});
    CHECK_THROWS_AS(wss::monodromy_criteria(deep), wss::DimensionError);
  }
}

TEST_CASE("weight symmetry report flags the fake nerve") {
  const auto check = [](const StrataComplex& x) {
    const auto page = wss::build_e1(x);
    return wss::monodromy_weight_check(page, wss::compute_e2(page));
  };
  CHECK(check(wss::cycle_of_p1(3)).ok());
  CHECK(check(wss::chain_of_p1(2)).ok());

  const auto toy = check(wss::tetrahedron_nerve_model());
  CHECK_FALSE(toy.ok());
  INFO(join(toy.failures));
  CHECK(!toy.failures.empty());
}

TEST_CASE("degree-1 limit bookkeeping for curve degenerations") {
  for (int n : {2, 3, 4}) {
    const auto report = wss::clemens_schmid_curve_check(wss::cycle_of_p1(n));
    CHECK(report.ok());
    CHECK(report.limit_h1 == 2);
    CHECK(report.normalization_h1 == 0);
    CHECK(report.weight_two_dim == 1);
    CHECK(report.weight_zero_dim == 1);
  }
  for (int n : {1, 2, 3}) {
    const auto report = wss::clemens_schmid_curve_check(wss::chain_of_p1(n));
    CHECK(report.ok());
    CHECK(report.limit_h1 == 0);
  }
  // Only defined for one-dimensional fibres.
  CHECK_THROWS_AS(
      wss::clemens_schmid_curve_check(wss::tetrahedron_nerve_model()),
      wss::DimensionError);
}
