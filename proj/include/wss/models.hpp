#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <wss/errors.hpp>
#include <wss/index_set.hpp>
#include <wss/matrix.hpp>
#include <wss/rng.hpp>
#include <wss/strata.hpp>

namespace wss {

namespace detail {

// Shared scaffolding for the one-dimensional fibre models: n rational curves
// whose dual graph is either a cycle or a chain, with the ambient germ stored
// as the empty stratum.  `inter` is the intersection matrix of the components
// in the germ.
inline StrataComplex curve_configuration(int n, const Mat& inter,
                                         bool cyclic) {
  StrataComplex x;
  x.n_components = static_cast<std::size_t>(n);

  std::map<int, std::size_t> ambient;
  ambient[0] = 1;
  if (cyclic) ambient[1] = 1;  // the nerve circle
  ambient[2] = static_cast<std::size_t>(n);
  x.add_stratum({}, std::move(ambient));

  for (int i = 0; i < n; ++i) {
    x.add_stratum({i}, {{0, 1}, {2, 1}});
  }

  // Edges of the dual graph with the number of crossing points each.
  std::vector<std::pair<IndexSet, std::size_t>> edges;
  if (cyclic && n == 2) {
    edges.push_back({IndexSet{0, 1}, 2});
  } else {
    const int last = cyclic ? n : n - 1;
    for (int i = 0; i < last; ++i) {
      edges.push_back({IndexSet(std::vector<int>{i, (i + 1) % n}), 1});
    }
  }
  for (const auto& [e, pts] : edges) {
    x.add_stratum(e, {{0, pts}});
  }

  // Ambient germ maps.
  for (int i = 0; i < n; ++i) {
    x.set_rest({}, i, 0, Mat{{1}});
    Mat proj(1, static_cast<std::size_t>(n));
    proj.at(0, static_cast<std::size_t>(i)) = 1;
    x.set_rest({}, i, 2, proj);
    Mat col(static_cast<std::size_t>(n), 1);
    for (int j = 0; j < n; ++j) {
      col.at(static_cast<std::size_t>(j), 0) =
          inter.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
    }
    x.set_gysin({i}, i, 0, col);
  }

  // Double stratum maps: restriction hits every crossing point, the transfer
  // adds the point classes up.
  for (const auto& [e, pts] : edges) {
    const int i = e[0], j = e[1];
    Mat rest_col(pts, 1);
    Mat gys_row(1, pts);
    for (std::size_t t = 0; t < pts; ++t) {
      rest_col.at(t, 0) = 1;
      gys_row.at(0, t) = 1;
    }
    x.set_rest({i}, j, 0, rest_col);
    x.set_rest({j}, i, 0, rest_col);
    x.set_gysin(e, i, 0, gys_row);
    x.set_gysin(e, j, 0, gys_row);
  }

  // Cup tensors: units everywhere; points multiply componentwise.
  x.set_cup({}, 0, 0, Mat{{1}});
  if (cyclic) {
    x.set_cup({}, 0, 1, Mat::identity(1));
    x.set_cup({}, 1, 0, Mat::identity(1));
  }
  x.set_cup({}, 0, 2, Mat::identity(static_cast<std::size_t>(n)));
  x.set_cup({}, 2, 0, Mat::identity(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    x.set_cup({i}, 0, 0, Mat{{1}});
    x.set_cup({i}, 0, 2, Mat{{1}});
    x.set_cup({i}, 2, 0, Mat{{1}});
  }
  for (const auto& [e, pts] : edges) {
    Mat diag(pts, pts * pts);
    for (std::size_t t = 0; t < pts; ++t) diag.at(t, t * pts + t) = 1;
    x.set_cup(e, 0, 0, diag);
  }
  return x;
}

}  // namespace detail

// n rational curves in a cycle (nerve = n-gon): the special fibre of a
// semistable degeneration of elliptic curves, ambient germ included.
// For n == 2 the two components cross in two points.
inline StrataComplex cycle_of_p1(int n) {
  if (n < 2) throw Error("cycle_of_p1 needs at least two components");
  Mat inter(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    inter.at(i, i) = -2;
  }
  if (n == 2) {
    inter.at(0, 1) = inter.at(1, 0) = 2;
  } else {
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      inter.at(i, j) = inter.at(j, i) = 1;
    }
  }
  return detail::curve_configuration(n, inter, /*cyclic=*/true);
}

// n rational curves in a chain (contractible nerve): iterated blow-up of a
// point on the fibre of a rational family.  Self-intersections are -1 at the
// ends and -2 in the middle; a single component is the smooth fibre.
inline StrataComplex chain_of_p1(int n) {
  if (n < 1) throw Error("chain_of_p1 needs at least one component");
  Mat inter(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  if (n == 1) {
    inter.at(0, 0) = 0;
  } else {
    for (int i = 0; i < n; ++i) {
      inter.at(i, i) = (i == 0 || i == n - 1) ? -1 : -2;
    }
    for (int i = 0; i + 1 < n; ++i) {
      inter.at(i, i + 1) = inter.at(i + 1, i) = 1;
    }
  }
  return detail::curve_configuration(n, inter, /*cyclic=*/false);
}

// Four components whose nerve is the boundary of a tetrahedron, a two-sphere.
// Only degree-zero cohomology is stored; the model exists to exercise the
// nerve-topology criteria.
inline StrataComplex tetrahedron_nerve_model() {
  StrataComplex x;
  x.n_components = 4;
  std::vector<IndexSet> all;
  for (int i = 0; i < 4; ++i) all.push_back(IndexSet{i});
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) all.push_back(IndexSet{i, j});
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) all.push_back(IndexSet{i, j, k});
    }
  }
  for (const auto& s : all) {
    x.add_stratum(s, {{0, 1}});
  }
  for (const auto& s : all) {
    if (s.size() >= 3) continue;
    for (int k = 0; k < 4; ++k) {
      if (s.contains(k)) continue;
      x.set_rest(s, k, 0, Mat{{1}});
    }
    x.set_cup(s, 0, 0, Mat{{1}});
  }
  for (const auto& s : all) {
    if (s.size() == 3) x.set_cup(s, 0, 0, Mat{{1}});
  }
  return x;
}

// Disjoint union of two fibres.  Component indices of the second piece are
// shifted; ambient germs merge into a direct sum when both pieces carry one
// and are dropped otherwise.
inline StrataComplex disjoint_union(const StrataComplex& a,
                                    const StrataComplex& b) {
  StrataComplex out;
  const int na = static_cast<int>(a.n_components);
  out.n_components = a.n_components + b.n_components;
  if (!a.multiplicities.empty() || !b.multiplicities.empty()) {
    auto fill = [](const StrataComplex& c) {
      std::vector<long> m = c.multiplicities;
      if (m.empty()) m.assign(c.n_components, 1);
      return m;
    };
    out.multiplicities = fill(a);
    const auto mb = fill(b);
    out.multiplicities.insert(out.multiplicities.end(), mb.begin(), mb.end());
  }

  auto shift = [na](const IndexSet& i) {
    std::vector<int> v;
    for (int e : i.elements()) v.push_back(e + na);
    return IndexSet(v);
  };
  const bool merge_ambient = a.has_stratum({}) && b.has_stratum({});

  for (const auto& [i, g] : a.all_strata()) {
    if (!i.empty()) out.add_stratum_space(i, g);
  }
  for (const auto& [i, g] : b.all_strata()) {
    if (!i.empty()) out.add_stratum_space(shift(i), g);
  }
  if (merge_ambient) {
    GradedSpace amb;
    for (const auto& [d, n] : a.stratum({}).dims) amb.dims[d] += n;
    for (const auto& [d, n] : b.stratum({}).dims) amb.dims[d] += n;
    out.add_stratum_space({}, std::move(amb));
  }

  const auto adim = [&a](int d) {
    return a.has_stratum({}) ? a.h({}, d) : 0;
  };
  const auto bdim = [&b](int d) {
    return b.has_stratum({}) ? b.h({}, d) : 0;
  };

  auto widen_cols = [&](const Mat& m, int d, bool from_a) {
    // Extend a map off one germ summand by zero on the other summand.
    Mat w(m.rows(), adim(d) + bdim(d));
    const std::size_t off = from_a ? 0 : adim(d);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) w.at(r, off + c) = m.at(r, c);
    }
    return w;
  };
  auto widen_rows = [&](const Mat& m, int d, bool from_a) {
    Mat w(adim(d) + bdim(d), m.cols());
    const std::size_t off = from_a ? 0 : adim(d);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) w.at(off + r, c) = m.at(r, c);
    }
    return w;
  };

  auto copy_maps = [&](const StrataComplex& src, bool from_a) {
    auto relabel = [&](const IndexSet& i) { return from_a ? i : shift(i); };
    auto reindex = [&](int k) { return from_a ? k : k + na; };
    for (const auto& [key, m] : src.all_rest()) {
      if (key.source.empty()) {
        if (!merge_ambient) continue;
        out.set_rest({}, reindex(key.index), key.degree,
                     widen_cols(m, key.degree, from_a));
      } else {
        out.set_rest(relabel(key.source), reindex(key.index), key.degree, m);
      }
    }
    for (const auto& [key, m] : src.all_gysin()) {
      if (key.source.size() == 1) {
        if (!merge_ambient) continue;
        out.set_gysin(relabel(key.source), reindex(key.index), key.degree,
                      widen_rows(m, key.degree + 2, from_a));
      } else {
        out.set_gysin(relabel(key.source), reindex(key.index), key.degree, m);
      }
    }
    for (const auto& [key, m] : src.all_cup()) {
      if (key.stratum.empty()) continue;  // merged below
      out.set_cup(relabel(key.stratum), key.p, key.q, m);
    }
  };
  copy_maps(a, true);
  copy_maps(b, false);

  if (merge_ambient) {
    // Cup tensors on the merged germ: multiply within each summand.
    std::map<std::pair<int, int>, bool> degree_pairs;
    for (const auto& [key, m] : a.all_cup()) {
      if (key.stratum.empty()) degree_pairs[{key.p, key.q}] = true;
    }
    for (const auto& [key, m] : b.all_cup()) {
      if (key.stratum.empty()) degree_pairs[{key.p, key.q}] = true;
    }
    for (const auto& [pq, unused] : degree_pairs) {
      const auto [p, q] = pq;
      const std::size_t ap = adim(p), aq = adim(q), ar = adim(p + q);
      const std::size_t bp = bdim(p), bq = bdim(q), br = bdim(p + q);
      const Mat ca = a.has_stratum({}) ? a.cup_tensor({}, p, q) : Mat(0, 0);
      const Mat cb = b.has_stratum({}) ? b.cup_tensor({}, p, q) : Mat(0, 0);
      Mat merged(ar + br, (ap + bp) * (aq + bq));
      for (std::size_t i = 0; i < ap; ++i) {
        for (std::size_t j = 0; j < aq; ++j) {
          for (std::size_t r = 0; r < ar; ++r) {
            merged.at(r, i * (aq + bq) + j) = ca.at(r, i * aq + j);
          }
        }
      }
      for (std::size_t i = 0; i < bp; ++i) {
        for (std::size_t j = 0; j < bq; ++j) {
          for (std::size_t r = 0; r < br; ++r) {
            merged.at(ar + r, (ap + i) * (aq + bq) + (aq + j)) =
                cb.at(r, i * bq + j);
          }
        }
      }
      out.set_cup({}, p, q, std::move(merged));
    }
  }
  return out;
}

namespace detail {

inline Mat random_unimodular(std::size_t n, SplitMix64& rng) {
  Mat u = Mat::identity(n);
  if (n == 0) return u;
  const int ops = 2 + static_cast<int>(rng.below(5));
  for (int t = 0; t < ops; ++t) {
    if (n < 2) break;
    const std::size_t i = rng.below(n);
    const std::size_t j = rng.below(n);
    if (i == j) continue;
    const Rat c(static_cast<std::int64_t>(rng.below(5)) - 2);
    for (std::size_t col = 0; col < n; ++col) {
      u.at(i, col) += c * u.at(j, col);
    }
  }
  if (rng.below(2) == 1) {
    const std::size_t r = rng.below(n);
    for (std::size_t col = 0; col < n; ++col) u.at(r, col) = -u.at(r, col);
  }
  return u;
}

}  // namespace detail

// Conjugate every graded piece by a random unimodular basis change.  All
// identities (squares, projection formula, ring maps, page differentials)
// are basis-free, so validity is preserved while the matrices change.
inline StrataComplex gauge_conjugate(const StrataComplex& x, SplitMix64& rng) {
  StrataComplex out;
  out.n_components = x.n_components;
  out.multiplicities = x.multiplicities;

  std::map<std::pair<IndexSet, int>, Mat> fwd, bwd;
  for (const auto& [i, g] : x.all_strata()) {
    GradedSpace copy = g;
    copy.basis_labels.clear();  // labels no longer describe the new basis
    out.add_stratum_space(i, std::move(copy));
    for (const auto& [d, dim] : g.dims) {
      if (dim == 0) continue;
      Mat u = detail::random_unimodular(dim, rng);
      bwd[{i, d}] = inverse(u);
      fwd[{i, d}] = std::move(u);
    }
  }
  auto p = [&](const IndexSet& i, int d) {
    const auto it = fwd.find({i, d});
    return it == fwd.end() ? Mat::identity(x.h(i, d)) : it->second;
  };
  auto pinv = [&](const IndexSet& i, int d) {
    const auto it = bwd.find({i, d});
    return it == bwd.end() ? Mat::identity(x.h(i, d)) : it->second;
  };

  for (const auto& [key, m] : x.all_rest()) {
    out.set_rest(key.source, key.index, key.degree,
                 p(key.source.with(key.index), key.degree) * m *
                     pinv(key.source, key.degree));
  }
  for (const auto& [key, m] : x.all_gysin()) {
    out.set_gysin(key.source, key.index, key.degree,
                  p(key.source.without(key.index), key.degree + 2) * m *
                      pinv(key.source, key.degree));
  }
  for (const auto& [key, m] : x.all_cup()) {
    out.set_cup(key.stratum, key.p, key.q,
                p(key.stratum, key.p + key.q) * m *
                    kron(pinv(key.stratum, key.p), pinv(key.stratum, key.q)));
  }
  return out;
}

// Deterministic pseudo-random consistent complex: one or two of the small
// geometric models above, glued as a disjoint union and conjugated by random
// unimodular basis changes.  At most four components, degrees at most four,
// graded pieces of dimension at most three.
inline StrataComplex random_valid_complex(std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto piece = [](std::uint64_t id) -> StrataComplex {
    switch (id) {
      case 0: return chain_of_p1(1);
      case 1: return chain_of_p1(2);
      case 2: return chain_of_p1(3);
      case 3: return cycle_of_p1(2);
      case 4: return cycle_of_p1(3);
      default: return tetrahedron_nerve_model();
    }
  };
  static constexpr std::size_t kSizes[6] = {1, 2, 3, 2, 3, 4};
  const std::uint64_t first = rng.below(6);
  StrataComplex x = piece(first);
  if (kSizes[first] <= 2 && rng.below(2) == 1) {
    std::uint64_t second = rng.below(5);
    while (kSizes[second] + kSizes[first] > 4) second = rng.below(5);
    x = disjoint_union(x, piece(second));
  }
  return gauge_conjugate(x, rng);
}

}  // namespace wss
