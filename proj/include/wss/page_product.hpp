#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wss/errors.hpp"
#include "wss/index_set.hpp"
#include "wss/matrix.hpp"
#include "wss/rng.hpp"
#include "wss/steenbrink.hpp"
#include "wss/strata.hpp"

namespace wss {

// A class on one stratum: coordinates in the stored basis of H^degree,
// together with its Tate twist.  Twist 0 is the untwisted ("left column")
// normalization; Gysin maps raise the twist by one.
struct GradedClass {
  int degree = 0;
  int twist = 0;
  Vec coords;
  bool operator==(const GradedClass&) const = default;
};

// A finite formal sum of stratum classes, keyed by stratum.  At most one
// graded class per stratum; accumulating mixed degrees or twists on the
// same stratum is rejected.
struct LabeledChain {
  std::map<IndexSet, GradedClass> terms;

  void add_term(const IndexSet& i, const GradedClass& c) {
    if (vec_is_zero(c.coords)) return;
    const auto it = terms.find(i);
    if (it == terms.end()) {
      terms.emplace(i, c);
      return;
    }
    if (it->second.degree != c.degree || it->second.twist != c.twist) {
      throw DimensionError("labeled chain mixes degrees on one stratum");
    }
    it->second.coords = vec_add(it->second.coords, c.coords);
    if (vec_is_zero(it->second.coords)) terms.erase(it);
  }

  bool is_zero() const { return terms.empty(); }
  bool operator==(const LabeledChain&) const = default;
};

// The signed sum of restrictions: degree and twist preserved, stratum size
// raised by one.  Absent strata contribute nothing.
inline LabeledChain d_prime(const StrataComplex& c, const LabeledChain& x) {
  LabeledChain out;
  for (const auto& [i, cls] : x.terms) {
    if (cls.coords.size() != c.h(i, cls.degree)) {
      throw DimensionError("chain coordinates do not match the stratum");
    }
    for (int j = 0; j < static_cast<int>(c.n_components); ++j) {
      if (i.contains(j) || !c.has_stratum(i.with(j))) continue;
      Vec v = c.restriction(i, j, cls.degree).apply(cls.coords);
      if (sigma(i, j) % 2 != 0) v = vec_scale(Rat(-1), v);
      out.add_term(i.with(j), GradedClass{cls.degree, cls.twist, std::move(v)});
    }
  }
  return out;
}

// The signed sum of transfers: degree raised by two, twist raised by one,
// stratum size lowered by one.  Transfers from single components land on the
// ambient germ when the complex stores one; they are what closes the square
// of the total differential at the single components.
inline LabeledChain d_double_prime(const StrataComplex& c,
                                   const LabeledChain& x) {
  LabeledChain out;
  for (const auto& [i, cls] : x.terms) {
    if (cls.coords.size() != c.h(i, cls.degree)) {
      throw DimensionError("chain coordinates do not match the stratum");
    }
    for (int u : i.elements()) {
      const IndexSet smaller = i.without(u);
      if (!c.has_stratum(smaller)) continue;
      // Same multiplicity factor as the page-level transfer sum: the residue
      // along a branch of multiplicity e carries e times the wrong-way map.
      Vec v = c.gysin_map(i, u, cls.degree).apply(cls.coords);
      v = vec_scale(Rat(c.weight(u)), std::move(v));
      if (sigma(i, u) % 2 != 0) v = vec_scale(Rat(-1), v);
      out.add_term(smaller,
                   GradedClass{cls.degree + 2, cls.twist + 1, std::move(v)});
    }
  }
  return out;
}

// The stratum product: for an admissible pair (I, J) restrict both factors
// to Y_{I u J}, multiply there, and push down along the members of J below
// max(I), first one first.  The result lives on K = (I u J) minus those
// members, in degree deg x + deg y + 2p and twist twist x + twist y + p,
// with the crossing-count sign.  Inadmissible pairs yield no value.
inline std::optional<std::pair<IndexSet, GradedClass>> theta(
    const StrataComplex& c, const IndexSet& i, const GradedClass& x,
    const IndexSet& j, const GradedClass& y) {
  if (!admissible(i, j)) return std::nullopt;
  std::vector<int> removed;
  for (int e : j.elements()) {
    if (e < i.max()) removed.push_back(e);
  }
  const int p = static_cast<int>(removed.size());
  const IndexSet u = i.unite(j);
  IndexSet target = u;
  for (int e : removed) target = target.without(e);

  GradedClass out{x.degree + y.degree + 2 * p, x.twist + y.twist + p, {}};
  if (x.coords.size() != c.h(i, x.degree) ||
      y.coords.size() != c.h(j, y.degree)) {
    throw DimensionError("product operands do not match their strata");
  }
  if (!c.has_stratum(u)) {
    // The strata do not meet; the product factors through zero.
    out.coords.assign(c.h(target, out.degree), Rat(0));
    return std::make_pair(target, std::move(out));
  }
  if (c.h(u, x.degree) > 0 && c.h(u, y.degree) > 0 &&
      c.h(u, x.degree + y.degree) > 0 &&
      c.all_cup().find(CupKey{u, x.degree, y.degree}) == c.all_cup().end()) {
    throw StratumMismatch("product requires a cup tensor at " + u.to_string() +
                          " in degrees (" + std::to_string(x.degree) + "," +
                          std::to_string(y.degree) + ")");
  }

  auto restrict_to_union = [&](const IndexSet& from, const Vec& v, int d) {
    Vec cur = v;
    IndexSet at = from;
    for (int e : u.elements()) {
      if (at.contains(e)) continue;
      cur = c.restriction(at, e, d).apply(cur);
      at = at.with(e);
    }
    return cur;
  };
  const Vec xv = restrict_to_union(i, x.coords, x.degree);
  const Vec yv = restrict_to_union(j, y.coords, y.degree);

  Vec value = c.cup_apply(u, x.degree, y.degree, xv, yv);
  IndexSet at = u;
  int d = x.degree + y.degree;
  for (int e : removed) {
    value = c.gysin_map(at, e, d).apply(value);
    at = at.without(e);
    d += 2;
  }
  if (a_exponent(i, j) % 2 != 0) value = vec_scale(Rat(-1), value);
  out.coords = std::move(value);
  return std::make_pair(target, std::move(out));
}

// Address of one page summand: slot (r, n), twist index k, stratum.
struct SummandAddress {
  int r = 0;
  int n = 0;
  int k = 0;
  IndexSet stratum;
  auto operator<=>(const SummandAddress&) const = default;
};

// An element of the first page, supported on finitely many summands.
struct E1Element {
  std::map<SummandAddress, Vec> entries;

  void add(const SummandAddress& a, const Vec& v) {
    if (vec_is_zero(v)) return;
    const auto it = entries.find(a);
    if (it == entries.end()) {
      entries.emplace(a, v);
      return;
    }
    it->second = vec_add(it->second, v);
    if (vec_is_zero(it->second)) entries.erase(it);
  }

  bool is_zero() const { return entries.empty(); }
  bool operator==(const E1Element&) const = default;
};

// Page location of a stratum class: twist t on an m-index stratum sits in
// slot (1 - m - 2t, degree + m - 1) with twist index k = t + m - 1.  Classes
// located off the page have no address.
inline std::optional<SummandAddress> locate(const E1Page& page,
                                            const IndexSet& i, int degree,
                                            int twist) {
  const int m = static_cast<int>(i.size());
  const int k = twist + m - 1;
  const int r = m - 1 - 2 * k;
  const int n = degree + m - 1;
  if (page.find_summand(r, n, k, i) == nullptr) return std::nullopt;
  return SummandAddress{r, n, k, i};
}

inline int located_twist(const SummandAddress& a) { return -(a.r + a.k); }

// Locate every term of a chain on the page; off-page terms vanish.
inline E1Element chain_to_element(const E1Page& page, const LabeledChain& x) {
  E1Element out;
  for (const auto& [i, cls] : x.terms) {
    const auto addr = locate(page, i, cls.degree, cls.twist);
    if (!addr) continue;
    out.add(*addr, cls.coords);
  }
  return out;
}

namespace detail {

// Group the entries of an element into full slot coordinate vectors.
inline std::map<SlotKey, Vec> slot_vectors(const E1Page& page,
                                           const E1Element& x) {
  std::map<SlotKey, Vec> out;
  for (const auto& [addr, v] : x.entries) {
    const auto* sm = page.find_summand(addr.r, addr.n, addr.k, addr.stratum);
    if (sm == nullptr || sm->dim != v.size()) {
      throw DimensionError("element entry does not match any page summand");
    }
    auto& slot = out[SlotKey{addr.r, addr.n}];
    if (slot.empty()) slot.assign(page.dim(addr.r, addr.n), Rat(0));
    for (std::size_t t = 0; t < v.size(); ++t) {
      slot[sm->offset + t] += v[t];
    }
  }
  return out;
}

// Split a full slot vector back into per-summand entries.
inline void scatter_slot(const E1Page& page, int r, int n, const Vec& v,
                         E1Element& out) {
  const auto* slot = page.find_slot(r, n);
  if (slot == nullptr) return;
  for (const auto& sm : slot->summands) {
    if (sm.dim == 0) continue;
    Vec part(sm.dim);
    bool nonzero = false;
    for (std::size_t t = 0; t < sm.dim; ++t) {
      part[t] = v[sm.offset + t];
      if (part[t] != 0) nonzero = true;
    }
    if (nonzero) out.add(SummandAddress{r, n, sm.k, sm.stratum}, part);
  }
}

template <typename MatOf>
E1Element apply_slotwise(const E1Page& page, const E1Element& x, int dr,
                         int dn, MatOf&& mat_of) {
  E1Element out;
  for (const auto& [key, v] : slot_vectors(page, x)) {
    const Vec image = mat_of(key.r, key.n).apply(v);
    scatter_slot(page, key.r + dr, key.n + dn, image, out);
  }
  return out;
}

}  // namespace detail

inline E1Element apply_d1(const E1Page& page, const E1Element& x) {
  return detail::apply_slotwise(page, x, -1, +1, [&page](int r, int n) {
    return page.d1(r, n);
  });
}

inline E1Element apply_d_prime(const E1Page& page, const E1Element& x) {
  return detail::apply_slotwise(page, x, -1, +1, [&page](int r, int n) {
    return page.d_prime(r, n);
  });
}

inline E1Element apply_nu(const E1Page& page, const E1Element& x) {
  return detail::apply_slotwise(page, x, -2, 0, [&page](int r, int n) {
    return page.nu(r, n);
  });
}

// The star action of an untwisted chain on a page element: componentwise
// stratum products, each landing in the slot where the weights add; target
// components off the page vanish.  The left factor must be untwisted.
inline E1Element star(const E1Page& page, const LabeledChain& a,
                      const E1Element& b) {
  const StrataComplex& c = page.complex();
  E1Element out;
  for (const auto& [i, cls] : a.terms) {
    if (cls.twist != 0) {
      throw NotLeftColumn("star left factor has a twisted term at " +
                          i.to_string());
    }
    for (const auto& [addr, bv] : b.entries) {
      const auto* sm = page.find_summand(addr.r, addr.n, addr.k, addr.stratum);
      if (sm == nullptr || sm->dim != bv.size()) {
        throw DimensionError("element entry does not match any page summand");
      }
      const GradedClass y{sm->degree, located_twist(addr), bv};
      const auto product = theta(c, i, cls, addr.stratum, y);
      if (!product) continue;
      const auto loc =
          locate(page, product->first, product->second.degree,
                 product->second.twist);
      if (!loc) continue;  // off the page
      out.add(*loc, product->second.coords);
    }
  }
  return out;
}

// Chain-level located product of two untwisted chains: the terms of the
// stratum product that stay untwisted (no push-down) survive.
inline LabeledChain chain_star(const E1Page& page, const LabeledChain& a,
                               const LabeledChain& b) {
  const E1Element out = star(page, a, chain_to_element(page, b));
  LabeledChain result;
  for (const auto& [addr, v] : out.entries) {
    const int twist = located_twist(addr);
    const auto* sm = page.find_summand(addr.r, addr.n, addr.k, addr.stratum);
    if (twist != 0) continue;  // twisted terms are not chain terms
    result.add_term(addr.stratum, GradedClass{sm->degree, twist, v});
  }
  return result;
}

// Commutation of the product with the page differential: for every
// untwisted left factor a and every page element b,
//   d1(a * b) == (d' a) * b + (-1)^{|I| - 1} a * (d1 b),
// with every term located on the page.  The report lists witnesses of
// failure; `trials` adds randomized multi-term checks on top of the
// exhaustive basis sweep.
struct LeibnizReport {
  std::vector<std::string> witnesses;
  bool ok() const { return witnesses.empty(); }
};

namespace detail {

inline bool leibniz_holds(const E1Page& page, const StrataComplex& c,
                          const LabeledChain& a, std::size_t a_size,
                          const E1Element& b) {
  const E1Element lhs = apply_d1(page, star(page, a, b));
  E1Element rhs = star(page, d_prime(c, a), b);
  E1Element second = star(page, a, apply_d1(page, b));
  const Rat sign = (a_size - 1) % 2 == 0 ? Rat(1) : Rat(-1);
  for (const auto& [addr, v] : second.entries) {
    rhs.add(addr, vec_scale(sign, v));
  }
  return lhs == rhs;
}

}  // namespace detail

inline LeibnizReport check_leibniz(const StrataComplex& c,
                                   std::size_t trials = 0,
                                   std::uint64_t seed = 0) {
  LeibnizReport rep;
  const E1Page page = build_e1(c);

  // Exhaustive sweep over basis pairs.
  for (const auto& [i, g] : c.all_strata()) {
    if (i.empty()) continue;
    for (const auto& [da, dim_a] : g.dims) {
      for (std::size_t xa = 0; xa < dim_a; ++xa) {
        LabeledChain a;
        a.add_term(i, GradedClass{da, 0, unit_vec(dim_a, xa)});
        for (const auto& [bkey, bslot] : page.slots()) {
          for (const auto& bsm : bslot.summands) {
            for (std::size_t yb = 0; yb < bsm.dim; ++yb) {
              E1Element b;
              b.add(SummandAddress{bkey.r, bkey.n, bsm.k, bsm.stratum},
                    unit_vec(bsm.dim, yb));
              if (!detail::leibniz_holds(page, c, a, i.size(), b)) {
                std::ostringstream os;
                os << "commutation fails for a on " << i.to_string()
                   << " degree " << da << " basis " << xa << ", b at (r="
                   << bkey.r << ", n=" << bkey.n << ", k=" << bsm.k << ", "
                   << bsm.stratum.to_string() << ") basis " << yb;
                rep.witnesses.push_back(os.str());
              }
            }
          }
        }
      }
    }
  }

  // Randomized multi-term checks: a spread over one stratum size, b over a
  // whole slot.
  SplitMix64 rng(seed);
  auto random_rat = [&rng]() {
    return Rat(static_cast<std::int64_t>(rng.below(7)) - 3);
  };
  const std::size_t cap = c.max_stratum_size();
  for (std::size_t t = 0; t < trials && cap > 0; ++t) {
    const std::size_t size = 1 + rng.below(cap);
    const auto strata = c.strata_of_size(size);
    if (strata.empty() || page.slots().empty()) continue;
    const int degree = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(c.max_degree() + 1)));
    LabeledChain a;
    for (const auto& i : strata) {
      Vec v(c.h(i, degree));
      for (auto& e : v) e = random_rat();
      a.add_term(i, GradedClass{degree, 0, v});
    }
    auto it = page.slots().begin();
    std::advance(it, rng.below(page.slots().size()));
    E1Element b;
    Vec bv(it->second.dim);
    for (auto& e : bv) e = random_rat();
    detail::scatter_slot(page, it->first.r, it->first.n, bv, b);
    if (a.is_zero()) continue;
    if (!detail::leibniz_holds(page, c, a, size, b)) {
      std::ostringstream os;
      os << "commutation fails on randomized trial " << t << " (size " << size
         << ", degree " << degree << ", slot r=" << it->first.r
         << " n=" << it->first.n << ")";
      rep.witnesses.push_back(os.str());
    }
  }
  return rep;
}

// Replace a closed element by the cohomologous element x - d1 M y, where y
// solves nu x = d1 y and M is the block partial inverse of the twist.  The
// result is killed by the twist (untwisted support), slot by slot.  Raises
// NotCocycle when x is not closed, when nu x is not a boundary, or when no
// twist-killed representative exists in the slot.
inline E1Element project_to_left_column(const E1Page& page,
                                        const E1Element& x) {
  E1Element out;
  for (const auto& [key, xv] : detail::slot_vectors(page, x)) {
    const int r = key.r;
    const int n = key.n;
    if (!vec_is_zero(page.d1(r, n).apply(xv))) {
      throw NotCocycle("representative is not closed");
    }
    const Vec nx = page.nu(r, n).apply(xv);
    const auto sol = solve_affine(page.d1(r - 1, n - 1), nx);
    if (!sol.feasible) {
      throw NotCocycle("twist image is not a boundary");
    }
    const Vec lift = page.nu_partial_inverse(r - 1, n - 1).apply(sol.particular);
    const Vec correction = page.d1(r + 1, n - 1).apply(lift);
    const Vec zv = vec_sub(xv, correction);
    if (!vec_is_zero(page.nu(r, n).apply(zv))) {
      throw NotCocycle("no twist-killed representative in this slot");
    }
    detail::scatter_slot(page, r, n, zv, out);
  }
  return out;
}

// Module-structure report for the built-in geometric models: on the bottom
// row (degree-zero untwisted summands) the unit chain acts as the identity,
// the action is associative, it commutes with the twist, and on curve
// models the top-degree action matches the tabulated cap product of a
// rational component.
struct CapProductReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline CapProductReport cap_product_oracle_check(const StrataComplex& c) {
  CapProductReport rep;
  if (c.max_stratum_size() == 0) return rep;
  const E1Page page = build_e1(c);

  LabeledChain unit;
  for (const auto& i : c.strata_of_size(1)) {
    if (c.h(i, 0) == 1) unit.add_term(i, GradedClass{0, 0, Vec{Rat(1)}});
  }

  // Bottom row: the degree-0 untwisted summands (k = -r).
  std::vector<std::pair<SummandAddress, std::size_t>> bottom;
  for (const auto& [key, slot] : page.slots()) {
    for (const auto& sm : slot.summands) {
      if (sm.degree == 0 && located_twist(SummandAddress{key.r, key.n, sm.k,
                                                         sm.stratum}) == 0) {
        bottom.push_back(
            {SummandAddress{key.r, key.n, sm.k, sm.stratum}, sm.dim});
      }
    }
  }

  for (const auto& [addr, dim] : bottom) {
    for (std::size_t t = 0; t < dim; ++t) {
      E1Element b;
      b.add(addr, unit_vec(dim, t));
      if (!(star(page, unit, b) == b)) {
        rep.failures.push_back("unit does not fix the bottom row at " +
                               addr.stratum.to_string());
      }
    }
  }

  // Tabulated action on curve models: a top class of a rational component
  // caps its own bottom-row unit to its own top class and kills the rest.
  if (c.max_stratum_size() <= 2) {
    for (const auto& i : c.strata_of_size(1)) {
      if (c.h(i, 0) != 1 || c.h(i, 2) != 1 || c.h(i, 1) != 0) continue;
      LabeledChain top;
      top.add_term(i, GradedClass{2, 0, Vec{Rat(1)}});
      for (const auto& [addr, dim] : bottom) {
        for (std::size_t t = 0; t < dim; ++t) {
          E1Element b;
          b.add(addr, unit_vec(dim, t));
          const E1Element got = star(page, top, b);
          E1Element expected;
          if (addr.stratum == i) {
            const auto loc = locate(page, i, 2, 0);
            if (loc) expected.add(*loc, Vec{Rat(1)});
          }
          if (!(got == expected)) {
            rep.failures.push_back("tabulated cap mismatch for the top class "
                                   "of " +
                                   i.to_string() + " on " +
                                   addr.stratum.to_string());
          }
        }
      }
    }
  }

  // Associativity and twist compatibility over seeded random triples, with
  // the right factor drawn from the bottom row.
  SplitMix64 rng(1);
  auto random_rat = [&rng]() {
    return Rat(static_cast<std::int64_t>(rng.below(5)) - 2);
  };
  auto random_chain = [&]() {
    LabeledChain a;
    const std::size_t size = 1 + rng.below(c.max_stratum_size());
    const int degree =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(c.max_degree() + 1)));
    for (const auto& i : c.strata_of_size(size)) {
      Vec v(c.h(i, degree));
      for (auto& e : v) e = random_rat();
      a.add_term(i, GradedClass{degree, 0, v});
    }
    return a;
  };
  for (std::size_t t = 0; t < 100 && !bottom.empty(); ++t) {
    const LabeledChain a = random_chain();
    const LabeledChain a2 = random_chain();
    E1Element b;
    for (const auto& [addr, dim] : bottom) {
      Vec bv(dim);
      for (auto& e : bv) e = random_rat();
      b.add(addr, bv);
    }

    if (!(star(page, chain_star(page, a, a2), b) ==
          star(page, a, star(page, a2, b)))) {
      rep.failures.push_back("associativity fails on trial " +
                             std::to_string(t));
    }
    if (!(star(page, a, apply_nu(page, b)) ==
          apply_nu(page, star(page, a, b)))) {
      rep.failures.push_back("twist compatibility fails on trial " +
                             std::to_string(t));
    }
  }
  return rep;
}

}  // namespace wss
