#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wss/errors.hpp"
#include "wss/index_set.hpp"
#include "wss/matrix.hpp"
#include "wss/strata.hpp"

namespace wss {

// Sign conventions for the first-page differential.  `appendix` puts the
// crossing-count sign on both the size-raising and the size-lowering part
// and squares to zero whenever the strata data is consistent.  `section1`
// additionally applies the slot-dependent outer factors (-1)^{r+k} to the
// size-raising part and -(-1)^{k-r} to the size-lowering part; those factors
// make the two mixed compositions agree instead of cancel, so build_e1
// raises SignInconsistency on any complex where a mixed composition is
// nonzero.
enum class sign_profile { appendix, section1 };

// Page slots are indexed by the weight offset r and the total degree n: the
// slot (r, n) holds the weight n + r part of the degree-n limit cohomology.
struct SlotKey {
  int r = 0;
  int n = 0;
  auto operator<=>(const SlotKey&) const = default;
};

// One summand H^degree(Y_stratum) of a slot, twisted k times; `offset` is
// the first coordinate of the summand inside the slot basis.
struct E1Summand {
  int k = 0;
  IndexSet stratum;
  int degree = 0;
  std::size_t dim = 0;
  std::size_t offset = 0;
};

struct E1Slot {
  std::vector<E1Summand> summands;
  std::size_t dim = 0;
};

class E1Page;
inline E1Page build_e1(const StrataComplex& x,
                       sign_profile profile = sign_profile::appendix);

// The first page of the weight spectral sequence of a one-parameter
// normal-crossings degeneration, assembled from the strata data.  Summands
// are ordered by twist, then stratum, then internal basis index.  All map
// accessors fall back to zero matrices of the correct shape, so slots that
// fall off the page behave as zero.
class E1Page {
 public:
  E1Page() = default;

  const StrataComplex& complex() const { return complex_; }
  sign_profile profile() const { return profile_; }
  const std::map<SlotKey, E1Slot>& slots() const { return slots_; }

  const E1Slot* find_slot(int r, int n) const {
    const auto it = slots_.find(SlotKey{r, n});
    return it == slots_.end() ? nullptr : &it->second;
  }

  std::size_t dim(int r, int n) const {
    const auto* s = find_slot(r, n);
    return s == nullptr ? 0 : s->dim;
  }

  const E1Summand* find_summand(int r, int n, int k, const IndexSet& i) const {
    const auto* s = find_slot(r, n);
    if (s == nullptr) return nullptr;
    for (const auto& sm : s->summands) {
      if (sm.k == k && sm.stratum == i) return &sm;
    }
    return nullptr;
  }

  // Size-raising part of the differential, slot (r, n) -> (r - 1, n + 1).
  Mat d_prime(int r, int n) const { return stored(dprime_, r, n, r - 1, n + 1); }
  // Size-lowering part of the differential, slot (r, n) -> (r - 1, n + 1).
  Mat d_double_prime(int r, int n) const {
    return stored(dsecond_, r, n, r - 1, n + 1);
  }
  // Full differential d1 = d_prime + d_double_prime.
  Mat d1(int r, int n) const { return stored(d1_, r, n, r - 1, n + 1); }

  // Logarithm-of-monodromy block: slot (r, n) -> (r - 2, n), identity on
  // every summand whose target twist stays on the page, zero elsewhere.
  Mat nu(int r, int n) const { return stored(nu_, r, n, r - 2, n); }

  // Partial inverse M of the twist: slot (r, n) -> (r + 2, n), identity on
  // summands whose untwist stays on the page.  Satisfies nu * M * nu == nu.
  Mat nu_partial_inverse(int r, int n) const {
    Mat m(dim(r + 2, n), dim(r, n));
    const auto* src = find_slot(r, n);
    if (src == nullptr) return m;
    for (const auto& sm : src->summands) {
      const auto* t = find_summand(r + 2, n, sm.k - 1, sm.stratum);
      if (t == nullptr) continue;
      for (std::size_t j = 0; j < sm.dim; ++j) {
        m.at(t->offset + j, sm.offset + j) = 1;
      }
    }
    return m;
  }

  long euler_characteristic() const {
    long total = 0;
    for (const auto& [key, slot] : slots_) {
      total += (key.n % 2 == 0 ? 1L : -1L) * static_cast<long>(slot.dim);
    }
    return total;
  }

 private:
  friend E1Page build_e1(const StrataComplex&, sign_profile);

  Mat stored(const std::map<SlotKey, Mat>& table, int r, int n, int tr,
             int tn) const {
    const auto it = table.find(SlotKey{r, n});
    if (it != table.end()) return it->second;
    return Mat(dim(tr, tn), dim(r, n));
  }

  StrataComplex complex_;
  sign_profile profile_ = sign_profile::appendix;
  std::map<SlotKey, E1Slot> slots_;
  std::map<SlotKey, Mat> dprime_;
  std::map<SlotKey, Mat> dsecond_;
  std::map<SlotKey, Mat> d1_;
  std::map<SlotKey, Mat> nu_;
};

namespace detail {

inline Rat neg_pow(int e) { return e % 2 == 0 ? Rat(1) : Rat(-1); }

inline void paste_block(Mat& into, const Mat& block, std::size_t row0,
                        std::size_t col0, const Rat& scale) {
  for (std::size_t a = 0; a < block.rows(); ++a) {
    for (std::size_t b = 0; b < block.cols(); ++b) {
      into.at(row0 + a, col0 + b) += scale * block.at(a, b);
    }
  }
}

}  // namespace detail

inline E1Page build_e1(const StrataComplex& x, sign_profile profile) {
  E1Page page;
  page.complex_ = x;
  page.profile_ = profile;
  const int size_cap = static_cast<int>(x.max_stratum_size());
  if (size_cap == 0) return page;
  const int degree_cap = x.max_degree();

  // Slot tables: for fixed (r, n) the summands are H^{n-r-2k}(Y_I) over
  // twists k >= max(0, -r) and strata I with 2k + r + 1 indices.
  for (int n = 0; n <= degree_cap + size_cap - 1; ++n) {
    for (int r = 1 - size_cap; r <= size_cap - 1; ++r) {
      E1Slot slot;
      for (int k = std::max(0, -r); 2 * k + r + 1 <= size_cap; ++k) {
        const int m = 2 * k + r + 1;
        const int d = n - r - 2 * k;
        if (d < 0) continue;
        for (const auto& i : x.strata_of_size(static_cast<std::size_t>(m))) {
          E1Summand sm{k, i, d, x.h(i, d), slot.dim};
          slot.dim += sm.dim;
          slot.summands.push_back(std::move(sm));
        }
      }
      if (!slot.summands.empty()) {
        page.slots_[SlotKey{r, n}] = std::move(slot);
      }
    }
  }

  for (const auto& [key, slot] : page.slots_) {
    const int r = key.r;
    const int n = key.n;
    const std::size_t down_dim = page.dim(r - 1, n + 1);
    Mat raise(down_dim, slot.dim);
    Mat lower(down_dim, slot.dim);
    Mat twist(page.dim(r - 2, n), slot.dim);

    for (const auto& sm : slot.summands) {
      if (sm.dim == 0) continue;
      const Rat outer_raise = profile == sign_profile::appendix
                                  ? Rat(1)
                                  : detail::neg_pow(r + sm.k);
      const Rat outer_lower = profile == sign_profile::appendix
                                  ? Rat(1)
                                  : -detail::neg_pow(sm.k - r);

      for (int j = 0; j < static_cast<int>(x.n_components); ++j) {
        if (sm.stratum.contains(j)) continue;
        const IndexSet bigger = sm.stratum.with(j);
        if (!x.has_stratum(bigger)) continue;
        const auto* t = page.find_summand(r - 1, n + 1, sm.k + 1, bigger);
        if (t == nullptr || t->dim == 0) continue;
        detail::paste_block(raise, x.restriction(sm.stratum, j, sm.degree),
                            t->offset, sm.offset,
                            outer_raise * detail::neg_pow(sigma(sm.stratum, j)));
      }

      for (int u : sm.stratum.elements()) {
        const IndexSet smaller = sm.stratum.without(u);
        if (smaller.empty() || !x.has_stratum(smaller)) continue;
        const auto* t = page.find_summand(r - 1, n + 1, sm.k, smaller);
        if (t == nullptr || t->dim == 0) continue;
        // The residue along a branch of multiplicity e contributes e times
        // the geometric wrong-way map; without this factor the differential
        // fails to square to zero whenever a multiplicity exceeds one.
        detail::paste_block(lower, x.gysin_map(sm.stratum, u, sm.degree),
                            t->offset, sm.offset,
                            Rat(x.weight(u)) * outer_lower *
                                detail::neg_pow(sigma(sm.stratum, u)));
      }

      const auto* t = page.find_summand(r - 2, n, sm.k + 1, sm.stratum);
      if (t != nullptr) {
        for (std::size_t j = 0; j < sm.dim; ++j) {
          twist.at(t->offset + j, sm.offset + j) = 1;
        }
      }
    }

    page.d1_[key] = raise + lower;
    page.dprime_[key] = std::move(raise);
    page.dsecond_[key] = std::move(lower);
    page.nu_[key] = std::move(twist);
  }

  for (const auto& [key, slot] : page.slots_) {
    if (!(page.d1(key.r - 1, key.n + 1) * page.d1(key.r, key.n)).is_zero()) {
      std::ostringstream os;
      os << "page differential does not square to zero from slot (r=" << key.r
         << ", n=" << key.n << ") under the selected sign profile";
      throw SignInconsistency(os.str());
    }
  }
  return page;
}

// Alternating sum of slot dimensions, which coincides with the weighted
// count sum_{I, d} |I| * (-1)^{d + |I| - 1} h^d(Y_I): every stratum summand
// appears in exactly |I| slots, all of the same degree parity.
inline long strata_euler_characteristic(const StrataComplex& x) {
  long total = 0;
  for (const auto& [i, g] : x.all_strata()) {
    if (i.empty()) continue;  // the ambient germ never enters the page
    for (const auto& [d, h] : g.dims) {
      const long sign =
          (d + static_cast<int>(i.size()) - 1) % 2 == 0 ? 1L : -1L;
      total += sign * static_cast<long>(i.size()) * static_cast<long>(h);
    }
  }
  return total;
}

namespace detail {

// The crossing-count-signed restriction complex in one cohomological degree:
// level t is the direct sum of H^d over strata with t + 1 indices and the
// coboundary adds one index with the crossing-count sign.
struct DegreeComplex {
  std::vector<std::size_t> level_dims;
  std::vector<Mat> delta;  // delta[t] : level t -> level t + 1
};

inline DegreeComplex restriction_complex(const StrataComplex& x, int d) {
  DegreeComplex out;
  const std::size_t cap = x.max_stratum_size();
  std::vector<std::map<IndexSet, std::size_t>> offset(cap);
  out.level_dims.assign(cap, 0);
  for (std::size_t m = 1; m <= cap; ++m) {
    for (const auto& i : x.strata_of_size(m)) {
      offset[m - 1][i] = out.level_dims[m - 1];
      out.level_dims[m - 1] += x.h(i, d);
    }
  }
  for (std::size_t t = 0; t + 1 < cap; ++t) {
    Mat dm(out.level_dims[t + 1], out.level_dims[t]);
    for (const auto& [i, off] : offset[t]) {
      if (x.h(i, d) == 0) continue;
      for (int j = 0; j < static_cast<int>(x.n_components); ++j) {
        if (i.contains(j) || !x.has_stratum(i.with(j))) continue;
        paste_block(dm, x.restriction(i, j, d), offset[t + 1].at(i.with(j)),
                    off, neg_pow(sigma(i, j)));
      }
    }
    out.delta.push_back(std::move(dm));
  }
  return out;
}

}  // namespace detail

// Betti numbers of the dual complex: cohomology of the degree-0 restriction
// complex, whose level-t piece is spanned by the connected components of
// the (t+1)-fold intersections.
inline std::vector<std::size_t> dual_complex_cohomology(
    const StrataComplex& x) {
  const auto c = detail::restriction_complex(x, 0);
  const std::size_t levels = c.level_dims.size();
  std::vector<std::size_t> betti(levels, 0);
  std::vector<std::size_t> ranks(c.delta.size(), 0);
  for (std::size_t t = 0; t < c.delta.size(); ++t) ranks[t] = rank(c.delta[t]);
  for (std::size_t t = 0; t < levels; ++t) {
    std::size_t b = c.level_dims[t];
    if (t < ranks.size()) b -= ranks[t];
    if (t > 0) b -= ranks[t - 1];
    betti[t] = b;
  }
  return betti;
}

// Combinatorial monodromy predictions for fibres of dimension at most two,
// phrased through the dual complex and the degree-1 restriction map from
// components to double strata.
struct MonodromyCriteria {
  std::vector<std::size_t> dual_betti;
  bool rho2_surjective_h1 = false;
  bool n_zero_h1 = false;
  bool n_zero_h2 = false;
  bool n_squared_zero_h2 = false;
};

inline MonodromyCriteria monodromy_criteria(const StrataComplex& x) {
  if (x.max_degree() > 4) {
    throw DimensionError(
        "monodromy criteria apply to fibres with cohomology in degrees <= 4");
  }
  MonodromyCriteria out;
  out.dual_betti = dual_complex_cohomology(x);
  const auto betti = [&out](std::size_t t) {
    return t < out.dual_betti.size() ? out.dual_betti[t] : std::size_t{0};
  };
  const auto h1 = detail::restriction_complex(x, 1);
  out.rho2_surjective_h1 =
      h1.delta.empty() || rank(h1.delta[0]) == h1.level_dims[1];
  out.n_zero_h1 = betti(1) == 0;
  out.n_squared_zero_h2 = betti(2) == 0;
  out.n_zero_h2 = betti(2) == 0 && out.rho2_surjective_h1;
  return out;
}

class E2Page;
inline E2Page compute_e2(const E1Page& page);

// The second page: per slot, the cohomology of the first-page differential
// presented as a subquotient of the slot coordinate space, together with
// the induced twist blocks.
class E2Page {
 public:
  struct Slot {
    Subquotient classes;
    Mat boundary_out;  // outgoing first-page differential, for membership
    Mat induced_nu;    // block to slot (r - 2, n) in second-page coordinates
  };

  const std::map<SlotKey, Slot>& slots() const { return slots_; }

  std::size_t dim(int r, int n) const {
    const auto it = slots_.find(SlotKey{r, n});
    return it == slots_.end() ? 0 : it->second.classes.dim();
  }

  // Second-page coordinates of a first-page cocycle in slot (r, n).
  Vec coords(int r, int n, const Vec& cocycle) const {
    const auto it = slots_.find(SlotKey{r, n});
    if (it == slots_.end()) {
      if (!cocycle.empty()) {
        throw DimensionError("coordinates requested in an empty slot");
      }
      return {};
    }
    if (!vec_is_zero(it->second.boundary_out.apply(cocycle))) {
      throw NotCocycle("vector is not closed under the page differential");
    }
    return it->second.classes.coords(cocycle);
  }

  Mat induced_nu(int r, int n) const {
    const auto it = slots_.find(SlotKey{r, n});
    if (it == slots_.end()) return Mat(dim(r - 2, n), 0);
    return it->second.induced_nu;
  }

  std::size_t limit_dim(int n) const {
    std::size_t total = 0;
    for (const auto& [key, s] : slots_) {
      if (key.n == n) total += s.classes.dim();
    }
    return total;
  }

  // The induced twist on the whole degree-n limit, on the basis formed by
  // the slots of total degree n in increasing weight order.
  Mat limit_nu(int n) const {
    std::map<int, std::size_t> offset;
    std::size_t total = 0;
    for (const auto& [key, s] : slots_) {
      if (key.n != n || s.classes.dim() == 0) continue;
      offset[key.r] = total;
      total += s.classes.dim();
    }
    Mat m(total, total);
    for (const auto& [key, s] : slots_) {
      if (key.n != n || s.classes.dim() == 0) continue;
      const auto t = offset.find(key.r - 2);
      if (t == offset.end()) continue;
      detail::paste_block(m, s.induced_nu, t->second, offset.at(key.r),
                          Rat(1));
    }
    return m;
  }

 private:
  friend E2Page compute_e2(const E1Page&);
  std::map<SlotKey, Slot> slots_;
};

inline E2Page compute_e2(const E1Page& page) {
  E2Page out;
  for (const auto& [key, slot] : page.slots()) {
    Mat outgoing = page.d1(key.r, key.n);
    const Mat incoming = page.d1(key.r + 1, key.n - 1);
    std::vector<Vec> boundaries;
    for (std::size_t c = 0; c < incoming.cols(); ++c) {
      boundaries.push_back(incoming.col(c));
    }
    out.slots_.emplace(
        key, E2Page::Slot{Subquotient(kernel_basis(outgoing), boundaries,
                                      slot.dim),
                          std::move(outgoing), Mat(0, 0)});
  }
  for (auto& [key, s] : out.slots_) {
    const Mat twist = page.nu(key.r, key.n);
    const std::size_t target_dim = out.dim(key.r - 2, key.n);
    Mat block(target_dim, s.classes.dim());
    if (target_dim > 0) {
      const auto& target = out.slots_.at(SlotKey{key.r - 2, key.n});
      for (std::size_t j = 0; j < s.classes.dim(); ++j) {
        const Vec image = twist.apply(s.classes.representatives()[j]);
        const Vec c = target.classes.coords(image);
        for (std::size_t i = 0; i < c.size(); ++i) block.at(i, j) = c[i];
      }
    }
    s.induced_nu = std::move(block);
  }
  return out;
}

// Report-only check of weight symmetry: the r-fold twist should identify
// the weight n + r and weight n - r pieces of the degree-n limit.  Honest
// projective degenerations satisfy it; combinatorial toys need not.
struct WeightSymmetryReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline WeightSymmetryReport monodromy_weight_check(const E1Page& page,
                                                   const E2Page& e2) {
  WeightSymmetryReport rep;
  for (const auto& [key, slot] : page.slots()) {
    const int r = key.r;
    const int n = key.n;
    if (r < 1) continue;
    const std::size_t a = e2.dim(r, n);
    const std::size_t b = e2.dim(-r, n);
    if (a == 0 && b == 0) continue;
    std::ostringstream os;
    if (a != b) {
      os << "weight symmetry fails at degree " << n << ", offset " << r
         << ": dimensions " << a << " vs " << b;
      rep.failures.push_back(os.str());
      continue;
    }
    Mat power = e2.induced_nu(r, n);
    for (int rr = r - 2; rr > -r; rr -= 2) {
      power = e2.induced_nu(rr, n) * power;
    }
    if (rank(power) != a) {
      os << "weight symmetry fails at degree " << n << ", offset " << r
         << ": twist power has rank " << rank(power) << " on dimension " << a;
      rep.failures.push_back(os.str());
    }
  }
  return rep;
}

// Bookkeeping identity for one-dimensional fibres: the degree-1 limit is
// built from the normalization's degree-1 classes plus the two extreme
// weight pieces.
struct ClemensSchmidCurveReport {
  std::size_t limit_h1 = 0;
  std::size_t normalization_h1 = 0;
  std::size_t weight_two_dim = 0;
  std::size_t weight_zero_dim = 0;
  bool ok() const {
    return limit_h1 == normalization_h1 + weight_two_dim + weight_zero_dim;
  }
};

inline ClemensSchmidCurveReport clemens_schmid_curve_check(
    const StrataComplex& x) {
  if (x.max_stratum_size() > 2 || x.max_degree() > 2) {
    throw DimensionError(
        "degree-1 limit bookkeeping applies to one-dimensional fibres only");
  }
  const E2Page e2 = compute_e2(build_e1(x));
  ClemensSchmidCurveReport rep;
  rep.limit_h1 = e2.limit_dim(1);
  for (const auto& i : x.strata_of_size(1)) {
    rep.normalization_h1 += x.h(i, 1);
  }
  rep.weight_two_dim = e2.dim(1, 1);
  rep.weight_zero_dim = e2.dim(-1, 1);
  return rep;
}

}  // namespace wss
