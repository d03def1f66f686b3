#pragma once

// Resolved self-products of a degenerating family.  The fibre product of a
// one-parameter degeneration with itself is singular along the product of
// the double locus; blowing that locus up yields a new normal-crossings
// degeneration (the "total") fibred over the original one (the "base") by
// two projections.  These models store both strata complexes together with
// the slot-level maps between their assembled first pages: the pullbacks
// along the two projections and the pushforward along the second.  They are
// the inputs for exhibiting powers of the log monodromy as explicit cocycle
// classes on the total page.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wss/errors.hpp"
#include "wss/index_set.hpp"
#include "wss/matrix.hpp"
#include "wss/steenbrink.hpp"
#include "wss/strata.hpp"

namespace wss {

// Labeled intersection lattice: a named basis of curve classes on one
// component and its symmetric intersection matrix.  Used when coordinate
// tables of a model refer to a distinguished component by basis labels.
struct NSLattice {
  std::vector<std::string> labels;
  Mat gram;

  bool symmetric() const {
    if (gram.rows() != gram.cols()) return false;
    if (labels.size() != gram.rows()) return false;
    for (std::size_t r = 0; r < gram.rows(); ++r) {
      for (std::size_t c = r + 1; c < gram.cols(); ++c) {
        if (gram.at(r, c) != gram.at(c, r)) return false;
      }
    }
    return true;
  }
};

// One stored block of the pushforward along the second projection: the
// base slot it lands in and the matrix written in the assembled slot bases.
struct PushforwardBlock {
  SlotKey target;
  Mat m;
};

// One labeled coordinate of the candidate space for a monodromy-power
// class: a basis coordinate of the prescribed-degree cohomology of one
// deep stratum.
struct CandidateCoordinate {
  IndexSet stratum;
  std::size_t coord = 0;
  std::string label;

  bool operator==(const CandidateCoordinate&) const = default;
};

// A degeneration with the resolved self-product over it.
//
//   * base / total: the original family and the blown-up fibre product.
//   * p1_star, p2_star: pullback along the two projections, keyed by base
//     slot; each matrix maps that slot into the slot of the same bidegree
//     on the total page.  Pullback is stored exactly on the slots where it
//     commutes with the page differential (it does not below the component
//     slot: the defect is carried by the exceptional doubles, see the
//     regression tests).
//   * p2_lower: pushforward along the second projection, keyed by the
//     total slot it consumes, with its declared base target slot.  With
//     respect to the stored cup pairings it is the pairing transpose of
//     p2_star.
//   * ns: optional labeled curve basis of a distinguished component.
//   * candidate_basis: optional labeled spans, keyed by monodromy power,
//     replacing the default candidate space (all prescribed-degree
//     coordinates of the deep strata) when only a distinguished span is
//     searched.
//
// Models are built once and never mutated afterwards; all builders are
// pure functions of their arguments.
struct ProductResolutionModel {
  std::string name;
  int fibre_dimension = 1;  // complex dimension of the base fibres
  StrataComplex base;
  StrataComplex total;
  std::map<SlotKey, Mat> p1_star;
  std::map<SlotKey, Mat> p2_star;
  std::map<SlotKey, PushforwardBlock> p2_lower;
  std::optional<NSLattice> ns;
  std::map<int, std::vector<CandidateCoordinate>> candidate_basis;
};

// Alternate resolutions of the same fibre product: blowing up the
// components in an order that starts with the exceptional piece, or
// resolving the product singularity by a single small blowup.
enum class variant_ordering { exceptional_first, single_blowup };

namespace detail {

// Unit restrictions between point classes along every stored face.
inline void set_point_restrictions(StrataComplex& x) {
  for (const auto& [i, g] : x.all_strata()) {
    if (i.size() < 2) continue;
    for (int u : i.elements()) {
      x.set_rest(i.without(u), u, 0, Mat{{Rat(1)}});
    }
  }
}

// Unit restrictions between point classes along every stored face, and
// unit transfers from the deepest strata down to their facets.
inline void set_point_face_data(StrataComplex& x) {
  set_point_restrictions(x);
  for (const auto& [i, g] : x.all_strata()) {
    if (i.size() < 3) continue;
    for (int u : i.elements()) x.set_gysin(i, u, 0, Mat{{Rat(1)}});
  }
}

// Unit cup products on the point classes, with the identity action on the
// stored degree-two pieces.
inline void set_standard_cups(StrataComplex& x) {
  for (const auto& [i, g] : x.all_strata()) {
    x.set_cup(i, 0, 0, Mat{{Rat(1)}});
    const std::size_t m = x.h(i, 2);
    if (m == 0) continue;
    x.set_cup(i, 0, 2, Mat::identity(m));
    x.set_cup(i, 2, 0, Mat::identity(m));
  }
}

// Unit cup products against the point class in every stored positive
// degree, on every stratum.  Makes the module action of H^0 explicit so
// products and projection identities close without special cases.
inline void set_unit_cups(StrataComplex& x) {
  for (const auto& [i, g] : x.all_strata()) {
    for (const auto& [deg, n] : g.dims) {
      if (n == 0) continue;
      if (deg == 0) {
        x.set_cup(i, 0, 0, Mat{{Rat(1)}});
        continue;
      }
      x.set_cup(i, 0, deg, Mat::identity(n));
      x.set_cup(i, deg, 0, Mat::identity(n));
    }
  }
}

// Degree-two data of one surface component whose stored basis of H^2 is a
// lattice of curve classes: each incident double curve is recorded by its
// coordinates in that basis.  Restriction to the curve pairs the basis
// against its class; the transfer from the curve is the class itself.
struct CurveClass {
  IndexSet curve;
  Vec coords;
};

inline void set_surface_stratum_classes(StrataComplex& x,
                                         const IndexSet& surface,
                                         const Mat& gram,
                                         const std::vector<CurveClass>& classes) {
  const std::size_t dim = x.h(surface, 2);
  for (const auto& cc : classes) {
    int other = -1;
    for (int e : cc.curve.elements()) {
      if (!surface.contains(e)) other = e;
    }
    if (x.h(cc.curve, 2) > 0) {
      const Vec pairing = gram.apply(cc.coords);
      Mat row(x.h(cc.curve, 2), dim);
      for (std::size_t c = 0; c < dim; ++c) row.at(0, c) = pairing[c];
      x.set_rest(surface, other, 2, std::move(row));
    }
    Mat col(dim, 1);
    for (std::size_t r = 0; r < dim; ++r) col.at(r, 0) = cc.coords[r];
    x.set_gysin(cc.curve, other, 0, std::move(col));
  }
}

inline void set_surface_classes(StrataComplex& x, int comp, const Mat& gram,
                                const std::vector<CurveClass>& classes) {
  set_surface_stratum_classes(x, {comp}, gram, classes);
}

// A product piece: H^2 is spanned by its own double curves, listed in
// basis order.
inline void set_product_piece(StrataComplex& x, int comp,
                              const std::vector<IndexSet>& curves,
                              const Mat& gram) {
  std::vector<std::string> labels;
  std::vector<CurveClass> classes;
  for (std::size_t t = 0; t < curves.size(); ++t) {
    labels.push_back("[T" + curves[t].to_string() + "]");
    Vec e(curves.size(), Rat(0));
    e[t] = Rat(1);
    classes.push_back(CurveClass{curves[t], std::move(e)});
  }
  x.set_basis_labels({comp}, 2, std::move(labels));
  set_surface_classes(x, comp, gram, classes);
}

// A quadric piece: H^2 is spanned by the two rulings; each incident double
// curve lies in one ruling class (0 or 1).
inline void set_quadric_piece(
    StrataComplex& x, int comp,
    const std::vector<std::pair<IndexSet, int>>& curves) {
  x.set_basis_labels({comp}, 2, {"f1", "f2"});
  const Mat gram{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
  std::vector<CurveClass> classes;
  for (const auto& [curve, ruling] : curves) {
    Vec e(2, Rat(0));
    e[static_cast<std::size_t>(ruling)] = Rat(1);
    classes.push_back(CurveClass{curve, std::move(e)});
  }
  set_surface_classes(x, comp, gram, classes);
}

// Intersection matrix of the three double curves on a product piece blown
// up in one point, exceptional curve listed last: two disjoint strict
// transforms of rulings through the centre, each meeting the exceptional
// curve once.
inline Mat blown_piece_gram() {
  return Mat{{Rat(-1), Rat(0), Rat(1)},
             {Rat(0), Rat(-1), Rat(1)},
             {Rat(1), Rat(1), Rat(-1)}};
}

// The same matrix with the exceptional curve listed first.
inline Mat blown_piece_gram_exceptional_first() {
  return Mat{{Rat(-1), Rat(1), Rat(1)},
             {Rat(1), Rat(-1), Rat(0)},
             {Rat(1), Rat(0), Rat(-1)}};
}

// Two transverse rulings on an unblown product piece.
inline Mat ruling_gram() {
  return Mat{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
}

// The shared base: a one-parameter family of curves whose special fibre
// has two components crossing transversally in one point.
inline StrataComplex crossing_curve_base() {
  StrataComplex x;
  x.n_components = 2;
  x.add_stratum({0}, {{0, 1}, {2, 1}});
  x.add_stratum({1}, {{0, 1}, {2, 1}});
  x.add_stratum({0, 1}, {{0, 1}});
  x.set_basis_labels({0}, 2, {"pt"});
  x.set_basis_labels({1}, 2, {"pt"});
  set_point_face_data(x);
  x.set_gysin({0, 1}, 0, 0, Mat{{Rat(1)}});
  x.set_gysin({0, 1}, 1, 0, Mat{{Rat(1)}});
  set_standard_cups(x);
  return x;
}

// Offset of one summand inside its assembled slot.
inline std::size_t slot_offset(const E1Page& page, int r, int n, int k,
                               const IndexSet& stratum) {
  const E1Summand* sm = page.find_summand(r, n, k, stratum);
  if (sm == nullptr) {
    throw MissingStrata("page summand not assembled at (" +
                        std::to_string(r) + ", " + std::to_string(n) + ") " +
                        stratum.to_string());
  }
  return sm->offset;
}

// Column on the middle slot of the total page, keyed by double strata.
inline Mat signed_double_column(
    const E1Page& page,
    const std::vector<std::pair<IndexSet, long>>& entries) {
  Mat out(page.dim(1, 1), 1);
  for (const auto& [j, v] : entries) {
    out.at(slot_offset(page, 1, 1, 0, j), 0) = Rat(v);
  }
  return out;
}

// Pairing row on the twisted degree-two slot of the total page, keyed by
// the same double strata.
inline Mat double_pairing_row(
    const E1Page& page,
    const std::vector<std::pair<IndexSet, long>>& entries) {
  Mat out(1, page.dim(-1, 3));
  for (const auto& [j, v] : entries) {
    out.at(0, slot_offset(page, -1, 3, 1, j)) = Rat(v);
  }
  return out;
}

}  // namespace detail

// The resolved self-product of the crossing-curve degeneration, components
// blown up in the product order.
//
// The fibre product has four product pieces indexed by the pairs of base
// components; blowing up the product of the two base double points inserts
// a quadric (component 4, multiplicity two) carrying two rulings.  Each
// product piece meets two neighbouring pieces and the quadric, so its
// stored H^2 is the rank-three lattice of its double curves; four triple
// points sit on the quadric, one on each pair of incident exceptional
// curves, and each projects isomorphically to the diagonal point of the
// base double locus (label "Delta12").  H^2 of each double curve and all
// odd or higher cohomology beyond the stored span is zero for this
// configuration, so every compatibility identity closes within the stored
// truncation.
//
// Stored slot maps: p1_star and p2_star on the component slot (0,0), the
// middle slot (1,1) and the degree-two slot (0,2); p2_lower on the slot
// (-1,3) of the total page where the product of an untwisted degree-zero
// chain with a pulled-back middle-slot class lives, landing on the twisted
// middle slot (-1,1) of the base.  The stored wrong-way blocks are the
// complete nonzero pushforward data: on every other slot the wrong-way
// map vanishes for degree reasons.
inline ProductResolutionModel double_point_product_model() {
  ProductResolutionModel m;
  m.name = "double-point";
  m.fibre_dimension = 1;
  m.base = detail::crossing_curve_base();

  StrataComplex& x = m.total;
  x.n_components = 5;
  x.multiplicities = {1, 1, 1, 1, 2};
  for (int c : {0, 1, 2, 3}) x.add_stratum({c}, {{0, 1}, {2, 3}});
  x.add_stratum({4}, {{0, 1}, {2, 2}});
  const std::vector<IndexSet> doubles = {{0, 1}, {0, 2}, {0, 4}, {1, 3},
                                         {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  for (const auto& d : doubles) x.add_stratum(d, {{0, 1}, {2, 1}});
  const std::vector<IndexSet> triples = {
      {0, 1, 4}, {0, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  for (const auto& t : triples) {
    x.add_stratum(t, {{0, 1}});
    x.set_basis_labels(t, 0, {"Delta12"});
  }

  detail::set_point_face_data(x);
  detail::set_product_piece(x, 0, {{0, 1}, {0, 2}, {0, 4}},
                            detail::blown_piece_gram());
  detail::set_product_piece(x, 1, {{0, 1}, {1, 3}, {1, 4}},
                            detail::blown_piece_gram());
  detail::set_product_piece(x, 2, {{0, 2}, {2, 3}, {2, 4}},
                            detail::blown_piece_gram());
  detail::set_product_piece(x, 3, {{1, 3}, {2, 3}, {3, 4}},
                            detail::blown_piece_gram());
  detail::set_quadric_piece(
      x, 4, {{{0, 4}, 0}, {{1, 4}, 1}, {{2, 4}, 1}, {{3, 4}, 0}});
  detail::set_standard_cups(x);

  const E1Page pb = build_e1(m.base);
  const E1Page pt = build_e1(x);

  // Middle slot: signed incidence of the two diagonal sections with the
  // double curves.
  const std::vector<std::pair<IndexSet, long>> p1_entries = {
      {{0, 2}, 1}, {{0, 4}, 1}, {{1, 3}, 1},
      {{1, 4}, 1}, {{2, 4}, -1}, {{3, 4}, -1}};
  const std::vector<std::pair<IndexSet, long>> p2_entries = {
      {{0, 1}, 1}, {{0, 4}, 1}, {{1, 4}, -1},
      {{2, 3}, 1}, {{2, 4}, 1}, {{3, 4}, -1}};
  m.p1_star.emplace(SlotKey{1, 1},
                    detail::signed_double_column(pt, p1_entries));
  m.p2_star.emplace(SlotKey{1, 1},
                    detail::signed_double_column(pt, p2_entries));
  m.p2_lower.emplace(
      SlotKey{-1, 3},
      PushforwardBlock{SlotKey{-1, 1},
                       detail::double_pairing_row(pt, p2_entries)});

  // Component slot: each base component pulls back to the closure of its
  // preimage, quadric included on both sides.
  {
    Mat q1(pt.dim(0, 0), pb.dim(0, 0));
    Mat q2(pt.dim(0, 0), pb.dim(0, 0));
    auto crow = [&pt](int c) {
      return detail::slot_offset(pt, 0, 0, 0, {c});
    };
    for (int c : {0, 1, 4}) q1.at(crow(c), 0) = Rat(1);
    for (int c : {2, 3, 4}) q1.at(crow(c), 1) = Rat(1);
    for (int c : {0, 2, 4}) q2.at(crow(c), 0) = Rat(1);
    for (int c : {1, 3, 4}) q2.at(crow(c), 1) = Rat(1);
    m.p1_star.emplace(SlotKey{0, 0}, std::move(q1));
    m.p2_star.emplace(SlotKey{0, 0}, std::move(q2));
  }

  // Degree-two slot: the point class of a base component pulls back to the
  // fibre class of the projection.  On each piece over the component that
  // is the total transform of a ruling through the blown-up point — the
  // strict transform plus twice the exceptional double curve, since that
  // curve lies on the multiplicity-two quadric — and the two ruling
  // classes on the quadric cancel.  The remaining half-weighted triple
  // rows balance the two exceptional curves of each fibre so that the
  // pullback commutes with the page differential; the halves are fixed
  // only up to the common gauge and are chosen symmetrically under
  // swapping the two projection factors.
  {
    Mat f1(pt.dim(0, 2), pb.dim(0, 2));
    Mat f2(pt.dim(0, 2), pb.dim(0, 2));
    auto h2row = [&pt](int comp, std::size_t idx) {
      return detail::slot_offset(pt, 0, 2, 0, {comp}) + idx;
    };
    auto trow = [&pt](const IndexSet& t) {
      return detail::slot_offset(pt, 0, 2, 1, t);
    };
    const Rat half(1, 2);
    // First projection, fibre over component 0: pieces 0 and 1, strict
    // transforms {0,2} and {1,3}, exceptional doubles {0,4} and {1,4}.
    f1.at(h2row(0, 1), 0) = Rat(1);
    f1.at(h2row(0, 2), 0) = Rat(2);
    f1.at(h2row(1, 1), 0) = Rat(1);
    f1.at(h2row(1, 2), 0) = Rat(2);
    f1.at(trow({0, 2, 4}), 0) = half;
    f1.at(trow({1, 3, 4}), 0) = half;
    // ... and over component 1: pieces 2 and 3.
    f1.at(h2row(2, 0), 1) = Rat(1);
    f1.at(h2row(2, 2), 1) = Rat(2);
    f1.at(h2row(3, 0), 1) = Rat(1);
    f1.at(h2row(3, 2), 1) = Rat(2);
    f1.at(trow({0, 2, 4}), 1) = -half;
    f1.at(trow({1, 3, 4}), 1) = -half;
    // Second projection, fibre over component 0: pieces 0 and 2.
    f2.at(h2row(0, 0), 0) = Rat(1);
    f2.at(h2row(0, 2), 0) = Rat(2);
    f2.at(h2row(2, 1), 0) = Rat(1);
    f2.at(h2row(2, 2), 0) = Rat(2);
    f2.at(trow({0, 1, 4}), 0) = half;
    f2.at(trow({2, 3, 4}), 0) = half;
    // ... and over component 1: pieces 1 and 3.
    f2.at(h2row(1, 0), 1) = Rat(1);
    f2.at(h2row(1, 2), 1) = Rat(2);
    f2.at(h2row(3, 1), 1) = Rat(1);
    f2.at(h2row(3, 2), 1) = Rat(2);
    f2.at(trow({0, 1, 4}), 1) = -half;
    f2.at(trow({2, 3, 4}), 1) = -half;
    m.p1_star.emplace(SlotKey{0, 2}, std::move(f1));
    m.p2_star.emplace(SlotKey{0, 2}, std::move(f2));
  }

  return m;
}

// Alternate resolutions of the same fibre product.  Both keep the
// crossing-curve base; only the total changes.
//
//   * exceptional_first: the blow-up order puts the exceptional quadric
//     first (component 0, multiplicity two); the four product pieces each
//     carry one exceptional curve ({0,i}) and two strict transforms.
//   * single_blowup: the product singularity admits a small resolution
//     obtained by one blowup of a Weil divisor; no multiplicity-two piece
//     appears.  Components 0 and 1 are the unblown mixed pieces, 2 and 3
//     the two pieces blown up in one point each, and they share the single
//     exceptional curve {2,3}, whose two poles are the triple points.
//     Components 0 and 1 are disjoint.
//
// Stored slot maps: p1_star and p2_star on the middle slot (1,1), and
// p2_lower on (-1,3) landing on (-1,1); the diagonal sections again project
// isomorphically to the diagonal point downstairs (labels "Delta12").
inline ProductResolutionModel double_point_variant(variant_ordering v) {
  ProductResolutionModel m;
  m.fibre_dimension = 1;
  m.base = detail::crossing_curve_base();
  StrataComplex& x = m.total;

  std::vector<std::pair<IndexSet, long>> p1_entries;
  std::vector<std::pair<IndexSet, long>> p2_entries;

  if (v == variant_ordering::exceptional_first) {
    m.name = "double-point:exceptional-first";
    x.n_components = 5;
    x.multiplicities = {2, 1, 1, 1, 1};
    x.add_stratum({0}, {{0, 1}, {2, 2}});
    for (int c : {1, 2, 3, 4}) x.add_stratum({c}, {{0, 1}, {2, 3}});
    const std::vector<IndexSet> doubles = {{0, 1}, {0, 2}, {0, 3}, {0, 4},
                                           {1, 2}, {1, 3}, {2, 4}, {3, 4}};
    for (const auto& d : doubles) x.add_stratum(d, {{0, 1}, {2, 1}});
    const std::vector<IndexSet> triples = {
        {0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 4}};
    for (const auto& t : triples) {
      x.add_stratum(t, {{0, 1}});
      x.set_basis_labels(t, 0, {"Delta12"});
    }
    detail::set_point_face_data(x);
    detail::set_quadric_piece(
        x, 0, {{{0, 1}, 0}, {{0, 2}, 1}, {{0, 3}, 1}, {{0, 4}, 0}});
    detail::set_product_piece(x, 1, {{0, 1}, {1, 2}, {1, 3}},
                              detail::blown_piece_gram_exceptional_first());
    detail::set_product_piece(x, 2, {{0, 2}, {1, 2}, {2, 4}},
                              detail::blown_piece_gram_exceptional_first());
    detail::set_product_piece(x, 3, {{0, 3}, {1, 3}, {3, 4}},
                              detail::blown_piece_gram_exceptional_first());
    detail::set_product_piece(x, 4, {{0, 4}, {2, 4}, {3, 4}},
                              detail::blown_piece_gram_exceptional_first());
    detail::set_standard_cups(x);

    p1_entries = {{{0, 1}, -1}, {{0, 2}, -1}, {{0, 3}, 1},
                  {{0, 4}, 1},  {{1, 3}, 1},  {{2, 4}, 1}};
    p2_entries = {{{0, 1}, -1}, {{0, 2}, 1}, {{0, 3}, -1},
                  {{0, 4}, 1},  {{1, 2}, 1}, {{3, 4}, 1}};
  } else {
    m.name = "double-point:single-blowup";
    x.n_components = 4;
    x.multiplicities = {1, 1, 1, 1};
    for (int c : {0, 1}) x.add_stratum({c}, {{0, 1}, {2, 2}});
    for (int c : {2, 3}) x.add_stratum({c}, {{0, 1}, {2, 3}});
    const std::vector<IndexSet> doubles = {
        {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& d : doubles) x.add_stratum(d, {{0, 1}, {2, 1}});
    for (const auto& t : std::vector<IndexSet>{{0, 2, 3}, {1, 2, 3}}) {
      x.add_stratum(t, {{0, 1}});
      x.set_basis_labels(t, 0, {"Delta12"});
    }
    detail::set_point_face_data(x);
    detail::set_product_piece(x, 0, {{0, 2}, {0, 3}}, detail::ruling_gram());
    detail::set_product_piece(x, 1, {{1, 2}, {1, 3}}, detail::ruling_gram());
    detail::set_product_piece(x, 2, {{0, 2}, {1, 2}, {2, 3}},
                              detail::blown_piece_gram());
    detail::set_product_piece(x, 3, {{0, 3}, {1, 3}, {2, 3}},
                              detail::blown_piece_gram());
    detail::set_standard_cups(x);

    p1_entries = {{{0, 2}, 1}, {{1, 3}, -1}, {{2, 3}, -1}};
    p2_entries = {{{0, 3}, -1}, {{1, 2}, 1}, {{2, 3}, -1}};
  }

  const E1Page pt = build_e1(x);
  m.p1_star.emplace(SlotKey{1, 1},
                    detail::signed_double_column(pt, p1_entries));
  m.p2_star.emplace(SlotKey{1, 1},
                    detail::signed_double_column(pt, p2_entries));
  m.p2_lower.emplace(
      SlotKey{-1, 3},
      PushforwardBlock{SlotKey{-1, 1},
                       detail::double_pairing_row(pt, p2_entries)});
  return m;
}

namespace detail {

// The shared base of the surface models: a one-parameter family whose
// special fibre has three surface components crossing pairwise along three
// double curves that all pass through one triple point.  Each double curve
// carries one stored odd class v_{jk}; the stored grading is the span those
// classes and the point classes generate, which is closed under every map
// the product evaluation uses.
inline StrataComplex triple_locus_base() {
  StrataComplex x;
  x.n_components = 3;
  for (int c : {0, 1, 2}) x.add_stratum({c}, {{0, 1}});
  for (const IndexSet& j :
       std::vector<IndexSet>{{0, 1}, {0, 2}, {1, 2}}) {
    x.add_stratum(j, {{0, 1}, {1, 1}});
  }
  x.set_basis_labels({0, 1}, 1, {"v_{12}"});
  x.set_basis_labels({0, 2}, 1, {"v_{13}"});
  x.set_basis_labels({1, 2}, 1, {"v_{23}"});
  x.add_stratum({0, 1, 2}, {{0, 1}});
  set_point_restrictions(x);
  set_unit_cups(x);
  return x;
}

}  // namespace detail

// The resolved self-product of the three-surface degeneration over
// detail::triple_locus_base().  The nine components are indexed by ordered
// pairs of base branches: 0..5 are the six products of distinct branches
// (0: 1x2, 1: 1x3, 2: 2x1, 3: 2x3, 4: 3x1, 5: 3x2, recording first and
// second projection images) and 6, 7, 8 dominate the three self-products
// 1x1, 2x2, 3x3.  The resolution leaves exactly six quintuple strata, one
// per cyclic neighbouring pair of off-diagonal components; every stratum of
// the model is a face of one of those six charts (9 components, 27 doubles,
// 37 triples, 24 quadruples).
//
// Distinguished pieces of the stored grading:
//
//   * every double stratum carries one odd class, the pullback of the v
//     class of the base double curve under the projection that maps it
//     there, and the nine doubles that are product targets also carry its
//     degree-five twist v(1);
//   * the six diagonal surfaces (one per ordered pair of base branches)
//     carry the restricted odd class, the diagonal curve class (labelled
//     delta), and their product;
//   * the surface on {6,7,8} is a product of two lines blown up in two
//     points; its rank-four curve lattice in the basis (F1, F2, E1, E2) is
//     stored as the model's NS data, and the six strict-transform curves
//     cut by the components 0..5 have the listed lattice coordinates;
//   * the diagonal surface on {5,7,8} needs a rank-two degree-two piece
//     (the diagonal plus the curve cut by the chart quadruple {6,7,8}+5,
//     labelled [T_{6789}]) because the product evaluation routes through
//     both of its degree-two chart restrictions;
//   * the seven quadruple curves that receive a diagonal-surface
//     restriction carry a point class in degree two, and the six triple
//     surfaces that the second projection maps isomorphically onto the
//     base triple point carry a point class in degree four.
//
// Everything outside this span is stored as zero; each identity the
// validator checks then either closes exactly or factors through one of
// those zero pieces (reported as truncation warnings, never errors).
//
// Stored slot maps: p1_star and p2_star on the middle slot (1,2) (the
// signed tables of the three v classes) and on (2,2) (the signed table of
// the base triple-point class); p2_lower on the product slots (-1,6) and
// (-2,6).  The wrong-way blocks follow one rule: a point stratum pushes to
// its image stratum downstairs with the sign of the permutation by which
// the projection orders the base branches, and to zero when two branches
// collide.  On every other slot the wrong-way map vanishes for degree
// reasons.
inline ProductResolutionModel triple_point_product_model() {
  ProductResolutionModel m;
  m.name = "triple-point";
  m.fibre_dimension = 2;
  m.base = detail::triple_locus_base();

  StrataComplex& x = m.total;
  x.n_components = 9;

  // Charts: the six quintuple strata; every stratum is a face of one.
  const std::vector<IndexSet> quints = {{0, 1, 6, 7, 8}, {0, 5, 6, 7, 8},
                                        {1, 3, 6, 7, 8}, {2, 3, 6, 7, 8},
                                        {2, 4, 6, 7, 8}, {4, 5, 6, 7, 8}};

  // Diagonal surfaces with the chart quadruple completing each one to a
  // degree-two carrier, and their curve labels.
  struct Diagonal {
    IndexSet stratum;
    int completion = 0;
    std::string label;
  };
  const std::vector<Diagonal> diagonals = {
      {{0, 6, 7}, 8, "~delta_{12}"}, {{1, 6, 8}, 7, "~delta_{13}"},
      {{2, 6, 7}, 8, "delta_{12}"},  {{3, 7, 8}, 6, "~delta_{23}"},
      {{4, 6, 8}, 7, "delta_{13}"},  {{5, 7, 8}, 6, "delta_{23}"}};
  const IndexSet enriched{5, 7, 8};
  const IndexSet bl{6, 7, 8};

  // Strata that keep a point class beyond degree zero.
  const std::set<IndexSet> twisted_doubles = {{0, 7}, {1, 8}, {2, 7},
                                              {3, 8}, {4, 8}, {5, 8},
                                              {6, 7}, {6, 8}, {7, 8}};
  const std::set<IndexSet> curve_quads = {
      {0, 6, 7, 8}, {1, 6, 7, 8}, {2, 6, 7, 8}, {3, 6, 7, 8},
      {4, 6, 7, 8}, {5, 6, 7, 8}, {4, 5, 7, 8}};
  const std::set<IndexSet> point_triples = {{0, 6, 8}, {2, 7, 8}, {4, 5, 8},
                                            {4, 7, 8}, {5, 6, 8}, {6, 7, 8}};

  std::set<IndexSet> strata;
  for (const auto& q : quints) {
    const std::vector<int>& el = q.elements();
    for (unsigned mask = 1; mask < (1u << el.size()); ++mask) {
      std::vector<int> sub;
      for (std::size_t b = 0; b < el.size(); ++b) {
        if ((mask & (1u << b)) != 0) sub.push_back(el[b]);
      }
      strata.insert(IndexSet(sub));
    }
  }

  const auto digits = [](const IndexSet& i) {
    std::string s;
    for (int e : i.elements()) s += std::to_string(e + 1);
    return s;
  };
  const auto is_diagonal = [&diagonals](const IndexSet& i) {
    for (const auto& dg : diagonals) {
      if (dg.stratum == i) return true;
    }
    return false;
  };

  for (const auto& i : strata) {
    std::map<int, std::size_t> dims{{0, 1}};
    if (i.size() == 2) {
      dims[1] = 1;
      if (twisted_doubles.count(i) != 0) dims[5] = 1;
    } else if (i.size() == 3) {
      if (is_diagonal(i)) {
        dims[1] = 1;
        dims[2] = i == enriched ? 2 : 1;
        dims[3] = 1;
      }
      if (i == bl) dims[2] = 4;
      if (point_triples.count(i) != 0) dims[4] = 1;
    } else if (i.size() == 4 && curve_quads.count(i) != 0) {
      dims[2] = 1;
    }
    x.add_stratum(i, std::move(dims));
  }
  for (const auto& i : strata) {
    if (i.size() != 2) continue;
    x.set_basis_labels(i, 1, {"v_{" + digits(i) + "}"});
    if (twisted_doubles.count(i) != 0) {
      x.set_basis_labels(i, 5, {"v_{" + digits(i) + "}(1)"});
    }
  }
  for (const auto& dg : diagonals) {
    if (dg.stratum == enriched) {
      x.set_basis_labels(dg.stratum, 2, {dg.label, "[T_{6789}]"});
    } else {
      x.set_basis_labels(dg.stratum, 2, {dg.label});
    }
  }
  x.set_basis_labels(bl, 2, {"F1", "F2", "E1", "E2"});
  for (const auto& t : point_triples) x.set_basis_labels(t, 4, {"pt"});
  for (const auto& q : curve_quads) x.set_basis_labels(q, 2, {"pt"});

  detail::set_point_restrictions(x);

  // Odd classes: each diagonal surface receives the v class of its two
  // incident product-target doubles.
  const std::vector<std::pair<IndexSet, int>> odd_restrictions = {
      {{0, 7}, 6}, {{6, 7}, 0},   // onto {0,6,7}
      {{1, 8}, 6}, {{6, 8}, 1},   // onto {1,6,8}
      {{2, 7}, 6}, {{6, 7}, 2},   // onto {2,6,7}
      {{3, 8}, 7}, {{7, 8}, 3},   // onto {3,7,8}
      {{4, 8}, 6}, {{6, 8}, 4},   // onto {4,6,8}
      {{5, 8}, 7}, {{7, 8}, 5}};  // onto {5,7,8}
  for (const auto& [j, e] : odd_restrictions) {
    x.set_rest(j, e, 1, Mat{{Rat(1)}});
  }

  // The curve lattice of the blown-up product surface on {6,7,8} and the
  // classes of the six strict-transform curves cut by components 0..5.
  const Mat ns_gram{{Rat(0), Rat(1), Rat(0), Rat(0)},
                    {Rat(1), Rat(0), Rat(0), Rat(0)},
                    {Rat(0), Rat(0), Rat(-1), Rat(0)},
                    {Rat(0), Rat(0), Rat(0), Rat(-1)}};
  const std::vector<Vec> strict_curves = {
      {Rat(0), Rat(0), Rat(0), Rat(1)},    // component 0: E2
      {Rat(1), Rat(0), Rat(0), Rat(-1)},   // component 1: F1 - E2
      {Rat(0), Rat(0), Rat(1), Rat(0)},    // component 2: E1
      {Rat(0), Rat(1), Rat(-1), Rat(0)},   // component 3: F2 - E1
      {Rat(1), Rat(0), Rat(-1), Rat(0)},   // component 4: F1 - E1
      {Rat(0), Rat(1), Rat(0), Rat(-1)}};  // component 5: F2 - E2
  {
    std::vector<detail::CurveClass> classes;
    for (int c = 0; c < 6; ++c) {
      classes.push_back(detail::CurveClass{bl.with(c), strict_curves[c]});
    }
    detail::set_surface_stratum_classes(x, bl, ns_gram, classes);
  }

  // The enriched diagonal surface on {5,7,8}: the diagonal and the curve
  // cut by the chart quadruple {5,6,7,8} pair like the two rulings, and the
  // curves cut by the other two chart quadruples equal the diagonal.
  {
    const Mat ruling{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
    const Vec diag_class = {Rat(1), Rat(0)};
    const Vec chart_class = {Rat(0), Rat(1)};
    detail::set_surface_stratum_classes(
        x, enriched, ruling,
        {detail::CurveClass{{0, 5, 7, 8}, diag_class},
         detail::CurveClass{{4, 5, 7, 8}, diag_class},
         detail::CurveClass{{5, 6, 7, 8}, chart_class}});
  }

  // The other five diagonal surfaces: the diagonal pairs to one against
  // the curve cut by the completion quadruple ...
  for (const auto& dg : diagonals) {
    if (dg.stratum == enriched) continue;
    x.set_rest(dg.stratum, dg.completion, 2, Mat{{Rat(1)}});
  }
  // ... and the remaining chart quadruples through a diagonal surface cut
  // out the diagonal itself.
  const std::vector<std::pair<IndexSet, int>> diagonal_cuts = {
      {{0, 1, 6, 7}, 1}, {{0, 5, 6, 7}, 5},   // curves on {0,6,7}
      {{0, 1, 6, 8}, 0}, {{1, 3, 6, 8}, 3},   // curves on {1,6,8}
      {{2, 3, 6, 7}, 3}, {{2, 4, 6, 7}, 4},   // curves on {2,6,7}
      {{1, 3, 7, 8}, 1}, {{2, 3, 7, 8}, 2},   // curves on {3,7,8}
      {{2, 4, 6, 8}, 2}, {{4, 5, 6, 8}, 5}};  // curves on {4,6,8}
  for (const auto& [q, e] : diagonal_cuts) {
    x.set_gysin(q, e, 0, Mat{{Rat(1)}});
  }

  // Point transfers of the six chart points: each quintuple stratum pushes
  // to the two curve quadruples obtained by dropping an off-diagonal
  // component, and the sixth chart also meets its enriched quadruple.
  const std::vector<std::pair<IndexSet, int>> chart_point_transfers = {
      {{0, 1, 6, 7, 8}, 0}, {{0, 1, 6, 7, 8}, 1}, {{0, 5, 6, 7, 8}, 0},
      {{0, 5, 6, 7, 8}, 5}, {{1, 3, 6, 7, 8}, 1}, {{1, 3, 6, 7, 8}, 3},
      {{2, 3, 6, 7, 8}, 2}, {{2, 3, 6, 7, 8}, 3}, {{2, 4, 6, 7, 8}, 2},
      {{2, 4, 6, 7, 8}, 4}, {{4, 5, 6, 7, 8}, 4}, {{4, 5, 6, 7, 8}, 5},
      {{4, 5, 6, 7, 8}, 6}};
  for (const auto& [q, e] : chart_point_transfers) {
    x.set_gysin(q, e, 0, Mat{{Rat(1)}});
  }

  // Curve-to-point transfers: the quadruple curves push their point class
  // onto the triple surfaces carrying a degree-four point.
  const std::vector<std::pair<IndexSet, int>> curve_point_transfers = {
      {{0, 6, 7, 8}, 0}, {{0, 6, 7, 8}, 7}, {{1, 6, 7, 8}, 1},
      {{2, 6, 7, 8}, 2}, {{2, 6, 7, 8}, 6}, {{3, 6, 7, 8}, 3},
      {{4, 6, 7, 8}, 4}, {{4, 6, 7, 8}, 6}, {{5, 6, 7, 8}, 5},
      {{5, 6, 7, 8}, 7}, {{4, 5, 7, 8}, 5}, {{4, 5, 7, 8}, 7}};
  for (const auto& [q, e] : curve_point_transfers) {
    x.set_gysin(q, e, 2, Mat{{Rat(1)}});
  }

  // Odd transfers: a diagonal surface pushes its degree-three product onto
  // the twisted v classes of its product-target doubles.
  const std::vector<std::pair<IndexSet, int>> odd_transfers = {
      {{0, 6, 7}, 0}, {{0, 6, 7}, 6}, {{1, 6, 8}, 1},
      {{1, 6, 8}, 6}, {{2, 6, 7}, 6}, {{3, 7, 8}, 3},
      {{3, 7, 8}, 7}, {{4, 6, 8}, 6}, {{5, 7, 8}, 7}};
  for (const auto& [t, e] : odd_transfers) {
    x.set_gysin(t, e, 3, Mat{{Rat(1)}});
  }

  detail::set_unit_cups(x);
  // The diagonal curve times the restricted odd class spans the stored
  // degree-three piece of each diagonal surface.
  for (const auto& dg : diagonals) {
    if (dg.stratum == enriched) {
      x.set_cup(dg.stratum, 2, 1, Mat{{Rat(1), Rat(0)}});
      x.set_cup(dg.stratum, 1, 2, Mat{{Rat(1), Rat(0)}});
    } else {
      x.set_cup(dg.stratum, 2, 1, Mat{{Rat(1)}});
      x.set_cup(dg.stratum, 1, 2, Mat{{Rat(1)}});
    }
  }
  // Intersection form of the blown-up product surface.
  {
    Mat cup22(1, 16);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        cup22.at(0, a * 4 + b) = ns_gram.at(a, b);
      }
    }
    x.set_cup(bl, 2, 2, std::move(cup22));
  }

  const E1Page pb = build_e1(m.base);
  const E1Page pt = build_e1(x);

  // Middle slot (1,2): the signed tables of the three pulled-back v
  // classes, one column per base double curve.
  {
    using Entries = std::vector<std::pair<IndexSet, long>>;
    const std::vector<Entries> p1_cols = {
        {{{0, 7}, 1}, {{1, 7}, 1}, {{2, 6}, -1},
         {{3, 6}, -1}, {{6, 7}, 1}, {{1, 3}, 1}},
        {{{0, 8}, 1}, {{1, 8}, 1}, {{4, 6}, -1},
         {{5, 6}, -1}, {{6, 8}, 1}, {{0, 5}, 1}},
        {{{2, 8}, 1}, {{3, 8}, 1}, {{4, 7}, -1},
         {{5, 7}, -1}, {{7, 8}, 1}, {{2, 4}, 1}}};
    const std::vector<Entries> p2_cols = {
        {{{0, 6}, -1}, {{2, 7}, 1}, {{4, 7}, 1},
         {{5, 6}, -1}, {{6, 7}, 1}, {{4, 5}, 1}},
        {{{1, 6}, -1}, {{2, 8}, 1}, {{3, 6}, -1},
         {{4, 8}, 1}, {{6, 8}, 1}, {{2, 3}, 1}},
        {{{0, 8}, 1}, {{1, 7}, -1}, {{3, 7}, -1},
         {{5, 8}, 1}, {{7, 8}, 1}, {{0, 1}, 1}}};
    Mat a(pt.dim(1, 2), 3);
    Mat b(pt.dim(1, 2), 3);
    for (std::size_t c = 0; c < 3; ++c) {
      for (const auto& [j, v] : p1_cols[c]) {
        a.at(detail::slot_offset(pt, 1, 2, 0, j), c) = Rat(v);
      }
      for (const auto& [j, v] : p2_cols[c]) {
        b.at(detail::slot_offset(pt, 1, 2, 0, j), c) = Rat(v);
      }
    }
    m.p1_star.emplace(SlotKey{1, 2}, std::move(a));
    m.p2_star.emplace(SlotKey{1, 2}, std::move(b));
  }

  // Slot (2,2): the signed tables of the pulled-back base triple point.
  {
    const std::vector<std::pair<IndexSet, long>> p1_tri = {
        {{0, 7, 8}, 1},  {{1, 3, 8}, 1},  {{1, 7, 8}, 1}, {{2, 6, 8}, -1},
        {{3, 6, 8}, -1}, {{6, 7, 8}, 1},  {{0, 5, 7}, -1}, {{2, 4, 6}, 1},
        {{4, 6, 7}, 1},  {{5, 6, 7}, 1}};
    const std::vector<std::pair<IndexSet, long>> p2_tri = {
        {{0, 6, 8}, -1}, {{2, 7, 8}, 1},  {{4, 5, 8}, 1}, {{4, 7, 8}, 1},
        {{5, 6, 8}, -1}, {{6, 7, 8}, 1},  {{0, 1, 6}, 1}, {{1, 6, 7}, 1},
        {{2, 3, 7}, -1}, {{3, 6, 7}, 1}};
    Mat a(pt.dim(2, 2), 1);
    Mat b(pt.dim(2, 2), 1);
    for (const auto& [t, v] : p1_tri) {
      a.at(detail::slot_offset(pt, 2, 2, 0, t), 0) = Rat(v);
    }
    for (const auto& [t, v] : p2_tri) {
      b.at(detail::slot_offset(pt, 2, 2, 0, t), 0) = Rat(v);
    }
    m.p1_star.emplace(SlotKey{2, 2}, std::move(a));
    m.p2_star.emplace(SlotKey{2, 2}, std::move(b));
  }

  // Wrong-way blocks, by the ordering-sign rule.  Second-projection images
  // of the nine components, as base branch indices.
  const std::vector<int> p2_image = {1, 2, 0, 2, 0, 1, 0, 1, 2};
  {
    Mat w(pb.dim(-1, 2), pt.dim(-1, 6));
    for (const auto& j : x.strata_of_size(2)) {
      if (x.h(j, 5) == 0) continue;
      const int a = p2_image[static_cast<std::size_t>(j.elements()[0])];
      const int b = p2_image[static_cast<std::size_t>(j.elements()[1])];
      if (a == b) continue;
      const IndexSet target{std::min(a, b), std::max(a, b)};
      w.at(detail::slot_offset(pb, -1, 2, 1, target),
           detail::slot_offset(pt, -1, 6, 1, j)) = a < b ? Rat(1) : Rat(-1);
    }
    m.p2_lower.emplace(SlotKey{-1, 6},
                       PushforwardBlock{SlotKey{-1, 2}, std::move(w)});
  }
  {
    Mat w(pb.dim(-2, 2), pt.dim(-2, 6));
    for (const auto& t : x.strata_of_size(3)) {
      if (x.h(t, 4) == 0) continue;
      std::vector<int> img;
      for (int e : t.elements()) {
        img.push_back(p2_image[static_cast<std::size_t>(e)]);
      }
      int inversions = 0;
      for (std::size_t p = 0; p < img.size(); ++p) {
        for (std::size_t q = p + 1; q < img.size(); ++q) {
          if (img[p] > img[q]) ++inversions;
        }
      }
      w.at(detail::slot_offset(pb, -2, 2, 2, {0, 1, 2}),
           detail::slot_offset(pt, -2, 6, 2, t)) =
          inversions % 2 == 0 ? Rat(1) : Rat(-1);
    }
    m.p2_lower.emplace(SlotKey{-2, 6},
                       PushforwardBlock{SlotKey{-2, 2}, std::move(w)});
  }

  m.ns = NSLattice{{"F1", "F2", "E1", "E2"}, ns_gram};

  // The candidate space searched for the first power: the six diagonal
  // curves plus the four lattice generators of the blown-up product
  // surface.  The second power uses the default space (the point classes
  // of the six quintuple strata).
  m.candidate_basis[1] = {
      {{0, 6, 7}, 0, "a_{178}"}, {{1, 6, 8}, 0, "a_{279}"},
      {{2, 6, 7}, 0, "a_{378}"}, {{3, 7, 8}, 0, "a_{489}"},
      {{4, 6, 8}, 0, "a_{579}"}, {{5, 7, 8}, 0, "a_{689}"},
      {bl, 0, "x"},              {bl, 1, "y"},
      {bl, 2, "z"},              {bl, 3, "w"}};

  return m;
}

}  // namespace wss
