#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <wss/errors.hpp>
#include <wss/index_set.hpp>
#include <wss/matrix.hpp>

namespace wss {

// Graded vector space: dimensions per cohomological degree, with optional
// basis labels for readable output.
struct GradedSpace {
  std::map<int, std::size_t> dims;
  std::map<int, std::vector<std::string>> basis_labels;

  std::size_t dim(int d) const {
    const auto it = dims.find(d);
    return it == dims.end() ? 0 : it->second;
  }

  int top_degree() const {
    int top = -1;
    for (const auto& [d, n] : dims) {
      if (n > 0 && d > top) top = d;
    }
    return top;
  }

  bool operator==(const GradedSpace&) const = default;
};

// Key of a restriction or transfer map: source stratum, the component index
// being added (restriction) or removed (transfer), and the source degree.
struct MapKey {
  IndexSet source;
  int index = 0;
  int degree = 0;
  auto operator<=>(const MapKey&) const = default;
};

// Key of a cup tensor on one stratum: H^p x H^q -> H^{p+q}.
struct CupKey {
  IndexSet stratum;
  int p = 0;
  int q = 0;
  auto operator<=>(const CupKey&) const = default;
};

// Matrix-level model of the closed strata of a normal-crossings fibre:
// graded cohomology of every nonempty intersection, restriction maps (adding
// one index), transfer maps (removing one index, raising degree by two) and
// optional cup tensors.  Unset maps read back as zero maps of the correct
// shape; absent strata have zero cohomology.
class StrataComplex {
 public:
  std::size_t n_components = 0;
  std::vector<long> multiplicities;  // per component; empty means all one

  void add_stratum(const IndexSet& i, std::map<int, std::size_t> dims) {
    GradedSpace g;
    g.dims = std::move(dims);
    strata_[i] = std::move(g);
  }

  void add_stratum_space(const IndexSet& i, GradedSpace g) {
    strata_[i] = std::move(g);
  }

  bool operator==(const StrataComplex&) const = default;

  void set_basis_labels(const IndexSet& i, int degree,
                        std::vector<std::string> labels) {
    auto& g = stratum_mut(i);
    if (labels.size() != g.dim(degree)) {
      throw DimensionError("basis label count does not match dimension");
    }
    g.basis_labels[degree] = std::move(labels);
  }

  bool has_stratum(const IndexSet& i) const { return strata_.count(i) > 0; }

  const GradedSpace& stratum(const IndexSet& i) const {
    const auto it = strata_.find(i);
    if (it == strata_.end()) throw MissingStrata("no stratum " + i.to_string());
    return it->second;
  }

  std::size_t h(const IndexSet& i, int d) const {
    const auto it = strata_.find(i);
    return it == strata_.end() ? 0 : it->second.dim(d);
  }

  const std::map<IndexSet, GradedSpace>& all_strata() const { return strata_; }

  std::vector<IndexSet> strata_of_size(std::size_t m) const {
    std::vector<IndexSet> out;
    for (const auto& [i, g] : strata_) {
      if (i.size() == m) out.push_back(i);
    }
    return out;
  }

  std::size_t max_stratum_size() const {
    std::size_t m = 0;
    for (const auto& [i, g] : strata_) m = std::max(m, i.size());
    return m;
  }

  int max_degree() const {
    int d = -1;
    for (const auto& [i, g] : strata_) d = std::max(d, g.top_degree());
    return d;
  }

  long weight(int component) const {
    if (multiplicities.empty()) return 1;
    return multiplicities.at(static_cast<std::size_t>(component));
  }

  // --- map setters (shape-checked) ---

  void set_rest(const IndexSet& i, int k, int d, Mat m) {
    if (i.contains(k)) throw Error("restriction index already in stratum");
    require_stratum(i);
    const IndexSet target = i.with(k);
    require_stratum(target);
    check_shape(m, h(target, d), h(i, d), "restriction");
    rest_[MapKey{i, k, d}] = std::move(m);
  }

  void set_gysin(const IndexSet& i, int k, int d, Mat m) {
    if (!i.contains(k)) throw Error("transfer index not in stratum");
    require_stratum(i);
    const IndexSet target = i.without(k);
    require_stratum(target);
    check_shape(m, h(target, d + 2), h(i, d), "transfer");
    gysin_[MapKey{i, k, d}] = std::move(m);
  }

  void set_cup(const IndexSet& i, int p, int q, Mat m) {
    require_stratum(i);
    check_shape(m, h(i, p + q), h(i, p) * h(i, q), "cup");
    cup_[CupKey{i, p, q}] = std::move(m);
  }

  // --- map accessors (zero fallback) ---

  // H^d(Y_I) -> H^d(Y_{I + k}).
  Mat restriction(const IndexSet& i, int k, int d) const {
    if (i.contains(k)) throw Error("restriction index already in stratum");
    require_stratum(i);
    const auto it = rest_.find(MapKey{i, k, d});
    if (it != rest_.end()) return it->second;
    return Mat(h(i.with(k), d), h(i, d));
  }

  // H^d(Y_I) -> H^{d+2}(Y_{I - k}).
  Mat gysin_map(const IndexSet& i, int k, int d) const {
    if (!i.contains(k)) throw Error("transfer index not in stratum");
    require_stratum(i);
    const auto it = gysin_.find(MapKey{i, k, d});
    if (it != gysin_.end()) return it->second;
    return Mat(h(i.without(k), d + 2), h(i, d));
  }

  // H^p(Y_I) x H^q(Y_I) -> H^{p+q}(Y_I) as a dim(p+q) x (dim(p)*dim(q))
  // matrix; the column of basis pair (a, b) is a*dim(q) + b.
  Mat cup_tensor(const IndexSet& i, int p, int q) const {
    require_stratum(i);
    const auto it = cup_.find(CupKey{i, p, q});
    if (it != cup_.end()) return it->second;
    return Mat(h(i, p + q), h(i, p) * h(i, q));
  }

  Vec cup_apply(const IndexSet& i, int p, int q, const Vec& x,
                const Vec& y) const {
    const std::size_t np = h(i, p);
    const std::size_t nq = h(i, q);
    if (x.size() != np || y.size() != nq) {
      throw DimensionError("cup_apply: operand length mismatch");
    }
    Vec pair(np * nq);
    for (std::size_t a = 0; a < np; ++a) {
      for (std::size_t b = 0; b < nq; ++b) pair[a * nq + b] = x[a] * y[b];
    }
    return cup_tensor(i, p, q).apply(pair);
  }

  const std::map<MapKey, Mat>& all_rest() const { return rest_; }
  const std::map<MapKey, Mat>& all_gysin() const { return gysin_; }
  const std::map<CupKey, Mat>& all_cup() const { return cup_; }

 private:
  GradedSpace& stratum_mut(const IndexSet& i) {
    const auto it = strata_.find(i);
    if (it == strata_.end()) throw MissingStrata("no stratum " + i.to_string());
    return it->second;
  }

  void require_stratum(const IndexSet& i) const {
    if (!has_stratum(i)) throw MissingStrata("no stratum " + i.to_string());
  }

  static void check_shape(const Mat& m, std::size_t rows, std::size_t cols,
                          const char* what) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream os;
      os << what << " map shape " << m.rows() << "x" << m.cols()
         << ", expected " << rows << "x" << cols;
      throw DimensionError(os.str());
    }
  }

  std::map<IndexSet, GradedSpace> strata_;
  std::map<MapKey, Mat> rest_;
  std::map<MapKey, Mat> gysin_;
  std::map<CupKey, Mat> cup_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
  bool clean() const { return errors.empty() && warnings.empty(); }
};

namespace detail {

// One route of a compatibility check factored through a zero graded piece on
// a *present* stratum: the discrepancy may be an artifact of truncating the
// stored cohomology, so it is reported as a warning, not an error.
inline void classify(ValidationReport& rep, bool through_zero_piece,
                     const std::string& what) {
  if (through_zero_piece) {
    rep.warnings.push_back("truncation: " + what +
                           " (a route factors through a zero graded piece)");
  } else {
    rep.errors.push_back(what);
  }
}

}  // namespace detail

// Consistency audit.  Errors: structural defects and identity failures that
// are fully determined by stored data.  Warnings: failures explainable by
// truncated graded pieces, and the principal one-cycle relation.
inline ValidationReport validate(const StrataComplex& x) {
  ValidationReport rep;
  const int n = static_cast<int>(x.n_components);

  // ---- phase 1: structure and shapes ----
  if (x.n_components == 0) {
    rep.errors.push_back("complex has no components");
  }
  for (const auto& [i, g] : x.all_strata()) {
    for (int e : i.elements()) {
      if (e >= n) {
        rep.errors.push_back("stratum " + i.to_string() +
                             " uses component index out of range");
      }
    }
    if (i.size() >= 2) {
      for (int k : i.elements()) {
        if (!x.has_stratum(i.without(k))) {
          rep.errors.push_back("stratum " + i.to_string() +
                               " present but face " +
                               i.without(k).to_string() + " missing");
        }
      }
    }
  }
  if (!x.multiplicities.empty()) {
    if (x.multiplicities.size() != x.n_components) {
      rep.errors.push_back("multiplicities length differs from component count");
    } else {
      for (std::size_t c = 0; c < x.multiplicities.size(); ++c) {
        if (x.multiplicities[c] <= 0) {
          rep.errors.push_back("multiplicity of component " +
                               std::to_string(c) + " is not positive");
        }
      }
    }
  }
  for (const auto& [key, m] : x.all_rest()) {
    if (!x.has_stratum(key.source) || key.source.contains(key.index) ||
        !x.has_stratum(key.source.with(key.index)) ||
        m.rows() != x.h(key.source.with(key.index), key.degree) ||
        m.cols() != x.h(key.source, key.degree)) {
      rep.errors.push_back("malformed restriction map at " +
                           key.source.to_string() + " + " +
                           std::to_string(key.index) + " degree " +
                           std::to_string(key.degree));
    }
  }
  for (const auto& [key, m] : x.all_gysin()) {
    if (!x.has_stratum(key.source) || !key.source.contains(key.index) ||
        !x.has_stratum(key.source.without(key.index)) ||
        m.rows() != x.h(key.source.without(key.index), key.degree + 2) ||
        m.cols() != x.h(key.source, key.degree)) {
      rep.errors.push_back("malformed transfer map at " +
                           key.source.to_string() + " - " +
                           std::to_string(key.index) + " degree " +
                           std::to_string(key.degree));
    }
  }
  for (const auto& [key, m] : x.all_cup()) {
    if (!x.has_stratum(key.stratum) ||
        m.rows() != x.h(key.stratum, key.p + key.q) ||
        m.cols() != x.h(key.stratum, key.p) * x.h(key.stratum, key.q)) {
      rep.errors.push_back("malformed cup tensor at " +
                           key.stratum.to_string());
    }
  }
  if (!rep.errors.empty()) return rep;  // identities assume sane shapes

  // ---- phase 2: identities ----
  auto tag = [](const IndexSet& i, const std::string& rest) {
    return "at " + i.to_string() + " " + rest;
  };

  for (const auto& [i, g] : x.all_strata()) {
    for (const auto& [d_raw, dim_d] : g.dims) {
      const int d = d_raw;
      if (dim_d == 0) continue;

      // Restriction squares: add k then l versus add l then k.
      for (int k = 0; k < n; ++k) {
        if (i.contains(k)) continue;
        for (int l = k + 1; l < n; ++l) {
          if (i.contains(l)) continue;
          const IndexSet ik = i.with(k), il = i.with(l);
          const IndexSet target = ik.with(l);
          if (x.h(target, d) == 0) continue;
          if (!x.has_stratum(ik) || !x.has_stratum(il)) continue;  // closure error elsewhere
          const Mat a = x.restriction(ik, l, d) * x.restriction(i, k, d);
          const Mat b = x.restriction(il, k, d) * x.restriction(i, l, d);
          if (a != b) {
            detail::classify(rep, x.h(ik, d) == 0 || x.h(il, d) == 0,
                             "restriction square " +
                                 tag(i, "adding " + std::to_string(k) +
                                            " and " + std::to_string(l) +
                                            " in degree " + std::to_string(d)));
          }
        }
      }

      // Transfer squares: remove k then l versus remove l then k.
      for (std::size_t ka = 0; ka < i.size(); ++ka) {
        for (std::size_t la = ka + 1; la < i.size(); ++la) {
          const int k = i[ka], l = i[la];
          const IndexSet mk = i.without(k), ml = i.without(l);
          const IndexSet target = mk.without(l);
          if (x.h(target, d + 4) == 0) continue;
          const Mat a = x.gysin_map(mk, l, d + 2) * x.gysin_map(i, k, d);
          const Mat b = x.gysin_map(ml, k, d + 2) * x.gysin_map(i, l, d);
          if (a != b) {
            detail::classify(
                rep, x.h(mk, d + 2) == 0 || x.h(ml, d + 2) == 0,
                "transfer square " +
                    tag(i, "removing " + std::to_string(k) + " and " +
                               std::to_string(l) + " in degree " +
                               std::to_string(d)));
          }
        }
      }

      // Mixed squares: restriction along k commutes with transfer along l.
      for (int k = 0; k < n; ++k) {
        if (i.contains(k)) continue;
        for (int l : i.elements()) {
          const IndexSet ik = i.with(k);
          const IndexSet ml = i.without(l);
          if (!x.has_stratum(ml)) continue;  // optional ambient germ
          const IndexSet target = ml.with(k);
          if (x.h(target, d + 2) == 0) continue;
          Mat route1(x.h(target, d + 2), dim_d);
          if (x.has_stratum(ik)) {
            route1 = x.gysin_map(ik, l, d) * x.restriction(i, k, d);
          }
          const Mat route2 = x.restriction(ml, k, d + 2) * x.gysin_map(i, l, d);
          if (route1 != route2) {
            detail::classify(
                rep,
                (x.has_stratum(ik) && x.h(ik, d) == 0) || x.h(ml, d + 2) == 0,
                "mixed square " + tag(i, "adding " + std::to_string(k) +
                                             ", removing " + std::to_string(l) +
                                             ", degree " + std::to_string(d)));
          }
        }
      }
    }

    // Projection formula and ring property of restrictions, per added index.
    for (int k = 0; k < n; ++k) {
      if (i.contains(k)) continue;
      const IndexSet ik = i.with(k);
      if (!x.has_stratum(ik)) continue;
      const auto& gi = x.stratum(i);
      const auto& gik = x.stratum(ik);

      for (const auto& [p, dim_p] : gi.dims) {
        if (dim_p == 0) continue;
        // transfer(rest(x) . y) = x . transfer(y)
        for (const auto& [q, dim_q] : gik.dims) {
          if (dim_q == 0) continue;
          if (x.h(i, p + q + 2) == 0) continue;
          const Mat rk = x.restriction(i, k, p);
          bool mismatch = false;
          for (std::size_t xa = 0; xa < dim_p && !mismatch; ++xa) {
            for (std::size_t yb = 0; yb < dim_q && !mismatch; ++yb) {
              const Vec xv = unit_vec(dim_p, xa);
              const Vec yv = unit_vec(dim_q, yb);
              const Vec lhs = x.gysin_map(ik, k, p + q)
                                  .apply(x.cup_apply(ik, p, q, rk.apply(xv), yv));
              const Vec rhs = x.cup_apply(
                  i, p, q + 2, xv, x.gysin_map(ik, k, q).apply(yv));
              if (lhs != rhs) mismatch = true;
            }
          }
          if (mismatch) {
            detail::classify(
                rep, x.h(ik, p + q) == 0 || x.h(i, q + 2) == 0,
                "projection formula " +
                    tag(i, "index " + std::to_string(k) + ", degrees (" +
                               std::to_string(p) + "," + std::to_string(q) +
                               ")"));
          }
        }
        // rest(x . y) = rest(x) . rest(y)
        for (const auto& [q, dim_q] : gi.dims) {
          if (dim_q == 0) continue;
          if (x.h(ik, p + q) == 0) continue;
          bool mismatch = false;
          for (std::size_t xa = 0; xa < dim_p && !mismatch; ++xa) {
            for (std::size_t yb = 0; yb < dim_q && !mismatch; ++yb) {
              const Vec xv = unit_vec(dim_p, xa);
              const Vec yv = unit_vec(dim_q, yb);
              const Vec lhs =
                  x.restriction(i, k, p + q).apply(x.cup_apply(i, p, q, xv, yv));
              const Vec rhs =
                  x.cup_apply(ik, p, q, x.restriction(i, k, p).apply(xv),
                              x.restriction(i, k, q).apply(yv));
              if (lhs != rhs) mismatch = true;
            }
          }
          if (mismatch) {
            detail::classify(
                rep,
                x.h(i, p + q) == 0 || x.h(ik, p) == 0 || x.h(ik, q) == 0,
                "restriction ring map " +
                    tag(i, "index " + std::to_string(k) + ", degrees (" +
                               std::to_string(p) + "," + std::to_string(q) +
                               ")"));
          }
        }
      }
    }

    // Graded commutativity of stored cup tensors.
    for (const auto& [p, dim_p] : g.dims) {
      if (dim_p == 0) continue;
      for (const auto& [q, dim_q] : g.dims) {
        if (dim_q == 0 || q < p) continue;
        if (x.h(i, p + q) == 0) continue;
        const Rat sign = (p % 2 == 1 && q % 2 == 1) ? Rat(-1) : Rat(1);
        for (std::size_t xa = 0; xa < dim_p; ++xa) {
          for (std::size_t yb = 0; yb < dim_q; ++yb) {
            const Vec xv = unit_vec(dim_p, xa);
            const Vec yv = unit_vec(dim_q, yb);
            const Vec lhs = x.cup_apply(i, p, q, xv, yv);
            const Vec rhs = vec_scale(sign, x.cup_apply(i, q, p, yv, xv));
            if (lhs != rhs) {
              rep.errors.push_back("cup commutativity " +
                                   tag(i, "degrees (" + std::to_string(p) +
                                              "," + std::to_string(q) + ")"));
              goto next_pair;
            }
          }
        }
      next_pair:;
      }
    }
  }

  // Principal one-cycle relation (warning only): the weighted sum of going
  // out-and-back through every neighbouring stratum vanishes.  Needs all
  // faces of the stratum, including the ambient germ for singletons.
  for (const auto& [i, g] : x.all_strata()) {
    bool faces_available = true;
    for (int u : i.elements()) {
      if (!x.has_stratum(i.without(u))) faces_available = false;
    }
    if (!faces_available) continue;
    for (const auto& [d, dim_d] : g.dims) {
      if (dim_d == 0) continue;
      if (x.h(i, d + 2) == 0) continue;
      auto accumulate = [&](bool weighted) {
        Mat op(x.h(i, d + 2), dim_d);
        for (int v = 0; v < n; ++v) {
          if (i.contains(v) || !x.has_stratum(i.with(v))) continue;
          const Rat w = weighted ? Rat(x.weight(v)) : Rat(1);
          op = op + x.gysin_map(i.with(v), v, d) * x.restriction(i, v, d) * w;
        }
        for (int u : i.elements()) {
          const Rat w = weighted ? Rat(x.weight(u)) : Rat(1);
          op = op +
               x.restriction(i.without(u), u, d + 2) * x.gysin_map(i, u, d) * w;
        }
        return op;
      };
      const Mat weighted = accumulate(true);
      if (!weighted.is_zero()) {
        std::string msg = "principal relation fails at " + i.to_string() +
                          " degree " + std::to_string(d) +
                          " with declared multiplicities";
        if (!x.multiplicities.empty() && accumulate(false).is_zero()) {
          msg += " (balances with unit weights)";
        }
        rep.warnings.push_back(std::move(msg));
      }
    }
  }

  return rep;
}

}  // namespace wss
