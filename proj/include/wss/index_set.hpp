#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <wss/errors.hpp>

namespace wss {

// A stratum label: strictly increasing list of 0-based component indices.
// The empty set is allowed and denotes the ambient germ of the total space.
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::initializer_list<int> xs)
      : IndexSet(std::vector<int>(xs.begin(), xs.end())) {}

  explicit IndexSet(std::vector<int> xs) : elems_(std::move(xs)) {
    std::sort(elems_.begin(), elems_.end());
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i] < 0) throw Error("negative component index");
      if (i > 0 && elems_[i] == elems_[i - 1]) {
        throw Error("duplicate component index");
      }
    }
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<int>& elements() const { return elems_; }
  int operator[](std::size_t i) const { return elems_[i]; }

  bool contains(int k) const {
    return std::binary_search(elems_.begin(), elems_.end(), k);
  }

  bool subset_of(const IndexSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(),
                         elems_.begin(), elems_.end());
  }

  int max() const {
    if (elems_.empty()) throw Error("max of empty index set");
    return elems_.back();
  }

  int min() const {
    if (elems_.empty()) throw Error("min of empty index set");
    return elems_.front();
  }

  IndexSet with(int k) const {
    if (contains(k)) throw Error("index already present: " + std::to_string(k));
    std::vector<int> xs = elems_;
    xs.insert(std::upper_bound(xs.begin(), xs.end(), k), k);
    IndexSet out;
    out.elems_ = std::move(xs);
    return out;
  }

  IndexSet without(int k) const {
    if (!contains(k)) throw Error("index not present: " + std::to_string(k));
    std::vector<int> xs;
    xs.reserve(elems_.size() - 1);
    for (int e : elems_) {
      if (e != k) xs.push_back(e);
    }
    IndexSet out;
    out.elems_ = std::move(xs);
    return out;
  }

  IndexSet unite(const IndexSet& other) const {
    std::vector<int> xs;
    std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(),
                   other.elems_.end(), std::back_inserter(xs));
    IndexSet out;
    out.elems_ = std::move(xs);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(elems_[i]);
    }
    return s + "}";
  }

  auto operator<=>(const IndexSet&) const = default;

 private:
  std::vector<int> elems_;
};

inline std::ostream& operator<<(std::ostream& os, const IndexSet& i) {
  return os << i.to_string();
}

// Number of elements of I strictly below k; the crossing count that signs the
// Cech differentials.
inline int sigma(const IndexSet& i, int k) {
  int c = 0;
  for (int e : i.elements()) {
    if (e < k) ++c;
  }
  return c;
}

// A pair (I, J) is composable when the largest element of I occurs in J and
// every element of J not exceeding it lies in I.
inline bool admissible(const IndexSet& i, const IndexSet& j) {
  if (i.empty() || j.empty()) return false;
  const int top = i.max();
  if (!j.contains(top)) return false;
  for (int e : j.elements()) {
    if (e <= top && !i.contains(e)) return false;
  }
  return true;
}

// Sign exponent of the stratum product on an admissible pair:
//   a = b_0 + ... + b_{p-1} + (|I| - 1) p,
// where the elements of J up to max(I) sit at positions b_0 < ... < b_p
// inside I (so b_p = |I| - 1).
inline int a_exponent(const IndexSet& i, const IndexSet& j) {
  if (!admissible(i, j)) throw Error("a_exponent on inadmissible pair");
  const int m = static_cast<int>(i.size()) - 1;
  const int top = i.max();
  int a = 0;
  int p = 0;
  for (int e : j.elements()) {
    if (e < top) {
      a += sigma(i, e);  // position of e inside I
      ++p;
    }
  }
  return a + m * p;
}

}  // namespace wss
