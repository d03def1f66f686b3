#pragma once
// Independent cross-check for the exact linear algebra kernel: fraction-free
// integer elimination (Bareiss). Shares no code with the library's rational
// Gauss–Jordan path; ranks computed here are compared against rref/kernel
// results in the tests.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using Int = boost::multiprecision::cpp_int;
using IntRows = std::vector<std::vector<Int>>;

// Rank of an integer matrix via Bareiss elimination.  All divisions below are
// exact by the fraction-free invariant, so the computation never leaves the
// integers.
inline std::size_t bareiss_rank(IntRows a) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  Int prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t p = row;
    while (p < m && a[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev;
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return row;
}

}  // namespace oracle
