#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <wss/errors.hpp>
#include <wss/rational.hpp>

namespace wss {

using Vec = std::vector<Rat>;

// Dense matrix over the rationals.  Everything here is exact; there is no
// floating point anywhere in the library.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  Mat(std::initializer_list<std::initializer_list<Rat>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionError("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Mat zero(std::size_t rows, std::size_t cols) {
    return Mat(rows, cols);
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  // Single-column matrix holding v.
  static Mat column(const Vec& v) {
    Mat m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
    return m;
  }

  static Mat from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return Mat(0, 0);
    Mat m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_) {
        throw DimensionError("columns of unequal length");
      }
      for (std::size_t i = 0; i < m.rows_; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
  }

  static Mat from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) {
        throw DimensionError("rows of unequal length");
      }
      for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vec row(std::size_t i) const {
    Vec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
  }

  Vec col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
  }

  Mat operator+(const Mat& other) const {
    require_same_shape(other, "+");
    Mat out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      out.data_[i] = data_[i] + other.data_[i];
    }
    return out;
  }

  Mat operator-(const Mat& other) const {
    require_same_shape(other, "-");
    Mat out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      out.data_[i] = data_[i] - other.data_[i];
    }
    return out;
  }

  Mat operator*(const Mat& other) const {
    if (cols_ != other.rows_) {
      throw DimensionError(shape_msg("*", other));
    }
    Mat out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rat& aik = at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) {
          out.at(i, j) += aik * other.at(k, j);
        }
      }
    }
    return out;
  }

  Mat operator*(const Rat& s) const {
    Mat out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * s;
    return out;
  }

  Mat operator-() const { return *this * Rat(-1); }

  bool operator==(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }
  bool operator!=(const Mat& other) const { return !(*this == other); }

  Mat transpose() const {
    Mat out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    }
    return out;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (x != 0) return false;
    }
    return true;
  }

  Vec apply(const Vec& x) const {
    if (x.size() != cols_) {
      throw DimensionError("apply: vector length " + std::to_string(x.size()) +
                           " vs " + std::to_string(cols_) + " columns");
    }
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Rat acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
      out[i] = std::move(acc);
    }
    return out;
  }

 private:
  void require_same_shape(const Mat& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw DimensionError(shape_msg(op, other));
    }
  }

  std::string shape_msg(const char* op, const Mat& other) const {
    std::ostringstream os;
    os << "shape mismatch: " << rows_ << "x" << cols_ << " " << op << " "
       << other.rows_ << "x" << other.cols_;
    return os.str();
  }

  std::size_t rows_, cols_;
  std::vector<Rat> data_;
};

inline std::ostream& operator<<(std::ostream& os, const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " ") << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << " ";
      os << to_string(m.at(i, j));
    }
    os << "]" << (i + 1 == m.rows() ? "]" : "\n");
  }
  if (m.rows() == 0) os << "[]";
  return os;
}

inline Mat hconcat(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw DimensionError("hconcat: row mismatch");
  Mat out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      out.at(i, a.cols() + j) = b.at(i, j);
    }
  }
  return out;
}

inline Mat vconcat(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) throw DimensionError("vconcat: column mismatch");
  Mat out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) {
      out.at(a.rows() + i, j) = b.at(i, j);
    }
  }
  return out;
}

// ----- small vector helpers -------------------------------------------------

inline Vec vec_add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("vec_add: length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("vec_sub: length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec vec_scale(const Rat& s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline bool vec_is_zero(const Vec& a) {
  for (const auto& x : a) {
    if (x != 0) return false;
  }
  return true;
}

inline Rat dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

// ----- elimination ----------------------------------------------------------

struct RrefResult {
  Mat R;                           // reduced row-echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

// Gauss–Jordan over the rationals; deterministic pivot choice (first nonzero
// entry downward in each column).
inline RrefResult rref(Mat a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t p = row;
    while (p < m && a.at(p, col) == 0) ++p;
    if (p == m) continue;
    a.swap_rows(p, row);
    const Rat pivot = a.at(row, col);
    for (std::size_t j = col; j < n; ++j) a.at(row, j) /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const Rat factor = a.at(i, col);
      if (factor == 0) continue;
      for (std::size_t j = col; j < n; ++j) {
        a.at(i, j) -= factor * a.at(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const Mat& a) { return rref(a).pivots.size(); }

// Basis of the right kernel: one vector per free column, free coordinate 1.
inline std::vector<Vec> kernel_basis(const Mat& a) {
  const auto res = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (const auto c : res.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    Vec v(n);
    v[j] = 1;
    for (std::size_t r = 0; r < res.pivots.size(); ++r) {
      v[res.pivots[r]] = -res.R.at(r, j);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Full solution set of A x = b: a particular solution (free variables set to
// zero) plus a kernel basis, or infeasibility.
struct AffineSolutionSet {
  bool feasible = false;
  Vec particular;
  std::vector<Vec> nullspace;
  std::size_t dim() const { return nullspace.size(); }
};

inline AffineSolutionSet solve_affine(const Mat& a, const Vec& b) {
  if (b.size() != a.rows()) {
    throw DimensionError("solve_affine: rhs length mismatch");
  }
  const auto res = rref(hconcat(a, Mat::column(b)));
  AffineSolutionSet sol;
  if (!res.pivots.empty() && res.pivots.back() == a.cols()) {
    return sol;  // pivot in the augmented column: inconsistent
  }
  sol.feasible = true;
  sol.particular.assign(a.cols(), Rat(0));
  for (std::size_t r = 0; r < res.pivots.size(); ++r) {
    sol.particular[res.pivots[r]] = res.R.at(r, a.cols());
  }
  sol.nullspace = kernel_basis(a);
  return sol;
}

// Dimension of ambient / span(vectors).
inline std::size_t quotient_dim(std::size_t ambient,
                                const std::vector<Vec>& spanning) {
  for (const auto& v : spanning) {
    if (v.size() != ambient) {
      throw DimensionError("quotient_dim: vector length mismatch");
    }
  }
  if (spanning.empty()) return ambient;
  return ambient - rank(Mat::from_columns(spanning));
}

inline bool in_span(const std::vector<Vec>& spanning, const Vec& v) {
  if (vec_is_zero(v)) return true;
  if (spanning.empty()) return false;
  return solve_affine(Mat::from_columns(spanning), v).feasible;
}

// Inverse of a square matrix; throws on singular or non-square input.
inline Mat inverse(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse: not square");
  const std::size_t n = a.rows();
  const auto res = rref(hconcat(a, Mat::identity(n)));
  if (res.pivots.size() != n || (n > 0 && res.pivots.back() != n - 1)) {
    throw Error("inverse: singular matrix");
  }
  Mat out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = res.R.at(i, n + j);
  }
  return out;
}

// Kronecker product; the (i*rowsB + k, j*colsB + l) entry is A(i,j)B(k,l),
// matching the row-major pair indexing of cup tensors.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
      }
    }
  }
  return out;
}

// Subquotient Z/B of a coordinate space, with a fixed lifted basis: the
// vectors of z_span that successively extend an independent subset of b_span.
// coords() expresses a vector of Z in that basis modulo B.
class Subquotient {
 public:
  Subquotient(const std::vector<Vec>& z_span, const std::vector<Vec>& b_span,
              std::size_t ambient)
      : ambient_(ambient) {
    std::vector<Vec> chosen;  // b basis then representatives
    std::size_t current_rank = 0;
    auto try_add = [&](const Vec& v, bool is_rep) {
      if (v.size() != ambient_) {
        throw DimensionError("subquotient: vector length mismatch");
      }
      chosen.push_back(v);
      const std::size_t r = rank(Mat::from_columns(chosen));
      if (r > current_rank) {
        current_rank = r;
        if (is_rep) {
          reps_.push_back(v);
        } else {
          b_basis_.push_back(v);
        }
      } else {
        chosen.pop_back();
      }
    };
    for (const auto& v : b_span) try_add(v, false);
    for (const auto& v : z_span) try_add(v, true);
  }

  std::size_t dim() const { return reps_.size(); }
  std::size_t ambient() const { return ambient_; }
  const std::vector<Vec>& representatives() const { return reps_; }

  Vec coords(const Vec& z) const {
    if (z.size() != ambient_) {
      throw DimensionError("subquotient coords: vector length mismatch");
    }
    std::vector<Vec> cols = b_basis_;
    cols.insert(cols.end(), reps_.begin(), reps_.end());
    if (cols.empty()) {
      if (!vec_is_zero(z)) throw Error("vector outside the subspace");
      return {};
    }
    const auto sol = solve_affine(Mat::from_columns(cols), z);
    if (!sol.feasible) throw Error("vector outside the subspace");
    Vec out(reps_.size());
    for (std::size_t i = 0; i < reps_.size(); ++i) {
      out[i] = sol.particular[b_basis_.size() + i];
    }
    return out;
  }

 private:
  std::size_t ambient_;
  std::vector<Vec> b_basis_;
  std::vector<Vec> reps_;
};

}  // namespace wss
