#ifndef BCN_STP_HPP
#define BCN_STP_HPP

// Canonical vectors, logical matrices and the left semi-tensor product.
//
// A logical matrix is a 0/1 matrix whose every column is a canonical
// vector delta^i_r, so it is stored as one row index per column. All
// indices at this interface are 1-based, matching the delta^i_k notation.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace bcn {

using Index = std::size_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a dimension, index or arity does not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a result dimension would not fit in Index.
class OverflowError : public Error {
 public:
  using Error::Error;
};

Index checked_mul(Index a, Index b);
Index checked_lcm(Index a, Index b);

/// delta^index_dim.
struct CanonicalVector {
  Index dim = 1;
  Index index = 1;

  CanonicalVector() = default;
  CanonicalVector(Index dim, Index index);

  friend bool operator==(const CanonicalVector&, const CanonicalVector&) = default;
};

inline CanonicalVector delta(Index dim, Index index) { return {dim, index}; }

class LogicalMatrix {
 public:
  LogicalMatrix() = default;
  /// `col_index[j]` is the (1-based) row of the single 1 in column j+1.
  LogicalMatrix(Index rows, std::vector<Index> col_index);
  LogicalMatrix(Index rows, std::initializer_list<Index> col_index)
      : LogicalMatrix(rows, std::vector<Index>(col_index)) {}

  static LogicalMatrix identity(Index n);
  static LogicalMatrix from_vector(const CanonicalVector& x);
  /// Accepts a dense 0/1 matrix with exactly one 1 per column.
  static LogicalMatrix from_dense(const Eigen::MatrixXi& dense);

  Index rows() const { return rows_; }
  Index cols() const { return cols_.size(); }
  /// Row index of the 1 in column `j` (both 1-based).
  Index operator()(Index j) const { return cols_[j - 1]; }
  std::span<const Index> col_index() const { return cols_; }

  CanonicalVector column(Index j) const { return {rows_, (*this)(j)}; }
  CanonicalVector apply(const CanonicalVector& x) const;

  bool is_square() const { return rows_ == cols(); }
  bool is_permutation() const;

  Eigen::MatrixXi to_dense() const;

  friend bool operator==(const LogicalMatrix&, const LogicalMatrix&) = default;

 private:
  Index rows_ = 0;
  std::vector<Index> cols_;
};

std::string to_string(const CanonicalVector& x);
std::string to_string(const LogicalMatrix& a);

/// Left semi-tensor product (A (x) I_{T/c1}) (B (x) I_{T/r2}), T = lcm(c1, r2).
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);

/// x |x y = delta^{(i-1)b+j}_{ab} for x = delta^i_a, y = delta^j_b.
CanonicalVector stp_vec(const CanonicalVector& x, const CanonicalVector& y);

/// Ordinary product of logical matrices; requires a.cols() == b.rows().
LogicalMatrix compose(const LogicalMatrix& a, const LogicalMatrix& b);

LogicalMatrix mat_pow(const LogicalMatrix& a, Index n);

/// k-th consecutive block of `block_cols` columns, i.e. A |x delta^k.
LogicalMatrix block(const LogicalMatrix& a, Index k, Index block_cols);

/// Concatenates blocks with equal row count side by side.
LogicalMatrix hconcat(std::span<const LogicalMatrix> blocks);

/// Mixed-radix factor dimensions; leftmost factor is most significant.
struct MixedRadixShape {
  std::vector<Index> dims;

  Index size() const;  // product of dims, overflow-checked
  friend bool operator==(const MixedRadixShape&, const MixedRadixShape&) = default;
};

/// Bit 1 maps to delta^1_2, bit 0 to delta^2_2; packed left to right.
CanonicalVector encode(std::span<const bool> bits);
CanonicalVector encode(std::initializer_list<bool> bits);

/// Packs 1-based factor indices (i1, ..., im) into delta^k_{d1...dm}.
CanonicalVector pack(std::span<const Index> indices, const MixedRadixShape& shape);
/// Inverse of pack.
std::vector<Index> decode(const CanonicalVector& x, const MixedRadixShape& shape);

}  // namespace bcn

#endif  // BCN_STP_HPP
