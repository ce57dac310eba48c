#include "bcn/stp.hpp"

#include <numeric>
#include <sstream>

namespace bcn {

Index checked_mul(Index a, Index b) {
  Index r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    std::ostringstream os;
    os << "dimension overflow: " << a << " * " << b;
    throw OverflowError(os.str());
  }
  return r;
}

Index checked_lcm(Index a, Index b) {
  if (a == 0 || b == 0) throw DimensionError("lcm of zero dimension");
  return checked_mul(a / std::gcd(a, b), b);
}

CanonicalVector::CanonicalVector(Index dim, Index index) : dim(dim), index(index) {
  if (dim == 0 || index == 0 || index > dim) {
    std::ostringstream os;
    os << "invalid canonical vector delta^" << index << "_" << dim;
    throw DimensionError(os.str());
  }
}

LogicalMatrix::LogicalMatrix(Index rows, std::vector<Index> col_index)
    : rows_(rows), cols_(std::move(col_index)) {
  if (rows_ == 0 || cols_.empty()) throw DimensionError("logical matrix must be non-empty");
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j] == 0 || cols_[j] > rows_) {
      std::ostringstream os;
      os << "column " << j + 1 << " has row index " << cols_[j] << " outside [1, " << rows_
         << "]";
      throw DimensionError(os.str());
    }
  }
}

LogicalMatrix LogicalMatrix::identity(Index n) {
  std::vector<Index> c(n);
  std::iota(c.begin(), c.end(), Index{1});
  return {n, std::move(c)};
}

LogicalMatrix LogicalMatrix::from_vector(const CanonicalVector& x) { return {x.dim, {x.index}}; }

LogicalMatrix LogicalMatrix::from_dense(const Eigen::MatrixXi& dense) {
  std::vector<Index> c(static_cast<std::size_t>(dense.cols()));
  for (Eigen::Index j = 0; j < dense.cols(); ++j) {
    Index hit = 0;
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
      const int v = dense(i, j);
      if (v == 0) continue;
      if (v != 1 || hit != 0) throw DimensionError("dense matrix is not logical");
      hit = static_cast<Index>(i) + 1;
    }
    if (hit == 0) throw DimensionError("dense matrix has an all-zero column");
    c[static_cast<std::size_t>(j)] = hit;
  }
  return {static_cast<Index>(dense.rows()), std::move(c)};
}

CanonicalVector LogicalMatrix::apply(const CanonicalVector& x) const {
  if (x.dim != cols()) {
    std::ostringstream os;
    os << "cannot apply " << rows_ << "x" << cols() << " matrix to vector of dimension " << x.dim;
    throw DimensionError(os.str());
  }
  return {rows_, cols_[x.index - 1]};
}

bool LogicalMatrix::is_permutation() const {
  if (!is_square()) return false;
  std::vector<bool> seen(rows_, false);
  for (Index r : cols_) {
    if (seen[r - 1]) return false;
    seen[r - 1] = true;
  }
  return true;
}

Eigen::MatrixXi LogicalMatrix::to_dense() const {
  Eigen::MatrixXi d = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(rows_),
                                            static_cast<Eigen::Index>(cols()));
  for (std::size_t j = 0; j < cols_.size(); ++j)
    d(static_cast<Eigen::Index>(cols_[j] - 1), static_cast<Eigen::Index>(j)) = 1;
  return d;
}

std::string to_string(const CanonicalVector& x) {
  std::ostringstream os;
  os << "delta^" << x.index << "_" << x.dim;
  return os.str();
}

std::string to_string(const LogicalMatrix& a) {
  std::ostringstream os;
  os << "delta_" << a.rows() << "[";
  for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a.col_index()[j];
  os << "]";
  return os.str();
}

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  const Index t = checked_lcm(a.cols(), b.rows());
  const Index p = t / a.cols();  // A (x) I_p
  const Index q = t / b.rows();  // B (x) I_q
  const Index rows = checked_mul(a.rows(), p);
  const Index cols = checked_mul(b.cols(), q);

  // Column (j, d) of B (x) I_q is e_{B(j)} (x) e_d, i.e. row k = (B(j)-1) q + d.
  // Column k of A (x) I_p has its 1 at row (A(k / p) - 1) p + k % p.
  std::vector<Index> out(cols);
  for (Index j = 0; j < b.cols(); ++j) {
    const Index bj = b.col_index()[j] - 1;
    for (Index d = 0; d < q; ++d) {
      const Index k = bj * q + d;
      out[j * q + d] = (a.col_index()[k / p] - 1) * p + k % p + 1;
    }
  }
  return {rows, std::move(out)};
}

CanonicalVector stp_vec(const CanonicalVector& x, const CanonicalVector& y) {
  const Index dim = checked_mul(x.dim, y.dim);
  return {dim, (x.index - 1) * y.dim + y.index};
}

LogicalMatrix compose(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "cannot compose " << a.rows() << "x" << a.cols() << " with " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
  std::vector<Index> out(b.cols());
  for (Index j = 0; j < b.cols(); ++j) out[j] = a.col_index()[b.col_index()[j] - 1];
  return {a.rows(), std::move(out)};
}

LogicalMatrix mat_pow(const LogicalMatrix& a, Index n) {
  if (!a.is_square()) throw DimensionError("mat_pow requires a square matrix");
  LogicalMatrix result = LogicalMatrix::identity(a.rows());
  LogicalMatrix base = a;
  while (n > 0) {
    if (n & 1) result = compose(base, result);
    n >>= 1;
    if (n > 0) base = compose(base, base);
  }
  return result;
}

LogicalMatrix block(const LogicalMatrix& a, Index k, Index block_cols) {
  if (block_cols == 0 || a.cols() % block_cols != 0) {
    std::ostringstream os;
    os << "matrix with " << a.cols() << " columns is not divisible into blocks of "
       << block_cols;
    throw DimensionError(os.str());
  }
  const Index count = a.cols() / block_cols;
  if (k == 0 || k > count) {
    std::ostringstream os;
    os << "block index " << k << " outside [1, " << count << "]";
    throw DimensionError(os.str());
  }
  auto first = a.col_index().begin() + static_cast<std::ptrdiff_t>((k - 1) * block_cols);
  return {a.rows(), std::vector<Index>(first, first + static_cast<std::ptrdiff_t>(block_cols))};
}

LogicalMatrix hconcat(std::span<const LogicalMatrix> blocks) {
  if (blocks.empty()) throw DimensionError("hconcat of no blocks");
  std::vector<Index> out;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows()) throw DimensionError("hconcat row mismatch");
    out.insert(out.end(), b.col_index().begin(), b.col_index().end());
  }
  return {blocks.front().rows(), std::move(out)};
}

Index MixedRadixShape::size() const {
  Index n = 1;
  for (Index d : dims) {
    if (d == 0) throw DimensionError("mixed-radix factor of dimension 0");
    n = checked_mul(n, d);
  }
  return n;
}

CanonicalVector encode(std::span<const bool> bits) {
  if (bits.empty()) throw DimensionError("cannot encode an empty Boolean tuple");
  CanonicalVector x = delta(2, bits[0] ? 1 : 2);
  for (std::size_t k = 1; k < bits.size(); ++k) x = stp_vec(x, delta(2, bits[k] ? 1 : 2));
  return x;
}

CanonicalVector encode(std::initializer_list<bool> bits) {
  return encode(std::span<const bool>(bits.begin(), bits.size()));
}

CanonicalVector pack(std::span<const Index> indices, const MixedRadixShape& shape) {
  if (indices.size() != shape.dims.size() || indices.empty()) {
    std::ostringstream os;
    os << "pack: " << indices.size() << " indices for " << shape.dims.size() << " factors";
    throw DimensionError(os.str());
  }
  CanonicalVector x = delta(shape.dims[0], indices[0]);
  for (std::size_t k = 1; k < indices.size(); ++k)
    x = stp_vec(x, delta(shape.dims[k], indices[k]));
  return x;
}

std::vector<Index> decode(const CanonicalVector& x, const MixedRadixShape& shape) {
  if (shape.dims.empty() || shape.size() != x.dim) {
    std::ostringstream os;
    os << "decode: shape of size " << (shape.dims.empty() ? 0 : shape.size())
       << " does not match dimension " << x.dim;
    throw DimensionError(os.str());
  }
  std::vector<Index> out(shape.dims.size());
  Index rest = x.index - 1;
  for (std::size_t k = shape.dims.size(); k-- > 0;) {
    out[k] = rest % shape.dims[k] + 1;
    rest /= shape.dims[k];
  }
  return out;
}

}  // namespace bcn
