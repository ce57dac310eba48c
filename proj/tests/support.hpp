#ifndef BCN_TESTS_SUPPORT_HPP
#define BCN_TESTS_SUPPORT_HPP

// Shared test oracles and random generators.

#include <numeric>
#include <random>

#include <Eigen/Core>

#include "bcn/network.hpp"

namespace bcn::test {

inline Eigen::MatrixXi kron(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
  Eigen::MatrixXi k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Semi-tensor product straight from the Kronecker definition on dense
/// matrices.
inline Eigen::MatrixXi dense_stp(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
  const auto c1 = static_cast<Eigen::Index>(a.cols());
  const auto r2 = static_cast<Eigen::Index>(b.rows());
  const Eigen::Index t = std::lcm(c1, r2);
  const Eigen::MatrixXi ia = Eigen::MatrixXi::Identity(t / c1, t / c1);
  const Eigen::MatrixXi ib = Eigen::MatrixXi::Identity(t / r2, t / r2);
  return kron(a, ia) * kron(b, ib);
}

inline LogicalMatrix random_logical(std::mt19937& rng, Index rows, Index cols) {
  std::uniform_int_distribution<Index> d(1, rows);
  std::vector<Index> idx(cols);
  for (auto& x : idx) x = d(rng);
  return {rows, std::move(idx)};
}

inline Bcn random_bcn(std::mt19937& rng, Index n, Index m, Index p) {
  Bcn b{n, m, p, {}, {}};
  for (Index k = 0; k < m; ++k) {
    b.transition.push_back(random_logical(rng, n, n));
    b.output.push_back(random_logical(rng, p, n));
  }
  return b;
}

inline Index uniform(std::mt19937& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

}  // namespace bcn::test

#endif  // BCN_TESTS_SUPPORT_HPP
