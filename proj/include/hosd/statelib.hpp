// statelib.hpp
// Seeded test states (GHZ, W, Haar-random, planted decompositions), Haar
// unitaries, and the free-parameter count behind the genericity argument.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hosd/multischmidt.hpp"
#include "hosd/random.hpp"
#include "hosd/tensor.hpp"

namespace hosd {

/// Real parameters of an N-party state of local dimension d (normalization and
/// global phase removed) against those of N local unimodular unitaries.
struct ParamCount {
  int n_parties;
  int dim;
  long long state_params;
  long long unitary_params;

  long long deficit() const { return state_params - unitary_params; }
};

inline ParamCount param_count(int n_parties, int dim) {
  if (n_parties < 2 || dim < 2) {
    throw Error(ErrorCode::DomainError, "parameter count needs nParties >= 2 and dim >= 2");
  }
  long long volume = 1;
  for (int k = 0; k < n_parties; ++k) volume *= dim;
  const long long d = dim;
  return {n_parties, dim, 2 * (volume - 1), n_parties * (d * d - 1)};
}

inline PureState ghz(std::size_t dim, std::size_t n_parties) {
  if (dim < 2 || n_parties < 2) throw Error(ErrorCode::DomainError, "ghz needs dim >= 2, parties >= 2");
  if (n_parties > kMaxParties) throw Error(ErrorCode::DomainError, "too many parties");
  const Shape shape(n_parties, dim);
  std::vector<Complex> data(shape_volume(shape));
  // Offset of |i...i> is i * (1 + d + d^2 + ...).
  std::size_t stride = 0;
  for (std::size_t k = 0, p = 1; k < n_parties; ++k, p *= dim) stride += p;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < dim; ++i) data[i * stride] = amp;
  return PureState(ComplexTensor(shape, std::move(data)));
}

inline PureState w_state(std::size_t n_parties) {
  if (n_parties < 3) throw Error(ErrorCode::DomainError, "W state needs at least three parties");
  if (n_parties > kMaxParties) throw Error(ErrorCode::DomainError, "too many parties");
  const Shape shape(n_parties, 2);
  std::vector<Complex> data(shape_volume(shape));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_parties));
  for (std::size_t k = 0; k < n_parties; ++k) data[std::size_t{1} << k] = amp;
  return PureState(ComplexTensor(shape, std::move(data)));
}

/// I.i.d. complex Gaussian amplitudes, normalized.
inline PureState random_haar(const Shape& shape, std::uint64_t seed) {
  GaussianStream rng(seed);
  std::vector<Complex> data(shape_volume(shape));
  for (auto& z : data) z = rng.complex_normal();
  return PureState(ComplexTensor(shape, std::move(data)), NormMode::AutoNormalize);
}

/// Haar unitary: QR of a Gaussian matrix with the R diagonal phases divided out.
inline Matrix random_unitary(std::size_t dim, std::uint64_t seed, std::uint64_t stream = 0) {
  if (dim < 1) throw Error(ErrorCode::DomainError, "unitary dimension must be positive");
  GaussianStream rng(seed, stream);
  const auto n = static_cast<Eigen::Index>(dim);
  const Matrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

struct PlantedState {
  PureState state;
  HigherDecomposition truth;
};

/// State assembled from a known decomposition: per-party orthonormal families
/// (first `terms` columns of seeded Haar unitaries) and coefficients that are
/// equal inside each block of `pattern` and separated by relative gaps of at
/// least 0.05 across blocks. An empty pattern means all blocks of size one.
inline PlantedState random_decomposable(const Shape& shape, std::size_t terms,
                                        std::vector<std::size_t> pattern, std::uint64_t seed) {
  if (shape.empty()) throw Error(ErrorCode::DomainError, "empty shape");
  if (terms < 1) throw Error(ErrorCode::DomainError, "need at least one term");
  for (std::size_t d : shape) {
    if (terms > d) throw Error(ErrorCode::DomainError, "more terms than some party dimension");
  }
  if (pattern.empty()) pattern.assign(terms, 1);
  if (std::accumulate(pattern.begin(), pattern.end(), std::size_t{0}) != terms ||
      std::find(pattern.begin(), pattern.end(), std::size_t{0}) != pattern.end()) {
    throw Error(ErrorCode::DomainError, "block sizes must be positive and sum to terms");
  }

  // Stream 0 drives coefficients, stream p + 1 the family of party p.
  GaussianStream rng(seed, 0);
  const std::size_t blocks = pattern.size();
  std::vector<double> level(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    // Levels B - b + u/2 with u in (0, 1]: consecutive gaps >= 1/2 against a
    // top level <= B + 1/2, i.e. relative gaps >= 1/(2B + 1) >= 0.05 for B <= 10.
    level[b] = static_cast<double>(blocks - b) + 0.5 * rng.uniform();
  }
  std::vector<double> a;
  for (std::size_t b = 0; b < blocks; ++b) a.insert(a.end(), pattern[b], level[b]);
  const double norm = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
  for (auto& x : a) x /= norm;

  HigherDecomposition truth;
  truth.a = a;
  truth.shape = shape;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    const Matrix u = random_unitary(shape[p], seed, p + 1);
    std::vector<Vector> family;
    for (std::size_t mu = 0; mu < terms; ++mu) family.push_back(u.col(static_cast<Eigen::Index>(mu)));
    truth.vectors.push_back(std::move(family));
  }
  PureState state(reconstruct_higher(truth), NormMode::Strict);
  return {std::move(state), std::move(truth)};
}

}  // namespace hosd
