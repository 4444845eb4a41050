// schmidt.hpp
// Bipartite Schmidt decomposition of a tensor across an arbitrary split.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hosd/spectral.hpp"
#include "hosd/tensor.hpp"

namespace hosd {

/// psi = sum_mu a[mu] * xi[mu] (x) omega[mu], with xi living on split.left()
/// and omega on split.right(), both flattened row-major.
struct BipartiteSchmidt {
  std::vector<double> a;
  std::vector<Vector> xi;
  std::vector<Vector> omega;
  ModeSplit split;
  Shape shape;
};

namespace detail {

// Index of the first entry whose modulus clears 1e-8 of the largest one.
inline Eigen::Index first_significant(const Vector& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8 * peak) return i;
  }
  return 0;
}

// Unit-modulus phase p such that conj(p) * v has a real positive first
// significant component.
inline Complex leading_phase(const Vector& v) {
  if (v.size() == 0) return {1.0, 0.0};
  const Complex z = v[first_significant(v)];
  const double m = std::abs(z);
  return m > 0.0 ? z / m : Complex{1.0, 0.0};
}

}  // namespace detail

/// Schmidt decomposition of an arbitrary (not necessarily normalized) tensor.
/// Singular values at or below rank_rel * a_1 are dropped.
inline BipartiteSchmidt bipartite_schmidt(const ComplexTensor& t, const ModeSplit& split,
                                          const Tolerances& tol = {}) {
  split.validate(t.order());
  const SvdResult f = svd(unfold(t, split));
  const std::size_t rank = numerical_rank(f.s, tol);

  BipartiteSchmidt out{{}, {}, {}, split, t.shape()};
  for (std::size_t mu = 0; mu < rank; ++mu) {
    const auto k = static_cast<Eigen::Index>(mu);
    Vector xi = f.u.col(k);
    Vector omega = f.vh.row(k).transpose();
    const Complex phase = detail::leading_phase(xi);
    xi *= std::conj(phase);
    omega *= phase;
    out.a.push_back(f.s[mu]);
    out.xi.push_back(std::move(xi));
    out.omega.push_back(std::move(omega));
  }
  return out;
}

inline BipartiteSchmidt bipartite_schmidt(const PureState& psi, const ModeSplit& split,
                                          const Tolerances& tol = {}) {
  return bipartite_schmidt(psi.tensor(), split, tol);
}

inline ComplexTensor reconstruct_bipartite(const BipartiteSchmidt& d) {
  const auto rows = static_cast<Eigen::Index>(shape_volume(d.split.left_shape(d.shape)));
  const auto cols = static_cast<Eigen::Index>(shape_volume(d.split.right_shape(d.shape)));
  Matrix m = Matrix::Zero(rows, cols);
  for (std::size_t mu = 0; mu < d.a.size(); ++mu) {
    m.noalias() += d.a[mu] * d.xi[mu] * d.omega[mu].transpose();
  }
  return refold(m, d.shape, d.split);
}

}  // namespace hosd
