// spectral.hpp
// SVD, numerical rank, unitarity test and spectrum clustering.
//
// Every rank or degeneracy decision in the library goes through this header,
// so the tolerance semantics live in one place:
//   rank        s_i counts iff s_i > rank_rel * max(s_1, 1e-300)
//   unitarity   ||U^H U - I||_max <= ortho_abs
//   clustering  consecutive values merge iff (a_i - a_{i+1}) / a_1 <= cluster_rel

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hosd/core.hpp"

namespace hosd {

struct Tolerances {
  double rank_rel = 1e-8;
  double ortho_abs = 1e-8;
  double cluster_rel = 1e-6;
  double residual_abs = 1e-8;
  int max_retries = 8;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(rank_rel > 0) || !(ortho_abs > 0) || !(cluster_rel > 0) || !(residual_abs > 0)) {
      throw Error(ErrorCode::DomainError, "tolerances must be positive");
    }
    if (max_retries < 1) {
      throw Error(ErrorCode::DomainError, "max_retries must be at least 1");
    }
  }
};

/// Thin SVD A = u * diag(s) * vh with s nonincreasing.
struct SvdResult {
  Matrix u;
  std::vector<double> s;
  Matrix vh;
};

inline constexpr double kRankFloor = 1e-300;

inline SvdResult svd(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw Error(ErrorCode::ShapeError, "svd of an empty matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::ConvergenceFailure, "svd input has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> kernel(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (kernel.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Jacobi SVD did not converge");
  }
  SvdResult out;
  out.u = kernel.matrixU();
  out.vh = kernel.matrixV().adjoint();
  const auto& sv = kernel.singularValues();
  out.s.assign(sv.data(), sv.data() + sv.size());
  return out;
}

inline std::size_t numerical_rank(std::span<const double> s, const Tolerances& tol) {
  if (s.empty()) return 0;
  const double cut = tol.rank_rel * std::max(s.front(), kRankFloor);
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

/// max_{ij} |(U^H U - I)_{ij}|; throws NotSquare.
inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) {
    throw Error(ErrorCode::NotSquare, "unitarity test needs a square matrix");
  }
  const Matrix gram = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return gram.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const Matrix& u, const Tolerances& tol) {
  if (u.rows() != u.cols()) {
    throw Error(ErrorCode::NotSquare, "unitarity test needs a square matrix");
  }
  if (u.size() == 0) return true;
  return unitarity_defect(u) <= tol.ortho_abs;
}

/// Splits a nonincreasing positive spectrum into maximal runs of
/// (numerically) equal values. Blocks come out in descending order.
inline std::vector<std::vector<std::size_t>> cluster_spectrum(std::span<const double> a,
                                                               const Tolerances& tol) {
  std::vector<std::vector<std::size_t>> blocks;
  if (a.empty()) return blocks;
  const double scale = std::max(a.front(), kRankFloor);
  blocks.push_back({0});
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double gap = (a[i] - a[i + 1]) / scale;
    if (gap <= tol.cluster_rel) {
      blocks.back().push_back(i + 1);
    } else {
      blocks.push_back({i + 1});
    }
  }
  return blocks;
}

}  // namespace hosd
