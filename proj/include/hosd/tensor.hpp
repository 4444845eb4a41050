// tensor.hpp
// Dense complex N-way tensors, bipartitions of their parties, and the
// reshaping / local-unitary operations the decomposition code builds on.
//
// Storage is row-major with the LAST index varying fastest: the flat offset of
// (i_0, ..., i_{N-1}) is ((i_0 * d_1 + i_1) * d_2 + i_2) ... . Unfoldings use
// the same convention for both the row and the column multi-index.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hosd/core.hpp"
#include "hosd/spectral.hpp"

namespace hosd {

inline constexpr std::size_t kMaxParties = 8;

inline std::size_t shape_volume(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t acc, std::size_t d) { return acc * d; });
}

class ComplexTensor {
 public:
  ComplexTensor(Shape shape, std::vector<Complex> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) {
      throw Error(ErrorCode::ShapeError, "tensor needs at least one party");
    }
    if (shape_.size() > kMaxParties) {
      throw Error(ErrorCode::ShapeError, "more than 8 parties are not supported");
    }
    for (std::size_t d : shape_) {
      if (d == 0) throw Error(ErrorCode::ShapeError, "party dimensions must be positive");
    }
    if (data_.size() != shape_volume(shape_)) {
      throw Error(ErrorCode::ShapeMismatch,
                  "data length " + std::to_string(data_.size()) + " does not match shape volume " +
                      std::to_string(shape_volume(shape_)));
    }
  }

  static ComplexTensor zeros(Shape shape) {
    const std::size_t n = shape_volume(shape);
    return ComplexTensor(std::move(shape), std::vector<Complex>(n));
  }

  static ComplexTensor from_vector(Shape shape, const Vector& v) {
    return ComplexTensor(std::move(shape), std::vector<Complex>(v.data(), v.data() + v.size()));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const Complex> data() const noexcept { return data_; }
  const Complex& operator[](std::size_t flat) const { return data_[flat]; }

  Complex at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

  std::size_t offset(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) {
      throw Error(ErrorCode::ShapeMismatch, "index arity differs from tensor order");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      if (index[k] >= shape_[k]) throw Error(ErrorCode::ShapeMismatch, "index out of range");
      flat = flat * shape_[k] + index[k];
    }
    return flat;
  }

  Vector to_vector() const {
    return Eigen::Map<const Vector>(data_.data(), static_cast<Eigen::Index>(data_.size()));
  }

  double norm() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
  }

  ComplexTensor scaled(Complex factor) const {
    std::vector<Complex> out(data_);
    for (auto& z : out) z *= factor;
    return ComplexTensor(shape_, std::move(out));
  }

  friend bool operator==(const ComplexTensor&, const ComplexTensor&) = default;

 private:
  Shape shape_;
  std::vector<Complex> data_;
};

/// ||s - t||_2; throws ShapeMismatch.
inline double distance(const ComplexTensor& s, const ComplexTensor& t) {
  if (s.shape() != t.shape()) throw Error(ErrorCode::ShapeMismatch, "distance of unequal shapes");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += std::norm(s[i] - t[i]);
  return std::sqrt(acc);
}

/// Sum conj(s_i) t_i.
inline Complex inner(const ComplexTensor& s, const ComplexTensor& t) {
  if (s.shape() != t.shape()) throw Error(ErrorCode::ShapeMismatch, "inner product of unequal shapes");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) acc += std::conj(s[i]) * t[i];
  return acc;
}

/// v_0 (x) v_1 (x) ... as a tensor of shape (len v_0, len v_1, ...).
inline ComplexTensor outer_product(std::span<const Vector> factors) {
  Shape shape;
  for (const auto& f : factors) shape.push_back(static_cast<std::size_t>(f.size()));
  std::vector<Complex> data{Complex{1.0, 0.0}};
  for (const auto& f : factors) {
    std::vector<Complex> next;
    next.reserve(data.size() * static_cast<std::size_t>(f.size()));
    for (const auto& z : data) {
      for (Eigen::Index j = 0; j < f.size(); ++j) next.push_back(z * f[j]);
    }
    data = std::move(next);
  }
  return ComplexTensor(std::move(shape), std::move(data));
}

/// A bipartition of party indices (0-based). Both sides keep their given order.
class ModeSplit {
 public:
  ModeSplit(std::vector<std::size_t> left, std::vector<std::size_t> right)
      : left_(std::move(left)), right_(std::move(right)) {}

  /// ({party}, every other party in ascending order).
  static ModeSplit pivot(std::size_t order, std::size_t party) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < order; ++k) {
      if (k != party) rest.push_back(k);
    }
    return ModeSplit({party}, std::move(rest));
  }

  /// (first `count` parties, remaining parties).
  static ModeSplit leading(std::size_t order, std::size_t count) {
    std::vector<std::size_t> left(count), right(order - std::min(count, order));
    std::iota(left.begin(), left.end(), std::size_t{0});
    std::iota(right.begin(), right.end(), count);
    return ModeSplit(std::move(left), std::move(right));
  }

  const std::vector<std::size_t>& left() const noexcept { return left_; }
  const std::vector<std::size_t>& right() const noexcept { return right_; }

  void validate(std::size_t order) const {
    if (left_.empty() || right_.empty()) {
      throw Error(ErrorCode::SplitInvalid, "both sides of a split must be nonempty");
    }
    std::vector<bool> seen(order, false);
    for (const auto* side : {&left_, &right_}) {
      for (std::size_t p : *side) {
        if (p >= order) throw Error(ErrorCode::SplitInvalid, "party index out of range");
        if (seen[p]) throw Error(ErrorCode::SplitInvalid, "party listed twice");
        seen[p] = true;
      }
    }
    if (left_.size() + right_.size() != order) {
      throw Error(ErrorCode::SplitInvalid, "split does not cover every party");
    }
  }

  Shape left_shape(const Shape& shape) const { return pick(shape, left_); }
  Shape right_shape(const Shape& shape) const { return pick(shape, right_); }

  friend bool operator==(const ModeSplit&, const ModeSplit&) = default;

 private:
  static Shape pick(const Shape& shape, const std::vector<std::size_t>& parties) {
    Shape out;
    for (std::size_t p : parties) out.push_back(shape[p]);
    return out;
  }

  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
};

namespace detail {

// For each flat tensor offset, the (row, col) it lands on under `split`.
inline std::vector<std::pair<std::size_t, std::size_t>> unfolding_map(const Shape& shape,
                                                                      const ModeSplit& split) {
  const std::size_t n = shape.size();
  // Row-major stride of each party within its side's multi-index.
  std::vector<std::size_t> row_stride(n, 0), col_stride(n, 0);
  auto assign = [&](const std::vector<std::size_t>& side, std::vector<std::size_t>& stride) {
    std::size_t s = 1;
    for (auto it = side.rbegin(); it != side.rend(); ++it) {
      stride[*it] = s;
      s *= shape[*it];
    }
  };
  assign(split.left(), row_stride);
  assign(split.right(), col_stride);

  const std::size_t total = shape_volume(shape);
  std::vector<std::pair<std::size_t, std::size_t>> out(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = 0, c = 0;
    for (std::size_t k = 0; k < n; ++k) {
      r += idx[k] * row_stride[k];
      c += idx[k] * col_stride[k];
    }
    out[flat] = {r, c};
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace detail

inline Matrix unfold(const ComplexTensor& t, const ModeSplit& split) {
  split.validate(t.order());
  const auto rows = shape_volume(split.left_shape(t.shape()));
  const auto cols = shape_volume(split.right_shape(t.shape()));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const auto map = detail::unfolding_map(t.shape(), split);
  for (std::size_t flat = 0; flat < map.size(); ++flat) {
    m(static_cast<Eigen::Index>(map[flat].first), static_cast<Eigen::Index>(map[flat].second)) =
        t[flat];
  }
  return m;
}

/// Inverse of unfold for a tensor of the given shape.
inline ComplexTensor refold(const Matrix& m, const Shape& shape, const ModeSplit& split) {
  split.validate(shape.size());
  const auto rows = shape_volume(split.left_shape(shape));
  const auto cols = shape_volume(split.right_shape(shape));
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match the split of this shape");
  }
  const auto map = detail::unfolding_map(shape, split);
  std::vector<Complex> data(map.size());
  for (std::size_t flat = 0; flat < map.size(); ++flat) {
    data[flat] =
        m(static_cast<Eigen::Index>(map[flat].first), static_cast<Eigen::Index>(map[flat].second));
  }
  return ComplexTensor(shape, std::move(data));
}

/// Applies U to one party: result[.., i, ..] = sum_j U(i, j) t[.., j, ..].
inline ComplexTensor apply_local_unitary(const ComplexTensor& t, std::size_t party, const Matrix& u,
                                         const Tolerances& tol = {}) {
  if (party >= t.order()) throw Error(ErrorCode::DimensionMismatch, "party index out of range");
  const auto d = static_cast<Eigen::Index>(t.shape()[party]);
  if (u.rows() != d || u.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "unitary size differs from the party dimension");
  }
  if (!is_unitary(u, tol)) throw Error(ErrorCode::NotUnitary, "local operator is not unitary");
  const auto split = ModeSplit::pivot(t.order(), party);
  const Matrix rotated = u * unfold(t, split);
  return refold(rotated, t.shape(), split);
}

enum class NormMode { Strict, AutoNormalize };

/// A unit-norm tensor. Strict mode rejects inputs off by more than the
/// tolerance; auto-normalize rescales and remembers the original norm.
class PureState {
 public:
  static constexpr double kDefaultNormTolerance = 1e-6;

  explicit PureState(ComplexTensor tensor, NormMode mode = NormMode::Strict,
                     double norm_tolerance = kDefaultNormTolerance)
      : tensor_(std::move(tensor)), norm_tolerance_(norm_tolerance), original_norm_(tensor_.norm()) {
    if (mode == NormMode::Strict) {
      if (std::abs(original_norm_ - 1.0) > norm_tolerance_) {
        throw Error(ErrorCode::NormViolation,
                    "state norm " + std::to_string(original_norm_) + " is not 1");
      }
    } else {
      if (!(original_norm_ > 0.0) || !std::isfinite(original_norm_)) {
        throw Error(ErrorCode::NormViolation, "cannot normalize a zero or non-finite tensor");
      }
      tensor_ = tensor_.scaled(Complex{1.0 / original_norm_, 0.0});
    }
  }

  const ComplexTensor& tensor() const noexcept { return tensor_; }
  const Shape& shape() const noexcept { return tensor_.shape(); }
  std::size_t order() const noexcept { return tensor_.order(); }
  double norm_tolerance() const noexcept { return norm_tolerance_; }
  double original_norm() const noexcept { return original_norm_; }

 private:
  ComplexTensor tensor_;
  double norm_tolerance_;
  double original_norm_;
};

}  // namespace hosd
