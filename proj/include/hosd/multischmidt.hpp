// multischmidt.hpp
// Existence test and construction of higher-order Schmidt decompositions
//
//     psi = sum_mu a_mu  v^0_mu (x) v^1_mu (x) ... (x) v^{N-1}_mu
//
// with an orthonormal family {v^p_mu} on every party p.
//
// Procedure. Party 0 is split off with an ordinary Schmidt decomposition,
// psi = sum_mu a_mu xi_mu (x) omega_mu, and each omega_mu is refolded into an
// (N-1)-party tensor Omega_mu. The coefficients are grouped into blocks of
// (numerically) equal values.
//
//  * A block of one coefficient fixes Omega_mu up to phase, so Omega_mu must be
//    a product tensor, and the factors of different mu must be orthogonal on
//    every party.
//  * A block of n equal coefficients fixes only span{Omega_mu}. The block is
//    decomposable iff some unitary mixing of the Omega_mu yields n product
//    tensors with per-party orthogonal factors. Necessary: every Omega_mu has
//    rank <= n across every sequential cut, and every remaining party has
//    dimension >= n. The mixing is searched for by taking a seeded random
//    combination S = sum c_mu Omega_mu (whose own Schmidt spectrum is then
//    generically nondegenerate), reading candidate products off S, and
//    verifying them against the block. Verified candidates are accepted;
//    max_retries failed draws produce a BlockUnresolvable certificate.
//
// Rigorous refutations (RankExcess, CrossOrthogonalityViolation) are tried on
// every block before any random search. Every Decomposable verdict is checked
// by reconstruction before it is returned.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hosd/random.hpp"
#include "hosd/schmidt.hpp"
#include "hosd/spectral.hpp"
#include "hosd/tensor.hpp"

namespace hosd {

struct OmegaSet {
  std::vector<ComplexTensor> omegas;
  std::vector<double> a;
  std::vector<Vector> xi;
  std::vector<std::vector<std::size_t>> blocks;
};

enum class CertificateKind {
  RankExcess,
  CrossOrthogonalityViolation,
  BlockUnresolvable,
  ResidualTooLarge,
};

inline const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::RankExcess: return "RankExcess";
    case CertificateKind::CrossOrthogonalityViolation: return "CrossOrthogonalityViolation";
    case CertificateKind::BlockUnresolvable: return "BlockUnresolvable";
    case CertificateKind::ResidualTooLarge: return "ResidualTooLarge";
  }
  return "Unknown";
}

/// Evidence that no decomposition exists. measured_value > threshold always.
///
///   RankExcess                   measured = offending rank (or block size when a
///                                party is too small); threshold = allowed bound
///   CrossOrthogonalityViolation  measured = |<v^party_mu, v^party_nu>|
///   BlockUnresolvable            measured = best candidate's verification error
///   ResidualTooLarge             measured = ||reconstruction - psi||_2
struct Certificate {
  CertificateKind kind;
  std::optional<std::size_t> block_index;
  std::optional<std::size_t> mu_index;
  std::optional<std::size_t> nu_index;
  std::optional<std::size_t> party;
  double measured_value = 0.0;
  double threshold = 0.0;

  /// True when the certificate proves non-existence (a necessary condition
  /// failed) rather than reporting a search or numerical failure.
  bool rigorous() const {
    return kind == CertificateKind::RankExcess ||
           kind == CertificateKind::CrossOrthogonalityViolation;
  }
};

/// tensor ~= scale * factors[0] (x) factors[1] (x) ..., factors unit norm.
struct ProductFactors {
  Complex scale{1.0, 0.0};
  std::vector<Vector> factors;
};

struct HigherDecomposition {
  std::vector<double> a;
  /// vectors[party][mu]
  std::vector<std::vector<Vector>> vectors;
  Shape shape;

  std::size_t terms() const { return a.size(); }
};

struct BlockSolution {
  /// Omega_mu = sum_nu mixing(mu, nu) * (x)_p factors[nu][p]
  Matrix mixing;
  std::vector<std::vector<Vector>> factors;
  int attempts = 0;
};

struct Verdict {
  std::optional<HigherDecomposition> decomposition;
  std::optional<Certificate> certificate;
  /// Party-0 Schmidt coefficients of the input (reported either way).
  std::vector<double> schmidt_coefficients;
  std::optional<double> residual;

  bool decomposable() const { return decomposition.has_value(); }
};

inline ComplexTensor reconstruct_higher(const HigherDecomposition& d) {
  if (d.terms() == 0) return ComplexTensor::zeros(d.shape);
  const std::size_t parties = d.vectors.size();
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(shape_volume(d.shape)));
  std::vector<Vector> term(parties);
  for (std::size_t mu = 0; mu < d.terms(); ++mu) {
    for (std::size_t p = 0; p < parties; ++p) term[p] = d.vectors[p][mu];
    acc += d.a[mu] * outer_product(term).to_vector();
  }
  return ComplexTensor::from_vector(d.shape, acc);
}

inline OmegaSet extract_omegas(const PureState& psi, const Tolerances& tol = {}) {
  if (psi.order() < 3) {
    throw Error(ErrorCode::ShapeError, "Omega extraction needs at least three parties");
  }
  const auto bs = bipartite_schmidt(psi, ModeSplit::pivot(psi.order(), 0), tol);
  const Shape rest(psi.shape().begin() + 1, psi.shape().end());
  OmegaSet out;
  out.a = bs.a;
  out.xi = bs.xi;
  for (const auto& w : bs.omega) out.omegas.push_back(ComplexTensor::from_vector(rest, w));
  out.blocks = cluster_spectrum(out.a, tol);
  return out;
}

namespace detail {

inline ComplexTensor drop_leading_party(const Vector& v, const Shape& shape) {
  return ComplexTensor::from_vector(Shape(shape.begin() + 1, shape.end()), v);
}

struct Peel {
  ProductFactors product;
  /// Numerical rank seen at each peel step (one entry per step taken).
  std::vector<std::size_t> ranks;
};

// Greedy rank-1 peel: split off the leading party with the top singular pair
// and continue on the right singular vector. With stop_on_excess the peel
// halts at the first step whose rank exceeds 1.
inline Peel peel_product(const ComplexTensor& t, const Tolerances& tol, bool stop_on_excess) {
  Peel out;
  if (t.order() == 1) {
    const double n = t.norm();
    out.product.scale = {n, 0.0};
    out.product.factors.push_back(n > 0.0 ? Vector(t.to_vector() / n) : t.to_vector());
    return out;
  }
  ComplexTensor rest = t;
  while (rest.order() > 1) {
    const SvdResult f = svd(unfold(rest, ModeSplit::leading(rest.order(), 1)));
    const std::size_t rank = numerical_rank(f.s, tol);
    out.ranks.push_back(rank);
    if (stop_on_excess && rank > 1) return out;
    out.product.scale *= f.s.front();
    out.product.factors.push_back(f.u.col(0));
    rest = drop_leading_party(f.vh.row(0).transpose(), rest.shape());
  }
  out.product.factors.push_back(rest.to_vector());
  return out;
}

// First sequential cut (leading k parties | rest) of t whose numerical rank
// exceeds `bound`, as (rank, k).
inline std::optional<std::pair<std::size_t, std::size_t>> sequential_rank_excess(
    const ComplexTensor& t, std::size_t bound, const Tolerances& tol) {
  for (std::size_t k = 1; k < t.order(); ++k) {
    const auto f = svd(unfold(t, ModeSplit::leading(t.order(), k)));
    const std::size_t rank = numerical_rank(f.s, tol);
    if (rank > bound) return std::make_pair(rank, k);
  }
  return std::nullopt;
}

inline double max_cross_overlap(std::span<const std::vector<Vector>> per_term) {
  double worst = 0.0;
  for (std::size_t mu = 0; mu < per_term.size(); ++mu) {
    for (std::size_t nu = mu + 1; nu < per_term.size(); ++nu) {
      for (std::size_t p = 0; p < per_term[mu].size(); ++p) {
        worst = std::max(worst, std::abs(per_term[mu][p].dot(per_term[nu][p])));
      }
    }
  }
  return worst;
}

// Rigorous necessary conditions for a degenerate block of size n.
inline std::optional<Certificate> block_precheck(std::span<const ComplexTensor> omegas,
                                                 const Tolerances& tol) {
  const std::size_t n = omegas.size();
  if (n == 0) return std::nullopt;
  const Shape& shape = omegas.front().shape();
  for (std::size_t p = 0; p < shape.size(); ++p) {
    if (n > shape[p]) {
      Certificate c{CertificateKind::RankExcess};
      c.party = p;
      c.measured_value = static_cast<double>(n);
      c.threshold = static_cast<double>(shape[p]);
      return c;
    }
  }
  for (std::size_t mu = 0; mu < n; ++mu) {
    if (auto excess = sequential_rank_excess(omegas[mu], n, tol)) {
      Certificate c{CertificateKind::RankExcess};
      c.mu_index = mu;
      c.measured_value = static_cast<double>(excess->first);
      c.threshold = static_cast<double>(n);
      return c;
    }
  }
  return std::nullopt;
}

// Candidate product family read off a random combination S of the block:
// top-n Schmidt pairs across (leading party | rest), each right vector
// greedily peeled into a product.
inline std::vector<std::vector<Vector>> candidate_products(const ComplexTensor& s, std::size_t n,
                                                           const Tolerances& tol) {
  const SvdResult f = svd(unfold(s, ModeSplit::leading(s.order(), 1)));
  std::vector<std::vector<Vector>> out;
  for (std::size_t nu = 0; nu < n && nu < f.s.size(); ++nu) {
    const auto k = static_cast<Eigen::Index>(nu);
    std::vector<Vector> factors{f.u.col(k)};
    const ComplexTensor rest = drop_leading_party(f.vh.row(k).transpose(), s.shape());
    auto peeled = peel_product(rest, tol, false);
    for (auto& v : peeled.product.factors) factors.push_back(std::move(v));
    out.push_back(std::move(factors));
  }
  return out;
}

struct SolverOptions {
  /// Treat every coefficient as one block (forces the degenerate path).
  bool merge_blocks = false;
};

}  // namespace detail

/// Rank-1 test for a single Omega_mu (nondegenerate coefficient). On success
/// returns the product factors; otherwise a RankExcess certificate whose
/// measured value is the rank at the first failing peel step. For two
/// remaining parties that is the matrix rank of Omega_mu.
inline std::variant<ProductFactors, Certificate> check_nondegenerate_mu(const ComplexTensor& omega,
                                                                        const Tolerances& tol = {}) {
  auto peel = detail::peel_product(omega, tol, true);
  if (!peel.ranks.empty() && peel.ranks.back() > 1) {
    Certificate c{CertificateKind::RankExcess};
    c.measured_value = static_cast<double>(peel.ranks.back());
    c.threshold = 1.0;
    return c;
  }
  return std::move(peel.product);
}

/// Per-party orthogonality across terms: per_term[mu][p] is term mu's factor
/// on party p. Reports the largest overlap if it exceeds ortho_abs.
inline std::optional<Certificate> check_cross_orthogonality(
    std::span<const std::vector<Vector>> per_term, const Tolerances& tol = {}) {
  std::optional<Certificate> worst;
  for (std::size_t mu = 0; mu < per_term.size(); ++mu) {
    for (std::size_t nu = mu + 1; nu < per_term.size(); ++nu) {
      const std::size_t parties = std::min(per_term[mu].size(), per_term[nu].size());
      for (std::size_t p = 0; p < parties; ++p) {
        const double overlap = std::abs(per_term[mu][p].dot(per_term[nu][p]));
        if (overlap > tol.ortho_abs && (!worst || overlap > worst->measured_value)) {
          Certificate c{CertificateKind::CrossOrthogonalityViolation};
          c.mu_index = mu;
          c.nu_index = nu;
          c.party = p;
          c.measured_value = overlap;
          c.threshold = tol.ortho_abs;
          worst = c;
        }
      }
    }
  }
  return worst;
}

/// Searches for a unitary mixing of a degenerate block that turns every
/// Omega_mu into an orthogonal product family. Random draws use
/// GaussianStream(tol.seed, (block_index << 32) | retry).
inline std::variant<BlockSolution, Certificate> solve_degenerate_block(
    std::span<const ComplexTensor> omegas, const Tolerances& tol = {},
    std::size_t block_index = 0) {
  tol.validate();
  const std::size_t n = omegas.size();
  if (n == 0) throw Error(ErrorCode::DomainError, "empty block");
  if (omegas.front().order() < 2) {
    throw Error(ErrorCode::ShapeError, "block tensors need at least two parties");
  }
  if (auto c = detail::block_precheck(omegas, tol)) {
    c->block_index = block_index;
    return *c;
  }

  const Shape& shape = omegas.front().shape();
  std::vector<Vector> flat;
  for (const auto& o : omegas) flat.push_back(o.to_vector());

  double best = std::numeric_limits<double>::infinity();
  for (int retry = 0; retry < tol.max_retries; ++retry) {
    GaussianStream rng(tol.seed,
                       (static_cast<std::uint64_t>(block_index) << 32) | static_cast<std::uint64_t>(retry));
    Vector s = Vector::Zero(flat.front().size());
    for (const auto& o : flat) s += rng.complex_normal() * o;

    auto candidates = detail::candidate_products(ComplexTensor::from_vector(shape, s), n, tol);
    if (candidates.size() < n) continue;

    std::vector<Vector> products;
    for (const auto& c : candidates) products.push_back(outer_product(c).to_vector());

    Matrix mixing(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t mu = 0; mu < n; ++mu) {
      for (std::size_t nu = 0; nu < n; ++nu) {
        mixing(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
            products[nu].dot(flat[mu]);
      }
    }
    double projection = 0.0;
    for (std::size_t mu = 0; mu < n; ++mu) {
      Vector r = flat[mu];
      for (std::size_t nu = 0; nu < n; ++nu) {
        r -= mixing(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) * products[nu];
      }
      projection = std::max(projection, r.norm());
    }
    const double defect = unitarity_defect(mixing);
    const double overlap = detail::max_cross_overlap(candidates);

    if (projection <= tol.residual_abs && defect <= tol.ortho_abs && overlap <= tol.ortho_abs) {
      return BlockSolution{std::move(mixing), std::move(candidates), retry + 1};
    }
    best = std::min(best, std::max({projection, defect, overlap}));
  }

  Certificate c{CertificateKind::BlockUnresolvable};
  c.block_index = block_index;
  // A candidate family can miss by at most a unit vector's worth.
  c.measured_value = std::isfinite(best) ? best : 1.0;
  c.threshold = std::min(tol.residual_abs, tol.ortho_abs);
  return c;
}

namespace detail {

struct Term {
  double a;
  Vector xi;
  std::vector<Vector> factors;
};

inline Verdict refute(Certificate c, std::vector<double> coefficients) {
  Verdict v;
  v.certificate = c;
  v.schmidt_coefficients = std::move(coefficients);
  if (c.kind == CertificateKind::ResidualTooLarge) v.residual = c.measured_value;
  return v;
}

// Final soundness gate shared by every path: per-party orthonormality and
// reconstruction residual.
inline Verdict finish(HigherDecomposition d, const PureState& psi, std::vector<double> coefficients,
                      const Tolerances& tol) {
  std::vector<std::vector<Vector>> per_term(d.terms());
  for (std::size_t mu = 0; mu < d.terms(); ++mu) {
    for (const auto& family : d.vectors) per_term[mu].push_back(family[mu]);
  }
  if (auto c = check_cross_orthogonality(per_term, tol)) return refute(*c, std::move(coefficients));

  const double residual = distance(reconstruct_higher(d), psi.tensor());
  if (!(residual <= tol.residual_abs)) {
    Certificate c{CertificateKind::ResidualTooLarge};
    c.measured_value = residual;
    c.threshold = tol.residual_abs;
    return refute(c, std::move(coefficients));
  }
  Verdict v;
  v.decomposition = std::move(d);
  v.schmidt_coefficients = std::move(coefficients);
  v.residual = residual;
  return v;
}

inline Verdict bipartite_verdict(const PureState& psi, const Tolerances& tol) {
  const auto bs = bipartite_schmidt(psi, ModeSplit::pivot(2, 0), tol);
  HigherDecomposition d{bs.a, {bs.xi, bs.omega}, psi.shape()};
  return finish(std::move(d), psi, bs.a, tol);
}

inline Verdict higher_schmidt(const PureState& psi, const Tolerances& tol,
                              const SolverOptions& options) {
  tol.validate();
  if (psi.order() < 2) throw Error(ErrorCode::ShapeError, "need at least two parties");
  if (psi.order() == 2) return bipartite_verdict(psi, tol);

  const OmegaSet set = extract_omegas(psi, tol);
  std::vector<std::vector<std::size_t>> blocks = set.blocks;
  if (options.merge_blocks && !set.a.empty()) {
    blocks.assign(1, std::vector<std::size_t>(set.a.size()));
    std::iota(blocks.front().begin(), blocks.front().end(), std::size_t{0});
  }
  auto block_omegas = [&](const std::vector<std::size_t>& block) {
    std::vector<ComplexTensor> out;
    for (std::size_t mu : block) out.push_back(set.omegas[mu]);
    return out;
  };

  // Rigorous rank conditions on every block first.
  std::vector<std::optional<ProductFactors>> singles(set.omegas.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (block.size() == 1) {
      const std::size_t mu = block.front();
      auto r = check_nondegenerate_mu(set.omegas[mu], tol);
      if (auto* c = std::get_if<Certificate>(&r)) {
        c->block_index = b;
        c->mu_index = mu;
        return refute(*c, set.a);
      }
      singles[mu] = std::get<ProductFactors>(std::move(r));
    } else {
      const auto members = block_omegas(block);
      if (auto c = block_precheck(members, tol)) {
        c->block_index = b;
        if (c->mu_index) c->mu_index = block[*c->mu_index];
        if (c->party) c->party = *c->party + 1;
        return refute(*c, set.a);
      }
    }
  }

  // Cross-orthogonality among the uniquely determined factors, indexed by mu.
  {
    std::vector<std::size_t> index;
    std::vector<std::vector<Vector>> per_term;
    for (std::size_t mu = 0; mu < singles.size(); ++mu) {
      if (singles[mu]) {
        index.push_back(mu);
        per_term.push_back(singles[mu]->factors);
      }
    }
    if (auto c = check_cross_orthogonality(per_term, tol)) {
      c->mu_index = index[*c->mu_index];
      c->nu_index = index[*c->nu_index];
      c->party = *c->party + 1;
      return refute(*c, set.a);
    }
  }

  std::vector<Term> terms;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (block.size() == 1) {
      const std::size_t mu = block.front();
      const auto& pf = *singles[mu];
      const double mag = std::abs(pf.scale);
      terms.push_back({set.a[mu] * mag, set.xi[mu] * (pf.scale / mag), pf.factors});
      continue;
    }
    const auto members = block_omegas(block);
    auto r = solve_degenerate_block(members, tol, b);
    if (auto* c = std::get_if<Certificate>(&r)) {
      if (c->mu_index) c->mu_index = block[*c->mu_index];
      if (c->party) c->party = *c->party + 1;
      return refute(*c, set.a);
    }
    auto& sol = std::get<BlockSolution>(r);
    // psi_block = sum_mu a_mu xi_mu (x) Omega_mu = sum_nu c_nu (x) P_nu,
    // c_nu = sum_mu a_mu W(mu, nu) xi_mu.
    for (std::size_t nu = 0; nu < block.size(); ++nu) {
      Vector c = Vector::Zero(set.xi.front().size());
      for (std::size_t k = 0; k < block.size(); ++k) {
        const std::size_t mu = block[k];
        c += set.a[mu] *
             sol.mixing(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nu)) * set.xi[mu];
      }
      const double norm = c.norm();
      terms.push_back({norm, c / norm, std::move(sol.factors[nu])});
    }
  }

  // Phase convention: every factor beyond party 0 starts real positive.
  for (auto& t : terms) {
    for (auto& f : t.factors) {
      const Complex phase = leading_phase(f);
      f *= std::conj(phase);
      t.xi *= phase;
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& x, const Term& y) { return x.a > y.a; });

  HigherDecomposition d;
  d.shape = psi.shape();
  d.vectors.resize(psi.order());
  for (auto& t : terms) {
    d.a.push_back(t.a);
    d.vectors[0].push_back(std::move(t.xi));
    for (std::size_t p = 0; p < t.factors.size(); ++p) {
      d.vectors[p + 1].push_back(std::move(t.factors[p]));
    }
  }
  return finish(std::move(d), psi, set.a, tol);
}

}  // namespace detail

/// Decides whether psi has a higher-order Schmidt decomposition and builds it.
/// N = 2 always succeeds (ordinary Schmidt decomposition).
inline Verdict higher_schmidt(const PureState& psi, const Tolerances& tol = {}) {
  return detail::higher_schmidt(psi, tol, {});
}

}  // namespace hosd
