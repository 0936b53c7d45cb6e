#include "blockcoh/block_coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blockcoh/errors.hpp"

namespace blockcoh {

namespace {

void require_same_dim(Index a, Index b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimensions " +
                                                  std::to_string(a) + " and " + std::to_string(b));
  }
}

double clamp_value(double c) { return (c < 0.0 && c > -kValueClampBand) ? 0.0 : c; }

}  // namespace

std::vector<double> block_weights(const HermitianMatrix& sqrt_rho,
                                  const ProjectiveDecomposition& p) {
  require_same_dim(sqrt_rho.dim(), p.dim(), "block_weights");
  std::vector<double> w;
  w.reserve(p.size());
  for (const auto& proj : p.projectors()) {
    // P S P is Hermitian, so Tr[(P S P)^2] is its squared Frobenius norm.
    w.push_back((proj * sqrt_rho.matrix() * proj).squaredNorm());
  }
  return w;
}

double block_coherence(const DensityMatrix& rho, const ProjectiveDecomposition& p) {
  require_same_dim(rho.dim(), p.dim(), "block_coherence");
  const auto w = block_weights(psd_sqrt(rho), p);
  return clamp_value(1.0 - std::accumulate(w.begin(), w.end(), 0.0));
}

double affinity_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "affinity_distance");
  const double affinity =
      trace_product(psd_sqrt(rho).matrix(), psd_sqrt(sigma).matrix()).real();
  return std::clamp(1.0 - affinity * affinity, 0.0, 1.0);
}

DensityMatrix closest_free_state(const DensityMatrix& rho, const ProjectiveDecomposition& p,
                                 const Tolerances& tol) {
  require_same_dim(rho.dim(), p.dim(), "closest_free_state");
  const HermitianMatrix root = psd_sqrt(rho);
  const Index d = rho.dim();

  ComplexMatrix sigma = ComplexMatrix::Zero(d, d);
  double total = 0.0;
  for (const auto& proj : p.projectors()) {
    const ComplexMatrix block = proj * root.matrix() * proj;
    const double weight = block.squaredNorm();
    total += weight;
    if (weight > tol.zero) sigma += block * block;
  }
  if (!(total > tol.zero)) {
    throw Error(ErrorKind::DegenerateNormalization, "every block of sqrt(rho) vanishes", total,
                tol.zero);
  }
  return normalize_positive(sigma, tol);
}

DensityMatrix dephase(const DensityMatrix& rho, const ProjectiveDecomposition& p) {
  require_same_dim(rho.dim(), p.dim(), "dephase");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& proj : p.projectors()) out += proj * rho.matrix() * proj;
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix::trusted(out / out.trace().real());
}

double free_state_defect(const DensityMatrix& rho, const ProjectiveDecomposition& p) {
  return max_abs(rho.matrix() - dephase(rho, p).matrix());
}

DensityMatrix max_coherent_state(const ProjectiveDecomposition& p, Rng& rng) {
  ComplexVector psi = ComplexVector::Zero(p.dim());
  for (std::size_t m = 0; m < p.size(); ++m) {
    psi += p.range_basis(m) * random_unit_vector(p.block_dims()[m], rng);
  }
  return DensityMatrix::from_pure(psi);
}

UnitaryMatrix block_diagonal_unitary(const ProjectiveDecomposition& p,
                                     const std::vector<UnitaryMatrix>& block_unitaries) {
  if (block_unitaries.size() != p.size()) {
    throw Error(ErrorKind::SizeMismatch, "need one unitary per block");
  }
  ComplexMatrix u = ComplexMatrix::Zero(p.dim(), p.dim());
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (block_unitaries[m].dim() != p.block_dims()[m]) {
      throw Error(ErrorKind::SizeMismatch, "block unitary " + std::to_string(m) +
                                               " does not match the block rank",
                  std::nullopt, std::nullopt, m);
    }
    const ComplexMatrix basis = p.range_basis(m);
    u += basis * block_unitaries[m].matrix() * basis.adjoint();
  }
  return UnitaryMatrix::trusted(std::move(u));
}

std::string_view to_string(FreeOperation::Kind kind) noexcept {
  switch (kind) {
    case FreeOperation::Kind::BlockUnitary: return "block_unitary";
    case FreeOperation::Kind::Dephasing: return "dephasing";
    case FreeOperation::Kind::BlockSwap: return "block_swap";
    case FreeOperation::Kind::ConvexMixture: return "convex_mixture";
  }
  return "unknown";
}

BlockSwap make_block_swap(const ProjectiveDecomposition& p, std::size_t first,
                          std::size_t second, const UnitaryMatrix& w) {
  if (first >= p.size() || second >= p.size() || first == second) {
    throw Error(ErrorKind::InvalidArgument, "block swap needs two distinct block indices");
  }
  if (p.block_dims()[first] != p.block_dims()[second] || w.dim() != p.block_dims()[first]) {
    throw Error(ErrorKind::SizeMismatch, "block swap needs equal-rank blocks and a matching W");
  }
  const ComplexMatrix ba = p.range_basis(first);
  const ComplexMatrix bb = p.range_basis(second);
  ComplexMatrix v = bb * w.matrix() * ba.adjoint() + ba * w.matrix() * bb.adjoint();
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (m != first && m != second) v += p[m];
  }
  return BlockSwap{first, second, w, UnitaryMatrix::trusted(std::move(v))};
}

namespace {

FreeOperation sample_block_unitary(const ProjectiveDecomposition& p, Rng& rng) {
  std::vector<UnitaryMatrix> blocks;
  blocks.reserve(p.size());
  for (Index r : p.block_dims()) blocks.push_back(haar_unitary(r, rng));
  return FreeOperation{BlockUnitary{block_diagonal_unitary(p, blocks)}};
}

}  // namespace

FreeOperation sample_free_operation(const ProjectiveDecomposition& p, Rng& rng, int depth) {
  const std::size_t kinds = depth >= 2 ? 3 : 4;
  switch (static_cast<FreeOperation::Kind>(uniform_index(rng, kinds))) {
    case FreeOperation::Kind::BlockUnitary:
      return sample_block_unitary(p, rng);
    case FreeOperation::Kind::Dephasing:
      return FreeOperation{Dephasing{p}};
    case FreeOperation::Kind::BlockSwap: {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = a + 1; b < p.size(); ++b) {
          if (p.block_dims()[a] == p.block_dims()[b]) pairs.emplace_back(a, b);
        }
      }
      if (pairs.empty()) return sample_block_unitary(p, rng);
      const auto [a, b] = pairs[uniform_index(rng, pairs.size())];
      const UnitaryMatrix w = haar_unitary(p.block_dims()[a], rng);
      return FreeOperation{make_block_swap(p, a, b, w)};
    }
    case FreeOperation::Kind::ConvexMixture: {
      const double weight = uniform_real(rng);
      ConvexMixture mix;
      mix.weights = {weight, 1.0 - weight};
      mix.parts.push_back(sample_free_operation(p, rng, depth + 1));
      mix.parts.push_back(sample_free_operation(p, rng, depth + 1));
      return FreeOperation{std::move(mix)};
    }
  }
  return sample_block_unitary(p, rng);
}

namespace {

ComplexMatrix apply_raw(const FreeOperation& op, const ComplexMatrix& rho) {
  struct Visitor {
    const ComplexMatrix& rho;
    ComplexMatrix operator()(const BlockUnitary& b) const {
      return b.u.matrix() * rho * b.u.matrix().adjoint();
    }
    ComplexMatrix operator()(const Dephasing& d) const {
      ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
      for (const auto& proj : d.p.projectors()) out += proj * rho * proj;
      return out;
    }
    ComplexMatrix operator()(const BlockSwap& s) const {
      return s.u.matrix() * rho * s.u.matrix().adjoint();
    }
    ComplexMatrix operator()(const ConvexMixture& mix) const {
      ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
      for (std::size_t k = 0; k < mix.parts.size(); ++k) {
        out += mix.weights[k] * apply_raw(mix.parts[k], rho);
      }
      return out;
    }
  };
  return std::visit(Visitor{rho}, op.op);
}

Index operation_dim(const FreeOperation& op) {
  struct Visitor {
    Index operator()(const BlockUnitary& b) const { return b.u.dim(); }
    Index operator()(const Dephasing& d) const { return d.p.dim(); }
    Index operator()(const BlockSwap& s) const { return s.u.dim(); }
    Index operator()(const ConvexMixture& mix) const {
      return mix.parts.empty() ? Index{-1} : operation_dim(mix.parts.front());
    }
  };
  return std::visit(Visitor{}, op.op);
}

}  // namespace

DensityMatrix apply_operation(const FreeOperation& op, const DensityMatrix& rho) {
  require_same_dim(operation_dim(op), rho.dim(), "apply_operation");
  return validate_density(apply_raw(op, rho.matrix()));
}

}  // namespace blockcoh
