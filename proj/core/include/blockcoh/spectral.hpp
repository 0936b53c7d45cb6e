#pragma once

// Validated Hermitian matrix calculus: density-matrix validation, Hermitian
// eigendecomposition, principal square roots and entropies (base 2).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace blockcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Absolute tolerances used by every validator in the library.
struct Tolerances {
  double herm = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double unitary = 1e-10;
  double recon = 1e-9;
  double prob = 1e-10;
  double proj = 1e-9;   // projector / POVM completeness and orthogonality
  double zero = 1e-12;  // probabilities and block weights treated as zero
};

/// Max-abs entry norm, the norm every tolerance above is stated in.
double max_abs(const ComplexMatrix& m);

/// Largest entry of |M - M^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

class HermitianMatrix {
 public:
  /// Throws NotSquare / NonHermitian. Stores the Hermitian part.
  static HermitianMatrix validated(const ComplexMatrix& m, const Tolerances& tol = {});
  /// Skips validation; the caller guarantees Hermiticity.
  static HermitianMatrix trusted(ComplexMatrix m) { return HermitianMatrix(std::move(m)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class UnitaryMatrix {
 public:
  /// Throws NotSquare, or NotUnitary when U^dagger U or U U^dagger misses I
  /// by more than tol.unitary.
  static UnitaryMatrix validated(const ComplexMatrix& m, const Tolerances& tol = {});
  static UnitaryMatrix trusted(ComplexMatrix m) { return UnitaryMatrix(std::move(m)); }
  static UnitaryMatrix identity(Index d) { return UnitaryMatrix(ComplexMatrix::Identity(d, d)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  /// Max-abs deviation of U^dagger U and U U^dagger from identity.
  double unitarity_defect() const;

 private:
  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix from_pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  HermitianMatrix as_hermitian() const { return HermitianMatrix::trusted(m_); }
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class ProbabilityVector {
 public:
  /// Entries in (-tol.prob, 0) are clamped to 0; the sum must be 1 within
  /// tol.prob. Throws InvalidProbability otherwise.
  static ProbabilityVector validated(std::vector<double> probs, const Tolerances& tol = {});

  std::span<const double> values() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  explicit ProbabilityVector(std::vector<double> p) : probs_(std::move(p)) {}
  std::vector<double> probs_;
};

/// Takes the Hermitian part, checks trace and positivity, clamps eigenvalues
/// in (-tol.psd, 0) to zero and renormalizes. Errors: NotSquare,
/// NonHermitian, TraceDeviation, NotPositive.
DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol = {});

/// Normalizes a positive operator X to X / Tr X. The positivity band scales
/// with 1/Tr X since roundoff in X is absolute.
DensityMatrix normalize_positive(const ComplexMatrix& x, const Tolerances& tol = {});

struct EigenDecomposition {
  RealVector values;      // ascending
  UnitaryMatrix vectors;  // columns are eigenvectors
};

/// Throws ConvergenceFailure.
EigenDecomposition hermitian_eig(const HermitianMatrix& h);

/// V f(lambda) V^dagger for a Hermitian input.
template <typename F>
ComplexMatrix spectral_apply(const EigenDecomposition& eig, F&& f) {
  const auto& v = eig.vectors.matrix();
  RealVector mapped = eig.values.unaryExpr(std::forward<F>(f));
  return v * mapped.asDiagonal() * v.adjoint();
}

/// Principal square root of a positive semidefinite Hermitian operator.
/// Eigenvalues in (-tol_psd, 0) are clamped; more negative is NotPositive.
HermitianMatrix principal_sqrt(const HermitianMatrix& h, double tol_psd = Tolerances{}.psd);

/// sqrt(rho).
HermitianMatrix psd_sqrt(const DensityMatrix& rho);

/// -sum x log2 x over the (clamped) spectrum, in bits.
double von_neumann_entropy(const DensityMatrix& rho);

double shannon_entropy(const ProbabilityVector& p);
double shannon_entropy(std::span<const double> p);

/// -x log2 x with 0 log 0 = 0.
double entropy_term(double x) noexcept;

/// Tr(A B) for square matrices without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace blockcoh
