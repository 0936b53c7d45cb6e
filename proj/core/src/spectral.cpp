#include "blockcoh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blockcoh/errors.hpp"

namespace blockcoh {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

namespace {

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::NotSquare, "matrix is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + ", expected non-empty square");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

HermitianMatrix HermitianMatrix::validated(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m);
  const double defect = hermiticity_defect(m);
  if (defect > tol.herm) {
    throw Error(ErrorKind::NonHermitian, "matrix is not Hermitian", defect, tol.herm);
  }
  return HermitianMatrix(hermitian_part(m));
}

double UnitaryMatrix::unitarity_defect() const {
  const auto id = ComplexMatrix::Identity(dim(), dim());
  return std::max(max_abs(m_.adjoint() * m_ - id), max_abs(m_ * m_.adjoint() - id));
}

UnitaryMatrix UnitaryMatrix::validated(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m);
  UnitaryMatrix u(m);
  const double defect = u.unitarity_defect();
  if (defect > tol.unitary) {
    throw Error(ErrorKind::NotUnitary, "matrix is not unitary", defect, tol.unitary);
  }
  return u;
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) {
    throw Error(ErrorKind::DegenerateNormalization, "zero state vector");
  }
  return DensityMatrix(psi * psi.adjoint() / norm2);
}

double DensityMatrix::purity() const { return trace_product(m_, m_).real(); }

ProbabilityVector ProbabilityVector::validated(std::vector<double> probs, const Tolerances& tol) {
  if (probs.empty()) {
    throw Error(ErrorKind::InvalidProbability, "empty probability vector");
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < -tol.prob) {
      throw Error(ErrorKind::InvalidProbability, "negative entry at index " + std::to_string(i),
                  probs[i], tol.prob, i);
    }
    probs[i] = std::max(probs[i], 0.0);
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > tol.prob) {
    throw Error(ErrorKind::InvalidProbability, "entries do not sum to one",
                std::abs(total - 1.0), tol.prob);
  }
  return ProbabilityVector(std::move(probs));
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  return EigenDecomposition{solver.eigenvalues(), UnitaryMatrix::trusted(solver.eigenvectors())};
}

namespace {

// Clamps eigenvalues in (-band, 0) to zero; returns true if any was clamped.
bool clamp_spectrum(RealVector& values, double band) {
  const double smallest = values.minCoeff();
  if (smallest < -band) {
    throw Error(ErrorKind::NotPositive, "operator has a negative eigenvalue", smallest, band);
  }
  if (smallest >= 0.0) return false;
  values = values.cwiseMax(0.0);
  return true;
}

}  // namespace

DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol) {
  const HermitianMatrix h = HermitianMatrix::validated(m, tol);
  const double trace = h.matrix().trace().real();
  if (std::abs(trace - 1.0) > tol.trace) {
    throw Error(ErrorKind::TraceDeviation, "trace differs from one", std::abs(trace - 1.0),
                tol.trace);
  }
  EigenDecomposition eig = hermitian_eig(h);
  if (!clamp_spectrum(eig.values, tol.psd)) {
    return DensityMatrix::trusted(h.matrix() / trace);
  }
  ComplexMatrix fixed = spectral_apply(eig, [](double x) { return x; });
  fixed = hermitian_part(fixed);
  return DensityMatrix::trusted(fixed / fixed.trace().real());
}

DensityMatrix normalize_positive(const ComplexMatrix& x, const Tolerances& tol) {
  require_square(x);
  const ComplexMatrix h = hermitian_part(x);
  const double trace = h.trace().real();
  if (!(trace > tol.zero)) {
    throw Error(ErrorKind::DegenerateNormalization, "operator has vanishing trace", trace,
                tol.zero);
  }
  EigenDecomposition eig = hermitian_eig(HermitianMatrix::trusted(h / trace));
  const double band = std::max(tol.psd, 1e-13 / trace);
  if (!clamp_spectrum(eig.values, band)) {
    return DensityMatrix::trusted(h / trace);
  }
  ComplexMatrix fixed = hermitian_part(spectral_apply(eig, [](double v) { return v; }));
  return DensityMatrix::trusted(fixed / fixed.trace().real());
}

HermitianMatrix principal_sqrt(const HermitianMatrix& h, double tol_psd) {
  EigenDecomposition eig = hermitian_eig(h);
  clamp_spectrum(eig.values, tol_psd);
  // Eigenvalues at rounding level would otherwise contribute sqrt(eps) ~ 1e-8
  // to the root; treat them as exact zeros.
  const double scale = eig.values.size() > 0 ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(eig.values.size()) * scale;
  ComplexMatrix root =
      spectral_apply(eig, [floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return HermitianMatrix::trusted(hermitian_part(root));
}

HermitianMatrix psd_sqrt(const DensityMatrix& rho) {
  return principal_sqrt(rho.as_hermitian(), Tolerances{}.psd);
}

double entropy_term(double x) noexcept { return x > 0.0 ? -x * std::log2(x) : 0.0; }

double von_neumann_entropy(const DensityMatrix& rho) {
  const EigenDecomposition eig = hermitian_eig(rho.as_hermitian());
  double s = 0.0;
  for (Index k = 0; k < eig.values.size(); ++k) s += entropy_term(eig.values[k]);
  return s;
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += entropy_term(x);
  return s;
}

double shannon_entropy(const ProbabilityVector& p) { return shannon_entropy(p.values()); }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace blockcoh
