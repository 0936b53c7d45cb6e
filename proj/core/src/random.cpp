#include "blockcoh/random.hpp"

#include <cmath>
#include <numeric>

#include "blockcoh/errors.hpp"

namespace blockcoh {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ fnv1a(label)) ^ index);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "uniform_index over empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

ComplexMatrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Column-major fill keeps the draw order fixed for a given shape.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

UnitaryMatrix haar_unitary(Index d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "haar_unitary needs d >= 1");
  const ComplexMatrix z = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    q.col(k) *= mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
  }
  return UnitaryMatrix::trusted(std::move(q));
}

ComplexVector random_unit_vector(Index d, Rng& rng) {
  ComplexVector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density(Index d, Index rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) {
    throw Error(ErrorKind::InvalidArgument,
                "random_density needs 1 <= rank <= d, got d=" + std::to_string(d) +
                    " rank=" + std::to_string(rank));
  }
  const ComplexMatrix g = gaussian_matrix(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  return DensityMatrix::trusted(rho / rho.trace().real());
}

DensityMatrix random_pure(Index d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "random_pure needs d >= 1");
  return DensityMatrix::from_pure(random_unit_vector(d, rng));
}

std::vector<Index> random_composition(Index d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "random_composition needs d >= 1");
  std::vector<Index> parts;
  Index current = 1;
  std::bernoulli_distribution cut(0.5);
  for (Index gap = 0; gap + 1 < d; ++gap) {
    if (cut(rng)) {
      parts.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace blockcoh
