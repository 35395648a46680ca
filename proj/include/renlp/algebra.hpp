#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "renlp/errors.hpp"

namespace renlp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerances shared across the library. Hermiticity and PSD checks
// are measured against the largest eigenvalue magnitude; the rank threshold
// decides which eigenvalues count as zero in supports and pseudo-powers.
struct Tol {
  static constexpr double herm = 1e-9;
  static constexpr double rank = 1e-10;
};

//==============================================================================
// BlockStructure: a finite-dimensional von Neumann algebra given as a direct
// sum of full matrix blocks. Elements are block-diagonal complex matrices.
//==============================================================================

class BlockStructure {
 public:
  explicit BlockStructure(std::vector<int> dims);

  int block_count() const { return static_cast<int>(dims_.size()); }
  int dim(int b) const { return dims_[static_cast<std::size_t>(b)]; }
  int total_dim() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  // Dimension of the vectorized algebra: sum of squared block dimensions.
  int vec_dim() const { return vec_; }

  bool operator==(const BlockStructure& o) const { return dims_ == o.dims_; }
  bool operator!=(const BlockStructure& o) const { return !(*this == o); }

 private:
  std::vector<int> dims_;
  int total_ = 0;
  int vec_ = 0;
};

BlockStructure direct_sum(const BlockStructure& a, const BlockStructure& b);

//==============================================================================
// AlgebraElement: one block matrix per summand. Immutable in spirit; all
// operations below return new values.
//==============================================================================

class AlgebraElement {
 public:
  AlgebraElement(BlockStructure structure, std::vector<Matrix> blocks);

  static AlgebraElement zero(const BlockStructure& s);
  static AlgebraElement identity(const BlockStructure& s);

  const BlockStructure& structure() const { return structure_; }
  const Matrix& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
  Matrix& block(int b) { return blocks_[static_cast<std::size_t>(b)]; }
  int block_count() const { return structure_.block_count(); }

  AlgebraElement adjoint() const;
  AlgebraElement transpose() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(Complex c) const;
  AlgebraElement operator-() const { return *this * Complex(-1.0, 0.0); }

  // Frobenius norm over all blocks; cheap gauge for relative tolerances.
  double frobenius_norm() const;
  double max_abs() const;

  bool is_hermitian(double tol = Tol::herm) const;
  // Replaces the element by its Hermitian part; used to kill representation
  // noise after products that are Hermitian by construction.
  AlgebraElement hermitized() const;

 private:
  BlockStructure structure_;
  std::vector<Matrix> blocks_;
};

inline AlgebraElement operator*(Complex c, const AlgebraElement& a) { return a * c; }

AlgebraElement direct_sum(const AlgebraElement& a, const AlgebraElement& b);

//==============================================================================
// PositiveFunctional: a PSD trace-class element h_psi standing for a normal
// positive functional; trace one marks a state.
//==============================================================================

class PositiveFunctional {
 public:
  explicit PositiveFunctional(AlgebraElement element, double tolerance = Tol::herm);

  const AlgebraElement& element() const { return element_; }
  double tolerance() const { return tolerance_; }

  // Total mass psi(1) = Tr h_psi (real for PSD input).
  double mass() const { return mass_; }
  bool is_state(double tol = 1e-9) const { return std::abs(mass_ - 1.0) <= tol; }
  bool is_zero(double tol = Tol::rank) const;

  PositiveFunctional scaled(double factor) const;
  const BlockStructure& structure() const { return element_.structure(); }

 private:
  AlgebraElement element_;
  double tolerance_;
  double mass_;
};

PositiveFunctional direct_sum(const PositiveFunctional& a, const PositiveFunctional& b);

struct SupportProjection {
  AlgebraElement projector;
  int rank;
};

//==============================================================================
// Spectral calculus
//==============================================================================

// Eigen-decomposition of a Hermitian element, one (values, vectors) pair per
// block, eigenvalues sorted descending inside each block.
class SpectralDecomposition {
 public:
  SpectralDecomposition(BlockStructure structure, std::vector<RealVector> values,
                        std::vector<Matrix> vectors);

  const BlockStructure& structure() const { return structure_; }
  const RealVector& values(int b) const { return values_[static_cast<std::size_t>(b)]; }
  const Matrix& vectors(int b) const { return vectors_[static_cast<std::size_t>(b)]; }

  AlgebraElement reconstruct() const;
  // Largest |eigenvalue| over all blocks.
  double spectral_radius() const;

 private:
  BlockStructure structure_;
  std::vector<RealVector> values_;
  std::vector<Matrix> vectors_;
};

SpectralDecomposition herm_eig(const AlgebraElement& a, double tol = Tol::herm);

SupportProjection support(const AlgebraElement& a, double rank_tol = Tol::rank,
                          double tol = Tol::herm);

// Real powers of a PSD element. Powers with t <= 0 are taken on the support
// (pseudo-inverse style); eigenvalues at or below rank_tol * lambda_max map
// to zero there. mpower(a, 1) returns a unchanged.
AlgebraElement mpower(const AlgebraElement& a, double t, double rank_tol = Tol::rank,
                      double tol = Tol::herm);

// Complex powers, principal branch on the positive spectrum; eigenvalues at
// or below the rank threshold contribute zero for every exponent.
AlgebraElement mpower(const AlgebraElement& a, Complex z, double rank_tol = Tol::rank,
                      double tol = Tol::herm);

// Logarithm on the support; zero off support.
AlgebraElement mlog(const AlgebraElement& a, double rank_tol = Tol::rank,
                    double tol = Tol::herm);

Complex trace(const AlgebraElement& a);

// Schatten p-norm over singular values; p = infinity gives the largest one.
double schatten_norm(const AlgebraElement& a, double p);

// Singular values of all blocks, descending.
std::vector<double> singular_values(const AlgebraElement& a);

struct OrderResult {
  bool leq;                          // b - a is PSD within tolerance
  std::optional<double> lambda_min;  // least lambda >= 0 with a <= lambda * b
};

// Operator order check together with the optimal scale factor. lambda_min is
// the top eigenvalue of b^{-1/2} a b^{-1/2} when the support of a sits inside
// the support of b, and absent otherwise.
OrderResult order_leq(const AlgebraElement& a, const AlgebraElement& b,
                      double tol = Tol::herm, double rank_tol = Tol::rank);

// Compression defect || a - P a P ||_1 relative to || a ||_1, the membership
// gate used throughout the weighted-norm layer.
double compression_defect(const AlgebraElement& a, const AlgebraElement& projector);

}  // namespace renlp
