#include "renlp/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace renlp {

namespace {

void check_structures(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.structure() != b.structure())
    throw StructureMismatch("algebra elements live on different block structures");
}

}  // namespace

//------------------------------------------------------------------------------
// BlockStructure
//------------------------------------------------------------------------------

BlockStructure::BlockStructure(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ShapeMismatch("block structure must be nonempty");
  for (int d : dims_) {
    if (d < 1) throw ShapeMismatch("block dimensions must be >= 1");
    total_ += d;
    vec_ += d * d;
  }
}

BlockStructure direct_sum(const BlockStructure& a, const BlockStructure& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return BlockStructure(dims);
}

//------------------------------------------------------------------------------
// AlgebraElement
//------------------------------------------------------------------------------

AlgebraElement::AlgebraElement(BlockStructure structure, std::vector<Matrix> blocks)
    : structure_(std::move(structure)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != structure_.block_count())
    throw ShapeMismatch("block count does not match structure");
  for (int b = 0; b < structure_.block_count(); ++b) {
    const Matrix& m = blocks_[static_cast<std::size_t>(b)];
    if (m.rows() != structure_.dim(b) || m.cols() != structure_.dim(b))
      throw ShapeMismatch("block shape does not match structure");
  }
}

AlgebraElement AlgebraElement::zero(const BlockStructure& s) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(s.block_count()));
  for (int b = 0; b < s.block_count(); ++b) blocks.push_back(Matrix::Zero(s.dim(b), s.dim(b)));
  return AlgebraElement(s, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const BlockStructure& s) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(s.block_count()));
  for (int b = 0; b < s.block_count(); ++b)
    blocks.push_back(Matrix::Identity(s.dim(b), s.dim(b)));
  return AlgebraElement(s, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(m.adjoint());
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement AlgebraElement::transpose() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(m.transpose());
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  check_structures(*this, o);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] + o.blocks_[b]);
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  check_structures(*this, o);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] - o.blocks_[b]);
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  check_structures(*this, o);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] * o.blocks_[b]);
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex c) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(m * c);
  return AlgebraElement(structure_, std::move(blocks));
}

double AlgebraElement::frobenius_norm() const {
  double s = 0.0;
  for (const Matrix& m : blocks_) s += m.squaredNorm();
  return std::sqrt(s);
}

double AlgebraElement::max_abs() const {
  double s = 0.0;
  for (const Matrix& m : blocks_) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s;
}

bool AlgebraElement::is_hermitian(double tol) const {
  double defect = 0.0, scale = 0.0;
  for (const Matrix& m : blocks_) {
    defect = std::max(defect, (m - m.adjoint().eval()).cwiseAbs().maxCoeff());
    scale = std::max(scale, m.cwiseAbs().maxCoeff());
  }
  return defect <= tol * std::max(scale, 1e-300);
}

AlgebraElement AlgebraElement::hermitized() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(0.5 * (m + m.adjoint().eval()));
  return AlgebraElement(structure_, std::move(blocks));
}

AlgebraElement direct_sum(const AlgebraElement& a, const AlgebraElement& b) {
  BlockStructure s = direct_sum(a.structure(), b.structure());
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(s.block_count()));
  for (int i = 0; i < a.block_count(); ++i) blocks.push_back(a.block(i));
  for (int i = 0; i < b.block_count(); ++i) blocks.push_back(b.block(i));
  return AlgebraElement(s, std::move(blocks));
}

//------------------------------------------------------------------------------
// PositiveFunctional
//------------------------------------------------------------------------------

PositiveFunctional::PositiveFunctional(AlgebraElement element, double tolerance)
    : element_(std::move(element)), tolerance_(tolerance) {
  if (tolerance_ < 0.0) throw Error("tolerance must be nonnegative");
  if (!element_.is_hermitian(tolerance_))
    throw NotHermitian("positive functional must be Hermitian");
  SpectralDecomposition eig = herm_eig(element_, tolerance_);
  double lo = 0.0, hi = 0.0;
  for (int b = 0; b < element_.block_count(); ++b) {
    if (eig.values(b).size() == 0) continue;
    lo = std::min(lo, eig.values(b).minCoeff());
    hi = std::max(hi, eig.values(b).cwiseAbs().maxCoeff());
  }
  if (lo < -tolerance_ * std::max(hi, 1e-300))
    throw NotPsd("positive functional has a negative eigenvalue");
  Complex tr = trace(element_);
  mass_ = tr.real();
  if (mass_ < -tolerance_) throw NotPsd("positive functional has negative trace");
  if (mass_ < 0.0) mass_ = 0.0;
}

bool PositiveFunctional::is_zero(double tol) const {
  return element_.max_abs() <= tol;
}

PositiveFunctional PositiveFunctional::scaled(double factor) const {
  if (factor < 0.0) throw NotPsd("negative scale breaks positivity");
  return PositiveFunctional(element_ * Complex(factor, 0.0), tolerance_);
}

PositiveFunctional direct_sum(const PositiveFunctional& a, const PositiveFunctional& b) {
  return PositiveFunctional(direct_sum(a.element(), b.element()),
                            std::max(a.tolerance(), b.tolerance()));
}

//------------------------------------------------------------------------------
// Spectral calculus
//------------------------------------------------------------------------------

SpectralDecomposition::SpectralDecomposition(BlockStructure structure,
                                             std::vector<RealVector> values,
                                             std::vector<Matrix> vectors)
    : structure_(std::move(structure)), values_(std::move(values)), vectors_(std::move(vectors)) {}

AlgebraElement SpectralDecomposition::reconstruct() const {
  std::vector<Matrix> blocks;
  blocks.reserve(values_.size());
  for (std::size_t b = 0; b < values_.size(); ++b)
    blocks.push_back(vectors_[b] * values_[b].asDiagonal() * vectors_[b].adjoint());
  return AlgebraElement(structure_, std::move(blocks));
}

double SpectralDecomposition::spectral_radius() const {
  double r = 0.0;
  for (const RealVector& v : values_)
    if (v.size() > 0) r = std::max(r, v.cwiseAbs().maxCoeff());
  return r;
}

SpectralDecomposition herm_eig(const AlgebraElement& a, double tol) {
  if (!a.is_hermitian(tol)) throw NotHermitian("herm_eig requires a Hermitian element");
  std::vector<RealVector> values;
  std::vector<Matrix> vectors;
  values.reserve(static_cast<std::size_t>(a.block_count()));
  vectors.reserve(static_cast<std::size_t>(a.block_count()));
  for (int b = 0; b < a.block_count(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a.block(b) + a.block(b).adjoint()));
    if (solver.info() != Eigen::Success) throw Error("eigen-decomposition failed");
    // Eigen sorts ascending; flip to descending.
    const int n = static_cast<int>(solver.eigenvalues().size());
    RealVector vals(n);
    Matrix vecs(n, n);
    for (int i = 0; i < n; ++i) {
      vals(i) = solver.eigenvalues()(n - 1 - i);
      vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    values.push_back(std::move(vals));
    vectors.push_back(std::move(vecs));
  }
  return SpectralDecomposition(a.structure(), std::move(values), std::move(vectors));
}

namespace {

// Shared core for real powers, complex powers and logarithms: applies fn to
// eigenvalues above the rank cutoff, zero below it.
AlgebraElement spectral_map(const AlgebraElement& a, double rank_tol, double tol,
                            const std::function<Complex(double)>& fn) {
  SpectralDecomposition eig = herm_eig(a, tol);
  double top = eig.spectral_radius();
  if (eig.spectral_radius() > 0) {
    double lo = 0.0;
    for (int b = 0; b < a.block_count(); ++b)
      if (eig.values(b).size() > 0) lo = std::min(lo, eig.values(b).minCoeff());
    if (lo < -tol * top) throw NotPsd("spectral calculus requires a PSD element");
  }
  const double cutoff = rank_tol * std::max(top, 0.0);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(a.block_count()));
  for (int b = 0; b < a.block_count(); ++b) {
    const RealVector& vals = eig.values(b);
    const Matrix& vecs = eig.vectors(b);
    Eigen::VectorXcd mapped(vals.size());
    for (int i = 0; i < vals.size(); ++i)
      mapped(i) = (vals(i) > cutoff) ? fn(vals(i)) : Complex(0.0, 0.0);
    blocks.push_back(vecs * mapped.asDiagonal() * vecs.adjoint());
  }
  return AlgebraElement(a.structure(), std::move(blocks));
}

}  // namespace

SupportProjection support(const AlgebraElement& a, double rank_tol, double tol) {
  AlgebraElement projector = spectral_map(a, rank_tol, tol, [](double) { return Complex(1.0, 0.0); });
  double tr = trace(projector).real();
  return SupportProjection{projector.hermitized(), static_cast<int>(std::lround(tr))};
}

AlgebraElement mpower(const AlgebraElement& a, double t, double rank_tol, double tol) {
  if (t == 1.0) return a;
  if (t <= 0.0 && a.max_abs() <= rank_tol)
    throw ZeroOperator("nonpositive power of the zero operator");
  AlgebraElement out =
      spectral_map(a, rank_tol, tol, [t](double x) { return Complex(std::pow(x, t), 0.0); });
  return out.hermitized();
}

AlgebraElement mpower(const AlgebraElement& a, Complex z, double rank_tol, double tol) {
  if (z.imag() == 0.0) return mpower(a, z.real(), rank_tol, tol);
  return spectral_map(a, rank_tol, tol,
                      [z](double x) { return std::exp(z * std::log(x)); });
}

AlgebraElement mlog(const AlgebraElement& a, double rank_tol, double tol) {
  if (a.max_abs() <= rank_tol) throw ZeroOperator("logarithm of the zero operator");
  AlgebraElement out =
      spectral_map(a, rank_tol, tol, [](double x) { return Complex(std::log(x), 0.0); });
  return out.hermitized();
}

Complex trace(const AlgebraElement& a) {
  Complex t(0.0, 0.0);
  for (int b = 0; b < a.block_count(); ++b) t += a.block(b).trace();
  return t;
}

std::vector<double> singular_values(const AlgebraElement& a) {
  std::vector<double> out;
  for (int b = 0; b < a.block_count(); ++b) {
    Eigen::JacobiSVD<Matrix> svd(a.block(b));
    for (int i = 0; i < svd.singularValues().size(); ++i)
      out.push_back(svd.singularValues()(i));
  }
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double schatten_norm(const AlgebraElement& a, double p) {
  if (!(p >= 1.0))  // also rejects NaN
    throw InvalidExponent("Schatten norm needs p >= 1");
  std::vector<double> sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0.0;
  if (std::isinf(p)) return sv.front();
  // Factor out the top singular value to keep large p stable.
  const double top = sv.front();
  double sum = 0.0;
  for (double s : sv) sum += std::pow(s / top, p);
  return top * std::pow(sum, 1.0 / p);
}

OrderResult order_leq(const AlgebraElement& a, const AlgebraElement& b, double tol,
                      double rank_tol) {
  if (!a.is_hermitian(tol) || !b.is_hermitian(tol))
    throw NotHermitian("order comparison needs Hermitian elements");

  AlgebraElement diff = (b - a).hermitized();
  SpectralDecomposition deig = herm_eig(diff, 1.0);  // already Hermitian by construction
  double lo = 0.0, hi = 0.0;
  for (int blk = 0; blk < diff.block_count(); ++blk) {
    if (deig.values(blk).size() == 0) continue;
    lo = std::min(lo, deig.values(blk).minCoeff());
    hi = std::max(hi, deig.values(blk).cwiseAbs().maxCoeff());
  }
  double scale = std::max({hi, a.max_abs(), b.max_abs(), 1e-300});
  bool leq = lo >= -tol * scale;

  // Optimal scale factor: exists only when b dominates the support of a.
  std::optional<double> lambda;
  SupportProjection pb = support(b, rank_tol, tol);
  if (compression_defect(a, pb.projector) <= std::max(tol, rank_tol)) {
    AlgebraElement b_inv_half = mpower(b, -0.5, rank_tol, tol);
    AlgebraElement pencil = (b_inv_half * a * b_inv_half).hermitized();
    SpectralDecomposition peig = herm_eig(pencil, 1.0);
    double top = 0.0;
    for (int blk = 0; blk < pencil.block_count(); ++blk)
      if (peig.values(blk).size() > 0) top = std::max(top, peig.values(blk).maxCoeff());
    lambda = std::max(top, 0.0);
  }
  return OrderResult{leq, lambda};
}

double compression_defect(const AlgebraElement& a, const AlgebraElement& projector) {
  AlgebraElement compressed = projector * a * projector;
  double denom = schatten_norm(a, 1.0);
  if (denom == 0.0) return 0.0;
  return schatten_norm(a - compressed, 1.0) / denom;
}

}  // namespace renlp
