#include "renlp/lp_kosaki.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace renlp {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidExponent("Lp exponent must satisfy p >= 1");
}

// Polar data of a witness: k = u * l^{1/p} with l trace-class positive and
// u a partial isometry, u* u = support(l). Computed per block from the SVD,
// singular values at or below the global rank cutoff dropped.
struct PolarData {
  AlgebraElement u;
  AlgebraElement l;   // |k|^p
  double l1;          // Tr l = ||k||_p^p
};

PolarData polar_witness(const AlgebraElement& k, double p) {
  std::vector<double> sv = singular_values(k);
  const double top = sv.empty() ? 0.0 : sv.front();
  const double cutoff = Tol::rank * top;

  std::vector<Matrix> u_blocks, l_blocks;
  double l1 = 0.0;
  for (int b = 0; b < k.block_count(); ++b) {
    Eigen::JacobiSVD<Matrix> svd(k.block(b), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int n = static_cast<int>(svd.singularValues().size());
    Matrix u = Matrix::Zero(n, n);
    Eigen::VectorXd lvals = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      const double s = svd.singularValues()(i);
      if (s > cutoff) {
        u += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
        lvals(i) = std::pow(s, p);
        l1 += lvals(i);
      }
    }
    Matrix l = svd.matrixV() * lvals.asDiagonal() * svd.matrixV().adjoint();
    u_blocks.push_back(std::move(u));
    l_blocks.push_back(0.5 * (l + l.adjoint().eval()));
  }
  return PolarData{AlgebraElement(k.structure(), std::move(u_blocks)),
                   AlgebraElement(k.structure(), std::move(l_blocks)), l1};
}

// 1/(2q) for the embedding exponent; exactly zero at p = 1.
double half_inv_conjugate(double p) {
  if (p == 1.0) return 0.0;
  if (std::isinf(p)) return 0.5;
  return (1.0 - 1.0 / p) / 2.0;
}

double power_mean(double a, double b, double p) {
  if (std::isinf(p)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  return m * std::pow(0.5 * (std::pow(a / m, p) + std::pow(b / m, p)), 1.0 / p);
}

double power_sum(double a, double b, double q) {
  if (std::isinf(q)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  return m * std::pow(std::pow(a / m, q) + std::pow(b / m, q), 1.0 / q);
}

}  // namespace

double conjugate_exponent(double p) {
  require_exponent(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

KosakiElement::KosakiElement(AlgebraElement h_, PositiveFunctional phi_, double p_)
    : h(std::move(h_)), phi(std::move(phi_)), p(p_) {
  require_exponent(p);
  if (h.structure() != phi.structure())
    throw StructureMismatch("element and reference functional disagree on structure");
}

KosakiElement embed_ip(const AlgebraElement& k, const PositiveFunctional& sigma, double p) {
  require_exponent(p);
  AlgebraElement w = mpower(sigma.element(), half_inv_conjugate(p));
  return KosakiElement(w * k * w, sigma, p);
}

AlgebraElement extract(const AlgebraElement& h, const PositiveFunctional& sigma, double p,
                       double membership_tol) {
  require_exponent(p);
  if (sigma.is_zero()) {
    if (schatten_norm(h, 1.0) <= membership_tol)
      return AlgebraElement::zero(h.structure());
    throw NotInSpace("reference functional is zero but the element is not");
  }
  SupportProjection e = support(sigma.element());
  if (compression_defect(h, e.projector) > membership_tol)
    throw NotInSpace("element leaks out of the support of the reference functional");
  AlgebraElement w = mpower(sigma.element(), -half_inv_conjugate(p));
  return w * (e.projector * h * e.projector) * w;
}

AlgebraElement extract(const KosakiElement& h, double membership_tol) {
  return extract(h.h, h.phi, h.p, membership_tol);
}

double kosaki_norm(const AlgebraElement& h, const PositiveFunctional& sigma, double p,
                   double membership_tol) {
  require_exponent(p);
  try {
    return schatten_norm(extract(h, sigma, p, membership_tol), p);
  } catch (const NotInSpace&) {
    return kInf;
  }
}

double kosaki_norm(const KosakiElement& h, double membership_tol) {
  return kosaki_norm(h.h, h.phi, h.p, membership_tol);
}

std::optional<double> linf_norm(const AlgebraElement& k, const PositiveFunctional& sigma,
                                double agreement_tol) {
  if (k.max_abs() == 0.0) return 0.0;
  if (sigma.is_zero()) return std::nullopt;

  // Route 1: the doubled pencil [[0,k],[k*,0]] <= lambda diag(h, h).
  const BlockStructure& s = k.structure();
  std::vector<Matrix> k2_blocks, h2_blocks;
  for (int b = 0; b < s.block_count(); ++b) {
    const int d = s.dim(b);
    Matrix k2 = Matrix::Zero(2 * d, 2 * d);
    k2.topRightCorner(d, d) = k.block(b);
    k2.bottomLeftCorner(d, d) = k.block(b).adjoint();
    Matrix h2 = Matrix::Zero(2 * d, 2 * d);
    h2.topLeftCorner(d, d) = sigma.element().block(b);
    h2.bottomRightCorner(d, d) = sigma.element().block(b);
    k2_blocks.push_back(std::move(k2));
    h2_blocks.push_back(std::move(h2));
  }
  std::vector<int> doubled;
  for (int d : s.dims()) doubled.push_back(2 * d);
  BlockStructure s2(doubled);
  AlgebraElement k2(s2, std::move(k2_blocks));
  AlgebraElement h2(s2, std::move(h2_blocks));
  OrderResult pencil = order_leq(k2, h2);
  if (!pencil.lambda_min.has_value()) return std::nullopt;

  // Route 2: spectral norm of sigma^{-1/2} k sigma^{-1/2}, valid only when
  // k is supported inside the support of sigma on both sides.
  SupportProjection e = support(sigma.element());
  if (compression_defect(k, e.projector) > 1e-9) return std::nullopt;
  AlgebraElement si = mpower(sigma.element(), -0.5);
  const double direct = schatten_norm(si * k * si, kInf);

  const double lam = *pencil.lambda_min;
  if (std::abs(lam - direct) > agreement_tol * std::max(1.0, direct))
    throw Error("weighted operator norm: pencil and direct routes disagree");
  return direct;
}

Complex pairing(const KosakiElement& k, const KosakiElement& h) {
  if (k.h.structure() != h.h.structure())
    throw StructureMismatch("pairing requires a common algebra");
  const double ip = std::isinf(k.p) ? 0.0 : 1.0 / k.p;
  const double iq = std::isinf(h.p) ? 0.0 : 1.0 / h.p;
  if (std::abs(ip + iq - 1.0) > 1e-9)
    throw ExponentMismatch("pairing requires conjugate exponents");
  return trace(extract(k) * extract(h));
}

KosakiElement duality_map_T(const KosakiElement& h) {
  if (h.p <= 1.0 || std::isinf(h.p))
    throw InvalidExponent("the norming functional needs 1 < p < infinity");
  const double norm = kosaki_norm(h);
  if (!(norm > 0.0)) throw ZeroElement("the zero element has no norming functional");
  if (std::isinf(norm)) throw NotInSpace("element is outside the weighted space");

  const double p = h.p;
  const double q = conjugate_exponent(p);
  PolarData polar = polar_witness(extract(h), p);
  AlgebraElement w = mpower(h.phi.element(), half_inv_conjugate(q));
  AlgebraElement core = mpower(polar.l, 1.0 / q) * polar.u.adjoint();
  AlgebraElement t = (w * core * w) * Complex(std::pow(norm, 1.0 - p), 0.0);
  return KosakiElement(std::move(t), h.phi, q);
}

std::pair<KosakiElement, KosakiElement> jordan_decompose(const KosakiElement& h) {
  if (!h.h.is_hermitian()) throw NotHermitian("Jordan split needs a Hermitian element");
  AlgebraElement l = extract(h).hermitized();
  SpectralDecomposition eig = herm_eig(l);
  const double cutoff = Tol::rank * eig.spectral_radius();

  std::vector<Matrix> plus, minus;
  for (int b = 0; b < l.block_count(); ++b) {
    const RealVector& vals = eig.values(b);
    Eigen::VectorXd vp = Eigen::VectorXd::Zero(vals.size());
    Eigen::VectorXd vm = Eigen::VectorXd::Zero(vals.size());
    for (int i = 0; i < vals.size(); ++i) {
      if (vals(i) > cutoff) vp(i) = vals(i);
      if (vals(i) < -cutoff) vm(i) = -vals(i);
    }
    const Matrix& u = eig.vectors(b);
    plus.push_back(u * vp.asDiagonal() * u.adjoint());
    minus.push_back(u * vm.asDiagonal() * u.adjoint());
  }
  AlgebraElement lp(l.structure(), std::move(plus));
  AlgebraElement lm(l.structure(), std::move(minus));
  return {embed_ip(lp, h.phi, h.p), embed_ip(lm, h.phi, h.p)};
}

//------------------------------------------------------------------------------
// Interpolation paths
//------------------------------------------------------------------------------

InterpolationPath::InterpolationPath(KosakiElement base)
    : base_(std::move(base)),
      l1_(0.0),
      u_(AlgebraElement::zero(base_.h.structure())),
      l_(AlgebraElement::zero(base_.h.structure())) {
  if (std::isinf(base_.p))
    throw InvalidExponent("interpolation paths are defined for finite p");
  PolarData polar = polar_witness(extract(base_), base_.p);
  if (polar.l1 <= 0.0) throw ZeroElement("no interpolation path through zero");
  u_ = polar.u;
  l_ = polar.l;
  l1_ = polar.l1;
}

AlgebraElement InterpolationPath::evaluate(Complex z) const {
  if (z.real() < -1e-12 || z.real() > 1.0 + 1e-12)
    throw OutOfStrip("evaluation point outside 0 <= Re z <= 1");
  const Complex scale = std::exp((1.0 / base_.p - z) * std::log(l1_));
  AlgebraElement sp = mpower(base_.phi.element(), Complex((1.0 - z.real()) / 2.0, -z.imag() / 2.0));
  AlgebraElement lz = mpower(l_, z);
  return (sp * (u_ * lz) * sp) * scale;
}

InterpolationPath interpolation_path(const KosakiElement& h) { return InterpolationPath(h); }

//------------------------------------------------------------------------------
// Norm inequalities
//------------------------------------------------------------------------------

InequalitySides clarkson_sides(const AlgebraElement& h, const AlgebraElement& k,
                               const PositiveFunctional& sigma, double p) {
  require_exponent(p);
  const double q = conjugate_exponent(p);
  const double n_sum = kosaki_norm(h + k, sigma, p);
  const double n_diff = kosaki_norm(h - k, sigma, p);
  const double nh = kosaki_norm(h, sigma, p);
  const double nk = kosaki_norm(k, sigma, p);
  const double mean = power_mean(n_sum, n_diff, p);
  const double qsum = power_sum(nh, nk, q);
  if (p >= 2.0) return InequalitySides{mean, qsum, false};
  return InequalitySides{qsum, mean, true};
}

InequalitySides pixu_sides(const AlgebraElement& h, const AlgebraElement& k,
                           const PositiveFunctional& sigma, double p) {
  if (!(p > 1.0) || std::isinf(p))
    throw InvalidExponent("two-point convexity inequality needs 1 < p < infinity");
  const double n_sum = kosaki_norm(h + k, sigma, p);
  const double n_diff = kosaki_norm(h - k, sigma, p);
  const double nh = kosaki_norm(h, sigma, p);
  const double nk = kosaki_norm(k, sigma, p);
  const double two_point = std::sqrt(nh * nh + (p - 1.0) * nk * nk);
  const double mean = power_mean(n_sum, n_diff, p);
  if (p <= 2.0) return InequalitySides{two_point, mean, false};
  return InequalitySides{mean, two_point, true};
}

//------------------------------------------------------------------------------
// Three lines
//------------------------------------------------------------------------------

StripFunction StripFunction::from_path(const InterpolationPath& path) {
  InterpolationPath copy = path;
  return StripFunction{[copy](Complex z) { return copy.evaluate(z); },
                       path.base().phi, kInf, 1.0};
}

StripFunction StripFunction::constant(const AlgebraElement& h, const PositiveFunctional& sigma,
                                      double p_left, double p_right) {
  require_exponent(p_left);
  require_exponent(p_right);
  return StripFunction{[h](Complex) { return h; }, sigma, p_left, p_right};
}

ThreeLinesResult three_lines_check(const StripFunction& f, double eta,
                                   const std::vector<double>& t_grid) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidEta("interior abscissa must lie in (0,1)");
  const double inv_left = std::isinf(f.p_left) ? 0.0 : 1.0 / f.p_left;
  const double inv_right = std::isinf(f.p_right) ? 0.0 : 1.0 / f.p_right;
  const double inv_eta = eta * inv_right + (1.0 - eta) * inv_left;
  const double p_eta = (inv_eta == 0.0) ? kInf : 1.0 / inv_eta;

  double m0 = 0.0, m1 = 0.0;
  for (double t : t_grid) {
    m0 = std::max(m0, kosaki_norm(f.f(Complex(0.0, t)), f.sigma, f.p_left));
    m1 = std::max(m1, kosaki_norm(f.f(Complex(1.0, t)), f.sigma, f.p_right));
  }
  const double value = kosaki_norm(f.f(Complex(eta, 0.0)), f.sigma, p_eta);
  const double bound = std::pow(m0, 1.0 - eta) * std::pow(m1, eta);
  return ThreeLinesResult{bound, value};
}

}  // namespace renlp
