#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "renlp/algebra.hpp"

namespace renlp {

// Weighted Lp spaces L_p(M, phi) in finite dimensions. An element is stored
// through its trace-class representative h together with the reference
// functional and the exponent. The isometry onto the plain Schatten space is
//
//   h  =  sigma^{1/2q} k sigma^{1/2q},   1/p + 1/q = 1,
//
// and every norm below is the Schatten p-norm of the witness k. Membership
// is a support condition: h must be compressed by the support of sigma.

struct KosakiElement {
  AlgebraElement h;
  PositiveFunctional phi;
  double p;

  KosakiElement(AlgebraElement h_, PositiveFunctional phi_, double p_);
};

// Conjugate exponent with the p = 1 / p = infinity pair handled exactly.
double conjugate_exponent(double p);

// Forward direction of the isometry: wraps sigma^{1/2q} k sigma^{1/2q}.
KosakiElement embed_ip(const AlgebraElement& k, const PositiveFunctional& sigma, double p);

// Inverse direction: recovers the witness k via pseudo-inverse powers.
// Throws NotInSpace when h leaks out of the support of sigma.
AlgebraElement extract(const AlgebraElement& h, const PositiveFunctional& sigma, double p,
                       double membership_tol = 1e-9);
AlgebraElement extract(const KosakiElement& h, double membership_tol = 1e-9);

// Weighted norm; +infinity when the membership gate fails.
double kosaki_norm(const AlgebraElement& h, const PositiveFunctional& sigma, double p,
                   double membership_tol = 1e-9);
double kosaki_norm(const KosakiElement& h, double membership_tol = 1e-9);

// Weighted operator norm of k relative to sigma, i.e. the least lambda with
// the doubled element [[0, k], [k*, 0]] dominated by lambda * diag(h_sigma,
// h_sigma). Computed both through that block pencil and through
// ||sigma^{-1/2} k sigma^{-1/2}||_inf; the two routes must agree. Returns
// nullopt when no finite lambda exists.
std::optional<double> linf_norm(const AlgebraElement& k, const PositiveFunctional& sigma,
                                double agreement_tol = 1e-8);

// Duality pairing between conjugate spaces: trace of the witness product.
Complex pairing(const KosakiElement& k, const KosakiElement& h);

// The norming functional: the unique unit-ball element of the conjugate
// space pairing to ||h||. Needs 1 < p < infinity and h != 0.
KosakiElement duality_map_T(const KosakiElement& h);

// Splits a Hermitian element into positive and negative parts whose witnesses
// have orthogonal supports; ||h||^p = ||h_+||^p + ||h_-||^p.
std::pair<KosakiElement, KosakiElement> jordan_decompose(const KosakiElement& h);

//==============================================================================
// Interpolation paths on the unit strip
//==============================================================================

// The norm-attaining analytic path through h: with witness k = u l^{1/p}
// (l trace-class positive, u a partial isometry),
//
//   f(z) = ||l||_1^{1/p - z} sigma^{(1-z)/2} u l^z sigma^{(1-z)/2}.
//
// Its value at z = 1/p is h, and || f(x + it) ||_{1/x, phi} is constant on
// the strip.
class InterpolationPath {
 public:
  explicit InterpolationPath(KosakiElement base);

  const KosakiElement& base() const { return base_; }
  AlgebraElement evaluate(Complex z) const;  // OutOfStrip unless 0 <= Re z <= 1

 private:
  KosakiElement base_;
  double l1_;         // ||l||_1
  AlgebraElement u_;   // partial isometry of the witness
  AlgebraElement l_;   // |k|^p
};

InterpolationPath interpolation_path(const KosakiElement& h);

// Both sides of a two-term norm inequality, oriented so that lhs <= rhs is
// the asserted direction; `reversed` records that the raw inequality flips
// at the p = 2 boundary.
struct InequalitySides {
  double lhs;
  double rhs;
  bool reversed;
};

// Uniform-convexity inequalities: mean of ||h+k||^p, ||h-k||^p against the
// q-sum of the individual norms (direction flips at p = 2).
InequalitySides clarkson_sides(const AlgebraElement& h, const AlgebraElement& k,
                               const PositiveFunctional& sigma, double p);

// Two-point sharp uniform convexity: (||h||^2 + (p-1) ||k||^2)^{1/2} against
// the p-mean of ||h+k||, ||h-k|| (direction flips at p = 2).
InequalitySides pixu_sides(const AlgebraElement& h, const AlgebraElement& k,
                           const PositiveFunctional& sigma, double p);

// A strip function with declared endpoint exponents: Re z = 0 carries the
// p_left norm, Re z = 1 the p_right norm (p_right <= p_left).
struct StripFunction {
  std::function<AlgebraElement(Complex)> f;
  PositiveFunctional sigma;
  double p_left;
  double p_right;

  static StripFunction from_path(const InterpolationPath& path);
  static StripFunction constant(const AlgebraElement& h, const PositiveFunctional& sigma,
                                double p_left, double p_right);
};

struct ThreeLinesResult {
  double bound;  // M_0^{1-eta} * M_1^eta over the sampled t-grid
  double value;  // || f(eta) ||_{p_eta, phi}
};

// Hadamard three-lines comparison at interior abscissa eta. The suprema over
// the boundary lines are sampled on t_grid, which under-approximates the true
// bound, so value <= bound stays a valid assertion.
ThreeLinesResult three_lines_check(const StripFunction& f, double eta,
                                   const std::vector<double>& t_grid = {-2, -1, 0, 1, 2});

}  // namespace renlp
