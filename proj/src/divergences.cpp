#include "renlp/divergences.hpp"

#include <cmath>

namespace renlp {

namespace {

void require_nonzero(const PositiveFunctional& f, const char* who) {
  if (f.is_zero()) throw ZeroFunctional(std::string(who) + ": zero functional");
}

// supp(rho) <= supp(sigma), the finiteness gate shared by everything here.
bool support_dominated(const PositiveFunctional& rho, const PositiveFunctional& sigma,
                       double tol = 1e-9) {
  SupportProjection e = support(sigma.element());
  return compression_defect(rho.element(), e.projector) <= tol;
}

}  // namespace

DivergenceValue sandwiched_renyi(const PositiveFunctional& psi, const PositiveFunctional& phi,
                                 double alpha) {
  if (!(alpha > 1.0) || std::isinf(alpha))
    throw InvalidAlpha("sandwiched divergence is defined for 1 < alpha < infinity");
  require_nonzero(psi, "sandwiched_renyi");
  require_nonzero(phi, "sandwiched_renyi");
  const double norm = kosaki_norm(psi.element(), phi, alpha);
  if (std::isinf(norm)) return DivergenceValue::infinity();
  return DivergenceValue{alpha / (alpha - 1.0) * std::log(norm)};
}

DivergenceValue standard_renyi(const PositiveFunctional& psi, const PositiveFunctional& phi,
                               double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || std::isinf(alpha))
    throw InvalidAlpha("standard divergence needs alpha in (0,1) or (1,infinity)");
  require_nonzero(psi, "standard_renyi");
  require_nonzero(phi, "standard_renyi");
  if (alpha > 1.0 && !support_dominated(psi, phi)) return DivergenceValue::infinity();
  AlgebraElement ra = mpower(psi.element(), alpha);
  AlgebraElement sb = mpower(phi.element(), 1.0 - alpha);
  const double t = trace(ra * sb).real();
  if (t <= 0.0) return DivergenceValue::infinity();  // orthogonal overlap at alpha < 1
  return DivergenceValue{std::log(t) / (alpha - 1.0)};
}

DivergenceValue relative_entropy(const PositiveFunctional& psi, const PositiveFunctional& phi) {
  require_nonzero(psi, "relative_entropy");
  require_nonzero(phi, "relative_entropy");
  if (!support_dominated(psi, phi)) return DivergenceValue::infinity();
  AlgebraElement diff = mlog(psi.element()) - mlog(phi.element());
  return DivergenceValue{trace(psi.element() * diff).real()};
}

DivergenceValue max_relative(const PositiveFunctional& psi, const PositiveFunctional& phi) {
  require_nonzero(psi, "max_relative");
  require_nonzero(phi, "max_relative");
  OrderResult order = order_leq(psi.element(), phi.element());
  if (!order.lambda_min.has_value()) return DivergenceValue::infinity();
  return DivergenceValue{std::log(*order.lambda_min)};
}

AlgebraElement relative_modular_apply(const RelativeModularOperator& delta, Complex z,
                                      const AlgebraElement& k) {
  if (delta.sigma.is_zero()) throw ZeroOperator("relative modular operator with zero phi side");
  AlgebraElement left = mpower(delta.rho.element(), z);
  AlgebraElement right = mpower(delta.sigma.element(), -z);
  return left * k * right;
}

AltBounds alt_bounds(const PositiveFunctional& psi, const PositiveFunctional& phi, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidExponent("bracket needs 1 < p < infinity");
  require_nonzero(psi, "alt_bounds");
  require_nonzero(phi, "alt_bounds");
  RelativeModularOperator delta{psi, phi};
  AlgebraElement phi_half = mpower(phi.element(), 0.5);

  AlgebraElement low_vec = relative_modular_apply(delta, Complex(1.0 - 1.0 / (2.0 * p), 0.0), phi_half);
  const double lower =
      std::pow(psi.mass(), 1.0 - p) * std::pow(schatten_norm(low_vec, 2.0), 2.0 * p);

  double upper = kInf;
  if (support_dominated(psi, phi)) {
    AlgebraElement up_vec = relative_modular_apply(delta, Complex(p / 2.0, 0.0), phi_half);
    upper = std::pow(schatten_norm(up_vec, 2.0), 2.0);
  }
  return AltBounds{lower, upper};
}

std::vector<SweepRow> alpha_sweep(const PositiveFunctional& psi, const PositiveFunctional& phi,
                                  const std::vector<double>& grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double alpha : grid) {
    if (!(alpha > 1.0)) throw InvalidAlpha("sweep grid entries must exceed 1");
    rows.push_back(SweepRow{alpha, sandwiched_renyi(psi, phi, alpha),
                            standard_renyi(psi, phi, alpha),
                            standard_renyi(psi, phi, 2.0 - 1.0 / alpha)});
  }
  return rows;
}

}  // namespace renlp
