#pragma once

#include <vector>

#include "renlp/algebra.hpp"
#include "renlp/lp_kosaki.hpp"

namespace renlp {

// Extended-real divergence value in nats. +infinity is the IEEE infinity,
// never a large finite sentinel; comparisons against it are exact.
struct DivergenceValue {
  double nats;

  bool is_infinite() const { return std::isinf(nats); }
  double in_bits() const { return nats / std::log(2.0); }
  static DivergenceValue infinity() { return DivergenceValue{kInf}; }
};

// Sandwiched Renyi divergence for alpha > 1, defined through the weighted
// alpha-norm of h_psi relative to phi:
//
//   (alpha / (alpha - 1)) * log || h_psi ||_{alpha, phi}
//
// +infinity when the support of psi leaks out of the support of phi. Valid
// for arbitrary positive functionals, no implicit normalization.
DivergenceValue sandwiched_renyi(const PositiveFunctional& psi, const PositiveFunctional& phi,
                                 double alpha);

// Petz-type Renyi divergence (1/(alpha-1)) log Tr rho^alpha sigma^{1-alpha},
// powers on supports; alpha in (0,1) or (1,inf).
DivergenceValue standard_renyi(const PositiveFunctional& psi, const PositiveFunctional& phi,
                               double alpha);

// Relative entropy Tr rho (log rho - log sigma) on supports; the alpha -> 1
// limit point of both families.
DivergenceValue relative_entropy(const PositiveFunctional& psi, const PositiveFunctional& phi);

// Max-relative entropy log inf{lambda > 0 : rho <= lambda sigma}.
DivergenceValue max_relative(const PositiveFunctional& psi, const PositiveFunctional& phi);

struct RelativeModularOperator {
  PositiveFunctional rho;    // psi side
  PositiveFunctional sigma;  // phi side
};

// Action of the relative modular operator power: rho^z k sigma^{-z}, with
// complex powers taken spectrally on the supports.
AlgebraElement relative_modular_apply(const RelativeModularOperator& delta, Complex z,
                                      const AlgebraElement& k);

// Araki-Lieb-Thirring style bracket around || h_psi ||_{p,phi}^p:
//
//   psi(1)^{1-p} || Delta^{1-1/2p} h_phi^{1/2} ||_2^{2p}
//       <= || h_psi ||_{p,phi}^p <= || Delta^{p/2} h_phi^{1/2} ||_2^2.
struct AltBounds {
  double lower;
  double upper;
};

AltBounds alt_bounds(const PositiveFunctional& psi, const PositiveFunctional& phi, double p);

// One sweep row: the sandwiched value bracketed by the two standard values,
//   lower_standard = D_{2 - 1/alpha}  <=  sandwiched  <=  standard = D_alpha.
struct SweepRow {
  double alpha;
  DivergenceValue sandwiched;
  DivergenceValue standard;
  DivergenceValue lower_standard;
};

std::vector<SweepRow> alpha_sweep(const PositiveFunctional& psi, const PositiveFunctional& phi,
                                  const std::vector<double>& grid);

}  // namespace renlp
