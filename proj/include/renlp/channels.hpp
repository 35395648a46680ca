#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "renlp/algebra.hpp"
#include "renlp/lp_kosaki.hpp"

namespace renlp {

// Declared positivity strength. Complete positivity can be certified from
// the Choi matrix; plain positivity of a superoperator cannot be decided
// numerically in general, so positive-only maps (the transpose) carry a
// declared tag set by their constructor.
enum class PositivityClass { positive, two_positive, completely_positive };

const char* to_string(PositivityClass c);

// Vectorization convention used everywhere: column-stacking per block,
// blocks concatenated in structure order. The Choi/superoperator interchange
// depends on this bit-exactly.
Eigen::VectorXcd vec(const AlgebraElement& a);
AlgebraElement unvec(const BlockStructure& s, const Eigen::VectorXcd& v);

//==============================================================================
// Channel: a linear map between block algebras, stored as a superoperator on
// vectorized elements, optionally with a Kraus family (total-space matrices).
//==============================================================================

class Channel {
 public:
  // require_trace_preserving enforces the predual normalization on a full
  // matrix-unit basis; adjoints and recovery maps skip it and record the
  // measured flags instead.
  Channel(BlockStructure in, BlockStructure out, Matrix superop,
          std::optional<std::vector<Matrix>> kraus, PositivityClass positivity,
          bool class_certified, bool require_trace_preserving = true);

  const BlockStructure& in_structure() const { return in_; }
  const BlockStructure& out_structure() const { return out_; }
  const Matrix& superop() const { return superop_; }
  const std::optional<std::vector<Matrix>>& kraus() const { return kraus_; }
  PositivityClass positivity_class() const { return positivity_; }
  bool class_certified() const { return certified_; }

  bool trace_preserving() const { return trace_preserving_; }
  bool unital() const { return unital_; }

 private:
  BlockStructure in_;
  BlockStructure out_;
  Matrix superop_;
  std::optional<std::vector<Matrix>> kraus_;
  PositivityClass positivity_;
  bool certified_;
  bool trace_preserving_;
  bool unital_;
};

AlgebraElement apply(const Channel& phi, const AlgebraElement& h);
PositiveFunctional apply(const Channel& phi, const PositiveFunctional& f);

// Adjoint with respect to the trace pairing Tr(phi(h) y) = Tr(h phi*(y));
// unital whenever phi is trace-preserving.
Channel adjoint(const Channel& phi);

// Composition second . first.
Channel compose(const Channel& second, const Channel& first);

struct ChoiMatrix {
  Matrix matrix;  // indexed by (out x in), Choi[(m,i),(n,j)] = phi(E_ij)[m,n]
  BlockStructure in;
  BlockStructure out;
};

ChoiMatrix choi(const Channel& phi);
bool certify_cp(const Channel& phi, double tol = 1e-9);
bool certify_2positive(const Channel& phi, double tol = 1e-9);

// Petz dual of phi with respect to sigma: the recovery map
//
//   y  ->  sigma^{1/2} phi*( phi(sigma)^{-1/2} y phi(sigma)^{-1/2} ) sigma^{1/2},
//
// compressed to the supports of sigma and phi(sigma) on the two sides. Trace
// preserving on the compressed output algebra; positivity class inherited.
Channel petz_dual(const Channel& phi, const PositiveFunctional& sigma);

namespace channels {

Channel identity(const BlockStructure& s);
Channel unitary_conjugation(const AlgebraElement& u);
// Pinching onto the diagonal of the given block-diagonal orthonormal basis;
// the standard basis when none is given.
Channel pinching(const BlockStructure& s);
Channel pinching(const AlgebraElement& basis);
// Partial trace on a single tensor-product block of shape d1 x d2; keeps the
// named factor (1 or 2).
Channel partial_trace(int d1, int d2, int keep);
Channel depolarizing(const BlockStructure& s, double lambda);
Channel transpose_map(const BlockStructure& s);
Channel direct_sum(const Channel& a, const Channel& b);
Channel tensor(const Channel& a, const Channel& b);
Channel mixture(const std::vector<Channel>& parts, const std::vector<double>& weights);
// (h1, h2) -> h1 + h2 from the doubled algebra onto one copy.
Channel sum_collapse(const BlockStructure& s);

}  // namespace channels

// Weighted-norm contraction witness: returns (||h||_{p,sigma},
// ||phi(h)||_{p,phi(sigma)}); the second never exceeds the first.
std::pair<double, double> contraction_check(const Channel& phi, const PositiveFunctional& sigma,
                                            double p, const AlgebraElement& h);

}  // namespace renlp
