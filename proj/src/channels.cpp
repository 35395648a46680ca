#include "renlp/channels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace renlp {

namespace {

PositivityClass weaker(PositivityClass a, PositivityClass b) {
  return static_cast<int>(a) < static_cast<int>(b) ? a : b;
}

// Offset of block b in the total Hilbert space.
std::vector<int> block_offsets(const BlockStructure& s) {
  std::vector<int> off(static_cast<std::size_t>(s.block_count()));
  int acc = 0;
  for (int b = 0; b < s.block_count(); ++b) {
    off[static_cast<std::size_t>(b)] = acc;
    acc += s.dim(b);
  }
  return off;
}

// Embeds a block-diagonal element into one total-space matrix.
Matrix to_full(const AlgebraElement& a) {
  const int n = a.structure().total_dim();
  Matrix m = Matrix::Zero(n, n);
  std::vector<int> off = block_offsets(a.structure());
  for (int b = 0; b < a.block_count(); ++b) {
    const int d = a.structure().dim(b);
    m.block(off[static_cast<std::size_t>(b)], off[static_cast<std::size_t>(b)], d, d) = a.block(b);
  }
  return m;
}

// Extracts the block-diagonal part of a total-space matrix. Off-diagonal
// corners are dropped: compression onto the algebra is itself a channel.
AlgebraElement from_full(const BlockStructure& s, const Matrix& m) {
  std::vector<Matrix> blocks;
  std::vector<int> off = block_offsets(s);
  for (int b = 0; b < s.block_count(); ++b) {
    const int d = s.dim(b);
    blocks.push_back(m.block(off[static_cast<std::size_t>(b)], off[static_cast<std::size_t>(b)], d, d));
  }
  return AlgebraElement(s, std::move(blocks));
}

// Matrix unit E_ij inside block b, zero elsewhere.
AlgebraElement matrix_unit(const BlockStructure& s, int b, int i, int j) {
  AlgebraElement e = AlgebraElement::zero(s);
  e.block(b)(i, j) = Complex(1.0, 0.0);
  return e;
}

Matrix superop_from_action(const BlockStructure& in, const BlockStructure& out,
                           const std::function<AlgebraElement(const AlgebraElement&)>& action) {
  Matrix s(out.vec_dim(), in.vec_dim());
  int col = 0;
  for (int b = 0; b < in.block_count(); ++b)
    for (int j = 0; j < in.dim(b); ++j)
      for (int i = 0; i < in.dim(b); ++i)  // column-stacking: i runs fastest
        s.col(col++) = vec(action(matrix_unit(in, b, i, j)));
  return s;
}

Matrix kraus_action_superop(const BlockStructure& in, const BlockStructure& out,
                            const std::vector<Matrix>& kraus) {
  return superop_from_action(in, out, [&](const AlgebraElement& h) {
    Matrix full = to_full(h);
    Matrix acc = Matrix::Zero(out.total_dim(), out.total_dim());
    for (const Matrix& k : kraus) acc += k * full * k.adjoint();
    return from_full(out, acc);
  });
}

}  // namespace

const char* to_string(PositivityClass c) {
  switch (c) {
    case PositivityClass::positive: return "positive";
    case PositivityClass::two_positive: return "two_positive";
    case PositivityClass::completely_positive: return "completely_positive";
  }
  return "unknown";
}

Eigen::VectorXcd vec(const AlgebraElement& a) {
  Eigen::VectorXcd v(a.structure().vec_dim());
  int pos = 0;
  for (int b = 0; b < a.block_count(); ++b) {
    const Matrix& m = a.block(b);
    const int n = static_cast<int>(m.size());
    v.segment(pos, n) = Eigen::Map<const Eigen::VectorXcd>(m.data(), n);
    pos += n;
  }
  return v;
}

AlgebraElement unvec(const BlockStructure& s, const Eigen::VectorXcd& v) {
  if (v.size() != s.vec_dim()) throw ShapeMismatch("vectorized length mismatch");
  std::vector<Matrix> blocks;
  int pos = 0;
  for (int b = 0; b < s.block_count(); ++b) {
    const int d = s.dim(b);
    blocks.push_back(Eigen::Map<const Matrix>(v.data() + pos, d, d));
    pos += d * d;
  }
  return AlgebraElement(s, std::move(blocks));
}

//------------------------------------------------------------------------------
// Channel
//------------------------------------------------------------------------------

Channel::Channel(BlockStructure in, BlockStructure out, Matrix superop,
                 std::optional<std::vector<Matrix>> kraus, PositivityClass positivity,
                 bool class_certified, bool require_trace_preserving)
    : in_(std::move(in)),
      out_(std::move(out)),
      superop_(std::move(superop)),
      kraus_(std::move(kraus)),
      positivity_(positivity),
      certified_(class_certified) {
  if (superop_.rows() != out_.vec_dim() || superop_.cols() != in_.vec_dim())
    throw ShapeMismatch("superoperator shape does not match the structures");
  if (kraus_) {
    for (const Matrix& k : *kraus_)
      if (k.rows() != out_.total_dim() || k.cols() != in_.total_dim())
        throw ShapeMismatch("Kraus operator shape does not match the structures");
    Matrix from_kraus = kraus_action_superop(in_, out_, *kraus_);
    if ((from_kraus - superop_).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, superop_.cwiseAbs().maxCoeff()))
      throw ShapeMismatch("superoperator disagrees with the Kraus action");
  }

  // Measure trace preservation and unitality on the matrix-unit basis.
  double tp_defect = 0.0;
  int col = 0;
  for (int b = 0; b < in_.block_count(); ++b)
    for (int j = 0; j < in_.dim(b); ++j)
      for (int i = 0; i < in_.dim(b); ++i) {
        AlgebraElement img = unvec(out_, superop_.col(col++));
        const Complex in_trace = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        tp_defect = std::max(tp_defect, std::abs(trace(img) - in_trace));
      }
  trace_preserving_ = tp_defect <= 1e-9;
  AlgebraElement id_img = unvec(out_, superop_ * vec(AlgebraElement::identity(in_)));
  unital_ = (id_img - AlgebraElement::identity(out_)).max_abs() <= 1e-9;

  if (require_trace_preserving && !trace_preserving_)
    throw ShapeMismatch("channel is not trace preserving");
}

AlgebraElement apply(const Channel& phi, const AlgebraElement& h) {
  if (h.structure() != phi.in_structure())
    throw StructureMismatch("element does not live on the channel input algebra");
  return unvec(phi.out_structure(), phi.superop() * vec(h));
}

PositiveFunctional apply(const Channel& phi, const PositiveFunctional& f) {
  // A positive trace-preserving map keeps the PSD cone; hermitize to drop
  // representation noise before revalidation.
  return PositiveFunctional(apply(phi, f.element()).hermitized(),
                            std::max(f.tolerance(), 1e-9));
}

Channel adjoint(const Channel& phi) {
  return Channel(phi.out_structure(), phi.in_structure(), phi.superop().adjoint(),
                 std::nullopt, phi.positivity_class(), false,
                 /*require_trace_preserving=*/false);
}

Channel compose(const Channel& second, const Channel& first) {
  if (first.out_structure() != second.in_structure())
    throw StructureMismatch("composition needs matching intermediate structures");
  std::optional<std::vector<Matrix>> kraus;
  if (first.kraus() && second.kraus()) {
    std::vector<Matrix> prods;
    for (const Matrix& k2 : *second.kraus())
      for (const Matrix& k1 : *first.kraus()) prods.push_back(k2 * k1);
    kraus = std::move(prods);
  }
  return Channel(first.in_structure(), second.out_structure(),
                 second.superop() * first.superop(), std::move(kraus),
                 weaker(first.positivity_class(), second.positivity_class()), false,
                 /*require_trace_preserving=*/false);
}

ChoiMatrix choi(const Channel& phi) {
  const BlockStructure& in = phi.in_structure();
  const BlockStructure& out = phi.out_structure();
  const int n_in = in.total_dim();
  const int n_out = out.total_dim();
  Matrix c = Matrix::Zero(n_out * n_in, n_out * n_in);
  std::vector<int> off = block_offsets(in);
  for (int b = 0; b < in.block_count(); ++b)
    for (int i = 0; i < in.dim(b); ++i)
      for (int j = 0; j < in.dim(b); ++j) {
        Matrix img = to_full(apply(phi, matrix_unit(in, b, i, j)));
        const int gi = off[static_cast<std::size_t>(b)] + i;
        const int gj = off[static_cast<std::size_t>(b)] + j;
        for (int m = 0; m < n_out; ++m)
          for (int n = 0; n < n_out; ++n) c(m * n_in + gi, n * n_in + gj) += img(m, n);
      }
  return ChoiMatrix{std::move(c), in, out};
}

bool certify_cp(const Channel& phi, double tol) {
  ChoiMatrix c = choi(phi);
  const double herm_defect = (c.matrix - c.matrix.adjoint().eval()).cwiseAbs().maxCoeff();
  const double scale = std::max(c.matrix.cwiseAbs().maxCoeff(), 1e-300);
  if (herm_defect > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c.matrix + c.matrix.adjoint().eval()));
  return eig.eigenvalues().minCoeff() >= -tol * std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
}

bool certify_2positive(const Channel& phi, double tol) {
  return certify_cp(channels::tensor(phi, channels::identity(BlockStructure({2}))), tol);
}

Channel petz_dual(const Channel& phi, const PositiveFunctional& sigma) {
  if (sigma.is_zero()) throw ZeroFunctional("Petz dual needs a nonzero reference");
  if (sigma.structure() != phi.in_structure())
    throw StructureMismatch("reference functional must live on the channel input");

  AlgebraElement e = support(sigma.element()).projector;
  AlgebraElement sqrt_sigma = mpower(sigma.element(), 0.5);
  PositiveFunctional phi_sigma = apply(phi, sigma);
  AlgebraElement e_out = support(phi_sigma.element()).projector;
  AlgebraElement inv_sqrt_out = mpower(phi_sigma.element(), -0.5);
  Channel adj = adjoint(phi);

  Matrix s = superop_from_action(
      phi.out_structure(), phi.in_structure(), [&](const AlgebraElement& y) {
        AlgebraElement mid = inv_sqrt_out * (e_out * y * e_out) * inv_sqrt_out;
        AlgebraElement back = apply(adj, mid);
        return e * (sqrt_sigma * back * sqrt_sigma) * e;
      });
  return Channel(phi.out_structure(), phi.in_structure(), std::move(s), std::nullopt,
                 phi.positivity_class(), false, /*require_trace_preserving=*/false);
}

//------------------------------------------------------------------------------
// Constructors
//------------------------------------------------------------------------------

namespace channels {

Channel identity(const BlockStructure& s) {
  std::vector<Matrix> kraus{Matrix::Identity(s.total_dim(), s.total_dim())};
  return Channel(s, s, Matrix::Identity(s.vec_dim(), s.vec_dim()), std::move(kraus),
                 PositivityClass::completely_positive, true);
}

Channel unitary_conjugation(const AlgebraElement& u) {
  for (int b = 0; b < u.block_count(); ++b) {
    Matrix defect = u.block(b).adjoint() * u.block(b) - Matrix::Identity(u.structure().dim(b), u.structure().dim(b));
    if (defect.cwiseAbs().maxCoeff() > 1e-9)
      throw ShapeMismatch("conjugation needs a unitary element");
  }
  const BlockStructure& s = u.structure();
  Matrix superop = Matrix::Zero(s.vec_dim(), s.vec_dim());
  int pos = 0;
  for (int b = 0; b < s.block_count(); ++b) {
    const int d2 = s.dim(b) * s.dim(b);
    superop.block(pos, pos, d2, d2) =
        Eigen::kroneckerProduct(u.block(b).conjugate(), u.block(b));
    pos += d2;
  }
  std::vector<Matrix> kraus{to_full(u)};
  return Channel(s, s, std::move(superop), std::move(kraus),
                 PositivityClass::completely_positive, true);
}

Channel pinching(const BlockStructure& s) { return pinching(AlgebraElement::identity(s)); }

Channel pinching(const AlgebraElement& basis) {
  const BlockStructure& s = basis.structure();
  std::vector<Matrix> kraus;
  std::vector<int> off = block_offsets(s);
  for (int b = 0; b < s.block_count(); ++b) {
    Matrix defect = basis.block(b).adjoint() * basis.block(b) - Matrix::Identity(s.dim(b), s.dim(b));
    if (defect.cwiseAbs().maxCoeff() > 1e-9)
      throw ShapeMismatch("pinching basis must be unitary");
    for (int i = 0; i < s.dim(b); ++i) {
      Matrix k = Matrix::Zero(s.total_dim(), s.total_dim());
      Eigen::VectorXcd col = basis.block(b).col(i);
      k.block(off[static_cast<std::size_t>(b)], off[static_cast<std::size_t>(b)], s.dim(b), s.dim(b)) =
          col * col.adjoint();
      kraus.push_back(std::move(k));
    }
  }
  Matrix superop = kraus_action_superop(s, s, kraus);
  return Channel(s, s, std::move(superop), std::move(kraus),
                 PositivityClass::completely_positive, true);
}

Channel partial_trace(int d1, int d2, int keep) {
  if (d1 < 1 || d2 < 1) throw ShapeMismatch("tensor factors must have dimension >= 1");
  if (keep != 1 && keep != 2) throw ShapeMismatch("keep selects factor 1 or 2");
  BlockStructure in({d1 * d2});
  BlockStructure out({keep == 1 ? d1 : d2});
  std::vector<Matrix> kraus;
  if (keep == 1) {
    for (int k = 0; k < d2; ++k) {
      Matrix m = Matrix::Zero(d1, d1 * d2);
      for (int i = 0; i < d1; ++i) m(i, i * d2 + k) = Complex(1.0, 0.0);
      kraus.push_back(std::move(m));
    }
  } else {
    for (int k = 0; k < d1; ++k) {
      Matrix m = Matrix::Zero(d2, d1 * d2);
      for (int i = 0; i < d2; ++i) m(i, k * d2 + i) = Complex(1.0, 0.0);
      kraus.push_back(std::move(m));
    }
  }
  Matrix superop = kraus_action_superop(in, out, kraus);
  return Channel(in, out, std::move(superop), std::move(kraus),
                 PositivityClass::completely_positive, true);
}

Channel depolarizing(const BlockStructure& s, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw InvalidWeight("mixing weight must lie in [0,1]");
  const double d = static_cast<double>(s.total_dim());
  Matrix superop = superop_from_action(s, s, [&](const AlgebraElement& h) {
    return h * Complex(1.0 - lambda, 0.0) +
           AlgebraElement::identity(s) * (Complex(lambda, 0.0) * trace(h) / d);
  });
  return Channel(s, s, std::move(superop), std::nullopt,
                 PositivityClass::completely_positive, true);
}

Channel transpose_map(const BlockStructure& s) {
  Matrix superop = superop_from_action(s, s, [](const AlgebraElement& h) { return h.transpose(); });
  // Positive but not completely positive; the class is a declared tag.
  return Channel(s, s, std::move(superop), std::nullopt, PositivityClass::positive, false);
}

Channel direct_sum(const Channel& a, const Channel& b) {
  BlockStructure in = renlp::direct_sum(a.in_structure(), b.in_structure());
  BlockStructure out = renlp::direct_sum(a.out_structure(), b.out_structure());
  Matrix superop = Matrix::Zero(out.vec_dim(), in.vec_dim());
  superop.topLeftCorner(a.out_structure().vec_dim(), a.in_structure().vec_dim()) = a.superop();
  superop.bottomRightCorner(b.out_structure().vec_dim(), b.in_structure().vec_dim()) = b.superop();
  return Channel(in, out, std::move(superop), std::nullopt,
                 weaker(a.positivity_class(), b.positivity_class()), false);
}

Channel tensor(const Channel& a, const Channel& b) {
  std::vector<int> in_dims, out_dims;
  for (int i = 0; i < a.in_structure().block_count(); ++i)
    for (int j = 0; j < b.in_structure().block_count(); ++j)
      in_dims.push_back(a.in_structure().dim(i) * b.in_structure().dim(j));
  for (int i = 0; i < a.out_structure().block_count(); ++i)
    for (int j = 0; j < b.out_structure().block_count(); ++j)
      out_dims.push_back(a.out_structure().dim(i) * b.out_structure().dim(j));
  BlockStructure in(in_dims);
  BlockStructure out(out_dims);

  const int nb = b.in_structure().block_count();
  Matrix superop(out.vec_dim(), in.vec_dim());
  int col = 0;
  for (int ab = 0; ab < in.block_count(); ++ab) {
    const int ba = ab / nb;  // block index inside a
    const int bb = ab % nb;  // block index inside b
    const int da = a.in_structure().dim(ba);
    const int db = b.in_structure().dim(bb);
    // Column order must match vec(): within block ab, row index (i*db+m)
    // runs fastest, then column index (j*db+n).
    for (int j = 0; j < da; ++j)
      for (int n = 0; n < db; ++n)
        for (int i = 0; i < da; ++i)
          for (int m = 0; m < db; ++m) {
            AlgebraElement img_a = apply(a, matrix_unit(a.in_structure(), ba, i, j));
            AlgebraElement img_b = apply(b, matrix_unit(b.in_structure(), bb, m, n));
            std::vector<Matrix> blocks;
            for (int oa = 0; oa < a.out_structure().block_count(); ++oa)
              for (int ob = 0; ob < b.out_structure().block_count(); ++ob)
                blocks.push_back(
                    Eigen::kroneckerProduct(img_a.block(oa), img_b.block(ob)).eval());
            superop.col(col++) = vec(AlgebraElement(out, std::move(blocks)));
          }
  }
  // A tensor factor that is merely positive gives no positivity guarantee for
  // the product; the tag stays a declared class in that case.
  PositivityClass cls = (a.positivity_class() == PositivityClass::completely_positive &&
                         b.positivity_class() == PositivityClass::completely_positive)
                            ? PositivityClass::completely_positive
                            : PositivityClass::positive;
  return Channel(in, out, std::move(superop), std::nullopt, cls,
                 cls == PositivityClass::completely_positive, false);
}

Channel mixture(const std::vector<Channel>& parts, const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size())
    throw InvalidWeight("mixture needs one weight per channel");
  double sum = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw InvalidWeight("mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidWeight("mixture weights must sum to one");
  Matrix superop = Matrix::Zero(parts.front().out_structure().vec_dim(),
                                parts.front().in_structure().vec_dim());
  PositivityClass cls = PositivityClass::completely_positive;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].in_structure() != parts.front().in_structure() ||
        parts[i].out_structure() != parts.front().out_structure())
      throw StructureMismatch("mixture components must share structures");
    superop += weights[i] * parts[i].superop();
    cls = weaker(cls, parts[i].positivity_class());
  }
  return Channel(parts.front().in_structure(), parts.front().out_structure(),
                 std::move(superop), std::nullopt, cls, false);
}

Channel sum_collapse(const BlockStructure& s) {
  BlockStructure in = renlp::direct_sum(s, s);
  Matrix superop(s.vec_dim(), in.vec_dim());
  superop << Matrix::Identity(s.vec_dim(), s.vec_dim()),
      Matrix::Identity(s.vec_dim(), s.vec_dim());
  // Kraus form: the two coordinate projections of the doubled space.
  std::vector<Matrix> kraus;
  Matrix v1 = Matrix::Zero(s.total_dim(), 2 * s.total_dim());
  v1.leftCols(s.total_dim()) = Matrix::Identity(s.total_dim(), s.total_dim());
  Matrix v2 = Matrix::Zero(s.total_dim(), 2 * s.total_dim());
  v2.rightCols(s.total_dim()) = Matrix::Identity(s.total_dim(), s.total_dim());
  kraus.push_back(std::move(v1));
  kraus.push_back(std::move(v2));
  return Channel(in, s, std::move(superop), std::move(kraus),
                 PositivityClass::completely_positive, true);
}

}  // namespace channels

std::pair<double, double> contraction_check(const Channel& phi, const PositiveFunctional& sigma,
                                            double p, const AlgebraElement& h) {
  const double norm_in = kosaki_norm(h, sigma, p);
  PositiveFunctional out_ref = apply(phi, sigma);
  const double norm_out = kosaki_norm(apply(phi, h), out_ref, p);
  return {norm_in, norm_out};
}

}  // namespace renlp
