#include "looplie/liealg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace looplie {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace looplie

namespace looplie::liealg {

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

bool singular(const Matrix& g) {
  Eigen::FullPivLU<Matrix> lu(g);
  lu.setThreshold(1e-13);
  return !lu.isInvertible();
}

double imag_norm(const Matrix& m) { return m.imag().norm(); }

// The defining-equation defects, stacked, as a list of matrices. Both the
// residual and the linear algebra constraints are built from this.
std::vector<Matrix> algebra_defects(const Matrix& x, const GroupSpec& spec) {
  const Matrix j = spec.signature_form();
  const Matrix omega = spec.symplectic_form();
  std::vector<Matrix> out;
  switch (spec.kind) {
    case GroupKind::GL_R:
      out.push_back(x.imag().cast<Complex>());
      break;
    case GroupKind::GL_C:
      break;
    case GroupKind::O_pq:
      out.push_back(x.transpose() * j + j * x);
      out.push_back(x.imag().cast<Complex>());
      break;
    case GroupKind::O_C:
      out.push_back(x.transpose() + x);
      break;
    case GroupKind::U_pq:
      out.push_back(x.adjoint() * j + j * x);
      break;
    case GroupKind::Sp_R:
      out.push_back(x.transpose() * omega + omega * x);
      out.push_back(x.imag().cast<Complex>());
      break;
    case GroupKind::Sp_pq:
      out.push_back(x.adjoint() * j + j * x);
      out.push_back(x * omega - omega * x.conjugate());
      break;
  }
  return out;
}

}  // namespace

GroupSpec GroupSpec::gl_real(int n) { return {GroupKind::GL_R, n, n, 0}; }
GroupSpec GroupSpec::gl_complex(int n) { return {GroupKind::GL_C, n, n, 0}; }
GroupSpec GroupSpec::orthogonal(int p, int q) { return {GroupKind::O_pq, p + q, p, q}; }
GroupSpec GroupSpec::orthogonal_complex(int n) { return {GroupKind::O_C, n, n, 0}; }
GroupSpec GroupSpec::unitary(int p, int q) { return {GroupKind::U_pq, p + q, p, q}; }
GroupSpec GroupSpec::symplectic_real(int n) { return {GroupKind::Sp_R, n, n, 0}; }
GroupSpec GroupSpec::symplectic_quaternionic(int p, int q) {
  return {GroupKind::Sp_pq, p + q, p, q};
}

void GroupSpec::validate() const {
  if (n < 1) throw std::invalid_argument("group size must be positive");
  switch (kind) {
    case GroupKind::O_pq:
    case GroupKind::U_pq:
    case GroupKind::Sp_pq:
      if (p < 0 || q < 0 || p + q != n)
        throw std::invalid_argument("signature (p,q) must satisfy p + q = n");
      break;
    case GroupKind::Sp_R:
      if (n % 2 != 0) throw std::invalid_argument("Sp(n,R) needs even n");
      break;
    default:
      break;
  }
}

bool GroupSpec::is_real() const {
  return kind == GroupKind::GL_R || kind == GroupKind::O_pq || kind == GroupKind::Sp_R;
}

bool GroupSpec::is_general_linear() const {
  return kind == GroupKind::GL_R || kind == GroupKind::GL_C;
}

Matrix GroupSpec::signature_form() const {
  const int d = dim();
  Matrix j = identity(d);
  if (kind == GroupKind::O_pq || kind == GroupKind::U_pq) {
    for (int i = p; i < d; ++i) j(i, i) = -1.0;
  } else if (kind == GroupKind::Sp_pq) {
    for (int i = 2 * p; i < d; ++i) j(i, i) = -1.0;
  }
  return j;
}

Matrix GroupSpec::symplectic_form() const {
  const int d = dim();
  Matrix omega = Matrix::Zero(d, d);
  if (kind == GroupKind::Sp_R) {
    const int m = d / 2;
    omega.topRightCorner(m, m) = identity(m);
    omega.bottomLeftCorner(m, m) = -identity(m);
  } else if (kind == GroupKind::Sp_pq) {
    for (int k = 0; k < n; ++k) {
      omega(2 * k, 2 * k + 1) = -1.0;
      omega(2 * k + 1, 2 * k) = 1.0;
    }
  } else {
    omega = identity(d);
  }
  return omega;
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::GL_R: return "GL_R";
    case GroupKind::GL_C: return "GL_C";
    case GroupKind::O_pq: return "O_pq";
    case GroupKind::O_C: return "O_C";
    case GroupKind::U_pq: return "U_pq";
    case GroupKind::Sp_R: return "Sp_R";
    case GroupKind::Sp_pq: return "Sp_pq";
  }
  return "?";
}

GroupKind kind_from_string(const std::string& s) {
  for (auto k : {GroupKind::GL_R, GroupKind::GL_C, GroupKind::O_pq, GroupKind::O_C,
                 GroupKind::U_pq, GroupKind::Sp_R, GroupKind::Sp_pq}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown group kind '" + s + "'");
}

std::string GroupSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case GroupKind::GL_R: os << "GL(" << n << ",R)"; break;
    case GroupKind::GL_C: os << "GL(" << n << ",C)"; break;
    case GroupKind::O_pq: os << "O(" << p; if (q) os << "," << q; os << ")"; break;
    case GroupKind::O_C: os << "O(" << n << ",C)"; break;
    case GroupKind::U_pq: os << "U(" << p; if (q) os << "," << q; os << ")"; break;
    case GroupKind::Sp_R: os << "Sp(" << n << ",R)"; break;
    case GroupKind::Sp_pq: os << "Sp(" << p << "," << q << ")"; break;
  }
  return os.str();
}

double membership_residual(const Matrix& g, const GroupSpec& spec) {
  if (g.rows() != spec.dim() || g.cols() != spec.dim())
    throw std::invalid_argument("matrix size does not match group spec");
  if (singular(g)) return std::numeric_limits<double>::infinity();
  const Matrix j = spec.signature_form();
  const Matrix omega = spec.symplectic_form();
  switch (spec.kind) {
    case GroupKind::GL_R:
      return imag_norm(g);
    case GroupKind::GL_C:
      return 0.0;
    case GroupKind::O_pq:
      return (g.transpose() * j * g - j).norm() + imag_norm(g);
    case GroupKind::O_C:
      return (g.transpose() * g - identity(spec.dim())).norm();
    case GroupKind::U_pq:
      return (g.adjoint() * j * g - j).norm();
    case GroupKind::Sp_R:
      return (g.transpose() * omega * g - omega).norm() + imag_norm(g);
    case GroupKind::Sp_pq:
      return (g.adjoint() * j * g - j).norm() + (g * omega - omega * g.conjugate()).norm();
  }
  return 0.0;
}

double algebra_residual(const Matrix& x, const GroupSpec& spec) {
  if (x.rows() != spec.dim() || x.cols() != spec.dim())
    throw std::invalid_argument("matrix size does not match group spec");
  double r = 0.0;
  for (const auto& d : algebra_defects(x, spec)) r += d.norm();
  return r;
}

// ---------------------------------------------------------------------------

GroupElement::GroupElement(GroupSpec spec, Matrix entries)
    : spec_(spec), entries_(std::move(entries)) {
  spec_.validate();
  const double scale = std::max(1.0, entries_.squaredNorm());
  const double r = membership_residual(entries_, spec_);
  if (!(r <= tol::kGroup * scale)) {
    std::ostringstream os;
    os << "matrix is not an element of " << spec_.name() << " (residual " << r << ")";
    throw InvalidElement(os.str());
  }
  if (spec_.is_real()) entries_ = entries_.real().cast<Complex>();
}

GroupElement GroupElement::identity(const GroupSpec& spec) {
  return GroupElement(spec, Matrix::Identity(spec.dim(), spec.dim()));
}

GroupElement GroupElement::inverse() const { return GroupElement(spec_, entries_.inverse()); }

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("group spec mismatch");
  return GroupElement(spec_, entries_ * other.entries_);
}

AlgebraElement::AlgebraElement(GroupSpec spec, Matrix entries)
    : spec_(spec), entries_(std::move(entries)) {
  spec_.validate();
  const double scale = std::max(1.0, entries_.norm());
  const double r = algebra_residual(entries_, spec_);
  if (!(r <= tol::kGroup * scale)) {
    std::ostringstream os;
    os << "matrix is not in the Lie algebra of " << spec_.name() << " (residual " << r << ")";
    throw InvalidElement(os.str());
  }
  if (spec_.is_real()) entries_ = entries_.real().cast<Complex>();
}

AlgebraElement AlgebraElement::zero(const GroupSpec& spec) {
  return AlgebraElement(spec, Matrix::Zero(spec.dim(), spec.dim()));
}

// ---------------------------------------------------------------------------

AlgebraBasis::AlgebraBasis(const GroupSpec& spec) : spec_(spec) {
  spec_.validate();
  const int d = spec.dim();
  const int real_dim = 2 * d * d;

  // Real coordinates of 𝔤𝔩(d, C): real parts first, then imaginary parts.
  auto unit = [d](int k) {
    Matrix e = Matrix::Zero(d, d);
    const int idx = k % (d * d);
    e(idx / d, idx % d) = (k < d * d) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    return e;
  };
  auto flatten = [](const std::vector<Matrix>& ms) {
    Eigen::Index total = 0;
    for (const auto& m : ms) total += 2 * m.size();
    RealVector v(total);
    Eigen::Index at = 0;
    for (const auto& m : ms) {
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          v(at++) = m(i, j).real();
          v(at++) = m(i, j).imag();
        }
    }
    return v;
  };

  const auto probe = algebra_defects(unit(0), spec);
  RealMatrix kernel;
  if (probe.empty()) {
    kernel = RealMatrix::Identity(real_dim, real_dim);
  } else {
    RealMatrix constraints(flatten(probe).size(), real_dim);
    for (int k = 0; k < real_dim; ++k) constraints.col(k) = flatten(algebra_defects(unit(k), spec));
    Eigen::JacobiSVD<RealMatrix> svd(constraints, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * sv(0)) ++rank;
    kernel = svd.matrixV().rightCols(real_dim - rank);
  }

  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Matrix e = Matrix::Zero(d, d);
    for (int k = 0; k < real_dim; ++k) e += kernel(k, c) * unit(k);
    elements_.push_back(e);
  }
  const int m = size();
  gram_.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) gram_(a, b) = pairing(elements_[a], elements_[b]);
}

Matrix AlgebraBasis::project(const Matrix& x) const {
  const int m = size();
  RealVector rhs(m);
  for (int a = 0; a < m; ++a) rhs(a) = pairing(x, elements_[a]);
  const RealVector c = gram_.fullPivLu().solve(rhs);
  return combine(c);
}

RealVector AlgebraBasis::coordinates(const Matrix& x) const {
  // The basis is Frobenius-orthonormal, so coordinates are inner products.
  RealVector c(size());
  for (int a = 0; a < size(); ++a) c(a) = (elements_[a].adjoint() * x).trace().real();
  return c;
}

Matrix AlgebraBasis::combine(const RealVector& coeffs) const {
  const int d = spec_.dim();
  Matrix out = Matrix::Zero(d, d);
  for (int a = 0; a < size(); ++a) out += coeffs(a) * elements_[a];
  return out;
}

// ---------------------------------------------------------------------------

double invariant_f(const GroupElement& g) { return g.matrix().trace().real(); }

double pairing(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("pairing: shape mismatch");
  // Re tr(xy) without forming the product.
  return x.cwiseProduct(y.transpose()).sum().real();
}

double pairing(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.spec() == y.spec())) throw std::invalid_argument("pairing: group spec mismatch");
  return pairing(x.matrix(), y.matrix());
}

Matrix lie_bracket(const Matrix& x, const Matrix& y) { return x * y - y * x; }

AlgebraElement variation(const GroupElement& g) {
  const auto& spec = g.spec();
  if (spec.is_general_linear()) return AlgebraElement(spec, g.matrix());
  return AlgebraElement(spec, 0.5 * (g.matrix() - g.matrix().inverse()));
}

AlgebraElement variation_by_projection(const GroupElement& g) {
  const AlgebraBasis basis(g.spec());
  return AlgebraElement(g.spec(), basis.project(g.matrix()));
}

AlgebraElement variation_hat(const GroupElement& g, const EnvelopingWord& w) {
  const auto& spec = g.spec();
  const int d = spec.dim();
  Matrix forward = Matrix::Identity(d, d);
  Matrix backward = Matrix::Identity(d, d);
  for (const auto& x : w.factors) {
    if (!(x.spec() == spec)) throw std::invalid_argument("variation_hat: factor spec mismatch");
    forward = forward * x.matrix();
    backward = x.matrix() * backward;
  }
  if (spec.is_general_linear()) return AlgebraElement(spec, w.scalar * g.matrix() * forward);
  const std::size_t k = w.factors.size();
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  Matrix out = 0.5 * g.matrix() * forward + 0.5 * sign * backward * g.matrix().inverse();
  return AlgebraElement(spec, w.scalar * out);
}

double f_hat(const GroupElement& g, const EnvelopingWord& w) {
  const int d = g.spec().dim();
  Matrix prod = g.matrix();
  for (const auto& x : w.factors) {
    if (!(x.spec() == g.spec())) throw std::invalid_argument("f_hat: factor spec mismatch");
    prod = prod * x.matrix();
  }
  (void)d;
  return w.scalar * prod.trace().real();
}

Matrix expm(const Matrix& x) { return x.exp(); }

AlgebraElement random_algebra_element(const GroupSpec& spec, std::mt19937_64& rng,
                                      double scale) {
  const AlgebraBasis basis(spec);
  std::normal_distribution<double> normal(0.0, scale);
  RealVector c(basis.size());
  for (int a = 0; a < basis.size(); ++a) c(a) = normal(rng);
  return AlgebraElement(spec, basis.combine(c));
}

GroupElement random_element(const GroupSpec& spec, std::mt19937_64& rng, double scale) {
  const AlgebraElement x = random_algebra_element(spec, rng, scale);
  Matrix g = expm(x.matrix());
  if (spec.kind == GroupKind::O_pq || spec.kind == GroupKind::O_C) {
    std::bernoulli_distribution flip(0.5);
    Matrix signs = Matrix::Identity(spec.dim(), spec.dim());
    for (int i = 0; i < spec.dim(); ++i)
      if (flip(rng)) signs(i, i) = -1.0;
    g = g * signs;
  }
  return GroupElement(spec, g);
}

GroupElement random_element(const GroupSpec& spec, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return random_element(spec, rng, scale);
}

}  // namespace looplie::liealg
