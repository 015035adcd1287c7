#include "looplie/dgla.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace looplie::dgla {

CyclicDgla::CyclicDgla(int d0, int d1, RealMatrix differential, std::vector<double> structure,
                       RealMatrix pairing)
    : d0_(d0),
      d1_(d1),
      d_(std::move(differential)),
      structure_(std::move(structure)),
      omega_(std::move(pairing)) {
  const int n = d0 + d1;
  if (d0 < 0 || d1 < 0 || n == 0) throw std::invalid_argument("bad DGLA dimensions");
  if (d_.rows() != n || d_.cols() != n) throw std::invalid_argument("differential shape");
  if (omega_.rows() != n || omega_.cols() != n) throw std::invalid_argument("pairing shape");
  if (structure_.size() != static_cast<std::size_t>(n) * n * n)
    throw std::invalid_argument("structure tensor shape");
  for (double v : structure_)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite structure constant");
  if (!d_.allFinite() || !omega_.allFinite()) throw std::invalid_argument("non-finite entries");
  rebuild();
}

void CyclicDgla::rebuild() {
  const int n = dim();
  ad_.assign(static_cast<std::size_t>(n), RealMatrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ad_[static_cast<std::size_t>(i)](k, j) = c(i, j, k);
}

RealMatrix CyclicDgla::ad(const RealVector& x) const {
  const int n = dim();
  RealMatrix out = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (x(i) != 0.0) out += x(i) * ad_[static_cast<std::size_t>(i)];
  return out;
}

RealVector CyclicDgla::bracket(const RealVector& x, const RealVector& y) const {
  return ad(x) * y;
}

RealVector CyclicDgla::even(const RealVector& a) const {
  RealVector v = RealVector::Zero(dim());
  v.head(d0_) = a;
  return v;
}

RealVector CyclicDgla::odd(const RealVector& x) const {
  RealVector v = RealVector::Zero(dim());
  v.tail(d1_) = x;
  return v;
}

// ---------------------------------------------------------------------------

bool AxiomReport::passes(double tol) const {
  return parity <= tol && leibniz <= tol && cyclicity <= tol && d_compatibility <= tol &&
         symmetry <= tol && sigma_min_even > tol && sigma_min_odd > tol &&
         mixed_pairing <= tol && d_squared <= tol && jacobi <= tol && antisymmetry <= tol &&
         bracket_parity <= tol;
}

std::vector<std::pair<std::string, double>> AxiomReport::entries() const {
  return {{"parity", parity},
          {"leibniz", leibniz},
          {"cyclicity", cyclicity},
          {"d_compatibility", d_compatibility},
          {"symmetry", symmetry},
          {"sigma_min_even", sigma_min_even},
          {"sigma_min_odd", sigma_min_odd},
          {"mixed_pairing", mixed_pairing},
          {"d_squared", d_squared},
          {"jacobi", jacobi},
          {"antisymmetry", antisymmetry},
          {"bracket_parity", bracket_parity}};
}

namespace {

double sigma_min(const RealMatrix& m) {
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues().minCoeff();
}

double sgn(int p) { return p % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

AxiomReport axioms_residual(const CyclicDgla& L) {
  AxiomReport r;
  const int n = L.dim();
  const RealMatrix& d = L.differential();
  const RealMatrix& w = L.pairing();
  auto e = [n](int i) {
    RealVector v = RealVector::Zero(n);
    v(i) = 1.0;
    return v;
  };

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (L.parity(i) == L.parity(k)) r.parity = std::max(r.parity, std::abs(d(k, i)));
  r.d_squared = (d * d).cwiseAbs().maxCoeff();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int pi = L.parity(i);
      const int pj = L.parity(j);
      const RealVector bij = L.ad_basis(i).col(j);
      // [L_p, L_q] ⊂ L_{p+q}
      for (int k = 0; k < n; ++k)
        if (L.parity(k) != (pi + pj) % 2) r.bracket_parity = std::max(r.bracket_parity, std::abs(bij(k)));
      // [y, x] = −(−1)^{|x||y|} [x, y]
      const RealVector bji = L.ad_basis(j).col(i);
      r.antisymmetry = std::max(r.antisymmetry, (bji + sgn(pi * pj) * bij).cwiseAbs().maxCoeff());
      // d[x, y] = [dx, y] + (−1)^{|x|} [x, dy]
      const RealVector lhs = d * bij;
      const RealVector rhs = L.bracket(d.col(i), e(j)) + sgn(pi) * L.ad_basis(i) * d.col(j);
      r.leibniz = std::max(r.leibniz, (lhs - rhs).cwiseAbs().maxCoeff());
      // ω(dx, y) + (−1)^{|x|} ω(x, dy) = 0
      r.d_compatibility = std::max(
          r.d_compatibility, std::abs(d.col(i).dot(w.col(j)) + sgn(pi) * w.row(i).dot(d.col(j))));
      // ω(y, x) = (−1)^{|x||y|} ω(x, y)
      r.symmetry = std::max(r.symmetry, std::abs(w(j, i) - sgn(pi * pj) * w(i, j)));
      if (pi != pj) r.mixed_pairing = std::max(r.mixed_pairing, std::abs(w(i, j)));
    }

  // ω([x, y], z) = ω(x, [y, z]) and graded Jacobi over basis triples.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const RealVector bij = L.ad_basis(i).col(j);
      const RealVector lhs_row = bij.transpose() * w;  // z ↦ ω([e_i, e_j], z)
      const RealVector rhs_row = w.row(i) * L.ad_basis(j);  // z ↦ ω(e_i, [e_j, z])
      r.cyclicity = std::max(r.cyclicity, (lhs_row - rhs_row).cwiseAbs().maxCoeff());

      // [x, [y, z]] = [[x, y], z] + (−1)^{|x||y|} [y, [x, z]] as maps of z.
      const RealMatrix jac = L.ad_basis(i) * L.ad_basis(j) - L.ad(bij) -
                             sgn(L.parity(i) * L.parity(j)) * L.ad_basis(j) * L.ad_basis(i);
      r.jacobi = std::max(r.jacobi, jac.cwiseAbs().maxCoeff());
    }

  r.sigma_min_even = sigma_min(w.topLeftCorner(L.d0(), L.d0()));
  r.sigma_min_odd = sigma_min(w.bottomRightCorner(L.d1(), L.d1()));
  return r;
}

RealVector mc_residual(const CyclicDgla& L, const RealVector& x) {
  return L.d(x) + 0.5 * L.bracket(x, x);
}

RealMatrix mc_linearization(const CyclicDgla& L, const RealVector& x) {
  // For odd x, [u, x] = [x, u], so the derivative of ½[x, x] is [x, ·].
  return L.differential() + L.ad(x);
}

RealVector gauge_field(const CyclicDgla& L, const RealVector& a, const RealVector& x) {
  return L.bracket(a, x) - L.d(a);
}

double moment(const CyclicDgla& L, const RealVector& x, const RealVector& a) {
  return L.omega(mc_residual(L, x), a);
}

NewtonResult find_mc_point(const CyclicDgla& L, std::uint64_t seed, double scale, int max_iter,
                           double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  RealVector x1(L.d1());
  for (int i = 0; i < L.d1(); ++i) x1(i) = normal(rng);

  NewtonResult out;
  out.x = L.odd(x1);
  out.residual = mc_residual(L, out.x).norm();
  for (int it = 0; it < max_iter && out.residual > tol; ++it) {
    const RealMatrix jac = mc_linearization(L, out.x).rightCols(L.d1());
    const RealVector r = mc_residual(L, out.x);
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(jac);
    cod.setThreshold(1e-12);
    const RealVector step = -cod.solve(r);
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      const RealVector cand = out.x + L.odd(lambda * step);
      const double res = mc_residual(L, cand).norm();
      if (res < out.residual) {
        out.x = cand;
        out.residual = res;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    out.iterations = it + 1;
    if (!improved) break;
  }
  out.converged = out.residual <= tol;
  return out;
}

// ---------------------------------------------------------------------------

CyclicDgla surface_toy_instance(int genus, const liealg::GroupSpec& spec) {
  if (genus < 1) throw std::invalid_argument("genus must be at least 1");
  const liealg::AlgebraBasis basis(spec);
  const int m = basis.size();
  // Cohomology basis: 1, vol (even); α_1, β_1, …, α_g, β_g (odd).
  const int h_even = 2;
  const int h_odd = 2 * genus;
  const int h = h_even + h_odd;
  // cup[a][b] = (coefficient, index) of a ∪ b, index −1 when zero.
  std::vector<std::vector<std::pair<double, int>>> cup(
      static_cast<std::size_t>(h), std::vector<std::pair<double, int>>(static_cast<std::size_t>(h), {0.0, -1}));
  auto set = [&cup](int a, int b, double c, int idx) {
    cup[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {c, idx};
  };
  for (int a = 0; a < h; ++a) {
    set(0, a, 1.0, a);
    set(a, 0, 1.0, a);
  }
  for (int i = 0; i < genus; ++i) {
    const int alpha = 2 + 2 * i;
    const int beta = alpha + 1;
    set(alpha, beta, 1.0, 1);
    set(beta, alpha, -1.0, 1);
  }
  // ∫ of each class: only vol integrates to 1.
  auto integral = [](int idx) { return idx == 1 ? 1.0 : 0.0; };

  // 𝔤 structure constants and pairing in the basis.
  std::vector<RealVector> lie(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      lie[static_cast<std::size_t>(x) * m + y] =
          basis.coordinates(liealg::lie_bracket(basis[x], basis[y]));
  const RealMatrix& gram = basis.gram();

  // Full basis index: cohomology class a, algebra index x ↦ a·m + x. Classes are
  // already ordered even first.
  const int n = h * m;
  std::vector<double> structure(static_cast<std::size_t>(n) * n * n, 0.0);
  RealMatrix omega = RealMatrix::Zero(n, n);
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) {
      const auto [coef, idx] = cup[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (idx < 0) continue;
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
          const int i = a * m + x;
          const int j = b * m + y;
          const RealVector& v = lie[static_cast<std::size_t>(x) * m + y];
          for (int z = 0; z < m; ++z)
            structure[(static_cast<std::size_t>(i) * n + j) * n + idx * m + z] = coef * v(z);
          omega(i, j) = coef * integral(idx) * gram(x, y);
        }
    }
  return CyclicDgla(h_even * m, h_odd * m, RealMatrix::Zero(n, n), std::move(structure), omega);
}

CyclicDgla twisted_instance(const CyclicDgla& L, const RealVector& mu) {
  return CyclicDgla(L.d0(), L.d1(), L.differential() + L.ad(mu), L.structure(), L.pairing());
}

CyclicDgla abelian_instance(int d0, int d1) {
  if (d1 % 2 != 0) throw std::invalid_argument("odd part must be even-dimensional");
  const int n = d0 + d1;
  RealMatrix omega = RealMatrix::Zero(n, n);
  omega.topLeftCorner(d0, d0) = RealMatrix::Identity(d0, d0);
  for (int k = 0; k < d1 / 2; ++k) {
    omega(d0 + 2 * k, d0 + 2 * k + 1) = 1.0;
    omega(d0 + 2 * k + 1, d0 + 2 * k) = -1.0;
  }
  return CyclicDgla(d0, d1, RealMatrix::Zero(n, n),
                    std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0), omega);
}

}  // namespace looplie::dgla
