#include "looplie/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace looplie::verify {

using goldman::BracketKind;
using goldman::LoopSum;
using io::Json;
using liealg::GroupSpec;
using surface::Representation;
using surface::Word;

surface::Word random_word(int genus, std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  std::uniform_int_distribution<int> gen(1, 2 * genus);
  std::bernoulli_distribution sign(0.5);
  const int len = len_dist(rng);
  Word w{{}, true};
  while (static_cast<int>(w.size()) < len) {
    const int x = gen(rng) * (sign(rng) ? 1 : -1);
    if (!w.empty() && w.letters.back() == -x) continue;
    if (static_cast<int>(w.size()) == len - 1 && w.size() > 0 && w.letters.front() == -x) continue;
    w.letters.push_back(x);
  }
  return w;
}

Representation sample_rep(const GroupSpec& spec, int genus, std::uint64_t seed, int attempts) {
  for (int k = 0; k < attempts; ++k) {
    try {
      return surface::sample_representation(spec, surface::Presentation(genus),
                                             k == 0 ? seed : derive_seed(seed, 1000 + k));
    } catch (const SamplingFailure&) {
    }
  }
  throw SamplingFailure("no representation after " + std::to_string(attempts) + " seeds");
}

namespace {

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

std::string spec_label(const GroupSpec& s) {
  std::string out = liealg::to_string(s.kind) + ":";
  switch (s.kind) {
    case liealg::GroupKind::O_pq:
    case liealg::GroupKind::U_pq:
    case liealg::GroupKind::Sp_pq:
      return out + std::to_string(s.p) + "," + std::to_string(s.q);
    default:
      return out + std::to_string(s.n);
  }
}

int trial_genus(const SuiteOptions& o, int index) { return o.genus > 0 ? o.genus : 1 + index % 2; }

TrialResult finish(int index, std::uint64_t seed, Json fields, double residual, bool pass) {
  TrialResult r;
  r.index = index;
  r.residual = residual;
  r.pass = pass;
  r.record = Json{{"trial", index}, {"seed", seed}};
  for (auto it = fields.begin(); it != fields.end(); ++it) r.record[it.key()] = it.value();
  r.record["residual"] = residual;
  r.record["pass"] = pass;
  return r;
}

const std::vector<GroupSpec>& gl_groups() {
  static const std::vector<GroupSpec> g{GroupSpec::gl_real(2), GroupSpec::gl_complex(2)};
  return g;
}

const std::vector<GroupSpec>& unoriented_groups() {
  static const std::vector<GroupSpec> g{GroupSpec::orthogonal(2, 0), GroupSpec::orthogonal(1, 1),
                                        GroupSpec::unitary(2, 0), GroupSpec::symplectic_real(2),
                                        GroupSpec::orthogonal_complex(2),
                                        GroupSpec::symplectic_quaternionic(1, 0)};
  return g;
}

// ---------------------------------------------------------------------------
// Bracket homomorphism: evaluate([γ, λ], ρ) against Σ ε ⟨F(H γ_p), F(H λ_p)⟩.

TrialResult homomorphism_trial(int index, std::uint64_t seed, const SuiteOptions& o,
                               BracketKind kind) {
  std::mt19937_64 rng(seed);
  const int genus = trial_genus(o, index);
  const auto& pool = kind == BracketKind::Oriented ? gl_groups() : unoriented_groups();
  const GroupSpec spec = o.group ? *o.group : pool[static_cast<std::size_t>(index / 2) % pool.size()];
  const Representation rho = sample_rep(spec, genus, derive_seed(seed, 1));
  const Word gamma = random_word(genus, rng, 1, 6);
  const Word lambda = random_word(genus, rng, 1, 6);
  const std::uint64_t bseed = derive_seed(seed, 2);
  const LoopSum b = goldman::bracket(gamma, lambda, kind, genus, bseed);
  const double lhs = goldman::evaluate(b, rho);
  const double rhs = goldman::poisson_direct(gamma, lambda, rho, bseed);
  const double r = rel(lhs, rhs);
  const double tol = o.tol.value_or(1e-8);
  return finish(index, seed,
                Json{{"genus", genus},
                     {"group", spec_label(spec)},
                     {"gamma", surface::format_word(gamma)},
                     {"lambda", surface::format_word(lambda)},
                     {"terms", b.size()},
                     {"bracket_value", lhs},
                     {"poisson_value", rhs},
                     {"relator_residual", surface::relator_residual(rho)}},
                r, r <= tol);
}

// ---------------------------------------------------------------------------
// Antisymmetry and Jacobi at evaluation level.

TrialResult jacobi_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  const int genus = trial_genus(o, index);
  const BracketKind kind = (index / 2) % 2 == 0 ? BracketKind::Oriented : BracketKind::Unoriented;
  const auto& pool = kind == BracketKind::Oriented ? gl_groups() : unoriented_groups();
  const GroupSpec spec = o.group ? *o.group : pool[static_cast<std::size_t>(index / 4) % pool.size()];
  const Representation rho = sample_rep(spec, genus, derive_seed(seed, 1));
  const Word x = random_word(genus, rng, 1, 4);
  const Word y = random_word(genus, rng, 1, 4);
  const Word z = random_word(genus, rng, 1, 4);
  auto br = [&](const LoopSum& a, const LoopSum& b, std::uint64_t s) {
    return goldman::bracket(a, b, kind, genus, derive_seed(seed, s));
  };
  const LoopSum X = LoopSum::single(x), Y = LoopSum::single(y), Z = LoopSum::single(z);

  const double xy = goldman::evaluate(br(X, Y, 10), rho);
  const double yx = goldman::evaluate(br(Y, X, 11), rho);
  const double anti = std::abs(xy + yx) / (1.0 + std::max(std::abs(xy), std::abs(yx)));

  const double t1 = goldman::evaluate(br(X, br(Y, Z, 20), 21), rho);
  const double t2 = goldman::evaluate(br(Y, br(Z, X, 22), 23), rho);
  const double t3 = goldman::evaluate(br(Z, br(X, Y, 24), 25), rho);
  const double scale = 1.0 + std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
  const double jac = std::abs(t1 + t2 + t3) / scale;

  const double r = std::max(anti, jac);
  const double tol = o.tol.value_or(1e-8);
  return finish(index, seed,
                Json{{"genus", genus},
                     {"bracket", kind == BracketKind::Oriented ? "oriented" : "unoriented"},
                     {"group", spec_label(spec)},
                     {"words", Json::array({surface::format_word(x), surface::format_word(y),
                                            surface::format_word(z)})},
                     {"antisymmetry", anti},
                     {"jacobi", jac},
                     {"jacobi_terms", Json::array({t1, t2, t3})}},
                r, r <= tol);
}

// ---------------------------------------------------------------------------
// Torus closed form [(p,q),(r,s)] = (ps − qr)(p + r, q + s).

TrialResult torus_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  int k = index % 2401;
  const int p = k % 7 - 3;
  k /= 7;
  const int q = k % 7 - 3;
  k /= 7;
  const int r = k % 7 - 3;
  k /= 7;
  const int s = k % 7 - 3;
  const LoopSum b = goldman::bracket_oriented(goldman::torus_word(p, q), goldman::torus_word(r, s),
                                              1, derive_seed(seed, 1));
  const Word target = goldman::torus_word(p + r, q + s);
  const int det = p * s - q * r;
  double worst = 0.0;
  const GroupSpec spec = o.group ? *o.group : GroupSpec::gl_real(2);
  for (int t = 0; t < 10; ++t) {
    const Representation rho = sample_rep(spec, 1, derive_seed(seed, 100 + t));
    const double lhs = goldman::evaluate(b, rho);
    const double rhs = det * surface::trace_function(rho, target);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  const double tol = o.tol.value_or(1e-8);
  return finish(index, seed,
                Json{{"pq", Json::array({p, q})}, {"rs", Json::array({r, s})}, {"det", det},
                     {"terms", b.size()}},
                worst, worst <= tol);
}

// ---------------------------------------------------------------------------
// Representative independence under homotopy moves and realization seeds.

TrialResult independence_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  const int genus = trial_genus(o, index);
  const BracketKind kind = (index / 2) % 2 == 0 ? BracketKind::Oriented : BracketKind::Unoriented;
  const auto& pool = kind == BracketKind::Oriented ? gl_groups() : unoriented_groups();
  const GroupSpec spec = o.group ? *o.group : pool[static_cast<std::size_t>(index / 4) % pool.size()];
  const surface::Presentation pres(genus);
  std::vector<Representation> reps;
  for (int k = 0; k < 3; ++k) reps.push_back(sample_rep(spec, genus, derive_seed(seed, 10 + k)));
  const Word gamma = random_word(genus, rng, 1, 4);
  const Word lambda = random_word(genus, rng, 1, 4);

  const LoopSum base = goldman::bracket(gamma, lambda, kind, genus, derive_seed(seed, 1));
  std::vector<double> ref;
  for (const auto& rho : reps) ref.push_back(goldman::evaluate(base, rho));

  double worst = 0.0;
  auto compare = [&](const LoopSum& b) {
    for (std::size_t k = 0; k < reps.size(); ++k)
      worst = std::max(worst, rel(goldman::evaluate(b, reps[k]), ref[k]));
  };
  for (int v = 0; v < 20; ++v) {
    const Word g2 = surface::homotopy_moves(gamma, pres, derive_seed(seed, 200 + v), 3);
    const Word l2 = surface::homotopy_moves(lambda, pres, derive_seed(seed, 300 + v), 3);
    compare(goldman::bracket(g2, l2, kind, genus, derive_seed(seed, 400 + v)));
  }
  for (int s = 0; s < 5; ++s)
    compare(goldman::bracket(gamma, lambda, kind, genus, derive_seed(seed, 500 + s)));

  const double tol = o.tol.value_or(1e-8);
  return finish(index, seed,
                Json{{"genus", genus},
                     {"bracket", kind == BracketKind::Oriented ? "oriented" : "unoriented"},
                     {"group", spec_label(spec)},
                     {"gamma", surface::format_word(gamma)},
                     {"lambda", surface::format_word(lambda)},
                     {"variants", 20},
                     {"realization_seeds", 5}},
                worst, worst <= tol);
}

// ---------------------------------------------------------------------------
// Variation functions against finite differences and the projection fallback.

GroupSpec variation_group(int index) {
  static const std::vector<std::pair<GroupSpec, GroupSpec>> kinds{
      {GroupSpec::gl_real(2), GroupSpec::gl_real(3)},
      {GroupSpec::gl_complex(2), GroupSpec::gl_complex(3)},
      {GroupSpec::orthogonal(3, 0), GroupSpec::orthogonal(2, 1)},
      {GroupSpec::orthogonal_complex(2), GroupSpec::orthogonal_complex(3)},
      {GroupSpec::unitary(2, 0), GroupSpec::unitary(1, 1)},
      {GroupSpec::symplectic_real(2), GroupSpec::symplectic_real(4)},
      {GroupSpec::symplectic_quaternionic(1, 0), GroupSpec::symplectic_quaternionic(1, 1)}};
  const auto& pair = kinds[static_cast<std::size_t>(index) % kinds.size()];
  return (index / 7) % 2 == 0 ? pair.first : pair.second;
}

TrialResult variation_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  const GroupSpec spec = o.group ? *o.group : variation_group(index);
  const auto g = liealg::random_element(spec, rng);
  const auto x1 = liealg::random_algebra_element(spec, rng, 0.5);
  const auto x2 = liealg::random_algebra_element(spec, rng, 0.5);
  const auto x3 = liealg::random_algebra_element(spec, rng, 0.5);
  const double h = tol::kFdStep;
  const Matrix& G = g.matrix();
  auto f = [](const Matrix& m) { return m.trace().real(); };
  auto e = [](const liealg::AlgebraElement& x, double t) { return liealg::expm(t * x.matrix()); };
  auto F = [&spec](const Matrix& m) { return goldman::variation_matrix(spec, m); };

  // ⟨F(g), x⟩ against d/dt f(g exp(tx)).
  const auto Fg = liealg::variation(g);
  const double fd = (f(G * e(x1, h)) - f(G * e(x1, -h))) / (2 * h);
  const double fd_res = std::abs(liealg::pairing(Fg, x1) - fd);

  const double proj = (Fg.matrix() - liealg::variation_by_projection(g).matrix()).norm();
  const double member = liealg::algebra_residual(Fg.matrix(), spec);

  // F̂ for k = 1, 2 against mixed differences of F.
  const Matrix hat1 = liealg::variation_hat(g, {{x1}, 1.0}).matrix();
  const Matrix fd1 = (F(G * e(x1, h)) - F(G * e(x1, -h))) / (2 * h);
  const Matrix hat2 = liealg::variation_hat(g, {{x1, x2}, 1.0}).matrix();
  const Matrix fd2 = (F(G * e(x1, h) * e(x2, h)) - F(G * e(x1, h) * e(x2, -h)) -
                      F(G * e(x1, -h) * e(x2, h)) + F(G * e(x1, -h) * e(x2, -h))) /
                     (4 * h * h);
  const double hat_res = std::max((hat1 - fd1).norm(), (hat2 - fd2).norm());

  // f̂ for words of length 1 and 2, plus ⟨F̂(g; w), x⟩ = f̂(g; w ⊗ x).
  const double fhat1 = liealg::f_hat(g, {{x1}, 1.0});
  const double fhat2 = liealg::f_hat(g, {{x1, x2}, 1.0});
  const double mixed = (f(G * e(x1, h) * e(x2, h)) - f(G * e(x1, h) * e(x2, -h)) -
                        f(G * e(x1, -h) * e(x2, h)) + f(G * e(x1, -h) * e(x2, -h))) /
                       (4 * h * h);
  const double fhat_res = std::max(std::abs(fhat1 - fd), std::abs(fhat2 - mixed));
  const double hat_pair = std::abs(liealg::pairing(hat2, x3.matrix()) -
                                   liealg::f_hat(g, {{x1, x2, x3}, 1.0}));

  // Equivariance under conjugation by a second group element.
  const auto k = liealg::random_element(spec, rng);
  const Matrix K = k.matrix();
  const Matrix Ki = K.inverse();
  const Matrix conj = liealg::variation(liealg::GroupElement(spec, Ki * G * K)).matrix();
  const double equiv = (conj - Ki * Fg.matrix() * K).norm() / (1.0 + Fg.matrix().norm());

  // Invariance of the pairing.
  const double inv = std::abs(liealg::pairing(liealg::lie_bracket(x1.matrix(), x2.matrix()), x3.matrix()) -
                              liealg::pairing(x1.matrix(), liealg::lie_bracket(x2.matrix(), x3.matrix())));

  // Identities used by the unoriented bracket.
  double trace_inv = 0.0;
  double product = 0.0;
  if (!spec.is_general_linear()) {
    trace_inv = std::abs(f(G) - f(G.inverse()));
    const Matrix B = liealg::random_element(spec, rng).matrix();
    product = std::abs(liealg::pairing(F(G), F(B)) - 0.5 * (f(G * B) - f(G * B.inverse())));
  }

  const double fd_tol = o.tol.value_or(tol::kFiniteDiff);
  const bool pass = fd_res <= fd_tol && proj <= 1e-9 && member <= tol::kGroup &&
                    hat_res <= 1e-4 && fhat_res <= 1e-4 && hat_pair <= 1e-10 &&
                    equiv <= tol::kNumeric && inv <= tol::kNumeric &&
                    trace_inv <= tol::kNumeric && product <= tol::kNumeric;
  return finish(index, seed,
                Json{{"group", spec_label(spec)},
                     {"fd", fd_res},
                     {"projection", proj},
                     {"membership", member},
                     {"hat_fd", hat_res},
                     {"fhat_fd", fhat_res},
                     {"hat_pairing", hat_pair},
                     {"equivariance", equiv},
                     {"pairing_invariance", inv},
                     {"trace_inverse", trace_inv},
                     {"product_identity", product}},
                fd_res, pass);
}

// ---------------------------------------------------------------------------
// Chen transport.

chen::MatrixPath random_path(std::mt19937_64& rng, int intervals, double target_R) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<Matrix, 3> c;
  for (auto& m : c) {
    m = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = normal(rng);
  }
  const chen::MatrixPath raw([c](double t) { return Matrix(c[0] + t * c[1] + t * t * c[2]); },
                             intervals);
  const double R = chen::picard_transport(raw, 0).R;
  return raw.scaled(target_R / R);
}

double max_term_ratio_excess(const chen::TransportSeries& s) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.n_max; ++k) {
    const double a = operator_norm(s.terms[static_cast<std::size_t>(k)]);
    const double b = operator_norm(s.terms[static_cast<std::size_t>(k) + 1]);
    if (a == 0.0) continue;
    worst = std::max(worst, b / a - s.R / (k + 1));
  }
  return worst;
}

TrialResult chen_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  const int n_max = 12;
  const int N = 2000;
  Json fields;
  chen::MatrixPath path = [&] {
    if (index == 0) {
      Matrix a = Matrix::Zero(2, 2);
      a(0, 1) = 1.0;
      fields["path"] = "constant nilpotent";
      return chen::MatrixPath([a](double) { return a; }, N);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    fields["path"] = "random quadratic";
    return random_path(rng, N, 2.0 * (1.0 - u(rng)));
  }();

  const auto series = chen::picard_transport(path, n_max);
  const Matrix rk = chen::rk4_transport(path);
  const double err = operator_norm(series.sum() - rk);
  const double bound = series.remainder + o.tol.value_or(1e-7);
  const double ratio = max_term_ratio_excess(series);
  const double fixed = chen::fixed_point_defect(path, n_max);

  // Plain concatenation: T^n(γ₁∘γ₂) = Σ T^j(γ₂) T^i(γ₁).
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p1 = random_path(rng, 400, 2.0 * (1.0 - u(rng)));
  const auto p2 = random_path(rng, 400, 2.0 * (1.0 - u(rng)));
  const auto s1 = chen::picard_transport(p1, 4);
  const auto s2 = chen::picard_transport(p2, 4);
  const auto s12 = chen::picard_transport(p1.concat(p2), 4);
  double mult = 0.0;
  for (int n = 0; n <= 4; ++n) {
    Matrix sum = Matrix::Zero(2, 2);
    for (int i = 0; i <= n; ++i)
      sum += s2.terms[static_cast<std::size_t>(n - i)] * s1.terms[static_cast<std::size_t>(i)];
    mult = std::max(mult, operator_norm(s12.terms[static_cast<std::size_t>(n)] - sum));
  }

  // Perturbed series of a word product: S^n(uv) = Σ Ad_{hol u}(S^j(v)) S^i(u).
  const int genus = 1 + index % 2;
  const Representation rho = sample_rep(GroupSpec::gl_real(2), genus, derive_seed(seed, 1));
  chen::Perturbation theta;
  for (int k = 1; k <= 2 * genus; ++k)
    theta[k] = liealg::random_algebra_element(rho.spec, rng, 0.3).matrix();
  const Word wu = random_word(genus, rng, 1, 3);
  const Word wv = random_word(genus, rng, 1, 3);
  const Word wuv = surface::concat(wu, wv);
  const auto su = chen::picard_transport(chen::transported_perturbation(rho, wu, theta, 200), 4);
  const auto sv = chen::picard_transport(chen::transported_perturbation(rho, wv, theta, 200), 4);
  const auto suv = chen::picard_transport(chen::transported_perturbation(rho, wuv, theta, 200), 4);
  const Matrix hu = surface::holonomy_matrix(rho, wu);
  const Matrix hui = hu.inverse();
  double mult_ad = 0.0;
  for (int n = 0; n <= 4; ++n) {
    Matrix sum = Matrix::Zero(2, 2);
    for (int i = 0; i <= n; ++i)
      sum += hui * sv.terms[static_cast<std::size_t>(n - i)] * hu * su.terms[static_cast<std::size_t>(i)];
    mult_ad = std::max(mult_ad, operator_norm(suv.terms[static_cast<std::size_t>(n)] - sum) /
                                    (1.0 + operator_norm(sum)));
  }

  const bool pass = err <= bound && ratio <= 1e-6 && mult <= 1e-7 && mult_ad <= 1e-7 &&
                    fixed <= series.remainder + 1e-12;
  fields["R"] = series.R;
  fields["error"] = err;
  fields["remainder"] = series.remainder;
  fields["quadrature_estimate"] = series.quadrature_error;
  fields["ratio_excess"] = ratio;
  fields["fixed_point_defect"] = fixed;
  fields["multiplicativity"] = mult;
  fields["multiplicativity_ad"] = mult_ad;
  fields["error_ok"] = err <= bound;
  fields["ratio_ok"] = ratio <= 1e-6;
  return finish(index, seed, fields, err, pass);
}

// ---------------------------------------------------------------------------
// Perturbed holonomy against direct RK4.

TrialResult holonomy_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  static const std::vector<GroupSpec> pool{GroupSpec::gl_real(2), GroupSpec::unitary(2, 0),
                                           GroupSpec::symplectic_real(2),
                                           GroupSpec::gl_complex(2)};
  const int genus = trial_genus(o, index);
  const GroupSpec spec = o.group ? *o.group : pool[static_cast<std::size_t>(index / 2) % pool.size()];
  const Representation rho = sample_rep(spec, genus, derive_seed(seed, 1));
  const Word w = random_word(genus, rng, 1, 4);
  chen::Perturbation theta;
  for (int k = 1; k <= 2 * genus; ++k)
    theta[k] = liealg::random_algebra_element(spec, rng, 0.1).matrix();

  const auto ph = chen::perturbed_holonomy(rho, w, theta, 12, 2000);
  const Matrix direct = chen::perturbed_holonomy_rk4(rho, w, theta, 2000);
  const double err = operator_norm(ph.value - direct);

  chen::Perturbation zero;
  for (int k = 1; k <= 2 * genus; ++k) zero[k] = Matrix::Zero(spec.dim(), spec.dim());
  const auto flat = chen::perturbed_holonomy(rho, w, zero, 12, 50);
  const bool exact = flat.value == surface::holonomy_matrix(rho, w);

  const double tol = o.tol.value_or(1e-6);
  return finish(index, seed,
                Json{{"genus", genus},
                     {"group", spec_label(spec)},
                     {"word", surface::format_word(w)},
                     {"R", ph.series.R},
                     {"remainder", ph.series.remainder},
                     {"wilson_trace", ph.value.trace().real()},
                     {"flat_exact", exact}},
                err, err <= tol && exact);
}

// ---------------------------------------------------------------------------
// Cyclic DGLA battery.

GroupSpec dgla_group(int index) {
  static const std::vector<GroupSpec> pool{GroupSpec::gl_real(1), GroupSpec::gl_real(2),
                                           GroupSpec::orthogonal(3, 0), GroupSpec::unitary(2, 0),
                                           GroupSpec::symplectic_real(2)};
  return pool[static_cast<std::size_t>(index / 2) % pool.size()];
}

RealVector gaussian(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

TrialResult dgla_trial(int index, std::uint64_t seed, const SuiteOptions& o) {
  std::mt19937_64 rng(seed);
  const int genus = trial_genus(o, index);
  const GroupSpec spec = o.group ? *o.group : dgla_group(index);
  const auto L = dgla::surface_toy_instance(genus, spec);
  const auto report = dgla::axioms_residual(L);

  // Twisted differential [μ, ·] with μ = α₁ ⊗ y, and a corrupted copy.
  RealVector mu = RealVector::Zero(L.dim());
  const int m = L.d0() / 2;
  mu.segment(L.d0(), m) = gaussian(rng, m, 1.0);
  const auto T = dgla::twisted_instance(L, mu);
  const auto twisted = dgla::axioms_residual(T);
  double corrupted_leibniz = 0.0;
  if (T.differential().cwiseAbs().maxCoeff() > 0.0) {
    auto bad = T;
    bad.c(0, L.d0(), L.d0()) += 0.5;
    bad.rebuild();
    corrupted_leibniz = dgla::axioms_residual(bad).leibniz;
  }

  const RealVector x = L.odd(gaussian(rng, L.d1(), 1.0));
  const RealVector v = L.odd(gaussian(rng, L.d1(), 1.0));
  const RealVector a = L.even(gaussian(rng, L.d0(), 1.0));
  const RealVector b = L.even(gaussian(rng, L.d0(), 1.0));

  // d/dt moment(x + tv, a) = ω(ξ_a(x), v), checked on both instances.
  double moment_fd = 0.0;
  for (const auto* inst : {&L, &T}) {
    const double h = tol::kFdStep;
    const double fd = (dgla::moment(*inst, x + h * v, a) - dgla::moment(*inst, x - h * v, a)) / (2 * h);
    moment_fd = std::max(moment_fd, std::abs(fd - inst->omega(dgla::gauge_field(*inst, a, x), v)));
  }

  // ξ_{[a,b]} = [ξ_a, ξ_b] with [X, Y] = DX·Y − DY·X.
  double hom = 0.0;
  for (const auto* inst : {&L, &T}) {
    const RealVector lhs = dgla::gauge_field(*inst, inst->bracket(a, b), x);
    const RealVector rhs = inst->ad(a) * dgla::gauge_field(*inst, b, x) -
                           inst->ad(b) * dgla::gauge_field(*inst, a, x);
    hom = std::max(hom, (lhs - rhs).cwiseAbs().maxCoeff());
  }

  // L_ξ ω = 0: ω([a,u], v) + ω(u, [a,v]) = 0 on L₁.
  const RealVector u = L.odd(gaussian(rng, L.d1(), 1.0));
  const double invariance = std::abs(L.omega(L.bracket(a, u), v) + L.omega(u, L.bracket(a, v)));

  // ω on L₁ antisymmetric.
  const RealMatrix w1 = L.pairing().bottomRightCorner(L.d1(), L.d1());
  const double antisym = (w1 + w1.transpose()).cwiseAbs().maxCoeff();

  // Tangency of ξ_a at a Newton-found MC point.
  const auto mc = dgla::find_mc_point(L, derive_seed(seed, 7));
  double tangency = std::numeric_limits<double>::infinity();
  if (mc.converged) {
    const RealVector xi = dgla::gauge_field(L, a, mc.x);
    tangency = (dgla::mc_linearization(L, mc.x) * xi).cwiseAbs().maxCoeff();
  }

  const double tol = o.tol.value_or(1e-12);
  const bool pass = report.passes(tol) && twisted.passes(tol) &&
                    (T.differential().cwiseAbs().maxCoeff() == 0.0 || corrupted_leibniz > 1e-6) &&
                    moment_fd <= tol::kFiniteDiff && hom <= 1e-10 && invariance <= 1e-10 &&
                    antisym <= tol && report.sigma_min_odd > tol && tangency <= 1e-8;
  Json axioms = Json::object();
  for (const auto& [name, val] : report.entries()) axioms[name] = val;
  Json twisted_axioms = Json::object();
  for (const auto& [name, val] : twisted.entries()) twisted_axioms[name] = val;
  double worst = 0.0;
  for (const auto& [name, val] : report.entries())
    if (name.rfind("sigma", 0) != 0) worst = std::max(worst, val);
  return finish(index, seed,
                Json{{"genus", genus},
                     {"group", spec_label(spec)},
                     {"d0", L.d0()},
                     {"d1", L.d1()},
                     {"axioms", axioms},
                     {"twisted_axioms", twisted_axioms},
                     {"corrupted_leibniz", corrupted_leibniz},
                     {"moment_fd", moment_fd},
                     {"homomorphism", hom},
                     {"omega_invariance", invariance},
                     {"mc_converged", mc.converged},
                     {"mc_iterations", mc.iterations},
                     {"mc_residual", mc.residual},
                     {"tangency", mc.converged ? Json(tangency) : Json(nullptr)}},
                worst, pass);
}

using TrialFn = std::function<TrialResult(int, std::uint64_t, const SuiteOptions&)>;

struct SuiteDef {
  TrialFn fn;
  int trials;
};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> r{
      {"goldman-gl",
       {[](int i, std::uint64_t s, const SuiteOptions& o) {
          return homomorphism_trial(i, s, o, BracketKind::Oriented);
        },
        60}},
      {"goldman-unoriented",
       {[](int i, std::uint64_t s, const SuiteOptions& o) {
          return homomorphism_trial(i, s, o, BracketKind::Unoriented);
        },
        60}},
      {"jacobi", {jacobi_trial, 30}},
      {"chen", {chen_trial, 21}},
      {"dgla", {dgla_trial, 10}},
      {"variation", {variation_trial, 1400}},
      {"torus", {torus_trial, 2401}},
      {"independence", {independence_trial, 12}},
      {"holonomy", {holonomy_trial, 20}},
  };
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, def] : registry()) out.push_back(name);
  return out;
}

bool has_suite(const std::string& name) { return registry().count(name) > 0; }

int default_trials(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  return it->second.trials;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  const SuiteDef& def = it->second;
  const int n = options.trials > 0 ? options.trials : def.trials;

  SuiteReport report;
  report.suite = name;
  report.trials.resize(static_cast<std::size_t>(n));
  auto run_one = [&](int i) {
    const std::uint64_t s = derive_seed(options.seed, static_cast<std::uint64_t>(i));
    try {
      report.trials[static_cast<std::size_t>(i)] = def.fn(i, s, options);
    } catch (const std::exception& e) {
      report.trials[static_cast<std::size_t>(i)] =
          finish(i, s, Json{{"error", e.what()}}, std::numeric_limits<double>::infinity(), false);
    }
  };
  const int workers = std::max(1, std::min(options.parallel, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) run_one(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& t : report.trials) {
    Json rec{{"suite", name}};
    rec.update(t.record);
    t.record = std::move(rec);
    report.pass = report.pass && t.pass;
    report.max_residual = std::max(report.max_residual, t.residual);
  }
  return report;
}

std::string SuiteReport::jsonl() const {
  std::ostringstream os;
  for (const auto& t : trials) os << io::rounded(t.record).dump() << '\n';
  Json summary{{"suite", suite},
               {"summary", true},
               {"trials", trials.size()},
               {"max_residual", max_residual},
               {"pass", pass}};
  os << io::rounded(summary).dump() << '\n';
  return os.str();
}

}  // namespace looplie::verify
