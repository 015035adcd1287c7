#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "looplie/chen.hpp"
#include "looplie/verify.hpp"

using namespace looplie;
using namespace looplie::chen;
using liealg::GroupSpec;

namespace {

Matrix nilpotent() {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  return a;
}

Matrix diag2(Complex x, Complex y) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

double tail(double R, int n) {
  double partial = 0.0, term = 1.0;
  for (int k = 0; k <= n; ++k) {
    partial += term;
    term *= R / (k + 1);
  }
  return std::exp(R) - partial;
}

}  // namespace

TEST_CASE("constant nilpotent path is exact up to summation rounding") {
  const MatrixPath p([](double) { return nilpotent(); }, 2000);
  const auto s = picard_transport(p, 12);
  Matrix expect = Matrix::Identity(2, 2) + nilpotent();
  // 2000 trapezoid increments accumulate a few ulps.
  CHECK((s.sum() - expect).norm() < 1e-12);
  CHECK((s.terms[1] - nilpotent()).norm() < 1e-12);
  for (int k = 2; k <= 12; ++k) CHECK(s.terms[static_cast<std::size_t>(k)].norm() == 0.0);
  CHECK((rk4_transport(p) - expect).norm() < 1e-12);
  CHECK(s.R == doctest::Approx(1.0));
}

TEST_CASE("remainder bound is the exponential tail") {
  for (double R : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    for (int n : {0, 3, 8, 12}) {
      CHECK(remainder_bound(R, n) == doctest::Approx(tail(R, n)).epsilon(1e-6));
    }
  }
  CHECK(remainder_bound(0.0, 5) == 0.0);
}

TEST_CASE("diagonal time-dependent path against the closed-form exponential") {
  const MatrixPath p([](double t) { return diag2(t, 2 * t * t); }, 2000);
  const Matrix expect = diag2(std::exp(0.5), std::exp(2.0 / 3));
  const auto s = picard_transport(p, 12);
  CHECK(operator_norm(s.sum() - expect) < s.remainder + 1e-6);
  CHECK(operator_norm(rk4_transport(p) - expect) < 1e-12);
  // ‖A(t)‖ = max(t, 2t²), switching at t = ½.
  CHECK(s.R == doctest::Approx(0.125 + (2.0 / 3) * (1 - 0.125)).epsilon(1e-6));
}

TEST_CASE("commuting path: terms are (∫A)^k / k!") {
  Matrix M(2, 2);
  M << 0.3, -0.7, 0.2, 0.1;
  const MatrixPath p([M](double t) { return Matrix(std::cos(3 * t) * M); }, 4000);
  const double I = std::sin(3.0) / 3.0;
  const auto s = picard_transport(p, 6);
  Matrix power = Matrix::Identity(2, 2);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    CHECK(operator_norm(s.terms[static_cast<std::size_t>(k)] - power / fact) < 1e-6);
    power = power * (I * M);
    fact *= k + 1;
  }
}

TEST_CASE("backward convention solves the negated system") {
  const MatrixPath p([](double t) { return diag2(1.0 + t, Complex(0, t)); }, 2000);
  const Matrix expect = diag2(std::exp(-1.5), std::exp(Complex(0, -0.5)));
  CHECK(operator_norm(rk4_transport(p, Convention::Backward) - expect) < 1e-12);
  const auto s = picard_transport(p, 14, Convention::Backward);
  CHECK(operator_norm(s.sum() - expect) < s.remainder + 1e-6);
}

TEST_CASE("term norms obey the factorial bound") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 10; ++t) {
    Matrix c0(3, 3), c1(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        c0(i, j) = n01(rng);
        c1(i, j) = n01(rng);
      }
    const MatrixPath p([=](double s) { return Matrix(0.4 * (c0 + s * c1)); }, 1000);
    const auto ser = picard_transport(p, 10);
    double fact = 1.0;
    for (int k = 0; k <= 10; ++k) {
      if (k > 0) fact *= k;
      CHECK(operator_norm(ser.terms[static_cast<std::size_t>(k)]) <= std::pow(ser.R, k) / fact * (1 + 1e-6) + 1e-12);
    }
  }
}

TEST_CASE("concatenation multiplies later transport on the left") {
  Matrix a(2, 2), b(2, 2);
  a << 0.1, 0.5, -0.3, 0.2;
  b << -0.4, 0.1, 0.6, 0.0;
  const MatrixPath p1([a](double t) { return Matrix(a * (1 + t)); }, 200);
  const MatrixPath p2([b](double t) { return Matrix(b * std::sin(2 * t)); }, 200);
  const auto s1 = picard_transport(p1, 5), s2 = picard_transport(p2, 5);
  const auto s12 = picard_transport(p1.concat(p2), 5);
  for (int n = 0; n <= 5; ++n) {
    Matrix sum = Matrix::Zero(2, 2);
    for (int i = 0; i <= n; ++i)
      sum += s2.terms[static_cast<std::size_t>(n - i)] * s1.terms[static_cast<std::size_t>(i)];
    CHECK(operator_norm(s12.terms[static_cast<std::size_t>(n)] - sum) < 1e-13);
  }
  CHECK(operator_norm(rk4_transport(p1.concat(p2)) - rk4_transport(p2) * rk4_transport(p1)) < 1e-13);
}

TEST_CASE("piecewise constant path is a product of exponentials") {
  Matrix a(2, 2), b(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  b << 0.5, 0.0, 0.0, -0.5;
  const auto p = MatrixPath::piecewise_constant({a, b}, 1000);
  const Matrix expect = liealg::expm(0.5 * b) * liealg::expm(0.5 * a);
  CHECK(operator_norm(rk4_transport(p) - expect) < 1e-12);
  const auto s = picard_transport(p, 12);
  CHECK(operator_norm(s.sum() - expect) < s.remainder + 1e-6);
}

TEST_CASE("quadrature error decays at second order") {
  Matrix c0(2, 2), c1(2, 2), c2(2, 2);
  c0 << 0.3, -1.1, 0.8, 0.2;
  c1 << -0.9, 0.4, 0.5, 1.2;
  c2 << 0.7, 0.6, -1.3, -0.4;
  auto a = [=](double t) { return Matrix(c0 + t * c1 + t * t * c2); };
  const Matrix ref = rk4_transport(MatrixPath(a, 4000));
  double prev = 0.0;
  for (int n : {250, 500, 1000, 2000}) {
    const auto s = picard_transport(MatrixPath(a, n), 20);
    const double err = operator_norm(s.sum() - ref);
    CHECK(std::abs(err - s.quadrature_error) < 0.05 * err);
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
    prev = err;
  }
}

TEST_CASE("quadrature estimate is NaN on odd interval counts") {
  const MatrixPath odd([](double t) { return diag2(t, 1.0); }, 7);
  CHECK(std::isnan(picard_transport(odd, 3).quadrature_error));
  const MatrixPath even([](double t) { return diag2(t, 1.0); }, 8);
  CHECK(std::isfinite(picard_transport(even, 3).quadrature_error));
}

TEST_CASE("fixed point defect shrinks with the order") {
  Matrix a(2, 2);
  a << 0.2, 0.9, -0.4, 0.1;
  const MatrixPath p([a](double t) { return Matrix(a * (1 + t)); }, 500);
  const double d4 = fixed_point_defect(p, 4);
  const double d10 = fixed_point_defect(p, 10);
  CHECK(d10 < d4);
  CHECK(d10 <= picard_transport(p, 10).remainder + 1e-12);
}

TEST_CASE("perturbed holonomy: zero perturbation is the flat holonomy") {
  const auto rho = verify::sample_rep(GroupSpec::gl_real(2), 2, 3);
  const surface::Word w{{1, 3, -2, 4}, true};
  Perturbation zero;
  for (int k = 1; k <= 4; ++k) zero[k] = Matrix::Zero(2, 2);
  const auto ph = perturbed_holonomy(rho, w, zero, 12, 100);
  CHECK(ph.value == surface::holonomy_matrix(rho, w));
}

TEST_CASE("perturbed holonomy of a single letter is ρ·exp(θ)-like") {
  // For one letter with constant θ, B is constant and the transport is exp(θ).
  const auto rho = verify::sample_rep(GroupSpec::gl_real(2), 1, 1);
  Matrix th(2, 2);
  th << 0.05, -0.02, 0.03, 0.01;
  Perturbation theta{{1, th}, {2, Matrix::Zero(2, 2)}};
  const surface::Word w{{1}, true};
  const auto ph = perturbed_holonomy(rho, w, theta, 12, 500);
  const Matrix expect = rho.image(1) * liealg::expm(th);
  CHECK(operator_norm(ph.value - expect) < 1e-10);
  CHECK(operator_norm(perturbed_holonomy_rk4(rho, w, theta, 500) - expect) < 1e-10);
}

TEST_CASE("perturbed holonomy matches direct integration") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 6; ++t) {
    const int genus = 1 + t % 2;
    const auto spec = t % 3 == 0 ? GroupSpec::unitary(2, 0) : GroupSpec::gl_real(2);
    const auto rho = verify::sample_rep(spec, genus, t);
    Perturbation theta;
    for (int k = 1; k <= 2 * genus; ++k) theta[k] = liealg::random_algebra_element(spec, rng, 0.1).matrix();
    const auto w = verify::random_word(genus, rng, 1, 4);
    const auto ph = perturbed_holonomy(rho, w, theta, 12, 1000);
    CHECK(operator_norm(ph.value - perturbed_holonomy_rk4(rho, w, theta, 1000)) < 1e-6);
    CHECK(ph.series.remainder < 1e-9);
  }
}

TEST_CASE("worked examples") {
  Matrix X = Matrix::Zero(2, 2), Y = Matrix::Zero(2, 2);
  X(0, 1) = 1.0;
  Y(1, 0) = 1.0;
  Matrix unipotent(2, 2);
  unipotent << 1, 1, 0, 1;

  const MatrixPath linear([](double t) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 2 * t;
    return a;
  }, 2000);
  CHECK(operator_norm(picard_transport(linear, 12).sum() - unipotent) < 1e-12);

  const MatrixPath jump({Segment{0.0, 0.5, [X](double) { return X; }, 1000},
                         Segment{0.5, 1.0, [Y](double) { return Y; }, 1000}});
  Matrix expect(2, 2);
  expect << 1, 0.5, 0.5, 1.25;
  const auto s = picard_transport(jump, 12);
  CHECK(operator_norm(s.sum() - expect) < s.remainder + 1e-12);
  CHECK(operator_norm(rk4_transport(jump) - expect) < 1e-12);

  CHECK((rk4_transport(MatrixPath([](double) { return Matrix(Matrix::Zero(2, 2)); }, 10)) -
         Matrix::Identity(2, 2)).norm() == 0.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  const Matrix ed = rk4_transport(MatrixPath([d](double) { return d; }, 1000));
  CHECK(std::abs(ed(0, 0).real() - std::exp(1.0)) < 1e-10);
  CHECK(std::abs(ed(1, 1).real() - std::exp(-1.0)) < 1e-10);

  CHECK(remainder_bound(1.0, 0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(remainder_bound(1.0, 12) <= 1e-9);
}

TEST_CASE("trivial representation with constant θ on a gives exp(θ)") {
  const auto spec = GroupSpec::gl_real(2);
  surface::SampleOptions trivial;
  trivial.mode = surface::SampleMode::Trivial;
  const auto rho = surface::sample_representation(spec, surface::Presentation(1), 1, trivial);
  Matrix x(2, 2);
  x << 0.2, -0.5, 0.3, 0.1;
  const Perturbation theta{{1, x}};
  const surface::Word w{{1}, true};
  const Matrix expect = liealg::expm(x);
  CHECK(operator_norm(perturbed_holonomy(rho, w, theta).value - expect) < 1e-8);
  CHECK(operator_norm(perturbed_holonomy_rk4(rho, w, theta) - expect) < 1e-8);
}

TEST_CASE("trace of the perturbed holonomy is gauge invariant") {
  std::mt19937_64 rng(15);
  const auto spec = GroupSpec::gl_real(2);
  const auto rho = verify::sample_rep(spec, 2, 4);
  Perturbation theta;
  for (int k = 1; k <= 4; ++k) theta[k] = liealg::random_algebra_element(spec, rng, 0.1).matrix();
  const Matrix h = liealg::random_element(spec, rng).matrix();
  const Matrix hi = h.inverse();
  Perturbation moved;
  for (const auto& [k, m] : theta) moved[k] = hi * m * h;
  const surface::Word w{{1, 2, -3, 4, 4}, true};
  const double a = perturbed_holonomy(rho, w, theta, 12, 400).value.trace().real();
  const double b = perturbed_holonomy(surface::conjugate(rho, h), w, moved, 12, 400).value.trace().real();
  CHECK(std::abs(a - b) < 1e-10);
}
