#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "looplie/goldman.hpp"
#include "looplie/verify.hpp"

using namespace looplie;
using namespace looplie::goldman;
using liealg::GroupElement;
using liealg::GroupSpec;
using surface::Representation;

namespace {

Word W(std::vector<surface::Letter> l) { return Word{std::move(l), true}; }

Matrix diag2(double x, double y) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

Matrix rotation(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

Representation diagonal_torus() {
  const auto spec = GroupSpec::gl_real(2);
  return Representation{spec, 1, {GroupElement(spec, diag2(2, 0.5)), GroupElement(spec, diag2(3, 1.0 / 3))}};
}

// Images with no relation among them; separates words that a surface
// representation would identify.
Representation free_images(int genus, std::uint64_t seed) {
  const auto spec = GroupSpec::gl_real(3);
  std::mt19937_64 rng(seed);
  Representation rho{spec, genus, {}};
  for (int k = 0; k < 2 * genus; ++k) rho.images.push_back(liealg::random_element(spec, rng, 0.6));
  return rho;
}

// Algebraic intersection number from exponent sums: ι(a_i, b_i) = +1.
int homological_intersection(const Word& g, const Word& l, int genus) {
  auto sums = [genus](const Word& w) {
    std::vector<int> s(static_cast<std::size_t>(2 * genus), 0);
    for (auto x : w.letters) s[static_cast<std::size_t>(std::abs(x) - 1)] += x > 0 ? 1 : -1;
    return s;
  };
  const auto a = sums(g), b = sums(l);
  int total = 0;
  for (int i = 0; i < genus; ++i)
    total += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i];
  return total;
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational::parse("-1/2") == Rational(-1, 2));
  CHECK(Rational::parse("3") == Rational(3));
  CHECK((Rational(1, 2) + Rational(1, 2)) == Rational(1));
  CHECK_THROWS_AS(Rational::parse("1/0"), SchemaError);
  CHECK_THROWS_AS(Rational::parse("x"), SchemaError);
}

TEST_CASE("loop sums merge cyclic rotations and drop zeros") {
  LoopSum s;
  s.add(1, W({1, 2}));
  s.add(1, W({2, 1}));
  CHECK(s.size() == 1);
  CHECK(s.terms()[0].coef == Rational(2));
  s.add(-2, W({1, 2}));
  CHECK(s.empty());
  const auto t = LoopSum::single(W({1}), Rational(1, 2)) - LoopSum::single(W({1}), Rational(1, 2));
  CHECK(t.empty());
  CHECK(evaluate(t, diagonal_torus()) == 0.0);
  CHECK(evaluate(LoopSum(), diagonal_torus()) == 0.0);
}

TEST_CASE("torus examples of the oriented bracket") {
  CHECK(bracket_oriented(W({1}), W({2}), 1, 1) == LoopSum::single(W({1, 2})));
  CHECK(bracket_oriented(W({1}), W({1, 1}), 1, 1).empty());
  CHECK(bracket_oriented(W({1}), W({1, 2}), 1, 1) == LoopSum::single(W({1, 1, 2})));
  CHECK(evaluate(LoopSum::single(W({1, 2})), diagonal_torus()) == doctest::Approx(6.0 + 1.0 / 6));
}

TEST_CASE("torus example of the unoriented bracket") {
  const auto b = bracket_unoriented(W({1}), W({2}), 1, 1);
  LoopSum expect;
  expect.add(Rational(1, 2), W({1, 2}));
  expect.add(Rational(-1, 2), W({1, -2}));
  CHECK(b == expect);
  CHECK(std::abs(evaluate(bracket_unoriented(W({1, 2, 2}), W({1, 2, 2}), 1, 3), free_images(1, 4))) < 1e-9);
  CHECK(bracket_unoriented(W({1}), W({1, 1}), 1, 1).empty());
}

TEST_CASE("single crossing of a and b on the torus") {
  const auto d = intersect_words(W({1}), W({2}), 1, 5);
  REQUIRE(d.size() == 1);
  CHECK(d[0].sign == 1);
  CHECK(d[0].gamma_p.letters == std::vector<surface::Letter>{1});
  CHECK(d[0].lambda_p.letters == std::vector<surface::Letter>{2});
  const auto r = realize(W({1}), 1, 2);
  CHECK(r.chords.size() == 1);
}

TEST_CASE("signed crossing count equals the homological intersection") {
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q)
      for (int r = -2; r <= 2; ++r)
        for (int s = -2; s <= 2; ++s) {
          const Word g = torus_word(p, q), l = torus_word(r, s);
          if (g.empty() || l.empty()) continue;
          const auto d = intersect_words(g, l, 1, 17);
          int sum = 0;
          for (const auto& x : d) sum += x.sign;
          CHECK(sum == p * s - q * r);
          CHECK(static_cast<int>(d.size()) >= std::abs(p * s - q * r));
        }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int genus = 2 + t % 2;
    const Word g = verify::random_word(genus, rng, 1, 6);
    const Word l = verify::random_word(genus, rng, 1, 6);
    int sum = 0;
    for (const auto& x : intersect_words(g, l, genus, 100 + t)) sum += x.sign;
    CHECK(sum == homological_intersection(g, l, genus));
  }
}

TEST_CASE("based words at each crossing are rotations of the loop words") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const int genus = 1 + t % 3;
    const Word g = surface::reduce(verify::random_word(genus, rng, 1, 6));
    const Word l = surface::reduce(verify::random_word(genus, rng, 1, 6));
    for (const auto& d : intersect_words(g, l, genus, t)) {
      bool found_g = false, found_l = false;
      for (std::size_t s = 0; s < g.size(); ++s)
        found_g = found_g || surface::rotate(g, s).letters == d.gamma_p.letters;
      for (std::size_t s = 0; s < l.size(); ++s)
        found_l = found_l || surface::rotate(l, s).letters == d.lambda_p.letters;
      CHECK(found_g);
      CHECK(found_l);
    }
  }
}

TEST_CASE("realized chords stay inside the polygon and spell the word") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const int genus = 1 + t % 3;
    const Word w = surface::reduce(verify::random_word(genus, rng, 1, 8));
    const auto loop = realize(w, genus, t);
    REQUIRE(loop.chords.size() == w.size());
    const polygon::Model m(genus);
    for (std::size_t j = 0; j < w.size(); ++j) {
      CHECK(m.letter_of_side(loop.chords[j].exit_side) == w.letters[j]);
      CHECK(loop.chords[j].from.norm() <= 1.0 + 1e-12);
      CHECK(loop.chords[j].to.norm() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("poisson_direct examples") {
  CHECK(poisson_direct(W({1}), W({2}), diagonal_torus(), 1) == doctest::Approx(6.0 + 1.0 / 6));
  const auto o2 = GroupSpec::orthogonal(2, 0);
  const double th = 0.4, ph = 1.1;
  const Representation rot{o2, 1, {GroupElement(o2, rotation(th)), GroupElement(o2, rotation(ph))}};
  CHECK(poisson_direct(W({1}), W({2}), rot, 1) ==
        doctest::Approx(0.5 * (2 * std::cos(th + ph) - 2 * std::cos(th - ph))));
  CHECK(poisson_direct(W({1}), W({1, 1}), diagonal_torus(), 1) == 0.0);
}

TEST_CASE("torus closed form against the lattice determinant") {
  const auto rho = diagonal_torus();
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q)
      for (int r = -3; r <= 3; ++r)
        for (int s = -3; s <= 3; ++s) {
          const auto b = bracket_oriented(torus_word(p, q), torus_word(r, s), 1, 9);
          // ρ(a^x b^y) = diag(2^x 3^y, 2^-x 3^-y).
          const double x = p + r, y = q + s;
          const double f = std::pow(2.0, x) * std::pow(3.0, y) + std::pow(2.0, -x) * std::pow(3.0, -y);
          const double expect = (p * s - q * r) * f;
          CHECK(std::abs(evaluate(b, rho) - expect) <= 1e-8 * (1 + std::abs(expect)));
        }
}

TEST_CASE("orientation reversal is a Lie map at evaluation level") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    const int genus = 1 + t % 2;
    const auto rho = verify::sample_rep(GroupSpec::gl_real(2), genus, t);
    const Word g = verify::random_word(genus, rng, 1, 5);
    const Word l = verify::random_word(genus, rng, 1, 5);
    const auto lhs = reverse(bracket_oriented(g, l, genus, 4));
    const auto rhs = bracket_oriented(surface::inverse(g), surface::inverse(l), genus, 5);
    const double a = evaluate(lhs, rho), b = evaluate(rhs, rho);
    CHECK(std::abs(a - b) <= 1e-9 * (1 + std::abs(a)));
  }
}

TEST_CASE("unoriented bracket is half the oriented one minus the λ-reversed one") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const int genus = 1 + t % 2;
    const Word g = verify::random_word(genus, rng, 1, 5);
    const Word l = verify::random_word(genus, rng, 1, 5);
    const auto data = intersect_words(g, l, genus, 6);
    LoopSum expect;
    for (const auto& d : data) {
      expect.add(Rational(d.sign, 2), surface::reduce(surface::concat(d.gamma_p, d.lambda_p)));
      expect.add(Rational(-d.sign, 2),
                 surface::reduce(surface::concat(d.gamma_p, surface::inverse(d.lambda_p))));
    }
    const auto got = bracket_unoriented(g, l, genus, 6);
    const auto rho = free_images(genus, t);
    CHECK(std::abs(evaluate(got, rho) - evaluate(expect, rho)) < 1e-9 * (1 + std::abs(evaluate(expect, rho))));
  }
}

TEST_CASE("homomorphism at a handful of representations") {
  std::mt19937_64 rng(29);
  const std::vector<GroupSpec> gl{GroupSpec::gl_real(2), GroupSpec::gl_complex(2)};
  const std::vector<GroupSpec> cor{GroupSpec::orthogonal(2, 0), GroupSpec::orthogonal(1, 1),
                                   GroupSpec::unitary(2, 0), GroupSpec::symplectic_real(2)};
  for (int t = 0; t < 16; ++t) {
    const int genus = 1 + t % 2;
    const Word g = verify::random_word(genus, rng, 1, 5);
    const Word l = verify::random_word(genus, rng, 1, 5);
    const auto r1 = verify::sample_rep(gl[static_cast<std::size_t>(t) % 2], genus, t);
    const double v1 = evaluate(bracket_oriented(g, l, genus, t), r1);
    CHECK(std::abs(v1 - poisson_direct(g, l, r1, t)) <= 1e-8 * (1 + std::abs(v1)));
    const auto r2 = verify::sample_rep(cor[static_cast<std::size_t>(t) % 4], genus, t);
    const double v2 = evaluate(bracket_unoriented(g, l, genus, t), r2);
    CHECK(std::abs(v2 - poisson_direct(g, l, r2, t)) <= 1e-8 * (1 + std::abs(v2)));
  }
}

TEST_CASE("realizations with different seeds give the same evaluation") {
  const auto rho = verify::sample_rep(GroupSpec::gl_real(2), 2, 3);
  const Word g = W({1, 2, -3, 4, 4});
  const Word l = W({2, 3, -1});
  const double ref = evaluate(bracket_oriented(g, l, 2, 0), rho);
  for (std::uint64_t s = 1; s < 10; ++s)
    CHECK(std::abs(evaluate(bracket_oriented(g, l, 2, s), rho) - ref) <= 1e-9 * (1 + std::abs(ref)));
}
