#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "looplie/polygon.hpp"
#include "looplie/surface.hpp"

namespace looplie::goldman {

using polygon::Point;
using surface::Word;

/// Exact rational number, always normalized with a positive denominator.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  Rational operator+(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational&) const = default;

  /// "1", "-1/2".
  std::string str() const;
  static Rational parse(const std::string& s);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// Chord j runs from where letter j − 1 re-enters to where letter j exits.
struct Chord {
  Point from;
  Point to;
  int entry_side = 0;
  int exit_side = 0;
};

struct PLLoop {
  Word word;
  int genus = 1;
  /// Exit parameter of each letter along its exit side.
  std::vector<double> exit_params;
  std::vector<Chord> chords;
};

struct RealizeOptions {
  double margin = 1e-3;
  int max_retries = 32;
};

/// Straight chords inside the 4g-gon whose side crossings spell the cyclic
/// reduction of w. Crossing parameters are drawn from the seed.
PLLoop realize(const Word& w, int genus, std::uint64_t seed, const RealizeOptions& opts = {});

struct IntersectionDatum {
  Point point;
  int sign = 0;
  Word gamma_p;
  Word lambda_p;
  std::size_t gamma_arc = 0;
  std::size_t lambda_arc = 0;
};

/// Transversal crossings of two realized loops. Throws RealizationError when
/// the pair is not in general position.
std::vector<IntersectionDatum> intersections(const PLLoop& c1, const PLLoop& c2,
                                             double margin = 1e-3);

/// Realizes both words and intersects them, re-drawing λ until the pair is generic.
std::vector<IntersectionDatum> intersect_words(const Word& gamma, const Word& lambda, int genus,
                                               std::uint64_t seed,
                                               const RealizeOptions& opts = {});

/// Cyclic representative with the smallest rotation under the letter order
/// a1 < A1 < b1 < B1 < a2 < ⋯.
Word canonical_rotation(const Word& w);

/// Formal rational combination of cyclic words. Terms with equal canonical
/// rotations are merged and zero terms dropped.
class LoopSum {
 public:
  struct Term {
    Rational coef;
    Word word;
  };

  LoopSum() = default;
  static LoopSum single(const Word& w, Rational c = 1);

  void add(const Rational& c, const Word& w);
  LoopSum operator+(const LoopSum& o) const;
  LoopSum operator-(const LoopSum& o) const;
  LoopSum scaled(const Rational& c) const;

  /// Terms in canonical order: shorter words first, then by letter order.
  std::vector<Term> terms() const;
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool operator==(const LoopSum&) const = default;

 private:
  struct KeyLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
  };
  std::map<std::vector<int>, Rational, KeyLess> terms_;
};

enum class BracketKind { Oriented, Unoriented };

LoopSum bracket_oriented(const Word& gamma, const Word& lambda, int genus, std::uint64_t seed);
LoopSum bracket_unoriented(const Word& gamma, const Word& lambda, int genus, std::uint64_t seed);
LoopSum bracket(const Word& gamma, const Word& lambda, BracketKind kind, int genus,
                std::uint64_t seed);
/// Bilinear extension; each word pair gets its own derived seed.
LoopSum bracket(const LoopSum& x, const LoopSum& y, BracketKind kind, int genus,
                std::uint64_t seed);

/// Orientation reversal applied termwise.
LoopSum reverse(const LoopSum& s);

double evaluate(const LoopSum& s, const surface::Representation& rho);

/// Σ_p ε(p) ⟨F(hol γ_p), F(hol λ_p)⟩ from the intersection data.
double poisson_direct(const Word& gamma, const Word& lambda, const surface::Representation& rho,
                      std::uint64_t seed);

/// F on raw matrices, without membership checks.
Matrix variation_matrix(const liealg::GroupSpec& spec, const Matrix& g);

/// Words (p, q) ↦ a^p b^q on the torus.
Word torus_word(int p, int q);

}  // namespace looplie::goldman
