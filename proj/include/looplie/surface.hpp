#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "looplie/liealg.hpp"

namespace looplie::surface {

/// Letters are signed generator indices: a_i ↦ 2i − 1, b_i ↦ 2i, inverses negated.
using Letter = int;

inline Letter letter_a(int i) { return 2 * i - 1; }
inline Letter letter_b(int i) { return 2 * i; }

struct Presentation {
  int genus = 1;

  explicit Presentation(int g = 1);
  int alphabet_size() const { return 2 * genus; }
  bool contains(Letter x) const { return x != 0 && std::abs(x) <= alphabet_size(); }
  /// The surface relation as a word. With holonomy multiplying later letters on
  /// the left, hol(relator) = (∏ᵢ [ρ(aᵢ), ρ(bᵢ)])⁻¹, so the two conditions agree.
  std::vector<Letter> relator() const;
};

struct Word {
  std::vector<Letter> letters;
  /// false: based word; true: free homotopy class (cyclic word).
  bool cyclic = true;

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  bool operator==(const Word&) const = default;
};

Word reduce(const Word& w);
Word inverse(const Word& w);
/// Rotation starting at letter `start`.
Word rotate(const Word& w, std::size_t start);
Word concat(const Word& u, const Word& v);

std::string letter_name(Letter x);
/// "a1 b1 A1 B1"; the empty word formats as "".
std::string format_word(const Word& w);
/// Inverse of format_word. Throws SchemaError on malformed tokens or letters
/// outside the presentation.
Word parse_word(const std::string& text, const Presentation& pres, bool cyclic = true);

enum class MoveKind { Conjugate, CancellingPair, Relator };

struct Move {
  MoveKind kind = MoveKind::Conjugate;
  Letter letter = 1;         // conjugating letter or inserted pair x x⁻¹
  std::size_t position = 0;  // insertion point for pairs and relators
  bool inverse = false;      // insert the inverse relator
};

/// One move without reduction.
Word apply_move(const Word& w, const Move& m, const Presentation& pres);
Move random_move(const Word& w, const Presentation& pres, std::mt19937_64& rng);
/// `count` seeded moves followed by reduction; the result is conjugate to w.
Word homotopy_moves(const Word& w, const Presentation& pres, std::uint64_t seed, int count);

struct Representation {
  liealg::GroupSpec spec;
  int genus = 1;
  /// images[k − 1] is the image of the generator with letter k.
  std::vector<liealg::GroupElement> images;

  const Matrix& image(Letter generator) const;
};

/// ‖∏ᵢ [ρ(aᵢ), ρ(bᵢ)] − I‖_F with [A, B] = A B A⁻¹ B⁻¹.
double relator_residual(const Representation& rho);
Matrix relator_product(const Representation& rho);

enum class SampleMode { Random, Trivial };

struct SampleOptions {
  SampleMode mode = SampleMode::Random;
  int max_iter = 50;
  double scale = 0.3;
  double perturbation = 0.1;
};

/// Seeded point of Hom(π₁Σ_g, G). Throws SamplingFailure when Newton does not
/// reach τ_rep.
Representation sample_representation(const liealg::GroupSpec& spec, const Presentation& pres,
                                     std::uint64_t seed, const SampleOptions& options = {});

/// h⁻¹ ρ h.
Representation conjugate(const Representation& rho, const Matrix& h);

/// ρ(w_n) ⋯ ρ(w_1), unchecked.
Matrix holonomy_matrix(const Representation& rho, const Word& w);
liealg::GroupElement holonomy(const Representation& rho, const Word& w);
double trace_function(const Representation& rho, const Word& w);

}  // namespace looplie::surface
