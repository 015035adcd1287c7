#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "looplie/types.hpp"

namespace looplie::liealg {

enum class GroupKind { GL_R, GL_C, O_pq, O_C, U_pq, Sp_R, Sp_pq };

/// A linear reductive group G ⊂ GL(N, C), identified by kind and size.
///
/// `n` is the matrix size for every kind except Sp_pq, where it is the
/// quaternionic dimension p + q and matrices are 2n × 2n complex.
struct GroupSpec {
  GroupKind kind = GroupKind::GL_R;
  int n = 1;
  int p = 0;
  int q = 0;

  static GroupSpec gl_real(int n);
  static GroupSpec gl_complex(int n);
  static GroupSpec orthogonal(int p, int q);
  static GroupSpec orthogonal_complex(int n);
  static GroupSpec unitary(int p, int q);
  static GroupSpec symplectic_real(int n);
  static GroupSpec symplectic_quaternionic(int p, int q);

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;

  /// Size of the defining matrices.
  int dim() const { return kind == GroupKind::Sp_pq ? 2 * n : n; }
  bool is_real() const;
  /// GL kinds use the inclusion as variation function; all others use ½(g − g⁻¹).
  bool is_general_linear() const;

  /// Hermitian/bilinear form preserved by the group (identity when unused).
  Matrix signature_form() const;
  /// Standard antisymmetric Ω for Sp_R, the quaternionic structure for Sp_pq.
  Matrix symplectic_form() const;

  std::string name() const;
  bool operator==(const GroupSpec&) const = default;
};

std::string to_string(GroupKind kind);
GroupKind kind_from_string(const std::string& s);

/// Frobenius norm of the defect of the group's defining equations.
/// Singular matrices report +inf.
double membership_residual(const Matrix& g, const GroupSpec& spec);
/// Same for the Lie algebra equations (e.g. xᵀJ + Jx for O(p,q)).
double algebra_residual(const Matrix& x, const GroupSpec& spec);

class GroupElement {
 public:
  /// Validates membership; the threshold scales with ‖g‖² so long products stay admissible.
  GroupElement(GroupSpec spec, Matrix entries);

  static GroupElement identity(const GroupSpec& spec);

  const Matrix& matrix() const { return entries_; }
  const GroupSpec& spec() const { return spec_; }

  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& other) const;

 private:
  GroupSpec spec_;
  Matrix entries_;
};

class AlgebraElement {
 public:
  AlgebraElement(GroupSpec spec, Matrix entries);

  static AlgebraElement zero(const GroupSpec& spec);

  const Matrix& matrix() const { return entries_; }
  const GroupSpec& spec() const { return spec_; }

 private:
  GroupSpec spec_;
  Matrix entries_;
};

/// [x₁ ⊗ ⋯ ⊗ x_k] in the universal enveloping algebra, times a real scalar.
struct EnvelopingWord {
  std::vector<AlgebraElement> factors;
  double scalar = 1.0;
};

/// A real basis of 𝔤 ⊂ 𝔤𝔩(N, C), orthonormal for the Frobenius inner
/// product Re tr(x y*), together with the Gram matrix of ⟨x,y⟩ = Re tr(xy).
class AlgebraBasis {
 public:
  explicit AlgebraBasis(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const Matrix& operator[](int i) const { return elements_[static_cast<std::size_t>(i)]; }
  const RealMatrix& gram() const { return gram_; }

  /// Orthogonal projection of an arbitrary N×N matrix onto 𝔤 with respect to
  /// the (possibly indefinite) pairing Re tr(xy).
  Matrix project(const Matrix& x) const;
  /// Real coordinates of x ∈ 𝔤 in this basis.
  RealVector coordinates(const Matrix& x) const;
  Matrix combine(const RealVector& coeffs) const;

 private:
  GroupSpec spec_;
  std::vector<Matrix> elements_;
  RealMatrix gram_;
};

double invariant_f(const GroupElement& g);
double pairing(const AlgebraElement& x, const AlgebraElement& y);
/// Unchecked pairing on raw matrices.
double pairing(const Matrix& x, const Matrix& y);
Matrix lie_bracket(const Matrix& x, const Matrix& y);

/// Closed-form variation function F with ⟨F(g), x⟩ = (x·f)(g).
AlgebraElement variation(const GroupElement& g);
/// The same map computed as the orthogonal projection of g onto 𝔤.
AlgebraElement variation_by_projection(const GroupElement& g);

/// F̂(g; w): the k-th mixed derivative of F along the factors of w.
AlgebraElement variation_hat(const GroupElement& g, const EnvelopingWord& w);
/// f̂(g; w); the empty word gives scalar · f(g).
double f_hat(const GroupElement& g, const EnvelopingWord& w);

Matrix expm(const Matrix& x);

AlgebraElement random_algebra_element(const GroupSpec& spec, std::mt19937_64& rng,
                                      double scale = 0.3);
/// Deterministic in `seed`; exp of a random algebra element, times a random
/// sign-diagonal element for the orthogonal kinds so other components occur.
GroupElement random_element(const GroupSpec& spec, std::uint64_t seed, double scale = 0.3);
GroupElement random_element(const GroupSpec& spec, std::mt19937_64& rng, double scale = 0.3);

}  // namespace looplie::liealg
