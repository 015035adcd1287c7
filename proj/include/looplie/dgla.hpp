#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "looplie/liealg.hpp"

namespace looplie::dgla {

/// Finite-dimensional ℤ₂-graded DGLA with an invariant pairing, stored densely.
/// Basis vectors 0..d0−1 span L₀ and d0..d0+d1−1 span L₁.
class CyclicDgla {
 public:
  CyclicDgla(int d0, int d1, RealMatrix differential, std::vector<double> structure,
             RealMatrix pairing);

  int d0() const { return d0_; }
  int d1() const { return d1_; }
  int dim() const { return d0_ + d1_; }
  int parity(int i) const { return i < d0_ ? 0 : 1; }

  const RealMatrix& differential() const { return d_; }
  const RealMatrix& pairing() const { return omega_; }
  /// c(i, j, k): coefficient of e_k in [e_i, e_j].
  double c(int i, int j, int k) const {
    return structure_[(static_cast<std::size_t>(i) * dim() + j) * dim() + k];
  }
  double& c(int i, int j, int k) {
    return structure_[(static_cast<std::size_t>(i) * dim() + j) * dim() + k];
  }
  const std::vector<double>& structure() const { return structure_; }
  /// y ↦ [e_i, y].
  const RealMatrix& ad_basis(int i) const { return ad_[static_cast<std::size_t>(i)]; }

  RealVector d(const RealVector& x) const { return d_ * x; }
  RealVector bracket(const RealVector& x, const RealVector& y) const;
  /// y ↦ [x, y].
  RealMatrix ad(const RealVector& x) const;
  double omega(const RealVector& x, const RealVector& y) const { return x.dot(omega_ * y); }

  /// Embeds L₀ or L₁ coefficients into the full space.
  RealVector even(const RealVector& a) const;
  RealVector odd(const RealVector& x) const;

  /// Must be called after editing structure constants in place.
  void rebuild();

 private:
  int d0_;
  int d1_;
  RealMatrix d_;
  std::vector<double> structure_;
  RealMatrix omega_;
  std::vector<RealMatrix> ad_;
};

struct AxiomReport {
  double parity = 0.0;          // (i)   d exchanges L₀ and L₁
  double leibniz = 0.0;         // (ii)
  double cyclicity = 0.0;       // (iii)
  double d_compatibility = 0.0; // (iv)
  double symmetry = 0.0;        // (v)
  double sigma_min_even = 0.0;  // (vi)  smallest singular value of ω on L₀
  double sigma_min_odd = 0.0;   //       and on L₁
  double mixed_pairing = 0.0;   // (vii)
  double d_squared = 0.0;
  double jacobi = 0.0;
  double antisymmetry = 0.0;
  double bracket_parity = 0.0;

  bool passes(double tol) const;
  std::vector<std::pair<std::string, double>> entries() const;
};

AxiomReport axioms_residual(const CyclicDgla& L);

/// dx + ½[x, x] for x ∈ L₁ (full-space vector).
RealVector mc_residual(const CyclicDgla& L, const RealVector& x);
/// u ↦ du + [x, u], the linearization of mc_residual at x.
RealMatrix mc_linearization(const CyclicDgla& L, const RealVector& x);
/// ξ_a(x) = [a, x] − da.
RealVector gauge_field(const CyclicDgla& L, const RealVector& a, const RealVector& x);
/// ω(dx + ½[x, x], a).
double moment(const CyclicDgla& L, const RealVector& x, const RealVector& a);

struct NewtonResult {
  RealVector x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped min-norm Newton on mc_residual restricted to L₁, from a seeded
/// start of the given scale. Non-convergence is reported, not retried.
NewtonResult find_mc_point(const CyclicDgla& L, std::uint64_t seed, double scale = 1e-2,
                           int max_iter = 50, double tol = 1e-14);

/// H*(Σ_g) ⊗ 𝔤 with cup product, intersection pairing and d = 0.
CyclicDgla surface_toy_instance(int genus, const liealg::GroupSpec& spec);
/// The same algebra with differential [μ, ·] for an element μ ∈ L₁ with [μ, μ] = 0.
CyclicDgla twisted_instance(const CyclicDgla& L, const RealVector& mu);
/// Zero bracket and differential; standard pairing on L₀ and symplectic on L₁.
CyclicDgla abelian_instance(int d0, int d1);

}  // namespace looplie::dgla
