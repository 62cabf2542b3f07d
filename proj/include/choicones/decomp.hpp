#pragma once

#include <utility>
#include <vector>

#include "choicones/maps.hpp"

namespace choicones {

/// Kraus form φ = Σ_i Ad_{s_i}; weights are folded into the operators.
struct KrausDecomposition {
  std::vector<ComplexMatrix> operators;  // each a×b
};

/// Eigendecomposition-based Kraus extraction; requires a PSD Choi matrix
/// (min eigenvalue ≥ −psd_tol). Operator count equals the eigen-rank of C_φ
/// at the relative cutoff.
KrausDecomposition kraus(const LinearMap& phi, double psd_tol = 1e-9, double rank_cutoff = 1e-9);

/// |ζ⟩ = Σ_i c_i |x_i⟩|y_i⟩ with positive nonincreasing coefficients and
/// orthonormal factor families (stored as matrix columns).
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  ComplexMatrix left_vectors;   // a × rank
  ComplexMatrix right_vectors;  // b × rank
  int rank = 0;

  ComplexMatrix reconstruct() const;  // ab × 1
};

SchmidtDecomposition schmidt(const ComplexMatrix& zeta, Dims dims, double rank_cutoff = 1e-9);
int schmidt_rank(const ComplexMatrix& zeta, Dims dims, double rank_cutoff = 1e-9);

/// Rank-k truncation of a bipartite vector (not normalized).
ComplexMatrix truncate_schmidt(const ComplexMatrix& zeta, Dims dims, int k);

/// Separable certificate Σ_i w_i |x_i⟩⟨x_i| ⊗ |y_i⟩⟨y_i| with w_i ≥ 0.
struct ProductCertificate {
  std::vector<double> weights;
  std::vector<ComplexMatrix> left;   // a×1 unit vectors
  std::vector<ComplexMatrix> right;  // b×1 unit vectors

  ComplexMatrix reconstruct(Dims dims) const;
};

/// Holevo form φ(a) = Σ_k ⟨a, v_k⟩ u_k with PSD u_k, v_k.
struct HolevoForm {
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> pairs;  // (u_k, v_k)

  ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// Converts a separable certificate of C_φ into the Holevo form
/// (u_i = w_i|y_i⟩⟨y_i|, v_i = |x_i⟩⟨x_i|). Throws BadCertificate when the
/// certificate does not reproduce C_φ within tol.
HolevoForm holevo_form(const ProductCertificate& certificate, const LinearMap& phi,
                       double tol = 1e-8);

/// Constructive factorization Ad_a = Ad_x ∘ Ad_s ∘ Ad_y for rank(a) ≤ rank(s),
/// built from the singular value decompositions of a and s. Throws
/// RankTooLarge when rank(a) > rank(s).
std::pair<ComplexMatrix, ComplexMatrix> factor_ad(const ComplexMatrix& a, const ComplexMatrix& s,
                                                  double rank_cutoff = 1e-9);

}  // namespace choicones
