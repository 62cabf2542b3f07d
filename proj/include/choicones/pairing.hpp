#pragma once

#include "choicones/maps.hpp"

namespace choicones {

/// ⟨X,Y⟩ = Tr(XYᵗ) as a complex scalar (no conjugation; the pairing is
/// bilinear, not sesquilinear).
Complex pair_mat_c(const ComplexMatrix& x, const ComplexMatrix& y);

/// Real part of ⟨X,Y⟩ with an imaginary-part guard: throws NonRealPairing
/// when |Im| exceeds imag_tol. Hermitian arguments always pass.
double pair_mat(const ComplexMatrix& x, const ComplexMatrix& y, double imag_tol = 1e-10);

/// ⟨ρ, φ⟩ = ⟨ρ, C_φ⟩; for ρ = a⊗b this equals ⟨b, φ(a)⟩.
double pair_state_map(const ComplexMatrix& rho, const LinearMap& phi, double imag_tol = 1e-10);

/// ⟨φ, ψ⟩ = ⟨C_φ, C_ψ⟩ = Tr(C_φ C_ψᵗ).
double pair_maps(const LinearMap& phi, const LinearMap& psi, double imag_tol = 1e-10);

/// ⟨φ, ψ⟩^s = ⟨C^s_φ, C^s_ψ⟩ for s ∈ M_A.
double pair_maps_s(const LinearMap& phi, const LinearMap& psi, const ComplexMatrix& s,
                   double imag_tol = 1e-10);

}  // namespace choicones
