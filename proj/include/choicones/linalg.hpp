#pragma once

#include <vector>

#include "choicones/complex_matrix.hpp"

namespace choicones {

/// Eigendecomposition H = V diag(values) V† with ascending eigenvalues.
struct EigResult {
  std::vector<double> values;
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Economy SVD  M = U diag(singulars) V†  with nonincreasing singular values.
struct SvdResult {
  ComplexMatrix u;
  std::vector<double> singulars;
  ComplexMatrix v;

  /// Count of singular values above cutoff·s_max.
  int rank(double cutoff = 1e-9) const;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
/// Sweeps until the off-diagonal Frobenius mass drops below 1e-14 × ‖H‖,
/// at most 100 sweeps. Throws NotHermitian when the symmetry check fails.
EigResult herm_eig(const ComplexMatrix& h, double herm_tol = 1e-10);

double min_eig(const ComplexMatrix& h, double herm_tol = 1e-10);
double max_eig(const ComplexMatrix& h, double herm_tol = 1e-10);

/// SVD built on herm_eig of M†M; singular values below 1e-10 × s_max are
/// flattened to zero and the matching U columns completed orthonormally.
SvdResult svd(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

/// Partial transpose on the A factor: (a ⊗ b)^Γ = aᵗ ⊗ b.
ComplexMatrix partial_transpose(const ComplexMatrix& x, Dims dims);

enum class Factor { A, B };

ComplexMatrix partial_trace(const ComplexMatrix& x, Dims dims, Factor which);

/// Row-major flattening of an a×b matrix into C^a ⊗ C^b: component i·b+j = s_ij.
ComplexMatrix vec(const ComplexMatrix& s);
ComplexMatrix unvec(const ComplexMatrix& zeta, Dims dims);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
ComplexMatrix psd_project(const ComplexMatrix& h, double herm_tol = 1e-10);

/// Swap of the tensor factors of M_A ⊗ M_B onto M_B ⊗ M_A.
ComplexMatrix flip_factors(const ComplexMatrix& x, Dims dims);

/// |ω⟩ = Σ_i |i⟩|i⟩ in C^n ⊗ C^n (unnormalized), as an n²×1 vector.
ComplexMatrix omega_vector(int n);
/// |ω⟩⟨ω| = Σ_ij e_ij ⊗ e_ij, the Choi matrix of the identity map.
ComplexMatrix omega_projector(int n);

void require_bipartite(const ComplexMatrix& x, Dims dims, const char* where);

}  // namespace choicones
