#pragma once

#include <cstdint>

#include "choicones/maps.hpp"

namespace choicones {

/// Deterministic RNG (xoshiro256++ seeded through splitmix64) with its own
/// Box-Muller gaussians, so identical seeds give bit-identical streams on
/// every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  int uniform_int(int n);
  double gauss();
  Complex cgauss();

  /// Independent substream; deterministic in (seed, stream).
  Rng split(uint64_t stream) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Matrix with independent standard complex gaussian entries.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int n, Rng& rng);
/// Isometry with n ≥ m columns... rows×cols with orthonormal columns
/// (requires rows ≥ cols); for rows < cols returns a ginibre matrix.
ComplexMatrix random_isometry(int rows, int cols, Rng& rng);
ComplexMatrix random_hermitian(int n, Rng& rng);
/// PSD matrix G G† with rank min(n, rank); rank 0 means full.
ComplexMatrix random_psd(int n, Rng& rng, int rank = 0);
/// Unit column vector.
ComplexMatrix random_unit_vector(int n, Rng& rng);
/// Unit vector in C^a ⊗ C^b of Schmidt rank ≤ k.
ComplexMatrix random_schmidt_vector(Dims dims, int k, Rng& rng);

/// Random CP map Σ_i Ad_{s_i} with Ginibre Kraus operators.
LinearMap random_cp_map(int a, int b, int kraus_count, Rng& rng);
/// Random Hermiticity-preserving map (gaussian Hermitian Choi matrix).
LinearMap random_hp_map(int a, int b, Rng& rng);
/// Random k-superpositive map: Σ Ad_s over `terms` rank-≤k operators.
LinearMap random_sp_k_map(int a, int b, int k, int terms, Rng& rng);
/// Random member of S_k: mixture of rank-≤k vector projectors, unit trace.
ComplexMatrix random_sk_state(Dims dims, int k, int terms, Rng& rng);

}  // namespace choicones
