#pragma once

#include <string>
#include <vector>

#include "choicones/cones.hpp"

namespace choicones {

struct TrialRecord {
  int index = 0;
  double residual = 0.0;
  bool failed = false;
  std::string note;
};

struct TrialReport {
  std::string statement;
  int trials = 0;
  int failures = 0;
  double max_residual = 0.0;
  uint64_t seed = 0;
  int member_count = 0;
  int nonmember_count = 0;
  int inconclusive_count = 0;
  std::string note;
  std::vector<TrialRecord> records;

  void add(int index, double residual, bool failed, std::string note = "");
  void count(Status s);
};

/// Random CP map from Ginibre-sampled Kraus operators; Choi PSD by
/// construction.
LinearMap random_cp(int a, int b, int kraus_count, uint64_t seed);

/// Dykstra projection of a random CP Choi matrix onto PSD ∩ PSD^Γ,
/// renormalized to trace n. Throws ProjectionFailed after the budget.
LinearMap random_ppt_map(int n, uint64_t seed);

/// Unital variant: projection additionally enforces Tr_A C = I.
LinearMap random_unital_ppt_map(int n, uint64_t seed);

/// Eq. (1) residuals ‖(φ1⊗φ2)(C_σ) − C_{φ2∘σ∘φ1*}‖_F on random triples.
TrialReport verify_fundamental_identity(int trials, const std::vector<int>& dim_pool,
                                        uint64_t seed);

/// Named identity suites: fundamental | duality | choi-adj | choi-var |
/// schmidt | pairing.
TrialReport run_identity_suite(const std::string& name, int trials, uint64_t seed);
std::vector<std::string> identity_suite_names();

/// Ampliation criteria: decomposable maps against PPT states and k-positive
/// maps against S_k states; images must be PSD.
TrialReport verify_ampliation_criteria(int trials, uint64_t seed);

/// PPT-square statements (i)..(vii). Rigorous violations are failures only
/// for statements (i)-(v) at n ≤ 3, where the conjecture is resolved; the
/// block-positive-input statements are reported without assertion.
TrialReport ppt_square_experiment(int n, int trials, const std::string& statement, uint64_t seed);

/// Iteration diagnostic: separable-fit residual of C_{φ^m} for a unital PPT
/// map φ, m = 1..powers. Reported, never asserted.
TrialReport ppt_iteration_experiment(int n, int powers, int trials, uint64_t seed);

/// Builds s = Σ_{i≤ℓ} e_ii and ρ = Σ_{i,j≤p} e_ij⊗e_ij, applies id_p ⊗ Ad_s,
/// and checks that the image has Schmidt rank exactly min(ℓ, p).
TrialReport lattice_probe(int k, int l, int p, int q);

}  // namespace choicones
