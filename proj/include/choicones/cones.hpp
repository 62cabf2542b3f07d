#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choicones/decomp.hpp"
#include "choicones/random.hpp"

namespace choicones {

enum class Status { Member, NonMember, Inconclusive };

const char* to_string(Status s);

struct Diagnostics {
  long iterations = 0;
  int restarts = 0;
  int samples = 0;
  uint64_t seed = 0;
  double value = 0.0;  // op-specific: min eigenvalue, residual, or pairing
  std::string note;
};

/// Split certificate C_φ = P + Q^Γ with P, Q ⪰ 0.
struct SplitCertificate {
  ComplexMatrix p;
  ComplexMatrix q;
  double residual = 0.0;
};

/// Mixture certificate ρ ≈ Σ w_d |ζ_d⟩⟨ζ_d| with unit vectors of Schmidt
/// rank ≤ k and w_d ≥ 0.
struct SchmidtRankCertificate {
  int k = 1;
  std::vector<double> weights;
  std::vector<ComplexMatrix> vectors;  // ab×1 unit vectors
  double residual = 0.0;

  ComplexMatrix reconstruct(Dims dims) const;
  /// Product form (left/right factors); only valid when k == 1.
  ProductCertificate to_product(Dims dims) const;
};

/// Unit vector ξ with ⟨ξ|X|ξ⟩ = value below the membership threshold.
struct VectorWitness {
  ComplexMatrix xi;
  double value = 0.0;
  std::string note;
};

/// Dual-cone map ψ with a negative pairing (or a negative ampliation
/// eigenvalue) against the tested object.
struct MapWitness {
  LinearMap psi;
  double value = 0.0;
  std::string note;
};

struct MembershipVerdict {
  std::string cone;
  Status status = Status::Inconclusive;
  double tolerance = 0.0;

  std::optional<KrausDecomposition> kraus_certificate;
  std::optional<SplitCertificate> split_certificate;
  std::optional<SchmidtRankCertificate> schmidt_certificate;
  std::optional<VectorWitness> vector_witness;
  std::optional<MapWitness> map_witness;

  Diagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Spectral cones: CP, CCP, PPT.
// ---------------------------------------------------------------------------

MembershipVerdict is_cp(const LinearMap& phi, double tol = 1e-9);
MembershipVerdict is_ccp(const LinearMap& phi, double tol = 1e-9);
MembershipVerdict is_ppt_map(const LinearMap& phi, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Block-positivity via see-saw minimization over Schmidt-rank-k vectors.
// ---------------------------------------------------------------------------

struct SeesawOptions {
  int restarts = 32;
  int max_iterations = 500;
  double convergence = 1e-12;
  uint64_t seed = 1;
};

struct SeesawResult {
  double value = 0.0;      // upper bound on min ⟨ξ|X|ξ⟩ over rank-≤k unit ξ
  ComplexMatrix xi;        // attaining vector, Schmidt rank ≤ k
  Diagnostics diagnostics;
};

SeesawResult min_schmidt_k_expectation(const ComplexMatrix& x, Dims dims, int k,
                                       const SeesawOptions& opts = {});

MembershipVerdict is_k_positive(const LinearMap& phi, int k, double tol = 1e-8,
                                const SeesawOptions& opts = {});
MembershipVerdict is_k_blockpositive(const ComplexMatrix& x, Dims dims, int k, double tol = 1e-8,
                                     const SeesawOptions& opts = {});

// ---------------------------------------------------------------------------
// Decomposability via Dykstra split feasibility and PPT witness search.
// ---------------------------------------------------------------------------

struct DecOptions {
  long max_iterations = 20000;
  double residual_tol = 1e-7;
  double witness_tol = 1e-8;
  bool shortcuts = true;     // spectral P=C / Q=C^Γ fast paths
  int witness_steps = 120;
  uint64_t seed = 1;
};

MembershipVerdict is_decomposable(const LinearMap& phi, const DecOptions& opts = {});

/// Dykstra projection onto {X ⪰ 0} ∩ {X^Γ ⪰ 0}. Throws ProjectionFailed when
/// the eigenvalue defects stay above tol for max_iterations.
ComplexMatrix project_to_ppt_cone(const ComplexMatrix& c, Dims dims, long max_iterations = 5000,
                                  double tol = 1e-11);

// ---------------------------------------------------------------------------
// Schmidt-number cones S_k for states, SP_k / EB_k for maps.
// ---------------------------------------------------------------------------

struct SeparabilityOptions {
  int k = 1;
  double tol = 1e-8;            // witness threshold
  double psd_tol = 1e-9;        // input PSD gate
  double fit_residual = 1e-7;   // certificate residual target
  int dictionary_factor = 50;   // dictionary size factor ×(ab)²
  int max_dictionary = 4096;
  int witness_samples = 64;
  int pg_iterations = 40;
  int refine_rounds = 60;
  uint64_t seed = 1;
};

MembershipVerdict is_separable(const ComplexMatrix& rho, Dims dims,
                               const SeparabilityOptions& opts = {});

struct SchmidtNumberBounds {
  int lower = 1;
  int upper = 1;
  std::vector<MembershipVerdict> evidence;
};

SchmidtNumberBounds schmidt_number_bounds(const ComplexMatrix& rho, Dims dims,
                                          SeparabilityOptions opts = {});

MembershipVerdict is_k_superpositive(const LinearMap& phi, int k,
                                     const SeparabilityOptions& opts = {});

MembershipVerdict is_eb_k(const LinearMap& phi, int k, const SeparabilityOptions& opts = {});

// ---------------------------------------------------------------------------
// Ampliation cones A_k[K, L].
// ---------------------------------------------------------------------------

struct ConeSpec {
  enum class Tag { CP, CCP, PPT, DEC, P, SP, BP, S, EB, AMP };

  Tag tag = Tag::CP;
  int k = 0;                      // parameter of P/SP/BP/S/EB/AMP
  std::vector<ConeSpec> amp_args; // [K, L] when tag == AMP

  std::string str() const;
};

/// Parses the CLI cone grammar: cp | ccp | ppt | dec | p:K | sp:K | bp:K |
/// s:K | eb:K | amp:K:CONE:CONE.
ConeSpec parse_cone(const std::string& text);

/// Random member of a generator cone in H(M_{dims.a}, M_{dims.b}).
LinearMap sample_cone_member(const ConeSpec& cone, Dims dims, Rng& rng);

/// Dispatches to the decision procedure for the cone. Throws UnsupportedCone
/// for cones without one (BP/S of maps use the Choi matrix; nested AMP is
/// rejected).
MembershipVerdict decide_cone(const ConeSpec& cone, const LinearMap& phi, uint64_t seed,
                              double tol = 1e-8);

MembershipVerdict amp_membership(const LinearMap& phi, int k, const ConeSpec& cone_k,
                                 const ConeSpec& cone_l, int samples, uint64_t seed = 1);

}  // namespace choicones
