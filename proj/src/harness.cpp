#include "choicones/harness.hpp"

#include <algorithm>
#include <cmath>

#include "choicones/pairing.hpp"

namespace choicones {

namespace {

constexpr double kIdentityTol = 1e-10;

int pick_dim(const std::vector<int>& pool, Rng& rng) {
  return pool[rng.uniform_int(static_cast<int>(pool.size()))];
}

ComplexMatrix normalized_trace(ComplexMatrix m) {
  const double tr = m.trace().real();
  if (std::abs(tr) > 1e-12) m *= Complex(1.0 / tr, 0.0);
  return m;
}

LinearMap random_positive_map(int n, Rng& rng) {
  // cp ∘ φ_λ ∘ Ad_u with λ ≥ 1; positive but generically not decomposable
  // into anything simpler by construction.
  ConeSpec p;
  p.tag = ConeSpec::Tag::P;
  p.k = 1;
  return sample_cone_member(p, {n, n}, rng);
}

}  // namespace

void TrialReport::add(int index, double residual, bool failed_flag, std::string trial_note) {
  ++trials;
  if (failed_flag) ++failures;
  max_residual = std::max(max_residual, residual);
  records.push_back(TrialRecord{index, residual, failed_flag, std::move(trial_note)});
}

void TrialReport::count(Status s) {
  switch (s) {
    case Status::Member:
      ++member_count;
      break;
    case Status::NonMember:
      ++nonmember_count;
      break;
    case Status::Inconclusive:
      ++inconclusive_count;
      break;
  }
}

LinearMap random_cp(int a, int b, int kraus_count, uint64_t seed) {
  if (a < 1 || b < 1 || kraus_count < 1) throw DimMismatch("random_cp: counts must be positive");
  Rng rng(seed);
  return random_cp_map(a, b, kraus_count, rng);
}

LinearMap random_ppt_map(int n, uint64_t seed) {
  if (n < 2) throw DimMismatch("random_ppt_map: n must be at least 2");
  Rng rng(seed);
  const LinearMap cp = random_cp_map(n, n, 1 + rng.uniform_int(n * n), rng);
  ComplexMatrix c = project_to_ppt_cone(cp.choi, {n, n});
  const double tr = c.trace().real();
  if (tr < 1e-12) throw ProjectionFailed("random_ppt_map: projection collapsed to zero");
  c *= Complex(n / tr, 0.0);
  return map_from_choi({n, n}, std::move(c));
}

LinearMap random_unital_ppt_map(int n, uint64_t seed) {
  if (n < 2) throw DimMismatch("random_unital_ppt_map: n must be at least 2");
  Rng rng(seed);
  const Dims dims{n, n};
  ComplexMatrix x = random_cp_map(n, n, 1 + rng.uniform_int(n * n), rng).choi;
  const int ab = n * n;
  ComplexMatrix inc_p(ab, ab), inc_g(ab, ab);
  // Dykstra over PSD, Γ-PSD and the affine unitality slice Tr_A C = I.
  for (long it = 0; it < 20000; ++it) {
    ComplexMatrix t = x + inc_p;
    ComplexMatrix px = psd_project(t);
    inc_p = t - px;
    t = px + inc_g;
    ComplexMatrix gx = partial_transpose(psd_project(partial_transpose(t, dims)), dims);
    inc_g = t - gx;
    ComplexMatrix defect = ComplexMatrix::identity(n) - partial_trace(gx, dims, Factor::A);
    defect *= Complex(1.0 / n, 0.0);
    x = gx + kron(ComplexMatrix::identity(n), defect);
    if (it % 10 == 9) {
      const double dp = min_eig(x);
      const double dg = min_eig(partial_transpose(x, dims));
      const double du =
          distance_fro(partial_trace(x, dims, Factor::A), ComplexMatrix::identity(n));
      if (dp > -1e-10 && dg > -1e-10 && du < 1e-9) return map_from_choi(dims, x.hermitized());
    }
  }
  throw ProjectionFailed("random_unital_ppt_map: projection did not converge");
}

TrialReport verify_fundamental_identity(int trials, const std::vector<int>& dim_pool,
                                        uint64_t seed) {
  TrialReport rep;
  rep.statement = "fundamental";
  rep.seed = seed;
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a1 = pick_dim(dim_pool, rng), b1 = pick_dim(dim_pool, rng);
    const int a2 = pick_dim(dim_pool, rng), b2 = pick_dim(dim_pool, rng);
    const LinearMap f1 = random_hp_map(a1, b1, rng);
    const LinearMap f2 = random_hp_map(a2, b2, rng);
    const LinearMap sigma = random_hp_map(a1, a2, rng);
    const ComplexMatrix lhs = apply(tensor_product(f1, f2), sigma.choi);
    const ComplexMatrix rhs = compose(f2, compose(sigma, dual_map(f1))).choi;
    const double res = distance_fro(lhs, rhs);
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

namespace {

TrialReport duality_suite(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "duality";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3, 4};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng), c = pick_dim(pool, rng);
    const LinearMap phi = random_hp_map(a, b, rng);
    const LinearMap psi = random_hp_map(b, c, rng);
    const LinearMap sigma = random_hp_map(a, c, rng);
    const LinearMap tau = random_hp_map(a, b, rng);

    const double direct = pair_maps(compose(psi, phi), sigma);
    double res = std::abs(direct - pair_maps(phi, compose(dual_map(psi), sigma)));
    res = std::max(res, std::abs(direct - pair_maps(psi, compose(sigma, dual_map(phi)))));
    res = std::max(res, std::abs(pair_maps(phi, tau) - pair_maps(dual_map(phi), dual_map(tau))));
    const ComplexMatrix comp_dual = dual_map(compose(psi, phi)).choi;
    const ComplexMatrix dual_comp = compose(dual_map(phi), dual_map(psi)).choi;
    res = std::max(res, distance_fro(comp_dual, dual_comp));
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

TrialReport choi_adj_suite(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "choi-adj";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3, 4};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng);
    const ComplexMatrix s = ginibre(a, b, rng);
    const LinearMap direct = ad_map(s);
    const LinearMap block = choi_of_fn(
        {a, b}, [&](const ComplexMatrix& e) { return s.adjoint() * e * s; });
    const double res = distance_fro(direct.choi, block.choi);
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

TrialReport choi_var_suite(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "choi-var";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3, 4};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng);
    const LinearMap phi = random_hp_map(a, b, rng);
    const ComplexMatrix s = ginibre(a, a, rng);
    const ComplexMatrix via_compose = gen_choi(phi, s);
    const ComplexMatrix via_ampliation = apply_on_factor_b(phi, ad_map(s).choi, a);
    double res = distance_fro(via_compose, via_ampliation);
    res = std::max(res, distance_fro(gen_choi(phi, ComplexMatrix::identity(a)), phi.choi));
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

TrialReport schmidt_suite(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "schmidt";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3, 4};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng);
    const int k = 1 + rng.uniform_int(std::min(a, b));
    std::vector<ComplexMatrix> xs, ys;
    ComplexMatrix zeta(a * b, 1);
    for (int i = 0; i < k; ++i) {
      xs.push_back(ginibre(a, 1, rng));
      ys.push_back(ginibre(b, 1, rng));
      for (int p = 0; p < a; ++p)
        for (int q = 0; q < b; ++q) zeta(p * b + q, 0) += xs[i](p, 0) * ys[i](q, 0);
    }
    const LinearMap phi = random_hp_map(a, b, rng);
    const double lhs = pair_state_map(outer(zeta, zeta), phi, 1e-7);

    ComplexMatrix xi(k * a, 1), eta(k * b, 1);
    for (int i = 0; i < k; ++i) {
      for (int p = 0; p < a; ++p) xi(i * a + p, 0) = xs[i](p, 0);
      for (int q = 0; q < b; ++q) eta(i * b + q, 0) = ys[i](q, 0);
    }
    const double rhs = pair_mat(outer(eta, eta), apply_on_factor_b(phi, outer(xi, xi), k), 1e-7);
    const double res = std::abs(lhs - rhs);
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

TrialReport pairing_suite(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "pairing";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3, 4};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng);
    const ComplexMatrix am = random_hermitian(a, rng);
    const ComplexMatrix bm = random_hermitian(b, rng);
    const LinearMap phi = random_hp_map(a, b, rng);
    const double via_choi = pair_state_map(kron(am, bm), phi);
    const double direct = pair_mat(bm, apply(phi, am));
    const double res = std::abs(via_choi - direct);
    rep.add(t, res, res > kIdentityTol);
  }
  return rep;
}

}  // namespace

std::vector<std::string> identity_suite_names() {
  return {"fundamental", "duality", "choi-adj", "choi-var", "schmidt", "pairing"};
}

TrialReport run_identity_suite(const std::string& name, int trials, uint64_t seed) {
  if (name == "fundamental") return verify_fundamental_identity(trials, {2, 3, 4}, seed);
  if (name == "duality") return duality_suite(trials, seed);
  if (name == "choi-adj") return choi_adj_suite(trials, seed);
  if (name == "choi-var") return choi_var_suite(trials, seed);
  if (name == "schmidt") return schmidt_suite(trials, seed);
  if (name == "pairing") return pairing_suite(trials, seed);
  throw ParseError("unknown identity suite '" + name + "'");
}

TrialReport verify_ampliation_criteria(int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "ampliation";
  rep.seed = seed;
  Rng master(seed);
  const std::vector<int> pool{2, 3};
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const int a = pick_dim(pool, rng), b = pick_dim(pool, rng);
    const Dims dims{a, b};

    // Decomposable map against a PPT state: (φ ⊗ id_B)(ρ) must be PSD.
    ConeSpec dec;
    dec.tag = ConeSpec::Tag::DEC;
    const LinearMap phi = sample_cone_member(dec, dims, rng);
    ComplexMatrix rho = normalized_trace(
        project_to_ppt_cone(random_psd(a * b, rng).hermitized(), dims));
    double res = std::max(0.0, -min_eig(apply_on_factor_a(phi, rho, b), 1e-7));
    rep.add(t * 2, res, res > 1e-8, "dec vs ppt");

    // k-positive map against an S_k state.
    const int k = 1 + rng.uniform_int(std::min(a, b));
    ConeSpec pk;
    pk.tag = ConeSpec::Tag::P;
    pk.k = k;
    const LinearMap psi = sample_cone_member(pk, dims, rng);
    const ComplexMatrix sk = random_sk_state(dims, k, 2 + rng.uniform_int(4), rng);
    res = std::max(0.0, -min_eig(apply_on_factor_a(psi, sk, b), 1e-7));
    rep.add(t * 2 + 1, res, res > 1e-8, "p:" + std::to_string(k) + " vs s:" + std::to_string(k));
  }
  return rep;
}

TrialReport ppt_square_experiment(int n, int trials, const std::string& statement, uint64_t seed) {
  if (n < 2) throw DimMismatch("ppt_square_experiment: n must be at least 2");
  static const std::vector<std::string> known{"i", "ii", "iii", "iv", "v", "vi", "vii"};
  if (std::find(known.begin(), known.end(), statement) == known.end())
    throw ParseError("ppt_square_experiment: statement must be one of i..vii");

  TrialReport rep;
  rep.statement = "ppt-square:" + statement;
  rep.seed = seed;
  const Dims dims{n, n};
  const bool assertable = n <= 3 && (statement == "i" || statement == "ii" ||
                                     statement == "iii" || statement == "iv" || statement == "v");
  Rng master(seed);
  ConeSpec ppt;
  ppt.tag = ConeSpec::Tag::PPT;

  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    MembershipVerdict verdict;
    double residual = 0.0;
    std::string note;

    if (statement == "i" || statement == "iv" || statement == "v") {
      const LinearMap f1 = sample_cone_member(ppt, dims, rng);
      const LinearMap f2 = sample_cone_member(ppt, dims, rng);
      ComplexMatrix input;
      if (statement == "i") {
        input = omega_projector(n);
      } else if (statement == "iv") {
        input = random_psd(n * n, rng).hermitized();
      } else {
        input = (random_psd(n * n, rng) +
                 partial_transpose(random_psd(n * n, rng), dims)).hermitized();
      }
      const ComplexMatrix image = normalized_trace(apply(tensor_product(f1, f2), input));
      SeparabilityOptions opts;
      opts.seed = rng.next();
      verdict = is_separable(image.hermitized(), dims, opts);
      residual = verdict.diagnostics.value;
      note = "s:1 " + std::string(to_string(verdict.status));
    } else if (statement == "ii" || statement == "iii") {
      const LinearMap pos = random_positive_map(n, rng);
      const LinearMap pm = sample_cone_member(ppt, dims, rng);
      const LinearMap& f1 = statement == "ii" ? pos : pm;
      const LinearMap& f2 = statement == "ii" ? pm : pos;
      const ComplexMatrix image = apply(tensor_product(f1, f2), omega_projector(n));
      DecOptions opts;
      opts.seed = rng.next();
      verdict = is_decomposable(map_from_choi(dims, image.hermitized()), opts);
      residual = verdict.diagnostics.value;
      note = "dec " + std::string(to_string(verdict.status));
    } else {
      const LinearMap f1 = sample_cone_member(ppt, dims, rng);
      const LinearMap f2 = sample_cone_member(ppt, dims, rng);
      const ComplexMatrix input = random_positive_map(n, rng).choi;  // BP_1 generator
      const ComplexMatrix image = apply(tensor_product(f1, f2), input).hermitized();
      const double mp = min_eig(image, 1e-7);
      const double mg = statement == "vii"
                            ? min_eig(partial_transpose(image, dims), 1e-7)
                            : 0.0;
      const double defect = std::min(mp, mg);
      verdict.status = defect >= -1e-8 ? Status::Member : Status::NonMember;
      residual = std::max(0.0, -defect);
      note = (statement == "vi" ? "positive " : "ppt-state ") +
             std::string(to_string(verdict.status));
    }

    rep.count(verdict.status);
    const bool failed = assertable && verdict.status == Status::NonMember;
    rep.add(t, residual, failed, note);
  }
  if (!assertable)
    rep.note = "statement reported without assertion (open or block-positive-input variant)";
  return rep;
}

TrialReport ppt_iteration_experiment(int n, int powers, int trials, uint64_t seed) {
  TrialReport rep;
  rep.statement = "ppt-iterate";
  rep.seed = seed;
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<uint64_t>(t));
    const LinearMap phi = random_unital_ppt_map(n, rng.next());
    LinearMap power = phi;
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int m = 1; m <= powers; ++m) {
      if (m > 1) power = compose(phi, power);
      SeparabilityOptions opts;
      opts.seed = master.split(1000 + static_cast<uint64_t>(t * powers + m)).next();
      opts.witness_samples = 0;  // distance diagnostic only, no witness hunt
      opts.refine_rounds = 12;
      MembershipVerdict sep = is_separable(normalized_trace(power.choi), {n, n}, opts);
      const double dist = sep.status == Status::Member ? sep.schmidt_certificate->residual
                                                       : sep.diagnostics.value;
      if (dist > previous + 1e-9) monotone = false;
      previous = dist;
      rep.add(t * powers + m - 1, dist, false,
              "m=" + std::to_string(m) + " " + to_string(sep.status));
    }
    if (!monotone) rep.note += "trial " + std::to_string(t) + " not monotone; ";
  }
  if (rep.note.empty()) rep.note = "fit distances nonincreasing on all trials (diagnostic)";
  return rep;
}

TrialReport lattice_probe(int k, int l, int p, int q) {
  if (k < 1 || l < 1 || p < 1 || q < 1) throw BadK("lattice_probe: indices must be positive");
  TrialReport rep;
  rep.statement = "lattice";
  const int n = std::max(std::max(k, l), std::max(p, q));
  if (l > n || p > n) throw BadK("lattice_probe: indices exceed ambient dimension");

  ComplexMatrix s(n, n);
  for (int i = 0; i < l; ++i) s(i, i) = 1.0;
  // ρ = Σ_{i,j≤p} e_ij ⊗ e_ij ∈ M_p ⊗ M_n.
  ComplexMatrix rho(p * n, p * n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) rho.add_block(i, j, ComplexMatrix::unit(n, n, i, j));

  const ComplexMatrix image = apply_on_factor_b(ad_map(s), rho, p);
  const EigResult eig = herm_eig(image.hermitized(), 1e-8);
  const double top = eig.values.back();
  int eigen_rank = 0;
  for (double lam : eig.values)
    if (top > 0.0 && lam > 1e-9 * top) ++eigen_rank;

  int rank = 0;
  if (eigen_rank == 1) {
    rank = schmidt_rank(eig.vectors.column(p * n - 1), {p, n});
  } else if (eigen_rank > 1) {
    rank = -1;  // image is not a pure-state projector; construction violated
  }

  const int expected = std::min(l, p);
  const bool failed = rank != expected;
  rep.add(0, std::abs(rank - expected), failed,
          "rank=" + std::to_string(rank) + " expected=" + std::to_string(expected) +
              (expected <= q ? " (consistent with target S_q)" : " (exceeds target S_q)"));
  rep.note = "k=" + std::to_string(k) + " l=" + std::to_string(l) + " p=" + std::to_string(p) +
             " q=" + std::to_string(q);
  return rep;
}

}  // namespace choicones
