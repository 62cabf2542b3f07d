#include "choicones/linalg.hpp"

#include <cmath>

#include "choicones/random.hpp"
#include "doctest.h"

using namespace choicones;

namespace {

// Closed-form eigenvalues of a real symmetric 2x2 [[a,b],[b,c]].
std::pair<double, double> sym2_eigs(double a, double b, double c) {
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {mid - rad, mid + rad};
}

ComplexMatrix reconstruct_eig(const EigResult& e) {
  const int n = e.vectors.rows();
  ComplexMatrix m(n, n);
  for (int t = 0; t < n; ++t) {
    const ComplexMatrix v = e.vectors.column(t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += e.values[t] * v(i, 0) * std::conj(v(j, 0));
  }
  return m;
}

ComplexMatrix reconstruct_svd(const SvdResult& s) {
  ComplexMatrix d(static_cast<int>(s.singulars.size()), static_cast<int>(s.singulars.size()));
  for (size_t i = 0; i < s.singulars.size(); ++i)
    d(static_cast<int>(i), static_cast<int>(i)) = s.singulars[i];
  return s.u * d * s.v.adjoint();
}

}  // namespace

TEST_CASE("herm_eig on fixed 2x2 inputs") {
  const EigResult id2 = herm_eig(ComplexMatrix::identity(2));
  CHECK(std::abs(id2.values[0] - 1.0) < 1e-12);
  CHECK(std::abs(id2.values[1] - 1.0) < 1e-12);

  const auto [lo1, hi1] = sym2_eigs(0, 1, 0);
  const EigResult flip = herm_eig(ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(std::abs(flip.values[0] - lo1) < 1e-12);
  CHECK(std::abs(flip.values[1] - hi1) < 1e-12);

  const auto [lo2, hi2] = sym2_eigs(2, 1, 2);
  const EigResult m = herm_eig(ComplexMatrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(std::abs(m.values[0] - lo2) < 1e-12);
  CHECK(std::abs(m.values[1] - hi2) < 1e-12);
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::from_rows({{0, 1}, {0, 0}})), NotHermitian);
}

TEST_CASE("herm_eig reconstruction and unitarity on random matrices") {
  Rng rng(2024);
  double worst_rec = 0.0, worst_uni = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + rng.uniform_int(15);  // sizes 2..16
    const ComplexMatrix h = random_hermitian(n, rng);
    const EigResult e = herm_eig(h);
    worst_rec = std::max(worst_rec, distance_fro(reconstruct_eig(e), h));
    worst_uni = std::max(worst_uni,
                         distance_fro(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)));
    for (size_t t = 1; t < e.values.size(); ++t) CHECK(e.values[t - 1] <= e.values[t]);
  }
  CHECK(worst_rec < 1e-10);
  CHECK(worst_uni < 1e-10);
}

TEST_CASE("svd on fixed inputs") {
  const SvdResult id2 = svd(ComplexMatrix::identity(2));
  CHECK(std::abs(id2.singulars[0] - 1.0) < 1e-12);
  CHECK(std::abs(id2.singulars[1] - 1.0) < 1e-12);

  const SvdResult diag = svd(ComplexMatrix::from_rows({{3, 0}, {0, 0}}));
  CHECK(std::abs(diag.singulars[0] - 3.0) < 1e-12);
  CHECK(std::abs(diag.singulars[1]) < 1e-12);
  CHECK(distance_fro(diag.u.adjoint() * diag.u, ComplexMatrix::identity(2)) < 1e-10);

  // Brute-force oracle: singular values are square roots of the eigenvalues
  // of M†M, computed in closed form for the 2x2 case.
  const ComplexMatrix m = ComplexMatrix::from_rows({{1, 2}, {3, 4}});
  const ComplexMatrix mm = m.adjoint() * m;  // [[10,14],[14,20]]
  const auto [lo, hi] = sym2_eigs(mm(0, 0).real(), mm(0, 1).real(), mm(1, 1).real());
  const SvdResult sv = svd(m);
  CHECK(std::abs(sv.singulars[0] - std::sqrt(hi)) < 1e-10);
  CHECK(std::abs(sv.singulars[1] - std::sqrt(lo)) < 1e-10);
  CHECK(std::abs(sv.singulars[0] - 5.46499) < 1e-5);
  CHECK(std::abs(sv.singulars[1] - 0.36597) < 1e-5);
}

TEST_CASE("svd reconstruction, isometries, unitary singulars, zero matrix") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + rng.uniform_int(6);
    const int c = 1 + rng.uniform_int(6);
    const ComplexMatrix m = ginibre(r, c, rng);
    const SvdResult sv = svd(m);
    const int k = std::min(r, c);
    CHECK(distance_fro(reconstruct_svd(sv), m) < 1e-10);
    CHECK(distance_fro(sv.u.adjoint() * sv.u, ComplexMatrix::identity(k)) < 1e-10);
    CHECK(distance_fro(sv.v.adjoint() * sv.v, ComplexMatrix::identity(k)) < 1e-10);
    for (int t = 1; t < k; ++t) CHECK(sv.singulars[t - 1] >= sv.singulars[t]);
  }

  const ComplexMatrix u = random_unitary(5, rng);
  for (double s : svd(u).singulars) CHECK(std::abs(s - 1.0) < 1e-10);

  const SvdResult zero = svd(ComplexMatrix(3, 2));
  for (double s : zero.singulars) CHECK(s == 0.0);
  CHECK(distance_fro(zero.u.adjoint() * zero.u, ComplexMatrix::identity(2)) < 1e-12);

  // Rank-deficient input: zero singular values flattened, isometry completed.
  const ComplexMatrix g = ginibre(4, 2, rng);
  const SvdResult low = svd(g * g.adjoint() * Complex(1.0, 0.0));
  CHECK(low.rank() == 2);
  CHECK(low.singulars[2] == 0.0);
  CHECK(low.singulars[3] == 0.0);
  CHECK(distance_fro(low.u.adjoint() * low.u, ComplexMatrix::identity(4)) < 1e-10);
}

TEST_CASE("kron fixed cases and the mixed-product identity") {
  CHECK(distance_fro(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                     ComplexMatrix::identity(4)) == 0.0);

  // e_{11} ⊗ e_{22} with 1-based unit names = unit(0,0) ⊗ unit(1,1).
  const ComplexMatrix k =
      kron(ComplexMatrix::unit(2, 2, 0, 0), ComplexMatrix::unit(2, 2, 1, 1));
  CHECK(distance_fro(k, ComplexMatrix::unit(4, 4, 1, 1)) == 0.0);

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(2, 2, rng);
    const ComplexMatrix c = ginibre(2, 2, rng), d = ginibre(2, 2, rng);
    CHECK(distance_fro(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
  }
}

TEST_CASE("partial transpose") {
  Rng rng(13);
  const Dims d22{2, 2};

  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(2, 2, rng);
    CHECK(distance_fro(partial_transpose(kron(a, b), d22), kron(a.transpose(), b)) < 1e-12);
  }

  // Entrywise oracle: SWAP[(i,k),(j,l)] = δ_il δ_kj.
  ComplexMatrix swap(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          if (i == l && k == j) swap(i * 2 + k, j * 2 + l) = 1.0;
  CHECK(distance_fro(partial_transpose(omega_projector(2), d22), swap) == 0.0);

  const Dims d23{2, 3};
  const ComplexMatrix x = ginibre(6, 6, rng);
  CHECK(distance_fro(partial_transpose(partial_transpose(x, d23), d23), x) == 0.0);
  CHECK(std::abs(partial_transpose(x, d23).trace() - x.trace()) < 1e-12);

  const ComplexMatrix h = random_hermitian(6, rng);
  CHECK(partial_transpose(h, d23).is_hermitian(1e-12));

  CHECK_THROWS_AS(partial_transpose(ginibre(5, 5, rng), d23), DimMismatch);
}

TEST_CASE("partial trace") {
  Rng rng(17);
  const Dims d23{2, 3};

  CHECK(distance_fro(partial_trace(ComplexMatrix::identity(6), d23, Factor::A),
                     Complex(2, 0) * ComplexMatrix::identity(3)) == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
    CHECK(distance_fro(partial_trace(kron(a, b), d23, Factor::B), b.trace() * a) < 1e-12);
    CHECK(distance_fro(partial_trace(kron(a, b), d23, Factor::A), a.trace() * b) < 1e-12);
    const ComplexMatrix x = ginibre(6, 6, rng);
    CHECK(std::abs(partial_trace(x, d23, Factor::A).trace() - x.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(x, d23, Factor::B).trace() - x.trace()) < 1e-12);
  }

  // Block-diagonal extraction oracle for Tr_A |ω⟩⟨ω| at n = 3.
  const ComplexMatrix w = omega_projector(3);
  ComplexMatrix oracle(3, 3);
  for (int i = 0; i < 3; ++i) oracle += w.block(i, i, 3, 3);
  CHECK(distance_fro(partial_trace(w, {3, 3}, Factor::A), oracle) == 0.0);
  CHECK(distance_fro(oracle, ComplexMatrix::identity(3)) == 0.0);
}

TEST_CASE("vec and unvec") {
  const ComplexMatrix v1 = vec(ComplexMatrix::identity(2));
  CHECK(distance_fro(v1, omega_vector(2)) == 0.0);

  const ComplexMatrix v2 = vec(ComplexMatrix::unit(2, 2, 0, 1));
  CHECK(v2(1, 0) == Complex(1, 0));
  CHECK(std::abs(v2(0, 0)) + std::abs(v2(2, 0)) + std::abs(v2(3, 0)) == 0.0);

  const ComplexMatrix m = ComplexMatrix::from_rows({{1, 2}, {3, 4}});
  const ComplexMatrix v3 = vec(m);
  for (int t = 0; t < 4; ++t) CHECK(v3(t, 0) == Complex(t + 1, 0));
  CHECK(distance_fro(unvec(v3, {2, 2}), m) == 0.0);

  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix s = ginibre(3, 4, rng);
    CHECK(std::abs(vec_norm(vec(s)) - s.norm_fro()) < 1e-13);
  }
}

TEST_CASE("psd_project") {
  Rng rng(23);

  const ComplexMatrix p0 = random_psd(4, rng);
  CHECK(distance_fro(psd_project(p0), p0) < 1e-12 * std::max(1.0, p0.norm_fro()));

  const ComplexMatrix clipped = psd_project(ComplexMatrix::from_rows({{1, 0}, {0, -1}}));
  CHECK(distance_fro(clipped, ComplexMatrix::from_rows({{1, 0}, {0, 0}})) < 1e-14);

  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.uniform_int(5);
    const ComplexMatrix h = random_hermitian(n, rng);
    const ComplexMatrix p = psd_project(h);
    CHECK(min_eig(p) > -1e-12);
    // Optimality of eigenvalue clipping: ⟨H−P, P⟩ = 0.
    CHECK(std::abs(((h - p) * p).trace()) < 1e-8);
    // Idempotence.
    CHECK(distance_fro(psd_project(p), p) < 1e-10);
  }

  // Nonexpansiveness, checked pairwise.
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix x = random_hermitian(4, rng);
    const ComplexMatrix y = random_hermitian(4, rng);
    CHECK(distance_fro(psd_project(x), psd_project(y)) <= distance_fro(x, y) + 1e-12);
  }

  CHECK_THROWS_AS(psd_project(ComplexMatrix::from_rows({{0, 1}, {0, 0}})), NotHermitian);
}

TEST_CASE("flip_factors is an involution matching kron swap") {
  Rng rng(29);
  const Dims d{2, 3};
  const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
  CHECK(distance_fro(flip_factors(kron(a, b), d), kron(b, a)) < 1e-13);
  const ComplexMatrix x = ginibre(6, 6, rng);
  CHECK(distance_fro(flip_factors(flip_factors(x, d), {3, 2}), x) == 0.0);
}
