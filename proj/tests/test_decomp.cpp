#include "choicones/decomp.hpp"

#include <cmath>

#include "choicones/pairing.hpp"
#include "choicones/random.hpp"
#include "doctest.h"

using namespace choicones;

TEST_CASE("kraus of a rank-one map recovers the operator up to phase") {
  Rng rng(211);
  const ComplexMatrix s = ginibre(3, 2, rng);
  const KrausDecomposition kd = kraus(ad_map(s));
  REQUIRE(kd.operators.size() == 1);
  // Compare projectors to quotient out the global phase.
  CHECK(distance_fro(ad_map(kd.operators[0]).choi, ad_map(s).choi) < 1e-10);
}

TEST_CASE("kraus of the identity map") {
  const KrausDecomposition kd = kraus(identity_map(2));
  REQUIRE(kd.operators.size() == 1);
  CHECK(distance_fro(ad_map(kd.operators[0]).choi, omega_projector(2)) < 1e-12);
  // The single operator is the identity up to phase.
  const Complex z = kd.operators[0](0, 0);
  CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
  CHECK(distance_fro(kd.operators[0], z * ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("kraus round trip on random CP maps") {
  Rng rng(223);
  for (int trial = 0; trial < 25; ++trial) {
    const int a = 2 + rng.uniform_int(3), b = 2 + rng.uniform_int(3);
    const int count = 1 + rng.uniform_int(4);
    const LinearMap phi = random_cp_map(a, b, count, rng);
    const KrausDecomposition kd = kraus(phi);
    CHECK(static_cast<int>(kd.operators.size()) <= std::min(count, a * b));
    CHECK(distance_fro(map_from_kraus(kd.operators).choi, phi.choi) < 1e-10);

    // Fixed point: decomposing the rebuilt map yields the same Choi matrix.
    const KrausDecomposition again = kraus(map_from_kraus(kd.operators));
    CHECK(distance_fro(map_from_kraus(again.operators).choi, phi.choi) < 1e-10);
  }
}

TEST_CASE("kraus rejects non-PSD Choi matrices") {
  CHECK_THROWS_AS(kraus(transpose_map(2)), NotPsd);
}

TEST_CASE("schmidt fixed cases") {
  const SchmidtDecomposition omega = schmidt(omega_vector(2), {2, 2});
  CHECK(omega.rank == 2);
  REQUIRE(omega.coefficients.size() >= 2);
  CHECK(std::abs(omega.coefficients[0] - 1.0) < 1e-12);
  CHECK(std::abs(omega.coefficients[1] - 1.0) < 1e-12);

  ComplexMatrix prod(4, 1);
  prod(1, 0) = 1.0;  // |0⟩|1⟩
  CHECK(schmidt(prod, {2, 2}).rank == 1);

  CHECK_THROWS_AS(schmidt(ComplexMatrix(4, 1), {2, 2}), ZeroVector);
}

TEST_CASE("schmidt rank equals matrix rank of the reshaping") {
  Rng rng(227);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = 2 + rng.uniform_int(3), b = 2 + rng.uniform_int(3);
    const int r = 1 + rng.uniform_int(std::min(a, b));
    const ComplexMatrix s = ginibre(a, r, rng) * ginibre(r, b, rng);
    CHECK(schmidt_rank(vec(s), {a, b}) == svd(s).rank());
    CHECK(schmidt_rank(vec(s), {a, b}) == r);

    const SchmidtDecomposition sd = schmidt(vec(s), {a, b});
    CHECK(distance_fro(sd.reconstruct(), vec(s)) < 1e-10);
    // Orthonormal factor families.
    CHECK(distance_fro(sd.left_vectors.adjoint() * sd.left_vectors,
                       ComplexMatrix::identity(static_cast<int>(sd.coefficients.size()))) < 1e-10);
    CHECK(distance_fro(sd.right_vectors.adjoint() * sd.right_vectors,
                       ComplexMatrix::identity(static_cast<int>(sd.coefficients.size()))) < 1e-10);
  }
}

TEST_CASE("truncate_schmidt keeps the leading part") {
  Rng rng(229);
  const Dims d{4, 4};
  const ComplexMatrix z = ginibre(16, 1, rng);
  const ComplexMatrix t2 = truncate_schmidt(z, d, 2);
  CHECK(schmidt_rank(t2, d) <= 2);
  // Best rank-2 approximation is closer than any further truncation.
  CHECK(distance_fro(truncate_schmidt(z, d, 4), z) < 1e-10);
  CHECK(distance_fro(t2, z) <= distance_fro(truncate_schmidt(z, d, 1), z) + 1e-12);
}

TEST_CASE("holevo form of a rank-one ad map") {
  Rng rng(233);
  const ComplexMatrix xi = random_unit_vector(3, rng);   // left factor in C^a
  const ComplexMatrix eta = random_unit_vector(2, rng);  // right factor in C^b

  // C_{Ad_s} for s = |ξ̄⟩⟨η... the product certificate of the rank-one map:
  // C = |x⟩⟨x| ⊗ |y⟩⟨y| with x = ξ, y = η.
  ProductCertificate cert;
  cert.weights = {1.0};
  cert.left = {xi};
  cert.right = {eta};
  const ComplexMatrix s = xi.conjugate() * eta.conjugate().transpose();  // a×b
  const LinearMap phi = ad_map(s);
  REQUIRE(distance_fro(cert.reconstruct({3, 2}), phi.choi) < 1e-12);

  const HolevoForm hf = holevo_form(cert, phi);
  REQUIRE(hf.pairs.size() == 1);

  // Paper form: Ad_s(a) = ⟨a, v⟩ u with u = |η⟩⟨η| scaled, v = |ξ⟩⟨ξ|.
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix x = ginibre(3, 3, rng);
    CHECK(distance_fro(hf.apply(x), apply(phi, x)) < 1e-10);
  }
}

TEST_CASE("holevo form of the trace map from the product-unit certificate") {
  // C_{tr(·)I} = I ⊗ I expands over the canonical product basis.
  const int n = 2;
  ProductCertificate cert;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexMatrix x(n, 1), y(n, 1);
      x(i, 0) = 1.0;
      y(j, 0) = 1.0;
      cert.weights.push_back(1.0);
      cert.left.push_back(x);
      cert.right.push_back(y);
    }
  const LinearMap tr = trace_map(n);
  const HolevoForm hf = holevo_form(cert, tr);
  CHECK(hf.pairs.size() == static_cast<size_t>(n * n));

  Rng rng(239);
  const ComplexMatrix x = ginibre(n, n, rng);
  CHECK(distance_fro(hf.apply(x), apply(tr, x)) < 1e-10);
}

TEST_CASE("holevo form reconstructs random 1-superpositive maps") {
  Rng rng(241);
  for (int trial = 0; trial < 10; ++trial) {
    ProductCertificate cert;
    ComplexMatrix choi(6, 6);
    for (int t = 0; t < 5; ++t) {
      const double w = rng.uniform(0.1, 1.0);
      const ComplexMatrix x = random_unit_vector(2, rng);
      const ComplexMatrix y = random_unit_vector(3, rng);
      cert.weights.push_back(w);
      cert.left.push_back(x);
      cert.right.push_back(y);
      const ComplexMatrix z = kron(x, y);
      choi += Complex(w, 0) * outer(z, z);
    }
    const LinearMap phi = map_from_choi({2, 3}, choi.hermitized());
    const HolevoForm hf = holevo_form(cert, phi);
    const ComplexMatrix probe = random_hermitian(2, rng);
    CHECK(distance_fro(hf.apply(probe), apply(phi, probe)) < 1e-8);
  }
}

TEST_CASE("holevo form rejects bad certificates") {
  ProductCertificate cert;
  cert.weights = {1.0};
  ComplexMatrix x(1, 1), y(1, 1);
  x(0, 0) = 1.0;
  y(0, 0) = 1.0;
  cert.left = {x};
  cert.right = {y};
  const LinearMap off = map_from_choi({1, 1}, ComplexMatrix::from_rows({{5.0}}));
  CHECK_THROWS_AS(holevo_form(cert, off), BadCertificate);
}

TEST_CASE("factor_ad fixed cases") {
  Rng rng(257);

  // a = s: the factorization reduces to the identity on the singular support.
  const ComplexMatrix s0 = ginibre(3, 3, rng);
  const auto [x0, y0] = factor_ad(s0, s0);
  const LinearMap direct0 = ad_map(s0);
  const LinearMap composed0 = compose(ad_map(x0), compose(ad_map(s0), ad_map(y0)));
  CHECK(distance_fro(direct0.choi, composed0.choi) < 1e-10);

  // a = e_11, s = I_2.
  const ComplexMatrix e11 = ComplexMatrix::unit(2, 2, 0, 0);
  const auto [x1, y1] = factor_ad(e11, ComplexMatrix::identity(2));
  const LinearMap composed1 =
      compose(ad_map(x1), compose(ad_map(ComplexMatrix::identity(2)), ad_map(y1)));
  CHECK(distance_fro(ad_map(e11).choi, composed1.choi) < 1e-10);

  // Rank-2 a through rank-3 s in M_{4,4}.
  const ComplexMatrix a2 = ginibre(4, 2, rng) * ginibre(2, 4, rng);
  const ComplexMatrix s3 = ginibre(4, 3, rng) * ginibre(3, 4, rng);
  const auto [x2, y2] = factor_ad(a2, s3);
  const LinearMap composed2 = compose(ad_map(x2), compose(ad_map(s3), ad_map(y2)));
  CHECK(distance_fro(ad_map(a2).choi, composed2.choi) < 1e-10);
}

TEST_CASE("factor_ad across all rank pairs up to 4") {
  Rng rng(263);
  for (int a_dim = 2; a_dim <= 4; ++a_dim) {
    const int b_dim = a_dim;
    for (int k = 1; k <= std::min(a_dim, b_dim); ++k)
      for (int ell = 1; ell <= k; ++ell)
        for (int inst = 0; inst < 10; ++inst) {
          const ComplexMatrix s = ginibre(a_dim, k, rng) * ginibre(k, b_dim, rng);
          const ComplexMatrix a = ginibre(a_dim, ell, rng) * ginibre(ell, b_dim, rng);
          const auto [x, y] = factor_ad(a, s);
          const LinearMap composed = compose(ad_map(x), compose(ad_map(s), ad_map(y)));
          CHECK(distance_fro(ad_map(a).choi, composed.choi) < 1e-10);
        }
  }
}

TEST_CASE("factor_ad rejects rank(a) > rank(s)") {
  Rng rng(269);
  const ComplexMatrix a = ginibre(3, 3, rng);  // full rank a.s.
  const ComplexMatrix s = ginibre(3, 1, rng) * ginibre(1, 3, rng);
  CHECK_THROWS_AS(factor_ad(a, s), RankTooLarge);
}
