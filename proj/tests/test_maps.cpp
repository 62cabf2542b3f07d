#include "choicones/maps.hpp"

#include <cmath>

#include "choicones/random.hpp"
#include "doctest.h"

using namespace choicones;

namespace {

// Brute-force blockwise Choi oracle: C = Σ e_ij ⊗ image(e_ij).
ComplexMatrix blockwise_choi(Dims d, const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
  ComplexMatrix c(d.total(), d.total());
  for (int i = 0; i < d.a; ++i)
    for (int j = 0; j < d.a; ++j)
      c.set_block(i, j, f(ComplexMatrix::unit(d.a, d.a, i, j)));
  return c;
}

}  // namespace

TEST_CASE("choi_of builds the expected fixed Choi matrices") {
  const LinearMap id2 = choi_of_fn({2, 2}, [](const ComplexMatrix& x) { return x; });
  ComplexMatrix expect(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
  CHECK(distance_fro(id2.choi, expect) == 0.0);
  CHECK(distance_fro(id2.choi, identity_map(2).choi) == 0.0);

  const ComplexMatrix swap =
      blockwise_choi({2, 2}, [](const ComplexMatrix& x) { return x.transpose(); });
  CHECK(distance_fro(transpose_map(2).choi, swap) == 0.0);

  const double lambda = 1.7;
  const ComplexMatrix tom = blockwise_choi({3, 3}, [&](const ComplexMatrix& x) {
    ComplexMatrix y = Complex(lambda, 0) * x.trace() * ComplexMatrix::identity(3);
    y -= x;
    return y;
  });
  CHECK(distance_fro(tomiyama_map(lambda, 3).choi, tom) < 1e-12);
}

TEST_CASE("apply matches direct formulas") {
  Rng rng(31);
  const ComplexMatrix x = ginibre(2, 2, rng);
  CHECK(distance_fro(apply(identity_map(2), x), x) < 1e-13);

  const ComplexMatrix image = apply(tomiyama_map(2, 2), ComplexMatrix::unit(2, 2, 0, 0));
  CHECK(distance_fro(image, ComplexMatrix::from_rows({{1, 0}, {0, 2}})) < 1e-13);

  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix s = ginibre(3, 2, rng);
    const ComplexMatrix y = ginibre(3, 3, rng);
    CHECK(distance_fro(apply(ad_map(s), y), s.adjoint() * y * s) < 1e-12);
  }

  CHECK_THROWS_AS(apply(identity_map(2), ginibre(3, 3, rng)), DimMismatch);
}

TEST_CASE("ad_map Choi matrices") {
  CHECK(distance_fro(ad_map(ComplexMatrix::identity(2)).choi, omega_projector(2)) == 0.0);

  const ComplexMatrix e11 = ComplexMatrix::unit(2, 2, 0, 0);
  CHECK(distance_fro(ad_map(e11).choi, kron(e11, e11)) == 0.0);

  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix s = ginibre(3, 2, rng);
    const ComplexMatrix oracle = blockwise_choi(
        {3, 2}, [&](const ComplexMatrix& e) { return s.adjoint() * e * s; });
    CHECK(distance_fro(ad_map(s).choi, oracle) < 1e-12);
  }
}

TEST_CASE("compose") {
  Rng rng(41);
  const LinearMap phi = random_hp_map(2, 3, rng);
  CHECK(distance_fro(compose(identity_map(3), phi).choi, phi.choi) < 1e-13);
  CHECK(distance_fro(compose(transpose_map(2), transpose_map(2)).choi, identity_map(2).choi) <
        1e-13);

  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix s = ginibre(2, 3, rng);
    const ComplexMatrix t = ginibre(3, 4, rng);
    CHECK(distance_fro(compose(ad_map(t), ad_map(s)).choi, ad_map(s * t).choi) < 1e-12);
  }

  CHECK_THROWS_AS(compose(identity_map(2), identity_map(3)), DimMismatch);
}

TEST_CASE("choi_of and apply round trip exactly") {
  Rng rng(43);
  const LinearMap phi = random_hp_map(3, 2, rng);
  const LinearMap rebuilt =
      choi_of({3, 2}, [&](int i, int j) { return choi_block(phi, i, j); });
  CHECK(distance_fro(rebuilt.choi, phi.choi) == 0.0);

  const LinearMap from_apply = choi_of_fn({3, 2}, [&](const ComplexMatrix& e) {
    return apply(phi, e);
  });
  CHECK(distance_fro(from_apply.choi, phi.choi) < 1e-13);
}

TEST_CASE("tensor_product") {
  CHECK(distance_fro(tensor_product(identity_map(2), identity_map(3)).choi,
                     identity_map(6).choi) == 0.0);

  Rng rng(47);
  const LinearMap phi = random_hp_map(2, 3, rng);
  const ComplexMatrix lifted =
      apply(tensor_product(identity_map(2), phi), omega_projector(2));
  CHECK(distance_fro(lifted, phi.choi) < 1e-12);
  CHECK(distance_fro(apply_on_factor_b(phi, omega_projector(2), 2), phi.choi) < 1e-12);
}

TEST_CASE("fundamental identity on random triples") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int a1 = 2 + rng.uniform_int(2), b1 = 2 + rng.uniform_int(2);
    const int a2 = 2 + rng.uniform_int(2), b2 = 2 + rng.uniform_int(2);
    const LinearMap f1 = random_hp_map(a1, b1, rng);
    const LinearMap f2 = random_hp_map(a2, b2, rng);
    const LinearMap sigma = random_hp_map(a1, a2, rng);

    const ComplexMatrix lhs = apply(tensor_product(f1, f2), sigma.choi);
    const ComplexMatrix rhs = compose(f2, compose(sigma, dual_map(f1))).choi;
    CHECK(distance_fro(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("dual_map") {
  CHECK(distance_fro(dual_map(identity_map(3)).choi, identity_map(3).choi) < 1e-13);

  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix s = ginibre(2, 3, rng);
    CHECK(distance_fro(dual_map(ad_map(s)).choi, ad_map(s.transpose()).choi) < 1e-12);

    const LinearMap phi = random_hp_map(2, 3, rng);
    CHECK(distance_fro(dual_map(dual_map(phi)).choi, phi.choi) == 0.0);

    // Defining identity ⟨φ*(y), x⟩ = ⟨y, φ(x)⟩ under ⟨u,v⟩ = Tr(uvᵗ).
    const ComplexMatrix x = ginibre(2, 2, rng);
    const ComplexMatrix y = ginibre(3, 3, rng);
    const Complex lhs = (apply(dual_map(phi), y) * x.transpose()).trace();
    const Complex rhs = (y * apply(phi, x).transpose()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("gen_choi") {
  Rng rng(61);
  const LinearMap phi = random_hp_map(3, 2, rng);

  CHECK(distance_fro(gen_choi(phi, ComplexMatrix::identity(3)), phi.choi) < 1e-12);

  const ComplexMatrix s = ginibre(3, 3, rng);
  CHECK(distance_fro(gen_choi(identity_map(3), s), ad_map(s).choi) < 1e-12);

  // Both evaluation routes: (id ⊗ φ)(C_{Ad_s}) and C_{φ∘Ad_s}.
  const ComplexMatrix via_ampliation = apply_on_factor_b(phi, ad_map(s).choi, 3);
  CHECK(distance_fro(gen_choi(phi, s), via_ampliation) < 1e-10);

  CHECK_THROWS_AS(gen_choi(phi, ginibre(2, 2, rng)), DimMismatch);
}

TEST_CASE("transpose_compose") {
  CHECK(distance_fro(transpose_compose(identity_map(2)).choi, transpose_map(2).choi) == 0.0);

  Rng rng(67);
  const LinearMap phi = random_hp_map(3, 3, rng);
  CHECK(distance_fro(transpose_compose(transpose_compose(phi)).choi, phi.choi) == 0.0);
  // Oracle: explicit composition with the transpose map.
  CHECK(distance_fro(transpose_compose(phi).choi, compose(phi, transpose_map(3)).choi) < 1e-12);
}

TEST_CASE("apply_on_factor helpers agree with tensor_product") {
  Rng rng(71);
  const LinearMap psi = random_hp_map(2, 3, rng);
  const ComplexMatrix x = random_hermitian(6, rng);  // M_3 ⊗ M_2 for factor-a path

  const ComplexMatrix via_tensor_b =
      apply(tensor_product(identity_map(3), psi), random_hermitian(6, rng));
  (void)via_tensor_b;

  const ComplexMatrix xb = random_hermitian(6, rng);  // M_3 ⊗ M_2
  CHECK(distance_fro(apply_on_factor_b(psi, xb, 3),
                     apply(tensor_product(identity_map(3), psi), xb)) < 1e-12);

  const ComplexMatrix xa = random_hermitian(6, rng);  // M_2 ⊗ M_3
  CHECK(distance_fro(apply_on_factor_a(psi, xa, 3),
                     apply(tensor_product(psi, identity_map(3)), xa)) < 1e-12);
  (void)x;
}

TEST_CASE("map_from_kraus matches a sum of ad maps") {
  Rng rng(73);
  std::vector<ComplexMatrix> ops;
  ComplexMatrix sum(6, 6);
  for (int t = 0; t < 3; ++t) {
    ops.push_back(ginibre(2, 3, rng));
    sum += ad_map(ops.back()).choi;
  }
  CHECK(distance_fro(map_from_kraus(ops).choi, sum) == 0.0);
  CHECK_THROWS_AS(map_from_kraus({}), DimMismatch);
}

TEST_CASE("MapExpr families realize to their formula Choi matrices") {
  CHECK(distance_fro(MapExpr::identity(3).realize().choi, identity_map(3).choi) == 0.0);
  CHECK(distance_fro(MapExpr::transpose(3).realize().choi,
                     blockwise_choi({3, 3}, [](const ComplexMatrix& x) { return x.transpose(); })) <
        1e-12);
  CHECK(distance_fro(MapExpr::trace(2).realize().choi, ComplexMatrix::identity(4)) == 0.0);

  const LinearMap tom = MapExpr::tomiyama(2.5, 3).realize();
  ComplexMatrix formula = Complex(2.5, 0) * ComplexMatrix::identity(9);
  formula -= omega_projector(3);
  CHECK(distance_fro(tom.choi, formula) < 1e-12);

  Rng rng(79);
  const ComplexMatrix s = ginibre(2, 3, rng);
  CHECK(distance_fro(MapExpr::ad(s).realize().choi,
                     outer(vec(s.conjugate()), vec(s.conjugate()))) < 1e-12);
}

TEST_CASE("hermiticity_preserving detects Hermitian Choi matrices") {
  Rng rng(83);
  CHECK(hermiticity_preserving(random_hp_map(3, 2, rng)));
  LinearMap raw{{2, 2}, ginibre(4, 4, rng)};
  CHECK_FALSE(hermiticity_preserving(raw));
}
