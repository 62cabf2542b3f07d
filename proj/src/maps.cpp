#include "choicones/maps.hpp"

#include <utility>

namespace choicones {

LinearMap map_from_choi(Dims dims, ComplexMatrix choi) {
  if (dims.a < 1 || dims.b < 1) throw DimMismatch("map_from_choi: dimensions must be at least 1");
  if (choi.rows() != dims.total() || choi.cols() != dims.total())
    throw DimMismatch("map_from_choi: Choi matrix size does not match dims");
  return LinearMap{dims, std::move(choi)};
}

LinearMap choi_of(Dims dims, const std::function<ComplexMatrix(int, int)>& unit_image) {
  ComplexMatrix c(dims.total(), dims.total());
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.a; ++j) {
      ComplexMatrix blk = unit_image(i, j);
      if (blk.rows() != dims.b || blk.cols() != dims.b)
        throw DimMismatch("choi_of: callback image is not b×b");
      c.set_block(i, j, blk);
    }
  return LinearMap{dims, std::move(c)};
}

LinearMap choi_of_fn(Dims dims, const std::function<ComplexMatrix(const ComplexMatrix&)>& fn) {
  return choi_of(dims, [&](int i, int j) { return fn(ComplexMatrix::unit(dims.a, dims.a, i, j)); });
}

ComplexMatrix apply(const LinearMap& phi, const ComplexMatrix& x) {
  if (x.rows() != phi.dims.a || x.cols() != phi.dims.a)
    throw DimMismatch("apply: argument is not a×a");
  const int a = phi.dims.a, b = phi.dims.b;
  ComplexMatrix y(b, b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      const Complex w = x(i, j);
      if (w == Complex{}) continue;
      for (int r = 0; r < b; ++r)
        for (int c = 0; c < b; ++c) y(r, c) += w * phi.choi(i * b + r, j * b + c);
    }
  return y;
}

ComplexMatrix choi_block(const LinearMap& phi, int i, int j) {
  return phi.choi.block(i, j, phi.dims.b, phi.dims.b);
}

bool hermiticity_preserving(const LinearMap& phi, double tol) {
  return phi.choi.is_hermitian(tol);
}

LinearMap identity_map(int n) { return LinearMap{{n, n}, omega_projector(n)}; }

LinearMap transpose_map(int n) {
  ComplexMatrix c(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i * n + j, j * n + i) = 1.0;  // block (i,j) = e_ji
  return LinearMap{{n, n}, std::move(c)};
}

LinearMap trace_map(int n) { return LinearMap{{n, n}, ComplexMatrix::identity(n * n)}; }

LinearMap tomiyama_map(double lambda, int n) {
  ComplexMatrix c = Complex(lambda, 0.0) * ComplexMatrix::identity(n * n);
  c -= omega_projector(n);
  return LinearMap{{n, n}, std::move(c)};
}

LinearMap ad_map(const ComplexMatrix& s) {
  // C_{Ad_s} = |s̃⟩⟨s̃| with entries C[(i,k),(j,l)] = conj(s_ik)·s_jl,
  // i.e. the outer square of vec(conj(s)).
  const ComplexMatrix tilde = vec(s.conjugate());
  return LinearMap{{s.rows(), s.cols()}, outer(tilde, tilde)};
}

LinearMap map_from_kraus(const std::vector<ComplexMatrix>& operators) {
  if (operators.empty()) throw DimMismatch("map_from_kraus: empty operator list");
  const Dims dims{operators.front().rows(), operators.front().cols()};
  ComplexMatrix c(dims.total(), dims.total());
  for (const ComplexMatrix& s : operators) {
    if (s.rows() != dims.a || s.cols() != dims.b)
      throw DimMismatch("map_from_kraus: operators have mixed shapes");
    c += ad_map(s).choi;
  }
  return LinearMap{dims, std::move(c)};
}

LinearMap compose(const LinearMap& psi, const LinearMap& phi) {
  if (psi.dims.a != phi.dims.b)
    throw DimMismatch("compose: inner dimensions disagree");
  const Dims dims{phi.dims.a, psi.dims.b};
  ComplexMatrix c(dims.total(), dims.total());
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.a; ++j) c.set_block(i, j, apply(psi, choi_block(phi, i, j)));
  return LinearMap{dims, std::move(c)};
}

int tensor_index(Dims d1, Dims d2, int i1, int k1, int i2, int k2) {
  return ((i1 * d2.a + i2) * d1.b + k1) * d2.b + k2;
}

LinearMap tensor_product(const LinearMap& f1, const LinearMap& f2) {
  const Dims d1 = f1.dims, d2 = f2.dims;
  const Dims dims{d1.a * d2.a, d1.b * d2.b};
  const ComplexMatrix k = kron(f1.choi, f2.choi);
  // kron lives on (A1⊗B1)⊗(A2⊗B2); permute to (A1A2)⊗(B1B2).
  ComplexMatrix c(dims.total(), dims.total());
  const int n2 = d2.total();
  for (int i1 = 0; i1 < d1.a; ++i1)
    for (int k1 = 0; k1 < d1.b; ++k1)
      for (int i2 = 0; i2 < d2.a; ++i2)
        for (int k2 = 0; k2 < d2.b; ++k2) {
          const int row_src = (i1 * d1.b + k1) * n2 + (i2 * d2.b + k2);
          const int row_dst = tensor_index(d1, d2, i1, k1, i2, k2);
          for (int j1 = 0; j1 < d1.a; ++j1)
            for (int l1 = 0; l1 < d1.b; ++l1)
              for (int j2 = 0; j2 < d2.a; ++j2)
                for (int l2 = 0; l2 < d2.b; ++l2) {
                  const int col_src = (j1 * d1.b + l1) * n2 + (j2 * d2.b + l2);
                  const int col_dst = tensor_index(d1, d2, j1, l1, j2, l2);
                  c(row_dst, col_dst) = k(row_src, col_src);
                }
        }
  return LinearMap{dims, std::move(c)};
}

LinearMap dual_map(const LinearMap& phi) {
  return LinearMap{{phi.dims.b, phi.dims.a}, flip_factors(phi.choi, phi.dims)};
}

ComplexMatrix gen_choi(const LinearMap& phi, const ComplexMatrix& s) {
  if (s.rows() != phi.dims.a || s.cols() != phi.dims.a)
    throw DimMismatch("gen_choi: s is not a×a");
  return compose(phi, ad_map(s)).choi;
}

LinearMap transpose_compose(const LinearMap& phi) {
  return LinearMap{phi.dims, partial_transpose(phi.choi, phi.dims)};
}

ComplexMatrix apply_on_factor_b(const LinearMap& psi, const ComplexMatrix& x, int a) {
  const Dims in{a, psi.dims.a};
  require_bipartite(x, in, "apply_on_factor_b");
  ComplexMatrix y(a * psi.dims.b, a * psi.dims.b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      y.set_block(i, j, apply(psi, x.block(i, j, psi.dims.a, psi.dims.a)));
  return y;
}

ComplexMatrix apply_on_factor_a(const LinearMap& psi, const ComplexMatrix& x, int b) {
  const Dims in{psi.dims.a, b};
  require_bipartite(x, in, "apply_on_factor_a");
  // ψ ⊗ id = flip ∘ (id ⊗ ψ) ∘ flip.
  const ComplexMatrix flipped = flip_factors(x, in);
  const ComplexMatrix image = apply_on_factor_b(psi, flipped, b);
  return flip_factors(image, Dims{b, psi.dims.b});
}

MapExpr MapExpr::identity(int n) { return MapExpr{Family::Identity, n, 0.0, {}}; }
MapExpr MapExpr::transpose(int n) { return MapExpr{Family::Transpose, n, 0.0, {}}; }
MapExpr MapExpr::trace(int n) { return MapExpr{Family::Trace, n, 0.0, {}}; }
MapExpr MapExpr::ad(ComplexMatrix s) { return MapExpr{Family::Ad, 0, 0.0, std::move(s)}; }
MapExpr MapExpr::tomiyama(double lambda, int n) { return MapExpr{Family::Tomiyama, n, lambda, {}}; }

LinearMap MapExpr::realize() const {
  switch (family) {
    case Family::Identity:
      return identity_map(n);
    case Family::Transpose:
      return transpose_map(n);
    case Family::Trace:
      return trace_map(n);
    case Family::Ad:
      return ad_map(s);
    case Family::Tomiyama:
      return tomiyama_map(lambda, n);
  }
  throw Error("MapExpr::realize: unknown family");
}

std::string MapExpr::name() const {
  switch (family) {
    case Family::Identity:
      return "identity";
    case Family::Transpose:
      return "transpose";
    case Family::Trace:
      return "trace";
    case Family::Ad:
      return "ad";
    case Family::Tomiyama:
      return "tomiyama";
  }
  return "?";
}

}  // namespace choicones
