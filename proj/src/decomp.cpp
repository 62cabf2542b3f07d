#include "choicones/decomp.hpp"

#include <cmath>
#include <string>

#include "choicones/pairing.hpp"

namespace choicones {

namespace {

ComplexMatrix leading_columns(const ComplexMatrix& m, int k) {
  ComplexMatrix out(m.rows(), k);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < k; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

KrausDecomposition kraus(const LinearMap& phi, double psd_tol, double rank_cutoff) {
  const EigResult eig = herm_eig(phi.choi);
  if (eig.values.front() < -psd_tol)
    throw NotPsd("kraus: Choi matrix has eigenvalue " + std::to_string(eig.values.front()));

  const double top = eig.values.back();
  KrausDecomposition kd;
  for (int t = eig.vectors.cols() - 1; t >= 0; --t) {
    const double lam = eig.values[t];
    if (lam <= rank_cutoff * top || lam <= 0.0) continue;
    // λ|v⟩⟨v| = C_{Ad_s} with vec(conj(s)) = √λ·v.
    ComplexMatrix v = eig.vectors.column(t);
    v *= Complex(std::sqrt(lam), 0.0);
    kd.operators.push_back(unvec(v, phi.dims).conjugate());
  }
  return kd;
}

ComplexMatrix SchmidtDecomposition::reconstruct() const {
  const int a = left_vectors.rows();
  const int b = right_vectors.rows();
  ComplexMatrix z(a * b, 1);
  for (size_t t = 0; t < coefficients.size(); ++t) {
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j)
        z(i * b + j, 0) +=
            coefficients[t] * left_vectors(i, static_cast<int>(t)) * right_vectors(j, static_cast<int>(t));
  }
  return z;
}

SchmidtDecomposition schmidt(const ComplexMatrix& zeta, Dims dims, double rank_cutoff) {
  if (zeta.norm_fro() == 0.0) throw ZeroVector("schmidt: zero vector");
  const SvdResult sv = svd(unvec(zeta, dims));

  int count = 0;
  while (count < static_cast<int>(sv.singulars.size()) && sv.singulars[count] > 0.0) ++count;

  SchmidtDecomposition sd;
  sd.coefficients.assign(sv.singulars.begin(), sv.singulars.begin() + count);
  sd.left_vectors = ComplexMatrix(dims.a, count);
  sd.right_vectors = ComplexMatrix(dims.b, count);
  for (int t = 0; t < count; ++t) {
    for (int i = 0; i < dims.a; ++i) sd.left_vectors(i, t) = sv.u(i, t);
    // m = Σ c u v† gives ζ = Σ c |u⟩|conj(v)⟩.
    for (int j = 0; j < dims.b; ++j) sd.right_vectors(j, t) = std::conj(sv.v(j, t));
  }
  const double top = count > 0 ? sd.coefficients.front() : 0.0;
  sd.rank = 0;
  for (double c : sd.coefficients)
    if (c > rank_cutoff * top) ++sd.rank;
  return sd;
}

int schmidt_rank(const ComplexMatrix& zeta, Dims dims, double rank_cutoff) {
  return schmidt(zeta, dims, rank_cutoff).rank;
}

ComplexMatrix truncate_schmidt(const ComplexMatrix& zeta, Dims dims, int k) {
  if (k < 1) throw BadK("truncate_schmidt: k must be at least 1");
  if (k >= std::min(dims.a, dims.b)) return zeta;
  const SvdResult sv = svd(unvec(zeta, dims));
  ComplexMatrix z(dims.total(), 1);
  for (int t = 0; t < k; ++t) {
    if (sv.singulars[t] <= 0.0) break;
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.b; ++j)
        z(i * dims.b + j, 0) += sv.singulars[t] * sv.u(i, t) * std::conj(sv.v(j, t));
  }
  return z;
}

ComplexMatrix ProductCertificate::reconstruct(Dims dims) const {
  ComplexMatrix m(dims.total(), dims.total());
  for (size_t t = 0; t < weights.size(); ++t) {
    const ComplexMatrix zeta = kron(left[t], right[t]);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m(i, j) += weights[t] * zeta(i, 0) * std::conj(zeta(j, 0));
  }
  return m;
}

ComplexMatrix HolevoForm::apply(const ComplexMatrix& x) const {
  if (pairs.empty()) throw BadCertificate("HolevoForm::apply: empty form");
  ComplexMatrix y(pairs.front().first.rows(), pairs.front().first.cols());
  for (const auto& [u, v] : pairs) y += pair_mat_c(x, v) * u;
  return y;
}

HolevoForm holevo_form(const ProductCertificate& certificate, const LinearMap& phi, double tol) {
  if (certificate.weights.size() != certificate.left.size() ||
      certificate.weights.size() != certificate.right.size())
    throw BadCertificate("holevo_form: ragged certificate");
  const ComplexMatrix rebuilt = certificate.reconstruct(phi.dims);
  const double residual = distance_fro(rebuilt, phi.choi);
  if (residual > tol)
    throw BadCertificate("holevo_form: certificate misses Choi matrix by " +
                         std::to_string(residual));

  // Each product term w|x⟩⟨x|⊗|y⟩⟨y| is C_{Ad_s} for a rank-one s, and the
  // matching Holevo pair is (u, v) = (w|y⟩⟨y|, |x⟩⟨x|).
  HolevoForm hf;
  for (size_t t = 0; t < certificate.weights.size(); ++t) {
    const ComplexMatrix u =
        Complex(certificate.weights[t], 0.0) * outer(certificate.right[t], certificate.right[t]);
    const ComplexMatrix v = outer(certificate.left[t], certificate.left[t]);
    hf.pairs.emplace_back(u, v);
  }
  return hf;
}

std::pair<ComplexMatrix, ComplexMatrix> factor_ad(const ComplexMatrix& a, const ComplexMatrix& s,
                                                  double rank_cutoff) {
  require_same_shape(a, s, "factor_ad");
  const SvdResult sa = svd(a);
  const SvdResult ss = svd(s);
  const int ell = sa.rank(rank_cutoff);
  const int k = ss.rank(rank_cutoff);
  if (ell > k)
    throw RankTooLarge("factor_ad: rank(a) = " + std::to_string(ell) + " exceeds rank(s) = " +
                       std::to_string(k));

  // s = v2 d1 v1*, a = v4 d2 v3*; with w = d1^{-1/2}·embed·d2^{1/2} we get
  // d2 = w* d1 w and a = (v4 w* v2*) s (v1 w v3*).
  const ComplexMatrix v1 = leading_columns(ss.v, k);
  const ComplexMatrix v2 = leading_columns(ss.u, k);
  const ComplexMatrix v3 = leading_columns(sa.v, ell);
  const ComplexMatrix v4 = leading_columns(sa.u, ell);

  ComplexMatrix w(k, ell);
  for (int i = 0; i < ell; ++i) w(i, i) = std::sqrt(sa.singulars[i] / ss.singulars[i]);

  const ComplexMatrix x = v1 * w * v3.adjoint();          // b×b
  const ComplexMatrix y = v4 * w.adjoint() * v2.adjoint();  // a×a
  return {x, y};
}

}  // namespace choicones
