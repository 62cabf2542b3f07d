#include "choicones/pairing.hpp"

#include <cmath>

namespace choicones {

Complex pair_mat_c(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "pair_mat");
  // Tr(XYᵗ) = Σ_ij X_ij Y_ij.
  Complex s = 0.0;
  const Complex* px = x.data();
  const Complex* py = y.data();
  const size_t n = static_cast<size_t>(x.rows()) * x.cols();
  for (size_t t = 0; t < n; ++t) s += px[t] * py[t];
  return s;
}

namespace {

double guarded_real(Complex z, double imag_tol, const char* where) {
  if (std::abs(z.imag()) > imag_tol)
    throw NonRealPairing(std::string(where) + ": imaginary part " + std::to_string(z.imag()) +
                         " exceeds guard");
  return z.real();
}

}  // namespace

double pair_mat(const ComplexMatrix& x, const ComplexMatrix& y, double imag_tol) {
  return guarded_real(pair_mat_c(x, y), imag_tol, "pair_mat");
}

double pair_state_map(const ComplexMatrix& rho, const LinearMap& phi, double imag_tol) {
  if (rho.rows() != phi.dims.total() || rho.cols() != phi.dims.total())
    throw DimMismatch("pair_state_map: state size does not match map dims");
  return guarded_real(pair_mat_c(rho, phi.choi), imag_tol, "pair_state_map");
}

double pair_maps(const LinearMap& phi, const LinearMap& psi, double imag_tol) {
  if (phi.dims != psi.dims) throw DimMismatch("pair_maps: map dims disagree");
  return guarded_real(pair_mat_c(phi.choi, psi.choi), imag_tol, "pair_maps");
}

double pair_maps_s(const LinearMap& phi, const LinearMap& psi, const ComplexMatrix& s,
                   double imag_tol) {
  if (phi.dims != psi.dims) throw DimMismatch("pair_maps_s: map dims disagree");
  if (s.rows() != phi.dims.a || s.cols() != phi.dims.a)
    throw DimMismatch("pair_maps_s: s is not a×a");
  return guarded_real(pair_mat_c(gen_choi(phi, s), gen_choi(psi, s)), imag_tol, "pair_maps_s");
}

}  // namespace choicones
