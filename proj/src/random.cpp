#include "choicones/random.hpp"

#include <cmath>

namespace choicones {

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
  uint64_t sm = seed;
  for (uint64_t& s : state_) s = splitmix64(sm);
}

uint64_t Rng::next() {
  const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

double Rng::gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  have_spare_ = true;
  spare_ = r * std::sin(2.0 * M_PI * v);
  return r * std::cos(2.0 * M_PI * v);
}

Complex Rng::cgauss() {
  const double re = gauss();
  const double im = gauss();
  return Complex(re, im) * M_SQRT1_2;
}

Rng Rng::split(uint64_t stream) const {
  uint64_t mix = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return Rng(splitmix64(mix));
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.cgauss();
  return m;
}

ComplexMatrix random_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols) return ginibre(rows, cols, rng);
  ComplexMatrix g = ginibre(rows, cols, rng);
  // Gram-Schmidt columns; phase-fix the diagonal for a Haar unitary when square.
  ComplexMatrix q(rows, cols);
  for (int j = 0; j < cols; ++j) {
    ComplexMatrix v = g.column(j);
    for (int t = 0; t < j; ++t) {
      const ComplexMatrix prev = q.column(t);
      const Complex ov = inner(prev, v);
      for (int i = 0; i < rows; ++i) v(i, 0) -= ov * prev(i, 0);
    }
    const double nv = vec_norm(v);
    v *= Complex(1.0 / nv, 0.0);
    for (int i = 0; i < rows; ++i) q(i, j) = v(i, 0);
  }
  return q;
}

ComplexMatrix random_unitary(int n, Rng& rng) { return random_isometry(n, n, rng); }

ComplexMatrix random_hermitian(int n, Rng& rng) {
  return ginibre(n, n, rng).hermitized();
}

ComplexMatrix random_psd(int n, Rng& rng, int rank) {
  const int r = rank <= 0 || rank > n ? n : rank;
  const ComplexMatrix g = ginibre(n, r, rng);
  return (g * g.adjoint()).hermitized();
}

ComplexMatrix random_unit_vector(int n, Rng& rng) {
  ComplexMatrix v = ginibre(n, 1, rng);
  v *= Complex(1.0 / vec_norm(v), 0.0);
  return v;
}

ComplexMatrix random_schmidt_vector(Dims dims, int k, Rng& rng) {
  ComplexMatrix z(dims.total(), 1);
  const int r = std::min({k, dims.a, dims.b});
  for (int t = 0; t < r; ++t) {
    const ComplexMatrix x = ginibre(dims.a, 1, rng);
    const ComplexMatrix y = ginibre(dims.b, 1, rng);
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.b; ++j) z(i * dims.b + j, 0) += x(i, 0) * y(j, 0);
  }
  z *= Complex(1.0 / vec_norm(z), 0.0);
  return z;
}

LinearMap random_cp_map(int a, int b, int kraus_count, Rng& rng) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_count);
  const Complex scale(1.0 / std::sqrt(static_cast<double>(kraus_count) * a), 0.0);
  for (int t = 0; t < kraus_count; ++t) ops.push_back(scale * ginibre(a, b, rng));
  return map_from_kraus(ops);
}

LinearMap random_hp_map(int a, int b, Rng& rng) {
  return LinearMap{{a, b}, random_hermitian(a * b, rng)};
}

LinearMap random_sp_k_map(int a, int b, int k, int terms, Rng& rng) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(terms);
  const int r = std::min({k, a, b});
  const Complex scale(1.0 / std::sqrt(static_cast<double>(terms) * a), 0.0);
  for (int t = 0; t < terms; ++t) {
    const ComplexMatrix g1 = ginibre(a, r, rng);
    const ComplexMatrix g2 = ginibre(r, b, rng);
    ops.push_back(scale * (g1 * g2));
  }
  return map_from_kraus(ops);
}

ComplexMatrix random_sk_state(Dims dims, int k, int terms, Rng& rng) {
  ComplexMatrix rho(dims.total(), dims.total());
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    const double w = rng.uniform(0.2, 1.0);
    const ComplexMatrix z = random_schmidt_vector(dims, k, rng);
    for (int i = 0; i < rho.rows(); ++i)
      for (int j = 0; j < rho.cols(); ++j) rho(i, j) += w * z(i, 0) * std::conj(z(j, 0));
    total += w;
  }
  rho *= Complex(1.0 / total, 0.0);
  return rho.hermitized();
}

}  // namespace choicones
