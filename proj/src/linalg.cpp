#include "choicones/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace choicones {

namespace {

constexpr double kSweepThreshold = 1e-14;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

// One two-sided rotation H ← R†HR, V ← VR annihilating H(p,q).
// R is the identity outside the (p,q) plane with
//   R_pp = c, R_pq = s, R_qp = -e^{-iφ} s, R_qq = e^{-iφ} c,
// where φ = arg H(p,q); the phase turn makes the 2×2 pivot real so the
// classical symmetric Jacobi angle applies.
void rotate(ComplexMatrix& h, ComplexMatrix& v, int p, int q) {
  const Complex hpq = h(p, q);
  const double apq = std::abs(hpq);
  if (apq == 0.0) return;
  const Complex phase = hpq / apq;  // e^{iφ}

  const double app = h(p, p).real();
  const double aqq = h(q, q).real();
  const double tau = (aqq - app) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = h.rows();
  const Complex ephi = phase;             // e^{iφ}
  const Complex emphi = std::conj(phase); // e^{-iφ}

  // Row update: H ← R†H.
  for (int j = 0; j < n; ++j) {
    const Complex hp = h(p, j);
    const Complex hq = h(q, j);
    h(p, j) = c * hp - ephi * s * hq;
    h(q, j) = s * hp + ephi * c * hq;
  }
  // Column update: H ← HR.
  for (int i = 0; i < n; ++i) {
    const Complex hp = h(i, p);
    const Complex hq = h(i, q);
    h(i, p) = c * hp - emphi * s * hq;
    h(i, q) = s * hp + emphi * c * hq;
  }
  // Accumulate eigenvectors: V ← VR.
  for (int i = 0; i < v.rows(); ++i) {
    const Complex vp = v(i, p);
    const Complex vq = v(i, q);
    v(i, p) = c * vp - emphi * s * vq;
    v(i, q) = s * vp + emphi * c * vq;
  }

  h(p, q) = 0.0;
  h(q, p) = 0.0;
  h(p, p) = Complex(h(p, p).real(), 0.0);
  h(q, q) = Complex(h(q, q).real(), 0.0);
}

}  // namespace

int SvdResult::rank(double cutoff) const {
  if (singulars.empty()) return 0;
  const double top = singulars.front();
  int r = 0;
  for (double s : singulars)
    if (s > cutoff * top) ++r;
  return r;
}

EigResult herm_eig(const ComplexMatrix& h, double herm_tol) {
  require_square(h, "herm_eig");
  if (!h.is_hermitian(herm_tol)) throw NotHermitian("herm_eig: input is not Hermitian");

  const int n = h.rows();
  ComplexMatrix work = h.hermitized();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(work.norm_fro(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(work) <= kSweepThreshold * scale) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(work(p, q)) > 1e-18 * scale) rotate(work, v, p, q);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return work(x, x).real() < work(y, y).real(); });

  EigResult res;
  res.values.resize(n);
  res.vectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    res.values[j] = work(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

double min_eig(const ComplexMatrix& h, double herm_tol) {
  return herm_eig(h, herm_tol).values.front();
}

double max_eig(const ComplexMatrix& h, double herm_tol) {
  return herm_eig(h, herm_tol).values.back();
}

SvdResult svd(const ComplexMatrix& m) {
  const int r = m.rows();
  const int c = m.cols();
  const int k = std::min(r, c);

  SvdResult res;
  res.u = ComplexMatrix(r, k);
  res.v = ComplexMatrix(c, k);
  res.singulars.assign(k, 0.0);
  if (k == 0) return res;

  const EigResult eig = herm_eig(m.adjoint() * m, 1e-8);

  // Columns by descending eigenvalue of M†M; singular values re-measured as
  // ‖Mv‖, which stays accurate for tiny singular values where sqrt(λ) is not.
  struct Col {
    double sigma;
    ComplexMatrix v;
    ComplexMatrix mv;
  };
  std::vector<Col> cols;
  cols.reserve(k);
  for (int j = 0; j < k; ++j) {
    ComplexMatrix vj = eig.vectors.column(c - 1 - j);
    ComplexMatrix mv = m * vj;
    cols.push_back({vec_norm(mv), std::move(vj), std::move(mv)});
  }
  std::sort(cols.begin(), cols.end(), [](const Col& x, const Col& y) { return x.sigma > y.sigma; });

  const double smax = cols.front().sigma;
  const double cutoff = 1e-10 * smax;

  std::vector<ComplexMatrix> ucols;
  ucols.reserve(k);
  for (int j = 0; j < k; ++j) {
    res.singulars[j] = cols[j].sigma > cutoff ? cols[j].sigma : 0.0;
    for (int i = 0; i < c; ++i) res.v(i, j) = cols[j].v(i, 0);
    if (res.singulars[j] > 0.0) {
      ComplexMatrix u = (1.0 / cols[j].sigma) * cols[j].mv;
      // Modified Gram-Schmidt against earlier columns restores orthogonality
      // lost through the normal-equations route.
      for (const ComplexMatrix& prev : ucols) {
        const Complex ov = inner(prev, u);
        for (int i = 0; i < r; ++i) u(i, 0) -= ov * prev(i, 0);
      }
      const double nu = vec_norm(u);
      if (nu > 0.5) {
        u *= Complex(1.0 / nu, 0.0);
      }
      ucols.push_back(u);
    } else {
      // Complete to an isometry: take the canonical basis vector with the
      // largest residual after orthogonalization.
      ComplexMatrix best(r, 1);
      double best_norm = -1.0;
      for (int t = 0; t < r; ++t) {
        ComplexMatrix cand(r, 1);
        cand(t, 0) = 1.0;
        for (const ComplexMatrix& prev : ucols) {
          const Complex ov = inner(prev, cand);
          for (int i = 0; i < r; ++i) cand(i, 0) -= ov * prev(i, 0);
        }
        const double nn = vec_norm(cand);
        if (nn > best_norm) {
          best_norm = nn;
          best = cand;
        }
      }
      best *= Complex(1.0 / best_norm, 0.0);
      ucols.push_back(best);
    }
    for (int i = 0; i < r; ++i) res.u(i, j) = ucols.back()(i, 0);
  }
  return res;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix m(x.rows() * y.rows(), x.cols() * y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      const Complex xv = x(i, j);
      if (xv == Complex{}) continue;
      for (int p = 0; p < y.rows(); ++p)
        for (int q = 0; q < y.cols(); ++q)
          m(i * y.rows() + p, j * y.cols() + q) = xv * y(p, q);
    }
  return m;
}

void require_bipartite(const ComplexMatrix& x, Dims dims, const char* where) {
  if (dims.a < 1 || dims.b < 1)
    throw DimMismatch(std::string(where) + ": dimensions must be at least 1");
  if (x.rows() != dims.total() || x.cols() != dims.total())
    throw DimMismatch(std::string(where) + ": operator size does not match a·b");
}

ComplexMatrix partial_transpose(const ComplexMatrix& x, Dims dims) {
  require_bipartite(x, dims, "partial_transpose");
  ComplexMatrix m(x.rows(), x.cols());
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.a; ++j) m.set_block(i, j, x.block(j, i, dims.b, dims.b));
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, Dims dims, Factor which) {
  require_bipartite(x, dims, "partial_trace");
  if (which == Factor::A) {
    ComplexMatrix m(dims.b, dims.b);
    for (int i = 0; i < dims.a; ++i) m += x.block(i, i, dims.b, dims.b);
    return m;
  }
  ComplexMatrix m(dims.a, dims.a);
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.a; ++j) m(i, j) = x.block(i, j, dims.b, dims.b).trace();
  return m;
}

ComplexMatrix vec(const ComplexMatrix& s) {
  ComplexMatrix v(s.rows() * s.cols(), 1);
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) v(i * s.cols() + j, 0) = s(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexMatrix& zeta, Dims dims) {
  if (zeta.cols() != 1 || zeta.rows() != dims.total())
    throw DimMismatch("unvec: vector length does not match a·b");
  ComplexMatrix m(dims.a, dims.b);
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.b; ++j) m(i, j) = zeta(i * dims.b + j, 0);
  return m;
}

ComplexMatrix psd_project(const ComplexMatrix& h, double herm_tol) {
  const EigResult eig = herm_eig(h, herm_tol);
  const int n = h.rows();
  ComplexMatrix m(n, n);
  for (int t = 0; t < n; ++t) {
    const double lam = eig.values[t];
    if (lam <= 0.0) continue;
    const ComplexMatrix v = eig.vectors.column(t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += lam * v(i, 0) * std::conj(v(j, 0));
  }
  return m.hermitized();
}

ComplexMatrix flip_factors(const ComplexMatrix& x, Dims dims) {
  require_bipartite(x, dims, "flip_factors");
  const int a = dims.a, b = dims.b;
  ComplexMatrix m(x.rows(), x.cols());
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < b; ++k)
      for (int j = 0; j < a; ++j)
        for (int l = 0; l < b; ++l) m(k * a + i, l * a + j) = x(i * b + k, j * b + l);
  return m;
}

ComplexMatrix omega_vector(int n) {
  ComplexMatrix v(n * n, 1);
  for (int i = 0; i < n; ++i) v(i * n + i, 0) = 1.0;
  return v;
}

ComplexMatrix omega_projector(int n) {
  const ComplexMatrix w = omega_vector(n);
  return outer(w, w);
}

}  // namespace choicones
