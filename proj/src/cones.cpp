#include "choicones/cones.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "choicones/pairing.hpp"

namespace choicones {

namespace {

double quad_form(const ComplexMatrix& x, const ComplexMatrix& xi) {
  return inner(xi, x * xi).real();
}

bool exact_ppt_dimension(Dims d) {
  const int lo = std::min(d.a, d.b), hi = std::max(d.a, d.b);
  return (lo == 2 && hi == 2) || (lo == 2 && hi == 3);
}

// Partial isometry embedding C^a into C^b (or a compression when b < a).
ComplexMatrix embed_matrix(int rows, int cols) {
  ComplexMatrix e(rows, cols);
  for (int i = 0; i < std::min(rows, cols); ++i) e(i, i) = 1.0;
  return e;
}

// ---------------------------------------------------------------------------
// Small dense real NNLS (Lawson-Hanson) used to polish separable fits.
// ---------------------------------------------------------------------------

// Cholesky solve of a small SPD system; jitters the diagonal when needed.
std::vector<double> spd_solve(std::vector<std::vector<double>> g, std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, g[i][i]);
  for (int i = 0; i < n; ++i) g[i][i] += 1e-13 * std::max(scale, 1.0);
  // L Lᵗ factorization in place.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int t = 0; t < j; ++t) s -= g[i][t] * g[j][t];
      if (i == j) {
        g[i][i] = std::sqrt(std::max(s, 1e-300));
      } else {
        g[i][j] = s / g[j][j];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    for (int t = 0; t < i; ++t) s -= g[i][t] * rhs[t];
    rhs[i] = s / g[i][i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int t = i + 1; t < n; ++t) s -= g[t][i] * rhs[t];
    rhs[i] = s / g[i][i];
  }
  return rhs;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (size_t t = 0; t < x.size(); ++t) s += x[t] * y[t];
  return s;
}

// min ‖Σ_j x_j col_j − y‖₂ subject to x ≥ 0.
std::vector<double> nnls(const std::vector<const std::vector<double>*>& cols,
                         const std::vector<double>& y, int max_outer = 400) {
  const int n = static_cast<int>(cols.size());
  std::vector<double> x(n, 0.0);
  std::vector<int> passive;
  std::vector<double> r = y;
  const double y_scale = std::sqrt(dot(y, y));
  const double grad_tol = 1e-12 * std::max(y_scale, 1.0);

  auto solve_passive = [&]() {
    const int p = static_cast<int>(passive.size());
    std::vector<std::vector<double>> g(p, std::vector<double>(p));
    std::vector<double> rhs(p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j <= i; ++j) {
        g[i][j] = dot(*cols[passive[i]], *cols[passive[j]]);
        g[j][i] = g[i][j];
      }
      rhs[i] = dot(*cols[passive[i]], y);
    }
    return spd_solve(std::move(g), std::move(rhs));
  };

  auto refresh_residual = [&]() {
    r = y;
    for (int j : passive)
      for (size_t t = 0; t < r.size(); ++t) r[t] -= x[j] * (*cols[j])[t];
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    int best = -1;
    double best_grad = grad_tol;
    for (int j = 0; j < n; ++j) {
      if (x[j] > 0.0) continue;
      const double grad = dot(*cols[j], r);
      if (grad > best_grad) {
        best_grad = grad;
        best = j;
      }
    }
    if (best < 0) break;
    passive.push_back(best);

    for (int inner = 0; inner < 4 * n + 16; ++inner) {
      std::vector<double> z = solve_passive();
      bool all_positive = true;
      double alpha = 1.0;
      for (size_t t = 0; t < passive.size(); ++t) {
        if (z[t] <= 0.0) {
          all_positive = false;
          const double xj = x[passive[t]];
          const double denom = xj - z[t];
          if (denom > 0.0) alpha = std::min(alpha, xj / denom);
        }
      }
      if (all_positive) {
        for (size_t t = 0; t < passive.size(); ++t) x[passive[t]] = z[t];
        break;
      }
      for (size_t t = 0; t < passive.size(); ++t)
        x[passive[t]] += alpha * (z[t] - x[passive[t]]);
      std::vector<int> keep;
      for (int j : passive) {
        if (x[j] > 1e-14) {
          keep.push_back(j);
        } else {
          x[j] = 0.0;
        }
      }
      passive = std::move(keep);
      if (passive.empty()) break;
    }
    refresh_residual();
  }
  return x;
}

// Isometric real embedding of Hermitian matrices (Frobenius → Euclidean).
std::vector<double> embed_hermitian(const ComplexMatrix& h) {
  const int n = h.rows();
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) out.push_back(h(i, i).real());
  const double r2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back(r2 * h(i, j).real());
      out.push_back(r2 * h(i, j).imag());
    }
  return out;
}

void project_simplex(std::vector<double>& w, double total) {
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0, theta = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - total) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& v : w) v = std::max(v - theta, 0.0);
}

// ---------------------------------------------------------------------------
// Separable fitting: dictionary of Schmidt-rank-≤k projectors, projected
// gradient on the weight simplex, NNLS polish on the active support, and
// residual-driven atom generation when the dictionary falls short.
// ---------------------------------------------------------------------------

struct FitOutcome {
  bool success = false;
  double residual = std::numeric_limits<double>::infinity();
  SchmidtRankCertificate cert;
  long iterations = 0;
  int atoms = 0;
};

ComplexMatrix mixture_operator(const std::vector<ComplexMatrix>& atoms,
                               const std::vector<double>& w, int ab) {
  ComplexMatrix m(ab, ab);
  for (size_t d = 0; d < atoms.size(); ++d) {
    if (w[d] <= 0.0) continue;
    const ComplexMatrix& z = atoms[d];
    for (int i = 0; i < ab; ++i) {
      const Complex zi = w[d] * z(i, 0);
      for (int j = 0; j < ab; ++j) m(i, j) += zi * std::conj(z(j, 0));
    }
  }
  return m;
}

ComplexMatrix ascend_quadratic(const ComplexMatrix& m, Dims dims, int k, ComplexMatrix xi,
                               int iterations);

// Unnormalized mixture block g = vec(A·B); the factored form keeps the
// Schmidt rank of the atom at most k through every update.
struct EnsembleBlock {
  ComplexMatrix a;  // dims.a × k
  ComplexMatrix b;  // k × dims.b

  ComplexMatrix atom() const { return vec(a * b); }

  static EnsembleBlock from_atom(const ComplexMatrix& g, Dims dims, int k) {
    EnsembleBlock blk;
    blk.a = ComplexMatrix(dims.a, k);
    blk.b = ComplexMatrix(k, dims.b);
    if (vec_norm(g) == 0.0) return blk;
    const SvdResult sv = svd(unvec(g, dims));
    for (int t = 0; t < k && t < static_cast<int>(sv.singulars.size()); ++t) {
      const double root = std::sqrt(sv.singulars[t]);
      for (int i = 0; i < dims.a; ++i) blk.a(i, t) = root * sv.u(i, t);
      for (int j = 0; j < dims.b; ++j) blk.b(t, j) = root * std::conj(sv.v(j, t));
    }
    return blk;
  }
};

ComplexMatrix mixture_operator_from_blocks(const std::vector<EnsembleBlock>& blocks, Dims dims) {
  const int ab = dims.total();
  ComplexMatrix m(ab, ab);
  for (const EnsembleBlock& blk : blocks) {
    const ComplexMatrix g = blk.atom();
    for (int i = 0; i < ab; ++i) {
      const Complex gi = g(i, 0);
      for (int j = 0; j < ab; ++j) m(i, j) += gi * std::conj(g(j, 0));
    }
  }
  return m;
}

// One rank-at-a-time cyclic descent of ‖ρ − Σ g_d g_d†‖²; each block is
// re-solved by the quadratic ascent on its local target.
void block_descent_sweeps(const ComplexMatrix& rho, Dims dims, int k,
                          std::vector<EnsembleBlock>& blocks, int sweeps) {
  const int ab = dims.total();
  ComplexMatrix r = rho - mixture_operator_from_blocks(blocks, dims);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (EnsembleBlock& blk : blocks) {
      const ComplexMatrix g = blk.atom();
      ComplexMatrix rd = r;
      for (int i = 0; i < ab; ++i) {
        const Complex gi = g(i, 0);
        for (int j = 0; j < ab; ++j) rd(i, j) += gi * std::conj(g(j, 0));
      }
      const ComplexMatrix u = ascend_quadratic(rd, dims, k, g, 60);
      const double val = quad_form(rd, u);
      ComplexMatrix g_new(ab, 1);
      if (val > 0.0) {
        g_new = u;
        g_new *= Complex(std::sqrt(val), 0.0);
      }
      for (int i = 0; i < ab; ++i) {
        const Complex gi = g_new(i, 0);
        for (int j = 0; j < ab; ++j) rd(i, j) -= gi * std::conj(g_new(j, 0));
      }
      r = std::move(rd);
      blk = EnsembleBlock::from_atom(g_new, dims, k);
    }
  }
}

// Levenberg-Marquardt on the packed block factors. Near an exact
// decomposition the residual is a smooth zero of the factored model and the
// iteration converges quadratically. Returns the final Frobenius residual.
double lm_refine(const ComplexMatrix& rho, Dims dims, int k, std::vector<EnsembleBlock>& blocks,
                 int max_iterations, double target) {
  const int ab = dims.total();
  const int per_block = 2 * k * (dims.a + dims.b);
  const int n_params = static_cast<int>(blocks.size()) * per_block;

  auto pack = [&](const std::vector<EnsembleBlock>& bl) {
    std::vector<double> theta;
    theta.reserve(n_params);
    for (const EnsembleBlock& blk : bl) {
      for (int i = 0; i < dims.a; ++i)
        for (int t = 0; t < k; ++t) {
          theta.push_back(blk.a(i, t).real());
          theta.push_back(blk.a(i, t).imag());
        }
      for (int t = 0; t < k; ++t)
        for (int j = 0; j < dims.b; ++j) {
          theta.push_back(blk.b(t, j).real());
          theta.push_back(blk.b(t, j).imag());
        }
    }
    return theta;
  };
  auto unpack = [&](const std::vector<double>& theta) {
    std::vector<EnsembleBlock> bl(blocks.size());
    size_t p = 0;
    for (EnsembleBlock& blk : bl) {
      blk.a = ComplexMatrix(dims.a, k);
      blk.b = ComplexMatrix(k, dims.b);
      for (int i = 0; i < dims.a; ++i)
        for (int t = 0; t < k; ++t) {
          blk.a(i, t) = Complex(theta[p], theta[p + 1]);
          p += 2;
        }
      for (int t = 0; t < k; ++t)
        for (int j = 0; j < dims.b; ++j) {
          blk.b(t, j) = Complex(theta[p], theta[p + 1]);
          p += 2;
        }
    }
    return bl;
  };
  auto residual_vec = [&](const std::vector<double>& theta) {
    return embed_hermitian(rho - mixture_operator_from_blocks(unpack(theta), dims));
  };

  std::vector<double> theta = pack(blocks);
  std::vector<double> r = residual_vec(theta);
  double f = std::sqrt(dot(r, r));
  double lambda = 1e-3;
  const int m = static_cast<int>(r.size());
  const bool trace_fit = std::getenv("CHOICONES_TRACE_FIT") != nullptr;
  if (trace_fit)
    std::fprintf(stderr, "[lm] start blocks=%zu params=%d f=%.3e\n", blocks.size(), n_params, f);

  for (int it = 0; it < max_iterations && f > target; ++it) {
    // Central-difference Jacobian (small parameter counts at desk scale).
    std::vector<std::vector<double>> jt(n_params, std::vector<double>(m));
    for (int p = 0; p < n_params; ++p) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[p]));
      std::vector<double> tp = theta, tm = theta;
      tp[p] += h;
      tm[p] -= h;
      const std::vector<double> rp = residual_vec(tp);
      const std::vector<double> rm = residual_vec(tm);
      for (int i = 0; i < m; ++i) jt[p][i] = (rp[i] - rm[i]) / (2.0 * h);
    }
    std::vector<std::vector<double>> gram(n_params, std::vector<double>(n_params));
    std::vector<double> rhs(n_params);
    for (int p = 0; p < n_params; ++p) {
      for (int q = 0; q <= p; ++q) {
        gram[p][q] = dot(jt[p], jt[q]);
        gram[q][p] = gram[p][q];
      }
      rhs[p] = -dot(jt[p], r);
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<std::vector<double>> damped = gram;
      for (int p = 0; p < n_params; ++p)
        damped[p][p] += lambda * (gram[p][p] + 1e-12);
      const std::vector<double> delta = spd_solve(std::move(damped), rhs);
      std::vector<double> trial = theta;
      for (int p = 0; p < n_params; ++p) trial[p] += delta[p];
      const std::vector<double> rt = residual_vec(trial);
      const double ft = std::sqrt(dot(rt, rt));
      if (ft < f) {
        theta = std::move(trial);
        r = rt;
        f = ft;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (trace_fit && (it % 10 == 9 || !accepted))
      std::fprintf(stderr, "[lm] it=%d f=%.3e lambda=%.1e accepted=%d\n", it, f, lambda, accepted);
    if (!accepted) break;
  }
  blocks = unpack(theta);
  return f;
}

// Projected power ascent of ⟨ζ|M|ζ⟩ over unit Schmidt-rank-≤k vectors from a
// given start; the shift makes the iteration operator PSD so the ascent is
// monotone.
ComplexMatrix ascend_quadratic(const ComplexMatrix& m, Dims dims, int k, ComplexMatrix xi,
                               int iterations) {
  const EigResult eig = herm_eig(m, 1e-7);
  const double shift =
      -eig.values.front() +
      1e-8 * std::max({1.0, std::abs(eig.values.front()), std::abs(eig.values.back())});
  double nx = vec_norm(xi);
  if (nx < 1e-12) return xi;
  xi *= Complex(1.0 / nx, 0.0);
  double value = quad_form(m, xi);
  for (int t = 0; t < iterations; ++t) {
    ComplexMatrix y = m * xi + Complex(shift, 0.0) * xi;
    ComplexMatrix z = truncate_schmidt(y, dims, k);
    const double nz = vec_norm(z);
    if (nz < 1e-280) break;
    z *= Complex(1.0 / nz, 0.0);
    xi = std::move(z);
    const double next = quad_form(m, xi);
    if (std::abs(next - value) < 1e-13 * std::max(1.0, std::abs(next))) break;
    value = next;
  }
  return xi;
}

ComplexMatrix random_fit_atom(Dims dims, int k, Rng& rng, const std::vector<ComplexMatrix>& seeds) {
  const double roll = rng.uniform();
  if (roll < 0.25 && dims.a == dims.b) {
    // vec of a random rank-≤k PSD matrix: pairs the factors as |x⟩|x̄⟩ does.
    const ComplexMatrix g = ginibre(dims.a, k, rng);
    ComplexMatrix z = vec(g * g.adjoint());
    z *= Complex(1.0 / vec_norm(z), 0.0);
    return z;
  }
  if (roll < 0.5 && !seeds.empty()) {
    const ComplexMatrix& base = seeds[rng.uniform_int(static_cast<int>(seeds.size()))];
    ComplexMatrix z = base;
    const ComplexMatrix noise = random_schmidt_vector(dims, k, rng);
    for (int i = 0; i < z.rows(); ++i) z(i, 0) += 0.35 * noise(i, 0);
    z = truncate_schmidt(z, dims, k);
    const double n = vec_norm(z);
    if (n > 1e-12) {
      z *= Complex(1.0 / n, 0.0);
      return z;
    }
  }
  return random_schmidt_vector(dims, k, rng);
}

FitOutcome fit_schmidt_mixture(const ComplexMatrix& rho, Dims dims, int k,
                               const SeparabilityOptions& opts, Rng rng) {
  const int ab = dims.total();
  const int n_target =
      std::min(opts.dictionary_factor * ab * ab, std::max(opts.max_dictionary, ab * ab));

  FitOutcome out;

  std::vector<ComplexMatrix> atoms;
  std::vector<ComplexMatrix> seeds;
  const EigResult eig = herm_eig(rho, 1e-8);
  for (int t = ab - 1; t >= 0; --t) {
    if (eig.values[t] < 1e-12) break;
    ComplexMatrix z = truncate_schmidt(eig.vectors.column(t), dims, k);
    const double n = vec_norm(z);
    if (n < 1e-9) continue;
    z *= Complex(1.0 / n, 0.0);
    seeds.push_back(z);
    atoms.push_back(z);
  }
  while (static_cast<int>(atoms.size()) < n_target)
    atoms.push_back(random_fit_atom(dims, k, rng, seeds));

  const std::vector<double> target = embed_hermitian(rho);
  std::vector<std::vector<double>> embedded(atoms.size());
  auto embed_atom = [&](size_t d) {
    if (embedded[d].empty()) embedded[d] = embed_hermitian(outer(atoms[d], atoms[d]));
  };

  std::vector<double> w(atoms.size(), 0.0);
  const double trace_total = rho.trace().real();

  auto polish = [&](const ComplexMatrix& residual_m) -> double {
    // Support = current weight carriers plus the atoms best aligned with the
    // residual; NNLS resolves the weights exactly on that support.
    std::vector<std::pair<double, int>> align;
    align.reserve(atoms.size());
    for (size_t d = 0; d < atoms.size(); ++d) {
      const double score = quad_form(residual_m, atoms[d]);
      align.emplace_back(score, static_cast<int>(d));
    }
    std::sort(align.begin(), align.end(), std::greater<>());

    std::vector<int> support;
    for (size_t d = 0; d < atoms.size(); ++d)
      if (w[d] > 1e-9) support.push_back(static_cast<int>(d));
    std::sort(support.begin(), support.end(),
              [&](int x, int y) { return w[x] > w[y]; });
    if (static_cast<int>(support.size()) > 4 * ab * ab) support.resize(4 * ab * ab);
    for (int t = 0; t < std::min<int>(96, static_cast<int>(align.size())); ++t) {
      const int d = align[t].second;
      if (std::find(support.begin(), support.end(), d) == support.end()) support.push_back(d);
    }

    std::vector<const std::vector<double>*> cols;
    cols.reserve(support.size());
    for (int d : support) {
      embed_atom(d);
      cols.push_back(&embedded[d]);
    }
    const std::vector<double> ws = nnls(cols, target);
    std::fill(w.begin(), w.end(), 0.0);
    for (size_t t = 0; t < support.size(); ++t) w[support[t]] = ws[t];
    return distance_fro(mixture_operator(atoms, w, ab), rho);
  };

  // Quick shot: NNLS on the correlation-selected support.
  double residual = polish(rho);
  out.iterations = 1;
  if (residual > opts.fit_residual) {
    // Projected gradient on the simplex of weights (gradient via the explicit
    // residual matrix), polished periodically.
    const double lipschitz = 2.0 * (1.0 + static_cast<double>(atoms.size()) / ab);
    const double step = 1.0 / lipschitz;
    for (int it = 0; it < opts.pg_iterations && residual > opts.fit_residual; ++it) {
      const ComplexMatrix r_m = rho - mixture_operator(atoms, w, ab);
      for (size_t d = 0; d < atoms.size(); ++d) w[d] += 2.0 * step * quad_form(r_m, atoms[d]);
      project_simplex(w, trace_total);
      ++out.iterations;
      if ((it + 1) % 10 == 0) residual = polish(rho - mixture_operator(atoms, w, ab));
    }
    if (residual > opts.fit_residual) residual = polish(rho - mixture_operator(atoms, w, ab));
  }

  // Residual-driven atom generation: ascend ⟨ζ|R|ζ⟩ from fresh starts and
  // from the supported atoms, so directions inside range(ρ) become reachable.
  auto push_atom = [&](ComplexMatrix z) {
    atoms.push_back(std::move(z));
    w.push_back(0.0);
    embedded.emplace_back();
  };
  const int fw_rounds = std::min(opts.refine_rounds, 8);
  for (int round = 0; round < fw_rounds && residual > opts.fit_residual; ++round) {
    const ComplexMatrix r_m = rho - mixture_operator(atoms, w, ab);
    const EigResult reig = herm_eig(r_m, 1e-7);

    double best_gain = 0.0;
    std::vector<ComplexMatrix> starts;
    starts.push_back(reig.vectors.column(ab - 1));
    for (int extra = 0; extra < 4; ++extra) starts.push_back(random_schmidt_vector(dims, k, rng));
    for (ComplexMatrix& start : starts) {
      ComplexMatrix z = ascend_quadratic(r_m, dims, k, truncate_schmidt(start, dims, k), 150);
      const double gain = quad_form(r_m, z);
      best_gain = std::max(best_gain, gain);
      if (gain > 1e-13) push_atom(std::move(z));
    }
    if (best_gain < 1e-13) break;  // no ascent direction left in the cone
    residual = polish(rho - mixture_operator(atoms, w, ab));
    ++out.iterations;
  }

  // Factored refinement: blocks g_d = vec(A_d B_d) keep Schmidt rank ≤ k by
  // construction; Levenberg-Marquardt on the block factors drives the
  // residual to zero where the fixed dictionary cannot (rank-deficient
  // targets whose atoms must sit inside range(ρ)).
  if (residual > opts.fit_residual) {
    std::vector<EnsembleBlock> blocks;
    std::vector<std::pair<double, int>> carriers;
    for (size_t d = 0; d < atoms.size(); ++d)
      if (w[d] > 1e-11) carriers.emplace_back(w[d], static_cast<int>(d));
    std::sort(carriers.begin(), carriers.end(), std::greater<>());
    const size_t max_blocks = static_cast<size_t>(3 * ab + 4);
    const size_t start_blocks = static_cast<size_t>(ab + 4);
    for (const auto& [weight, d] : carriers) {
      if (blocks.size() >= start_blocks) break;
      ComplexMatrix g = atoms[d];
      g *= Complex(std::sqrt(weight), 0.0);
      blocks.push_back(EnsembleBlock::from_atom(g, dims, k));
    }
    if (blocks.empty())
      blocks.push_back(EnsembleBlock::from_atom(random_schmidt_vector(dims, k, rng), dims, k));

    double previous = std::numeric_limits<double>::infinity();
    std::vector<EnsembleBlock> best_blocks = blocks;
    double best_block_residual = std::numeric_limits<double>::infinity();
    for (int grow = 0; grow < 10 && residual > opts.fit_residual; ++grow) {
      block_descent_sweeps(rho, dims, k, blocks, 24);
      // Prune weak blocks so LM works on a tight parametrization.
      std::vector<EnsembleBlock> kept;
      const double floor_weight = 1e-6 * std::abs(rho.trace().real());
      for (EnsembleBlock& blk : blocks) {
        const double nn = vec_norm(blk.atom());
        if (nn * nn > floor_weight) kept.push_back(std::move(blk));
      }
      if (!kept.empty()) blocks = std::move(kept);
      residual = lm_refine(rho, dims, k, blocks, 300, 0.3 * opts.fit_residual);
      out.iterations += 24 + 300;
      if (residual < best_block_residual) {
        best_block_residual = residual;
        best_blocks = blocks;
      }
      if (residual <= opts.fit_residual) break;
      const bool stalled = residual > 0.5 * previous;
      previous = residual;
      if (!stalled) continue;
      if (blocks.size() < max_blocks) {
        // Seed an extra block along the residual's strongest cone direction.
        const ComplexMatrix r_m = rho - mixture_operator_from_blocks(blocks, dims);
        const EigResult reig = herm_eig(r_m, 1e-7);
        ComplexMatrix u = ascend_quadratic(
            r_m, dims, k, truncate_schmidt(reig.vectors.column(ab - 1), dims, k), 120);
        const double val = quad_form(r_m, u);
        if (val > 1e-13) {
          u *= Complex(std::sqrt(val), 0.0);
          blocks.push_back(EnsembleBlock::from_atom(u, dims, k));
        }
      }
      // Kick the factors to escape shallow valleys; the best iterate is kept.
      for (EnsembleBlock& blk : blocks) {
        const double scale_a = 0.15 * std::max(blk.a.norm_fro(), 1e-6);
        const double scale_b = 0.15 * std::max(blk.b.norm_fro(), 1e-6);
        for (int i = 0; i < blk.a.rows(); ++i)
          for (int t = 0; t < blk.a.cols(); ++t)
            blk.a(i, t) += scale_a / std::sqrt(2.0 * blk.a.rows() * blk.a.cols()) * rng.cgauss();
        for (int t = 0; t < blk.b.rows(); ++t)
          for (int j = 0; j < blk.b.cols(); ++j)
            blk.b(t, j) += scale_b / std::sqrt(2.0 * blk.b.rows() * blk.b.cols()) * rng.cgauss();
      }
    }
    if (best_block_residual < residual) {
      residual = best_block_residual;
      blocks = std::move(best_blocks);
    }

    // Exact residual from scratch; adopt the block ensemble when it wins.
    const double block_residual = distance_fro(mixture_operator_from_blocks(blocks, dims), rho);
    if (block_residual < residual || block_residual <= opts.fit_residual) {
      residual = block_residual;
      std::fill(w.begin(), w.end(), 0.0);
      for (const EnsembleBlock& blk : blocks) {
        ComplexMatrix g = blk.atom();
        const double nn = vec_norm(g);
        if (nn < 1e-10) continue;
        g *= Complex(1.0 / nn, 0.0);
        push_atom(std::move(g));
        w.back() = nn * nn;
      }
    }
  }

  out.atoms = static_cast<int>(atoms.size());
  out.residual = residual;
  out.success = residual <= opts.fit_residual;
  if (out.success) {
    out.cert.k = k;
    out.cert.residual = residual;
    for (size_t d = 0; d < atoms.size(); ++d) {
      if (w[d] <= 1e-12) continue;
      out.cert.weights.push_back(w[d]);
      out.cert.vectors.push_back(atoms[d]);
    }
  }
  return out;
}

// Witness family for S_k lower bounds: ψ = Ad_u ∘ φ_k ∘ Ad_v with the
// Tomiyama map at λ = k, which is k-positive by construction.
std::optional<MapWitness> sk_witness_search(const ComplexMatrix& rho, Dims dims, int k,
                                            const SeparabilityOptions& opts, Rng& rng,
                                            int* samples_used) {
  const int a = dims.a, b = dims.b;
  for (int s = 0; s < opts.witness_samples; ++s) {
    if (samples_used) *samples_used = s + 1;
    ComplexMatrix u, v;
    if (s == 0) {
      u = embed_matrix(b, a);
      v = ComplexMatrix::identity(b);
    } else {
      u = b >= a ? random_isometry(b, a, rng) : ginibre(b, a, rng);
      v = random_unitary(b, rng);
    }
    const LinearMap psi =
        compose(ad_map(u), compose(tomiyama_map(static_cast<double>(k), b), ad_map(v)));
    const ComplexMatrix image = apply_on_factor_b(psi, rho, a);
    const double lam = min_eig(image, 1e-7);
    if (lam < -opts.tol) {
      const double check = min_eig(apply_on_factor_b(psi, rho, a).hermitized());
      if (check < -opts.tol / 2) {
        MapWitness wit;
        wit.psi = psi;
        wit.value = lam;
        wit.note = "conjugated Tomiyama witness at level k=" + std::to_string(k) +
                   ": (id⊗ψ)(ρ) has a negative eigenvalue";
        return wit;
      }
    }
  }
  return std::nullopt;
}

MembershipVerdict trivial_member_from_eig(const ComplexMatrix& rho, Dims dims, int k,
                                          double psd_tol) {
  MembershipVerdict v;
  v.cone = "s:" + std::to_string(k);
  v.status = Status::Member;
  v.tolerance = psd_tol;
  SchmidtRankCertificate cert;
  cert.k = k;
  const EigResult eig = herm_eig(rho, 1e-8);
  for (int t = 0; t < rho.rows(); ++t) {
    if (eig.values[t] <= 0.0) continue;
    cert.weights.push_back(eig.values[t]);
    cert.vectors.push_back(eig.vectors.column(t));
  }
  cert.residual = distance_fro(cert.reconstruct(dims), rho);
  v.diagnostics.value = cert.residual;
  v.diagnostics.note = "k = min(a,b): eigendecomposition certificate";
  v.schmidt_certificate = std::move(cert);
  return v;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Member:
      return "member";
    case Status::NonMember:
      return "nonmember";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

ComplexMatrix SchmidtRankCertificate::reconstruct(Dims dims) const {
  ComplexMatrix m(dims.total(), dims.total());
  for (size_t t = 0; t < weights.size(); ++t)
    m += Complex(weights[t], 0.0) * outer(vectors[t], vectors[t]);
  return m;
}

ProductCertificate SchmidtRankCertificate::to_product(Dims dims) const {
  if (k != 1) throw BadCertificate("to_product: certificate rank exceeds one");
  ProductCertificate pc;
  for (size_t t = 0; t < weights.size(); ++t) {
    const SchmidtDecomposition sd = schmidt(vectors[t], dims);
    // Unit atom of Schmidt rank 1: ζ = c·x⊗y with c = 1.
    pc.weights.push_back(weights[t] * sd.coefficients.front() * sd.coefficients.front());
    pc.left.push_back(sd.left_vectors.column(0));
    pc.right.push_back(sd.right_vectors.column(0));
  }
  return pc;
}

MembershipVerdict is_cp(const LinearMap& phi, double tol) {
  MembershipVerdict v;
  v.cone = "cp";
  v.tolerance = tol;
  const EigResult eig = herm_eig(phi.choi);
  v.diagnostics.value = eig.values.front();
  if (eig.values.front() >= -tol) {
    v.status = Status::Member;
    v.kraus_certificate = kraus(phi, std::max(tol, 1e-9));
  } else {
    v.status = Status::NonMember;
    VectorWitness wit;
    wit.xi = eig.vectors.column(0);
    wit.value = eig.values.front();
    wit.note = "minimal eigenvector of the Choi matrix";
    v.vector_witness = std::move(wit);
  }
  return v;
}

MembershipVerdict is_ccp(const LinearMap& phi, double tol) {
  MembershipVerdict v = is_cp(transpose_compose(phi), tol);
  v.cone = "ccp";
  if (v.vector_witness) v.vector_witness->note = "minimal eigenvector of the partially transposed Choi matrix";
  if (v.diagnostics.note.empty() && v.status == Status::Member)
    v.diagnostics.note = "Kraus operators are those of φ∘t";
  return v;
}

MembershipVerdict is_ppt_map(const LinearMap& phi, double tol) {
  MembershipVerdict cp = is_cp(phi, tol);
  MembershipVerdict ccp = is_ccp(phi, tol);
  MembershipVerdict v;
  v.cone = "ppt";
  v.tolerance = tol;
  v.diagnostics.value = std::min(cp.diagnostics.value, ccp.diagnostics.value);
  if (cp.status == Status::Member && ccp.status == Status::Member) {
    v.status = Status::Member;
    v.kraus_certificate = cp.kraus_certificate;
    v.diagnostics.note = "both C and C^Γ are PSD";
  } else {
    v.status = Status::NonMember;
    v.vector_witness = cp.status == Status::NonMember ? cp.vector_witness : ccp.vector_witness;
  }
  return v;
}

SeesawResult min_schmidt_k_expectation(const ComplexMatrix& x, Dims dims, int k,
                                       const SeesawOptions& opts) {
  require_bipartite(x, dims, "min_schmidt_k_expectation");
  if (k < 1 || k > std::min(dims.a, dims.b))
    throw BadK("min_schmidt_k_expectation: k out of 1..min(a,b)");
  if (!x.is_hermitian(1e-8)) throw NotHermitian("min_schmidt_k_expectation: operator not Hermitian");

  const EigResult eig = herm_eig(x, 1e-8);
  const double lam_min = eig.values.front(), lam_max = eig.values.back();
  // Projected power iteration ascends on the PSD operator shift·I − X, so its
  // fixed points minimize ⟨ξ|X|ξ⟩ subject to the rank constraint.
  const double shift =
      lam_max + 1e-8 * std::max({1.0, std::abs(lam_max), std::abs(lam_min)});

  Rng rng(opts.seed);
  SeesawResult best;
  best.value = std::numeric_limits<double>::infinity();
  long total_iters = 0;
  int converged = 0;

  for (int r = 0; r < opts.restarts; ++r) {
    ComplexMatrix xi;
    if (r == 0) {
      xi = truncate_schmidt(eig.vectors.column(0), dims, k);
      const double n = vec_norm(xi);
      if (n > 1e-12) {
        xi *= Complex(1.0 / n, 0.0);
      } else {
        xi = random_schmidt_vector(dims, k, rng);
      }
    } else {
      xi = random_schmidt_vector(dims, k, rng);
    }

    double value = quad_form(x, xi);
    for (int t = 0; t < opts.max_iterations; ++t) {
      ComplexMatrix y = Complex(shift, 0.0) * xi - x * xi;
      ComplexMatrix z = truncate_schmidt(y, dims, k);
      const double nz = vec_norm(z);
      ++total_iters;
      if (nz < 1e-280) {
        ++converged;
        break;
      }
      z *= Complex(1.0 / nz, 0.0);
      xi = std::move(z);
      const double next = quad_form(x, xi);
      if (std::abs(next - value) < opts.convergence * std::max(1.0, std::abs(next))) {
        value = next;
        ++converged;
        break;
      }
      value = next;
    }
    if (value < best.value) {
      best.value = value;
      best.xi = xi;
    }
  }
  best.diagnostics.iterations = total_iters;
  best.diagnostics.restarts = opts.restarts;
  best.diagnostics.samples = converged;
  best.diagnostics.seed = opts.seed;
  best.diagnostics.value = best.value;
  return best;
}

MembershipVerdict is_k_blockpositive(const ComplexMatrix& x, Dims dims, int k, double tol,
                                     const SeesawOptions& opts) {
  MembershipVerdict v;
  v.cone = "bp:" + std::to_string(k);
  v.tolerance = tol;
  if (k < 1 || k > std::min(dims.a, dims.b)) throw BadK("is_k_blockpositive: k out of range");

  if (k == std::min(dims.a, dims.b)) {
    // Rank constraint vacuous: block-positivity is positivity.
    const EigResult eig = herm_eig(x, 1e-8);
    v.diagnostics.value = eig.values.front();
    if (eig.values.front() >= -tol) {
      v.status = Status::Member;
      v.diagnostics.note = "exact: k = min(a,b) reduces to the spectrum";
    } else {
      v.status = Status::NonMember;
      v.vector_witness = VectorWitness{eig.vectors.column(0), eig.values.front(),
                                       "minimal eigenvector (Schmidt rank unconstrained)"};
    }
    return v;
  }

  const SeesawResult sr = min_schmidt_k_expectation(x, dims, k, opts);
  v.diagnostics = sr.diagnostics;
  if (sr.value < -tol) {
    const double check = quad_form(x.hermitized(), sr.xi);
    const int rank = schmidt_rank(sr.xi, dims);
    if (check < -tol / 2 && rank <= k) {
      v.status = Status::NonMember;
      v.vector_witness = VectorWitness{
          sr.xi, sr.value, "Schmidt-rank-" + std::to_string(rank) + " vector with negative expectation"};
    } else {
      v.status = Status::Inconclusive;
      v.diagnostics.note = "see-saw minimum failed re-verification";
    }
  } else {
    v.status = Status::Member;
    v.diagnostics.note = "numerical: all see-saw restarts stayed above -tolerance";
  }
  return v;
}

MembershipVerdict is_k_positive(const LinearMap& phi, int k, double tol,
                                const SeesawOptions& opts) {
  const int kmax = std::min(phi.dims.a, phi.dims.b);
  if (k < 1 || k > kmax) throw BadK("is_k_positive: k out of 1..min(a,b)");
  if (k == kmax) {
    MembershipVerdict v = is_cp(phi, tol);
    v.cone = "p:" + std::to_string(k);
    v.diagnostics.note = "exact: k = min(a,b), decided by complete positivity";
    return v;
  }
  MembershipVerdict v = is_k_blockpositive(phi.choi, phi.dims, k, tol, opts);
  v.cone = "p:" + std::to_string(k);
  return v;
}

ComplexMatrix project_to_ppt_cone(const ComplexMatrix& c, Dims dims, long max_iterations,
                                  double tol) {
  require_bipartite(c, dims, "project_to_ppt_cone");
  ComplexMatrix x = c.hermitized();
  ComplexMatrix inc_p(x.rows(), x.cols()), inc_g(x.rows(), x.cols());
  const double scale = std::max(1.0, x.norm_fro());
  for (long it = 0; it < max_iterations; ++it) {
    ComplexMatrix t = x + inc_p;
    ComplexMatrix px = psd_project(t);
    inc_p = t - px;
    t = px + inc_g;
    ComplexMatrix gx = partial_transpose(psd_project(partial_transpose(t, dims)), dims);
    inc_g = t - gx;
    x = gx;
    if (it % 5 == 4 || it == max_iterations - 1) {
      const double dp = min_eig(x);
      const double dg = min_eig(partial_transpose(x, dims));
      if (dp > -tol * scale && dg > -tol * scale) return x.hermitized();
    }
  }
  throw ProjectionFailed("project_to_ppt_cone: defects above tolerance after budget");
}

MembershipVerdict is_decomposable(const LinearMap& phi, const DecOptions& opts) {
  MembershipVerdict v;
  v.cone = "dec";
  v.tolerance = opts.residual_tol;
  const ComplexMatrix& c = phi.choi;
  if (!c.is_hermitian(1e-8))
    throw NotHermitian("is_decomposable: map is not Hermiticity-preserving");
  const Dims dims = phi.dims;
  const int ab = dims.total();
  const double scale = std::max(1.0, c.norm_fro());

  if (opts.shortcuts) {
    if (min_eig(c) >= -1e-9 * scale) {
      SplitCertificate cert{psd_project(c), ComplexMatrix(ab, ab), 0.0};
      cert.residual = distance_fro(cert.p, c);
      v.status = Status::Member;
      v.diagnostics.value = cert.residual;
      v.diagnostics.note = "completely positive: P = C, Q = 0";
      v.split_certificate = std::move(cert);
      return v;
    }
    const ComplexMatrix g = partial_transpose(c, dims);
    if (min_eig(g) >= -1e-9 * scale) {
      SplitCertificate cert{ComplexMatrix(ab, ab), psd_project(g), 0.0};
      cert.residual = distance_fro(partial_transpose(cert.q, dims), c);
      v.status = Status::Member;
      v.diagnostics.value = cert.residual;
      v.diagnostics.note = "completely copositive: P = 0, Q = C^Γ";
      v.split_certificate = std::move(cert);
      return v;
    }
  }

  // Dykstra alternating projections between the product PSD cone {(P, Q)}
  // and the affine set {P + Q^Γ = C}. The affine projection adds
  // Δ = (C − P − Q^Γ)/2 to P and to Q^Γ and needs no correction term.
  ComplexMatrix p = psd_project(c);
  ComplexMatrix q = psd_project(partial_transpose(c - p, dims));
  ComplexMatrix inc_p(ab, ab), inc_q(ab, ab);
  double residual = std::numeric_limits<double>::infinity();
  long iterations = 0;
  while (iterations < opts.max_iterations) {
    ++iterations;
    ComplexMatrix delta = c - p - partial_transpose(q, dims);
    delta *= Complex(0.5, 0.0);
    p += delta;
    q += partial_transpose(delta, dims);

    ComplexMatrix tp = p + inc_p;
    p = psd_project(tp);
    inc_p = tp - p;
    ComplexMatrix tq = q + inc_q;
    q = psd_project(tq);
    inc_q = tq - q;

    residual = distance_fro(p + partial_transpose(q, dims), c);
    if (residual < opts.residual_tol) break;
  }
  v.diagnostics.iterations = iterations;
  v.diagnostics.value = residual;
  if (residual < opts.residual_tol) {
    v.status = Status::Member;
    v.split_certificate = SplitCertificate{p, q, residual};
    return v;
  }

  // Witness search: minimize ⟨C_φ, C_ψ⟩ over PPT maps ψ of unit Choi trace.
  // DEC° = PPT makes a strictly negative pairing a rigorous certificate.
  const ComplexMatrix grad = c.transpose();
  ComplexMatrix w = Complex(1.0 / ab, 0.0) * ComplexMatrix::identity(ab);
  double best_val = std::numeric_limits<double>::infinity();
  ComplexMatrix best_w = w;
  const double step0 = 1.0 / std::max(1.0, c.norm_fro());
  for (int t = 0; t < opts.witness_steps; ++t) {
    const double val = pair_mat(c, w, 1e-6);
    if (val < best_val) {
      best_val = val;
      best_w = w;
    }
    ComplexMatrix moved = w - Complex(step0 / std::sqrt(t + 1.0), 0.0) * grad;
    // Dykstra projection onto PSD ∩ PSD^Γ ∩ {tr = 1}.
    moved = moved.hermitized();
    ComplexMatrix ip(ab, ab), ig(ab, ab);
    for (int inner = 0; inner < 250; ++inner) {
      ComplexMatrix tt = moved + ip;
      ComplexMatrix px = psd_project(tt);
      ip = tt - px;
      tt = px + ig;
      ComplexMatrix gx = partial_transpose(psd_project(partial_transpose(tt, dims)), dims);
      ig = tt - gx;
      // Trace slice is affine: shift by a multiple of the identity.
      const double excess = (gx.trace().real() - 1.0) / ab;
      moved = gx - Complex(excess, 0.0) * ComplexMatrix::identity(ab);
      if (inner > 20 && min_eig(moved) > -1e-11 &&
          min_eig(partial_transpose(moved, dims)) > -1e-11)
        break;
    }
    w = moved;
  }
  if (best_val < -opts.witness_tol) {
    const double p_def = min_eig(best_w);
    const double g_def = min_eig(partial_transpose(best_w, dims));
    const double check = pair_mat(c, best_w, 1e-6);
    if (p_def > -1e-8 && g_def > -1e-8 && check < -opts.witness_tol / 2) {
      v.status = Status::NonMember;
      MapWitness wit;
      wit.psi = map_from_choi(dims, best_w);
      wit.value = best_val;
      wit.note = "PPT-map witness with negative pairing (DEC° = PPT)";
      v.map_witness = std::move(wit);
      v.diagnostics.value = best_val;
      return v;
    }
  }

  v.status = Status::Inconclusive;
  v.diagnostics.note = "Dykstra residual " + std::to_string(residual) +
                       " above tolerance and no PPT witness below -tolerance";
  return v;
}

MembershipVerdict is_separable(const ComplexMatrix& rho, Dims dims,
                               const SeparabilityOptions& opts) {
  require_bipartite(rho, dims, "is_separable");
  if (!rho.is_hermitian(1e-8)) throw NotPsd("is_separable: state is not Hermitian");
  const int kmax = std::min(dims.a, dims.b);
  if (opts.k < 1) throw BadK("is_separable: k must be at least 1");

  const EigResult eig = herm_eig(rho, 1e-8);
  if (eig.values.front() < -opts.psd_tol)
    throw NotPsd("is_separable: state has eigenvalue " + std::to_string(eig.values.front()));

  MembershipVerdict v;
  v.cone = "s:" + std::to_string(opts.k);
  v.tolerance = opts.tol;
  v.diagnostics.seed = opts.seed;

  if (rho.norm_fro() < 1e-14) {
    v.status = Status::Member;
    v.schmidt_certificate = SchmidtRankCertificate{opts.k, {}, {}, 0.0};
    v.diagnostics.note = "zero state";
    return v;
  }
  if (opts.k >= kmax) {
    MembershipVerdict t = trivial_member_from_eig(rho, dims, opts.k, opts.psd_tol);
    t.diagnostics.seed = opts.seed;
    return t;
  }

  // Pure-state shortcut: |ζ⟩⟨ζ| ∈ S_k exactly when the Schmidt rank of ζ is
  // at most k; the membership side yields a one-term certificate.
  {
    int eigen_rank = 0;
    for (double lam : eig.values)
      if (lam > 1e-9 * eig.values.back()) ++eigen_rank;
    if (eigen_rank == 1) {
      const ComplexMatrix zeta = eig.vectors.column(dims.total() - 1);
      if (schmidt_rank(zeta, dims) <= opts.k) {
        SchmidtRankCertificate cert;
        cert.k = opts.k;
        cert.weights = {eig.values.back()};
        cert.vectors = {zeta};
        cert.residual = distance_fro(cert.reconstruct(dims), rho);
        v.status = Status::Member;
        v.diagnostics.value = cert.residual;
        v.diagnostics.note = "pure state of Schmidt rank ≤ k";
        v.schmidt_certificate = std::move(cert);
        return v;
      }
    }
  }

  // Stage 1: partial-transpose test (necessary for separability; exact in
  // 2⊗2 and 2⊗3).
  if (opts.k == 1) {
    const EigResult gamma = herm_eig(partial_transpose(rho, dims), 1e-8);
    v.diagnostics.value = gamma.values.front();
    if (gamma.values.front() < -opts.tol) {
      v.status = Status::NonMember;
      v.vector_witness = VectorWitness{gamma.vectors.column(0), gamma.values.front(),
                                       "negative eigenvector of the partial transpose"};
      return v;
    }
    if (exact_ppt_dimension(dims)) {
      v.status = Status::Member;
      v.diagnostics.note = "PPT is sufficient in 2⊗2 and 2⊗3";
      return v;
    }
  }

  // Stage 2: k-positive witness family.
  Rng rng(opts.seed);
  int samples_used = 0;
  if (auto wit = sk_witness_search(rho, dims, opts.k, opts, rng, &samples_used)) {
    v.status = Status::NonMember;
    v.diagnostics.samples = samples_used;
    v.diagnostics.value = wit->value;
    v.map_witness = std::move(*wit);
    return v;
  }
  v.diagnostics.samples = samples_used;

  // Stage 3: constructive fit over rank-≤k projectors (on the unit-trace
  // normalization; the certificate is rescaled afterwards).
  const double trace = rho.trace().real();
  ComplexMatrix rho_n = rho;
  rho_n *= Complex(1.0 / trace, 0.0);
  FitOutcome fit = fit_schmidt_mixture(rho_n, dims, opts.k, opts, rng.split(0x5eedf17));
  v.diagnostics.iterations = fit.iterations;
  v.diagnostics.value = fit.residual * trace;
  if (fit.success) {
    for (double& w : fit.cert.weights) w *= trace;
    fit.cert.residual *= trace;
    v.status = Status::Member;
    v.schmidt_certificate = std::move(fit.cert);
    v.diagnostics.note = "mixture certificate over " + std::to_string(fit.atoms) + " atoms";
  } else {
    v.status = Status::Inconclusive;
    v.diagnostics.note = "no witness found and fit residual " + std::to_string(fit.residual) +
                         " above tolerance";
  }
  return v;
}

SchmidtNumberBounds schmidt_number_bounds(const ComplexMatrix& rho, Dims dims,
                                          SeparabilityOptions opts) {
  require_bipartite(rho, dims, "schmidt_number_bounds");
  if (!rho.is_hermitian(1e-8)) throw NotPsd("schmidt_number_bounds: state is not Hermitian");
  const EigResult eig = herm_eig(rho, 1e-8);
  if (eig.values.front() < -opts.psd_tol)
    throw NotPsd("schmidt_number_bounds: state has eigenvalue " +
                 std::to_string(eig.values.front()));

  const int kmax = std::min(dims.a, dims.b);
  SchmidtNumberBounds bounds;
  bounds.upper = kmax;

  Rng rng(opts.seed);

  // Lower bound: rigorous witnesses for ρ ∉ S_k, ascending in k.
  int lower = 1;
  if (min_eig(partial_transpose(rho, dims)) < -opts.tol) {
    lower = 2;
    MembershipVerdict ev;
    ev.cone = "s:1";
    ev.status = Status::NonMember;
    ev.tolerance = opts.tol;
    ev.diagnostics.note = "partial transpose not PSD";
    bounds.evidence.push_back(std::move(ev));
  }
  for (int k = lower; k < kmax; ++k) {
    Rng sub = rng.split(static_cast<uint64_t>(k));
    int used = 0;
    auto wit = sk_witness_search(rho, dims, k, opts, sub, &used);
    if (!wit) break;
    lower = k + 1;
    MembershipVerdict ev;
    ev.cone = "s:" + std::to_string(k);
    ev.status = Status::NonMember;
    ev.tolerance = opts.tol;
    ev.diagnostics.samples = used;
    ev.diagnostics.value = wit->value;
    ev.map_witness = std::move(*wit);
    bounds.evidence.push_back(std::move(ev));
  }
  bounds.lower = lower;

  // Upper bound: smallest k whose rank-≤k fit certifies membership.
  const double trace = rho.trace().real();
  ComplexMatrix rho_n = rho;
  rho_n *= Complex(1.0 / trace, 0.0);
  int upper = kmax;
  for (int k = lower; k < kmax; ++k) {
    FitOutcome fit = fit_schmidt_mixture(rho_n, dims, k, opts, rng.split(1000 + k));
    MembershipVerdict ev;
    ev.cone = "s:" + std::to_string(k);
    ev.tolerance = opts.fit_residual;
    ev.diagnostics.value = fit.residual;
    ev.diagnostics.iterations = fit.iterations;
    if (fit.success) {
      for (double& w : fit.cert.weights) w *= trace;
      fit.cert.residual *= trace;
      ev.status = Status::Member;
      ev.schmidt_certificate = std::move(fit.cert);
      upper = k;
      bounds.evidence.push_back(std::move(ev));
      break;
    }
    ev.status = Status::Inconclusive;
    ev.diagnostics.note = "fit residual above tolerance";
    bounds.evidence.push_back(std::move(ev));
  }
  if (upper == kmax) {
    bounds.evidence.push_back(trivial_member_from_eig(rho, dims, kmax, opts.psd_tol));
  }
  bounds.upper = std::max(upper, bounds.lower);
  return bounds;
}

MembershipVerdict is_k_superpositive(const LinearMap& phi, int k,
                                     const SeparabilityOptions& opts) {
  const int kmax = std::min(phi.dims.a, phi.dims.b);
  if (k < 1 || k > kmax) throw BadK("is_k_superpositive: k out of 1..min(a,b)");
  MembershipVerdict v;
  v.cone = "sp:" + std::to_string(k);
  v.tolerance = opts.tol;
  v.diagnostics.seed = opts.seed;

  MembershipVerdict cp = is_cp(phi, opts.psd_tol);
  if (cp.status == Status::NonMember) {
    v.status = Status::NonMember;
    v.vector_witness = cp.vector_witness;
    v.vector_witness->note = "Choi matrix is not PSD; SP_k ⊂ CP";
    v.diagnostics.value = cp.diagnostics.value;
    return v;
  }
  if (k == kmax) {
    v.status = Status::Member;
    v.kraus_certificate = cp.kraus_certificate;
    v.diagnostics.note = "k = min(a,b): every CP map is k-superpositive";
    return v;
  }

  SeparabilityOptions sopts = opts;
  sopts.k = k;
  MembershipVerdict sep = is_separable(phi.choi, phi.dims, sopts);
  v.diagnostics = sep.diagnostics;
  v.status = sep.status;
  v.vector_witness = sep.vector_witness;
  v.map_witness = sep.map_witness;
  if (sep.status == Status::Member && sep.schmidt_certificate) {
    // Convert the mixture certificate into rank-≤k Kraus operators:
    // w|ζ⟩⟨ζ| = C_{Ad_s} with s = conj(unvec(√w·ζ)).
    KrausDecomposition kd;
    for (size_t t = 0; t < sep.schmidt_certificate->weights.size(); ++t) {
      ComplexMatrix z = sep.schmidt_certificate->vectors[t];
      z *= Complex(std::sqrt(sep.schmidt_certificate->weights[t]), 0.0);
      kd.operators.push_back(unvec(z, phi.dims).conjugate());
    }
    v.kraus_certificate = std::move(kd);
    v.schmidt_certificate = sep.schmidt_certificate;
  }
  return v;
}

MembershipVerdict is_eb_k(const LinearMap& phi, int k, const SeparabilityOptions& opts) {
  if (k < 1) throw BadK("is_eb_k: k must be at least 1");
  const int a = phi.dims.a, b = phi.dims.b;
  MembershipVerdict v;
  v.cone = "eb:" + std::to_string(k);
  v.tolerance = opts.tol;
  v.diagnostics.seed = opts.seed;

  if (k >= a) {
    MembershipVerdict sp1 = is_k_superpositive(phi, 1, opts);
    sp1.cone = v.cone;
    sp1.diagnostics.note = "k ≥ dim_in: EB_k coincides with 1-superpositivity; " +
                           sp1.diagnostics.note;
    return sp1;
  }

  if (a == 3 && b == 3 && k == 2) {
    // Exact criterion in M_3: EB_2 = 2-positive ∧ 2-copositive.
    SeesawOptions sopts;
    sopts.seed = opts.seed;
    MembershipVerdict pos = is_k_positive(phi, 2, opts.tol, sopts);
    sopts.seed = opts.seed + 1;
    MembershipVerdict cop = is_k_positive(transpose_compose(phi), 2, opts.tol, sopts);
    v.diagnostics.value = std::min(pos.diagnostics.value, cop.diagnostics.value);
    v.diagnostics.iterations = pos.diagnostics.iterations + cop.diagnostics.iterations;
    if (pos.status == Status::NonMember || cop.status == Status::NonMember) {
      v.status = Status::NonMember;
      v.vector_witness =
          pos.status == Status::NonMember ? pos.vector_witness : cop.vector_witness;
      if (cop.status == Status::NonMember && pos.status != Status::NonMember)
        v.vector_witness->note += " (against the 2-copositive side)";
      v.diagnostics.note = "exact M_3 criterion: 2-positive and 2-copositive";
      return v;
    }
    if (pos.status == Status::Member && cop.status == Status::Member) {
      v.status = Status::Member;
      v.diagnostics.note = "exact M_3 criterion: 2-positive and 2-copositive";
      return v;
    }
    v.status = Status::Inconclusive;
    v.diagnostics.note = "exact M_3 criterion inconclusive on one side";
    return v;
  }

  // Sufficient condition: 1-superpositive maps are k-entanglement breaking
  // for every k.
  MembershipVerdict sp1 = is_k_superpositive(phi, 1, opts);
  if (sp1.status == Status::Member) {
    v.status = Status::Member;
    v.kraus_certificate = sp1.kraus_certificate;
    v.schmidt_certificate = sp1.schmidt_certificate;
    v.diagnostics.note = "1-superpositive, hence EB_k for every k";
    return v;
  }

  // Sampled necessary condition: C_{φ∘σ} must be separable for CP σ: M_k→M_A.
  Rng rng(opts.seed);
  int inconclusive = 0, members = 0;
  for (int t = 0; t < opts.witness_samples; ++t) {
    LinearMap sigma = random_cp_map(k, a, 1 + rng.uniform_int(k * a), rng);
    const LinearMap probe = compose(phi, sigma);
    SeparabilityOptions inner = opts;
    inner.k = 1;
    inner.seed = rng.next();
    inner.witness_samples = std::max(8, opts.witness_samples / 4);
    MembershipVerdict sep = is_separable(probe.choi, {k, b}, inner);
    v.diagnostics.samples = t + 1;
    if (sep.status == Status::NonMember) {
      v.status = Status::NonMember;
      MapWitness wit;
      wit.psi = sigma;
      wit.value = sep.diagnostics.value;
      wit.note = "CP probe σ: M_k→M_A with entangled C_{φ∘σ}";
      v.map_witness = std::move(wit);
      v.vector_witness = sep.vector_witness;
      v.diagnostics.value = sep.diagnostics.value;
      return v;
    }
    if (sep.status == Status::Member) ++members;
    if (sep.status == Status::Inconclusive) ++inconclusive;
  }
  v.status = Status::Inconclusive;
  v.diagnostics.note = "no witness on " + std::to_string(opts.witness_samples) +
                       " CP probes (leaning member: " + std::to_string(members) +
                       " separable, " + std::to_string(inconclusive) + " inconclusive)";
  return v;
}

// ---------------------------------------------------------------------------
// ConeSpec: parsing, sampling, deciding, ampliation cones.
// ---------------------------------------------------------------------------

std::string ConeSpec::str() const {
  switch (tag) {
    case Tag::CP:
      return "cp";
    case Tag::CCP:
      return "ccp";
    case Tag::PPT:
      return "ppt";
    case Tag::DEC:
      return "dec";
    case Tag::P:
      return "p:" + std::to_string(k);
    case Tag::SP:
      return "sp:" + std::to_string(k);
    case Tag::BP:
      return "bp:" + std::to_string(k);
    case Tag::S:
      return "s:" + std::to_string(k);
    case Tag::EB:
      return "eb:" + std::to_string(k);
    case Tag::AMP:
      return "amp:" + std::to_string(k) + ":" + amp_args[0].str() + ":" + amp_args[1].str();
  }
  return "?";
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_positive_int(const std::string& tok, const std::string& what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("cone grammar: expected a positive integer for " + what + ", got '" + tok +
                     "'");
  const int k = std::stoi(tok);
  if (k < 1) throw ParseError("cone grammar: " + what + " must be at least 1");
  return k;
}

ConeSpec parse_cone_tokens(const std::vector<std::string>& toks, size_t& pos) {
  if (pos >= toks.size()) throw ParseError("cone grammar: missing cone tag");
  const std::string tag = toks[pos++];
  ConeSpec spec;
  if (tag == "cp") {
    spec.tag = ConeSpec::Tag::CP;
  } else if (tag == "ccp") {
    spec.tag = ConeSpec::Tag::CCP;
  } else if (tag == "ppt") {
    spec.tag = ConeSpec::Tag::PPT;
  } else if (tag == "dec") {
    spec.tag = ConeSpec::Tag::DEC;
  } else if (tag == "p" || tag == "sp" || tag == "bp" || tag == "s" || tag == "eb") {
    spec.tag = tag == "p"    ? ConeSpec::Tag::P
               : tag == "sp" ? ConeSpec::Tag::SP
               : tag == "bp" ? ConeSpec::Tag::BP
               : tag == "s"  ? ConeSpec::Tag::S
                             : ConeSpec::Tag::EB;
    if (pos >= toks.size()) throw ParseError("cone grammar: '" + tag + "' needs a parameter");
    spec.k = parse_positive_int(toks[pos++], tag);
  } else if (tag == "amp") {
    spec.tag = ConeSpec::Tag::AMP;
    if (pos >= toks.size()) throw ParseError("cone grammar: 'amp' needs a parameter");
    spec.k = parse_positive_int(toks[pos++], "amp");
    spec.amp_args.push_back(parse_cone_tokens(toks, pos));
    spec.amp_args.push_back(parse_cone_tokens(toks, pos));
  } else {
    throw ParseError("cone grammar: unknown tag '" + tag + "'");
  }
  return spec;
}

}  // namespace

ConeSpec parse_cone(const std::string& text) {
  const std::vector<std::string> toks = split_tokens(text);
  size_t pos = 0;
  ConeSpec spec = parse_cone_tokens(toks, pos);
  if (pos != toks.size()) throw ParseError("cone grammar: trailing tokens in '" + text + "'");
  return spec;
}

LinearMap sample_cone_member(const ConeSpec& cone, Dims dims, Rng& rng) {
  const int a = dims.a, b = dims.b;
  switch (cone.tag) {
    case ConeSpec::Tag::CP:
      return random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng);
    case ConeSpec::Tag::CCP:
      return transpose_compose(random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng));
    case ConeSpec::Tag::PPT: {
      const LinearMap cp = random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng);
      ComplexMatrix c = project_to_ppt_cone(cp.choi, dims);
      const double tr = c.trace().real();
      if (tr < 1e-12) throw ProjectionFailed("sample_cone_member: PPT projection collapsed");
      c *= Complex(a / tr, 0.0);
      return map_from_choi(dims, std::move(c));
    }
    case ConeSpec::Tag::DEC: {
      const LinearMap cp = random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng);
      const LinearMap ccp = transpose_compose(random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng));
      return map_from_choi(dims, cp.choi + ccp.choi);
    }
    case ConeSpec::Tag::SP:
    case ConeSpec::Tag::S: {
      const int k = std::min({cone.k, a, b});
      return random_sp_k_map(a, b, k, 1 + rng.uniform_int(a * b), rng);
    }
    case ConeSpec::Tag::EB:
      return random_sp_k_map(a, b, 1, 1 + rng.uniform_int(a * b), rng);
    case ConeSpec::Tag::P: {
      // cp_post ∘ φ_λ ∘ Ad_u with λ ≥ k stays k-positive (mapping cone).
      const int k = std::min({cone.k, a});
      if (rng.uniform() < 0.3) return random_cp_map(a, b, 1 + rng.uniform_int(a * b), rng);
      const double lambda = rng.uniform(static_cast<double>(k), static_cast<double>(std::max(k, a)));
      const LinearMap mid = tomiyama_map(lambda, a);
      const LinearMap pre = ad_map(random_unitary(a, rng));
      const LinearMap post = random_cp_map(a, b, 1 + rng.uniform_int(a), rng);
      return compose(post, compose(mid, pre));
    }
    case ConeSpec::Tag::BP:
    case ConeSpec::Tag::AMP:
      throw UnsupportedCone("sample_cone_member: no generator sampler for " + cone.str());
  }
  throw UnsupportedCone("sample_cone_member: unknown cone");
}

MembershipVerdict decide_cone(const ConeSpec& cone, const LinearMap& phi, uint64_t seed,
                              double tol) {
  switch (cone.tag) {
    case ConeSpec::Tag::CP:
      return is_cp(phi, std::min(tol, 1e-9));
    case ConeSpec::Tag::CCP:
      return is_ccp(phi, std::min(tol, 1e-9));
    case ConeSpec::Tag::PPT:
      return is_ppt_map(phi, std::min(tol, 1e-9));
    case ConeSpec::Tag::DEC: {
      DecOptions opts;
      opts.seed = seed;
      return is_decomposable(phi, opts);
    }
    case ConeSpec::Tag::P: {
      SeesawOptions opts;
      opts.seed = seed;
      return is_k_positive(phi, cone.k, tol, opts);
    }
    case ConeSpec::Tag::BP:
      return is_k_blockpositive(phi.choi, phi.dims, cone.k, tol, SeesawOptions{32, 500, 1e-12, seed});
    case ConeSpec::Tag::SP: {
      SeparabilityOptions opts;
      opts.seed = seed;
      opts.tol = tol;
      return is_k_superpositive(phi, cone.k, opts);
    }
    case ConeSpec::Tag::S: {
      SeparabilityOptions opts;
      opts.k = cone.k;
      opts.seed = seed;
      opts.tol = tol;
      return is_separable(phi.choi, phi.dims, opts);
    }
    case ConeSpec::Tag::EB: {
      SeparabilityOptions opts;
      opts.seed = seed;
      opts.tol = tol;
      return is_eb_k(phi, cone.k, opts);
    }
    case ConeSpec::Tag::AMP:
      return amp_membership(phi, cone.k, cone.amp_args[0], cone.amp_args[1], 32, seed);
  }
  throw UnsupportedCone("decide_cone: unknown cone");
}

MembershipVerdict amp_membership(const LinearMap& phi, int k, const ConeSpec& cone_k,
                                 const ConeSpec& cone_l, int samples, uint64_t seed) {
  if (k < 1) throw BadK("amp_membership: k must be at least 1");
  if (cone_k.tag == ConeSpec::Tag::AMP || cone_l.tag == ConeSpec::Tag::AMP)
    throw UnsupportedCone("amp_membership: nested ampliation cones are not decidable");
  if (cone_l.tag == ConeSpec::Tag::BP)
    throw UnsupportedCone("amp_membership: no decision procedure for target cone bp");

  MembershipVerdict v;
  v.cone = "amp:" + std::to_string(k) + ":" + cone_k.str() + ":" + cone_l.str();
  v.tolerance = 1e-8;
  v.diagnostics.seed = seed;

  Rng rng(seed);
  const Dims sigma_dims{k, phi.dims.a};
  int member_count = 0, inconclusive_count = 0, disagreements = 0;
  for (int t = 0; t < samples; ++t) {
    const LinearMap sigma = sample_cone_member(cone_k, sigma_dims, rng);
    const LinearMap composed = compose(phi, sigma);
    const MembershipVerdict direct = decide_cone(cone_l, composed, rng.next(), 1e-8);
    // Route (iv): σ*∘φ* ∈ L*; the supported targets are *-closed, so the dual
    // composition is decided against L itself.
    const MembershipVerdict dual_route = decide_cone(cone_l, dual_map(composed), rng.next(), 1e-8);
    if ((direct.status == Status::Member && dual_route.status == Status::NonMember) ||
        (direct.status == Status::NonMember && dual_route.status == Status::Member))
      ++disagreements;

    if (direct.status == Status::NonMember) {
      v.status = Status::NonMember;
      MapWitness wit;
      wit.psi = sigma;
      wit.value = direct.diagnostics.value;
      wit.note = "generator σ ∈ " + cone_k.str() + " with φ∘σ ∉ " + cone_l.str();
      v.map_witness = std::move(wit);
      v.vector_witness = direct.vector_witness;
      v.diagnostics.samples = t + 1;
      v.diagnostics.value = direct.diagnostics.value;
      return v;
    }
    if (direct.status == Status::Member) ++member_count;
    if (direct.status == Status::Inconclusive) ++inconclusive_count;
  }
  v.diagnostics.samples = samples;

  // Named special cases with their own decision procedures.
  if (cone_k.tag == ConeSpec::Tag::CP && cone_l.tag == ConeSpec::Tag::CP) {
    SeesawOptions opts;
    opts.seed = rng.next();
    MembershipVerdict delegate = is_k_positive(phi, k, 1e-8, opts);
    delegate.cone = v.cone;
    delegate.diagnostics.samples = samples;
    delegate.diagnostics.note = "amp_k[cp,cp] = p:" + std::to_string(k) + "; sampled " +
                                std::to_string(samples) + " generators, " +
                                std::to_string(disagreements) + " route disagreements";
    return delegate;
  }
  if (cone_k.tag == ConeSpec::Tag::CP && cone_l.tag == ConeSpec::Tag::SP && cone_l.k == 1) {
    SeparabilityOptions opts;
    opts.seed = rng.next();
    MembershipVerdict delegate = is_eb_k(phi, k, opts);
    delegate.cone = v.cone;
    delegate.diagnostics.note = "amp_k[cp,sp:1] = eb:" + std::to_string(k) + "; sampled " +
                                std::to_string(samples) + " generators, " +
                                std::to_string(disagreements) + " route disagreements";
    return delegate;
  }

  v.status = Status::Inconclusive;
  v.diagnostics.note = "no generator violation in " + std::to_string(samples) + " samples (" +
                       std::to_string(member_count) + " member, " +
                       std::to_string(inconclusive_count) + " inconclusive, " +
                       std::to_string(disagreements) + " route disagreements)";
  return v;
}

}  // namespace choicones
