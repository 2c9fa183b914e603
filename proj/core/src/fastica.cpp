#include <coda_ica/fastica.hpp>
#include <coda_ica/rng.hpp>
#include <coda_ica/scatter.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace coda_ica {

void FastIcaOptions::validate() const {
  if (!(tol > 0.0)) throw DomainError("FastICA: tol must be > 0");
  if (max_iter < 1) throw DomainError("FastICA: max_iter must be >= 1");
  if (restarts < 0) throw DomainError("FastICA: restarts must be >= 0");
}

namespace {

// One Newton-type step E[g(u'x) x] - E[g'(u'x)] u.
Vector one_unit_step(const Matrix& X_st, const Vector& u, const Nonlinearity& g) {
  const Vector y = X_st * u;
  const double n = static_cast<double>(X_st.rows());
  Vector gy, dgy;
  g.g_dg(y, gy, dgy);
  return X_st.transpose() * gy / n - (dgy.sum() / n) * u;
}

// Removes the span of the first `k` columns of U and normalizes. Returns
// false if nothing is left.
bool orthonormalize_against(Vector& u, const Matrix& U, Index k) {
  if (k > 0) u -= U.leftCols(k) * (U.leftCols(k).transpose() * u);
  const double norm = u.norm();
  if (!(norm > 1e-12) || !std::isfinite(norm)) return false;
  u /= norm;
  return true;
}

struct Fit {
  Matrix U;  // columns are directions in whitened space
  int iterations = 0;
  int restarts = 0;
};

Fit run_deflation(const Matrix& X_st, const std::vector<Nonlinearity>& per_position,
                  const Matrix& init, const FastIcaOptions& opt, Rng& rng) {
  const Index p = X_st.cols();
  Fit fit;
  fit.U = Matrix::Zero(p, p);
  for (Index k = 0; k < p; ++k) {
    const Nonlinearity& g = per_position[static_cast<std::size_t>(k)];
    bool done = false;
    for (int attempt = 0; attempt <= opt.restarts && !done; ++attempt) {
      Vector u = attempt == 0 ? Vector(init.col(k)) : Vector(rng.normal_matrix(p, 1));
      if (attempt > 0) ++fit.restarts;
      if (!orthonormalize_against(u, fit.U, k)) continue;
      for (int it = 0; it < opt.max_iter; ++it) {
        ++fit.iterations;
        Vector next = one_unit_step(X_st, u, g);
        if (!orthonormalize_against(next, fit.U, k)) break;
        const double change = 1.0 - std::abs(next.dot(u));
        u = next;
        if (change < opt.tol) {
          done = true;
          break;
        }
      }
      if (done) fit.U.col(k) = u;
    }
    if (!done) {
      std::ostringstream os;
      os << "deflation FastICA (" << g.id() << "): component " << k + 1 << " did not converge in "
         << opt.max_iter << " iterations after " << opt.restarts << " restarts";
      throw ConvergenceError(os.str());
    }
  }
  return fit;
}

Matrix initial_rotation(Index p, const FastIcaOptions& opt, Rng& rng) {
  if (opt.init == FastIcaOptions::Init::identity) return Matrix::Identity(p, p);
  return random_orthogonal(p, rng);
}

Fit run_symmetric(const Matrix& X_st, const Nonlinearity& g, bool squared,
                  const FastIcaOptions& opt, Rng& rng) {
  const Index p = X_st.cols();
  const double n = static_cast<double>(X_st.rows());
  Fit fit;
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    Matrix U = attempt == 0 ? initial_rotation(p, opt, rng) : random_orthogonal(p, rng);
    if (attempt > 0) ++fit.restarts;
    for (int it = 0; it < opt.max_iter; ++it) {
      ++fit.iterations;
      const Matrix Y = X_st * U;
      Matrix gY(Y.rows(), p);
      Vector mean_dg(p), mean_G(p);
      Vector gcol, dgcol;
      for (Index k = 0; k < p; ++k) {
        g.g_dg(Y.col(k), gcol, dgcol);
        gY.col(k) = gcol;
        mean_dg(k) = dgcol.sum() / n;
        if (squared) mean_G(k) = g.G(Vector(Y.col(k))).sum() / n;
      }
      Matrix next = X_st.transpose() * gY / n - U * mean_dg.asDiagonal();
      if (squared) next = next * mean_G.asDiagonal();
      try {
        next = next * inverse_sqrt_symmetric(next.transpose() * next, 1e-14);
      } catch (const SingularCovariance&) {
        break;  // degenerate update; restart
      }
      const double change = (1.0 - (next.transpose() * U).diagonal().array().abs()).maxCoeff();
      U = next;
      if (change < opt.tol) {
        fit.U = U;
        return fit;
      }
    }
  }
  std::ostringstream os;
  os << (squared ? "squared symmetric" : "symmetric") << " FastICA (" << g.id()
     << "): no convergence in " << opt.max_iter << " iterations after " << opt.restarts
     << " restarts";
  throw ConvergenceError(os.str());
}

// Objective values and the identifiability flag, in output order.
void score_objectives(UnmixingResult& res, const std::vector<Nonlinearity>& by_raw_index,
                      const FastIcaOptions& opt) {
  const double n = static_cast<double>(res.Z.rows());
  bool all_small = true;
  for (Index k = 0; k < res.Z.cols(); ++k) {
    auto& info = res.diagnostics.components[static_cast<std::size_t>(k)];
    const Nonlinearity& g = by_raw_index[static_cast<std::size_t>(info.raw_index)];
    info.nonlinearity = g.id();
    info.objective = g.G(Vector(res.Z.col(k))).sum() / n;
    const double noise = opt.identifiability_sd * g.gaussian_sd() / std::sqrt(n);
    if (std::abs(info.objective) >= std::max(opt.identifiability_threshold, noise))
      all_small = false;
  }
  if (all_small) {
    res.diagnostics.non_identifiable = true;
    std::ostringstream os;
    os << "every |mean G(z_k)| is within Gaussian sampling noise"
       << ": components are indistinguishable from Gaussian, unmixing is not identifiable";
    res.diagnostics.warnings.push_back(os.str());
  }
}

UnmixingResult finish(const Matrix& X, const WhitenedData& w, const Fit& fit, std::string method,
                      Diagnostics diag, std::vector<ComponentInfo> raw_info,
                      const std::vector<Nonlinearity>& by_raw_index, const FastIcaOptions& opt) {
  diag.iterations = fit.iterations;
  diag.restarts = fit.restarts;
  diag.converged = true;
  UnmixingResult res = finalize_unmixing(X, fit.U.transpose() * w.cov_inv_sqrt, w.mean,
                                         std::move(method), std::move(diag), std::move(raw_info));
  score_objectives(res, by_raw_index, opt);
  return res;
}

}  // namespace

UnmixingResult deflation_fastica(const Matrix& X, const Nonlinearity& g,
                                 const FastIcaOptions& options) {
  options.validate();
  const WhitenedData w = whiten(X);
  const Index p = X.cols();
  Rng rng(options.seed);
  const Matrix init = initial_rotation(p, options, rng);
  const std::vector<Nonlinearity> gs(static_cast<std::size_t>(p), g);
  const Fit fit = run_deflation(w.X_st, gs, init, options, rng);
  std::vector<ComponentInfo> raw(static_cast<std::size_t>(p));
  for (Index k = 0; k < p; ++k) raw[static_cast<std::size_t>(k)].extraction_position = k;
  return finish(X, w, fit, "fastica-defl(" + g.id() + ")", {}, std::move(raw), gs, options);
}

double alpha_criterion(const Vector& scores, const Nonlinearity& g) {
  const double n = static_cast<double>(scores.size());
  if (scores.size() < 2) throw DomainError("alpha_criterion: need at least 2 scores");
  const Vector gz = g.g(scores);
  const double e_g2 = gz.squaredNorm() / n;
  const double e_zg = scores.dot(gz) / n;
  const double e_dg = g.dg(scores).sum() / n;
  const double denom = e_zg - e_dg;
  if (!(std::abs(denom) >= 1e-12)) {
    std::ostringstream os;
    os << "alpha criterion undefined for " << g.id() << ": |E[z g(z)] - E[g'(z)]| = "
       << std::abs(denom);
    throw CriterionUndefined(os.str());
  }
  return (e_g2 - e_zg * e_zg) / (denom * denom);
}

UnmixingResult adaptive_deflation_fastica(const Matrix& X,
                                          const std::vector<Nonlinearity>& candidates,
                                          const FastIcaOptions& options,
                                          const AlgebraicOptions& pilot_options) {
  options.validate();
  if (candidates.empty()) throw DomainError("adaptive FastICA: empty candidate set");
  const WhitenedData w = whiten(X);
  const Index p = X.cols();

  Diagnostics diag;
  UnmixingResult pilot = fobi(X, pilot_options);
  diag.pilot = "fobi";
  if (pilot.diagnostics.a4_warning) {
    for (const auto& msg : pilot.diagnostics.warnings) diag.warnings.push_back("pilot: " + msg);
    diag.warnings.push_back("pilot: FOBI eigenvalue gap warning, falling back to kjade(1)");
    pilot = k_jade(X, 1, pilot_options);
    diag.pilot = "kjade(1)";
  }
  diag.criterion = "(E[g^2] - E[zg]^2) / (E[zg] - E[g'])^2";

  // W = U' cov^{-1/2}  =>  U = (W cov^{1/2})',  cov^{1/2} = cov cov^{-1/2}.
  const Matrix U_pilot = (pilot.W * w.cov * w.cov_inv_sqrt).transpose();
  const Matrix Z_pilot = w.X_st * U_pilot;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best_alpha(static_cast<std::size_t>(p), inf);
  std::vector<std::size_t> best_g(static_cast<std::size_t>(p), 0);
  for (Index j = 0; j < p; ++j) {
    const Vector z = Z_pilot.col(j);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      try {
        const double a = alpha_criterion(z, candidates[c]);
        if (a < best_alpha[static_cast<std::size_t>(j)]) {
          best_alpha[static_cast<std::size_t>(j)] = a;
          best_g[static_cast<std::size_t>(j)] = c;
        }
      } catch (const CriterionUndefined&) {
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return best_alpha[static_cast<std::size_t>(a)] < best_alpha[static_cast<std::size_t>(b)];
  });

  std::vector<Nonlinearity> per_position;
  std::vector<ComponentInfo> raw(static_cast<std::size_t>(p));
  Matrix init(p, p);
  for (Index k = 0; k < p; ++k) {
    const auto j = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
    init.col(k) = U_pilot.col(static_cast<Index>(j));
    auto& info = raw[static_cast<std::size_t>(k)];
    info.extraction_position = k;
    if (std::isinf(best_alpha[j])) {
      per_position.push_back(Nonlinearity::pow3());
      std::ostringstream os;
      os << "pilot component " << j + 1 << ": criterion undefined for every candidate, using pow3";
      diag.warnings.push_back(os.str());
    } else {
      per_position.push_back(candidates[best_g[j]]);
      info.alpha = best_alpha[j];
    }
  }

  Rng rng(options.seed);
  const Fit fit = run_deflation(w.X_st, per_position, init, options, rng);
  const std::string method = candidates.size() == 1
                                 ? "fastica-reloaded(" + candidates.front().id() + ")"
                                 : "fastica-adaptive";
  return finish(X, w, fit, method, std::move(diag), std::move(raw), per_position, options);
}

UnmixingResult reloaded_deflation_fastica(const Matrix& X, const Nonlinearity& g,
                                          const FastIcaOptions& options,
                                          const AlgebraicOptions& pilot_options) {
  return adaptive_deflation_fastica(X, {g}, options, pilot_options);
}

UnmixingResult symmetric_fastica(const Matrix& X, const Nonlinearity& g,
                                 const FastIcaOptions& options) {
  options.validate();
  const WhitenedData w = whiten(X);
  Rng rng(options.seed);
  const Fit fit = run_symmetric(w.X_st, g, false, options, rng);
  const std::vector<Nonlinearity> gs(static_cast<std::size_t>(X.cols()), g);
  return finish(X, w, fit, "fastica-sym(" + g.id() + ")", {}, {}, gs, options);
}

UnmixingResult squared_symmetric_fastica(const Matrix& X, const Nonlinearity& g,
                                         const FastIcaOptions& options) {
  options.validate();
  const WhitenedData w = whiten(X);
  Rng rng(options.seed);
  const Fit fit = run_symmetric(w.X_st, g, true, options, rng);
  const std::vector<Nonlinearity> gs(static_cast<std::size_t>(X.cols()), g);
  return finish(X, w, fit, "fastica-sqsym(" + g.id() + ")", {}, {}, gs, options);
}

}  // namespace coda_ica
