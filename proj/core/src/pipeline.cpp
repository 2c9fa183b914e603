#include <coda_ica/pipeline.hpp>
#include <coda_ica/scatter.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace coda_ica {

namespace {

const std::vector<std::pair<std::string, EstimatorSpec::Kind>>& kind_table() {
  static const std::vector<std::pair<std::string, EstimatorSpec::Kind>> table = {
      {"fobi", EstimatorSpec::Kind::fobi},
      {"jade", EstimatorSpec::Kind::jade},
      {"kjade", EstimatorSpec::Kind::kjade},
      {"fastica-defl", EstimatorSpec::Kind::fastica_defl},
      {"fastica-adaptive", EstimatorSpec::Kind::fastica_adaptive},
      {"fastica-sym", EstimatorSpec::Kind::fastica_sym},
      {"fastica-sqsym", EstimatorSpec::Kind::fastica_sqsym},
  };
  return table;
}

Nonlinearity single_nonlinearity(const EstimatorSpec& spec, const char* fallback) {
  if (spec.nonlinearities.size() > 1)
    throw DomainError("method " + spec.tag() + " takes exactly one nonlinearity");
  return Nonlinearity::from_id(spec.nonlinearities.empty() ? fallback
                                                            : spec.nonlinearities.front());
}

}  // namespace

EstimatorSpec::Kind EstimatorSpec::parse_kind(const std::string& name) {
  for (const auto& [key, kind] : kind_table())
    if (key == name) return kind;
  std::ostringstream os;
  os << "unknown method '" << name << "'; valid methods:";
  for (const auto& n : kind_names()) os << ' ' << n;
  throw DomainError(os.str());
}

std::vector<std::string> EstimatorSpec::kind_names() {
  std::vector<std::string> names;
  for (const auto& entry : kind_table()) names.push_back(entry.first);
  return names;
}

std::string EstimatorSpec::tag() const {
  for (const auto& [key, k2] : kind_table())
    if (k2 == kind) return key;
  return "?";
}

void EstimatorSpec::validate(Index p) const {
  if (kind == Kind::kjade && (k < 1 || k > p)) {
    std::ostringstream os;
    os << "kjade: k must lie in [1, " << p << "], got " << k;
    throw DomainError(os.str());
  }
  if (kind == Kind::fastica_adaptive) {
    for (const auto& id : nonlinearities) Nonlinearity::from_id(id);
  } else if (kind == Kind::fastica_defl || kind == Kind::fastica_sym || kind == Kind::fastica_sqsym) {
    single_nonlinearity(*this, "pow3");
  } else if (!nonlinearities.empty()) {
    throw DomainError("method " + tag() + " does not take a nonlinearity");
  }
  fastica.validate();
}

UnmixingResult run_estimator(const Matrix& X, const EstimatorSpec& spec) {
  spec.validate(X.cols());
  switch (spec.kind) {
    case EstimatorSpec::Kind::fobi: return fobi(X, spec.algebraic);
    case EstimatorSpec::Kind::jade: return jade(X, spec.algebraic);
    case EstimatorSpec::Kind::kjade: return k_jade(X, spec.k, spec.algebraic);
    case EstimatorSpec::Kind::fastica_defl:
      return deflation_fastica(X, single_nonlinearity(spec, "pow3"), spec.fastica);
    case EstimatorSpec::Kind::fastica_adaptive: {
      std::vector<Nonlinearity> candidates;
      if (spec.nonlinearities.empty()) candidates = candidate_set();
      for (const auto& id : spec.nonlinearities) candidates.push_back(Nonlinearity::from_id(id));
      return adaptive_deflation_fastica(X, candidates, spec.fastica, spec.algebraic);
    }
    case EstimatorSpec::Kind::fastica_sym:
      return symmetric_fastica(X, single_nonlinearity(spec, "tanh"), spec.fastica);
    case EstimatorSpec::Kind::fastica_sqsym:
      return squared_symmetric_fastica(X, single_nonlinearity(spec, "tanh"), spec.fastica);
  }
  throw DomainError("unknown estimator");
}

CodaIcaResult compositional_ica(const CompositionMatrix& X, const EstimatorSpec& spec,
                                const std::optional<ContrastMatrix>& V) {
  ContrastMatrix basis = V ? *V : ContrastMatrix::standard(X.parts());
  if (basis.parts() != X.parts())
    throw DomainError("contrast matrix does not match the number of parts");
  const Matrix Y = ilr_rows(X.data(), basis);
  UnmixingResult base = run_estimator(Y, spec);
  Matrix W_clr = base.W * basis.matrix().transpose();
  return order_by_kurtosis(CodaIcaResult{std::move(base), std::move(basis), std::move(W_clr)});
}

CodaIcaResult order_by_kurtosis(CodaIcaResult result) {
  auto& base = result.base;
  const Index p = base.Z.cols();
  const Vector kurt = excess_kurtosis(base.Z);
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index c) {
    if (std::abs(kurt(a) - kurt(c)) < 1e-12) return false;
    return kurt(a) > kurt(c);
  });

  UnmixingResult sorted = base;
  Matrix W_clr = result.W_clr;
  for (Index k = 0; k < p; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    sorted.W.row(k) = base.W.row(src);
    sorted.A.col(k) = base.A.col(src);
    sorted.Z.col(k) = base.Z.col(src);
    W_clr.row(k) = result.W_clr.row(src);
    if (!base.diagnostics.components.empty()) {
      sorted.diagnostics.components[static_cast<std::size_t>(k)] =
          base.diagnostics.components[static_cast<std::size_t>(src)];
      sorted.diagnostics.components[static_cast<std::size_t>(k)].kurtosis = kurt(src);
    }
  }
  return CodaIcaResult{std::move(sorted), std::move(result.V), std::move(W_clr)};
}

SignalPartition::SignalPartition(std::vector<Index> indices, Index components)
    : indices_(std::move(indices)) {
  if (indices_.empty()) throw DomainError("signal partition must select at least one component");
  std::set<Index> seen;
  for (Index i : indices_) {
    if (i < 0 || i >= components) {
      std::ostringstream os;
      os << "signal component " << i + 1 << " out of range 1.." << components;
      throw DomainError(os.str());
    }
    if (!seen.insert(i).second) {
      std::ostringstream os;
      os << "signal component " << i + 1 << " listed twice";
      throw DomainError(os.str());
    }
  }
}

Matrix SignalPartition::select_columns(const Matrix& M) const {
  Matrix out(M.rows(), static_cast<Index>(indices_.size()));
  for (std::size_t k = 0; k < indices_.size(); ++k) out.col(static_cast<Index>(k)) = M.col(indices_[k]);
  return out;
}

Reconstruction reconstruct(const Matrix& Z, const Matrix& A_ilr, const Vector& b,
                           const ContrastMatrix& V, const SignalPartition& partition,
                           double kappa) {
  const Index p = A_ilr.rows();
  if (A_ilr.cols() != p || Z.cols() != p || b.size() != p || V.coords() != p)
    throw DomainError("reconstruct: inconsistent dimensions of scores, mixing, location and basis");
  for (Index i : partition.signal_indices())
    if (i >= p) throw DomainError("reconstruct: signal index out of range");
  const Matrix A_s = partition.select_columns(A_ilr);
  const Matrix Z_s = partition.select_columns(Z);
  Matrix ilr_s = (Z_s * A_s.transpose()).rowwise() + b.transpose();
  Matrix clr_s = ilr_s * V.matrix().transpose();
  CompositionMatrix comp(clr_inv_rows(clr_s, kappa), kappa);
  return Reconstruction{std::move(ilr_s), std::move(clr_s), std::move(comp)};
}

Reconstruction reconstruct(const CodaIcaResult& result, const SignalPartition& partition,
                           double kappa) {
  return reconstruct(result.base.Z, result.base.A, result.base.b, result.V, partition, kappa);
}

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

double silverman_bandwidth(const Vector& values) {
  const Index n = values.size();
  if (n < 2) throw DegenerateSample("kernel density needs at least 2 values");
  const double mean = values.mean();
  const double sd = std::sqrt((values.array() - mean).square().sum() / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateSample("kernel density: sample has zero variance");
  std::vector<double> s(values.data(), values.data() + n);
  std::sort(s.begin(), s.end());
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityEstimate kernel_density(const Vector& values, Index grid, double dominance) {
  if (grid < 3) throw DomainError("kernel density grid needs at least 3 points");
  DensityEstimate est;
  est.bandwidth = silverman_bandwidth(values);
  const double h = est.bandwidth;
  const Index n = values.size();
  std::vector<double> s(values.data(), values.data() + n);
  std::sort(s.begin(), s.end());

  const double lo = s.front() - 3.0 * h;
  const double hi = s.back() + 3.0 * h;
  est.grid = Vector::LinSpaced(grid, lo, hi);
  est.density = Vector::Zero(grid);
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * 3.14159265358979323846));
  // Kernel contributions beyond 10 bandwidths are below 2e-22 and skipped.
  const double reach = 10.0 * h;
  for (Index k = 0; k < grid; ++k) {
    const double x = est.grid(k);
    auto first = std::lower_bound(s.begin(), s.end(), x - reach);
    auto last = std::upper_bound(first, s.end(), x + reach);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / h;
      acc += std::exp(-0.5 * u * u);
    }
    est.density(k) = acc * norm;
  }

  const double peak = est.density.maxCoeff();
  for (Index k = 1; k + 1 < grid; ++k) {
    const double f = est.density(k);
    if (f < est.density(k - 1) && f < est.density(k + 1)) {
      LocalMinimum m;
      m.grid_index = k;
      m.location = est.grid(k);
      m.density = f;
      const double left = est.density.head(k).maxCoeff();
      const double right = est.density.tail(grid - k - 1).maxCoeff();
      m.prominence = std::min(left, right) - f;
      m.dominant = m.prominence >= dominance * peak;
      est.minima.push_back(m);
    }
  }
  return est;
}

}  // namespace coda_ica
