#include <coda_ica/eval.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coda_ica {

namespace {

void require_nonsingular(const Matrix& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw DomainError(std::string(what) + " must be a non-empty square matrix");
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0))) throw DomainError(std::string(what) + " is singular");
}

double parse_param(const std::string& text, std::size_t open) {
  const auto close = text.find(')', open);
  if (close == std::string::npos) throw DomainError("source spec missing ')': " + text);
  try {
    return std::stod(text.substr(open + 1, close - open - 1));
  } catch (const std::exception&) {
    throw DomainError("bad source parameter: " + text);
  }
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  if (text == "exponential") return exponential();
  if (text == "laplace") return laplace();
  if (text == "gaussian") return gaussian();
  SourceSpec spec;
  if (text.rfind("t(", 0) == 0)
    spec = student_t(parse_param(text, 1));
  else if (text.rfind("two-point(", 0) == 0)
    spec = two_point(parse_param(text, 9));
  else
    throw DomainError("unknown source distribution '" + text +
                      "' (valid: uniform, exponential, laplace, gaussian, t(df), two-point(p))");
  spec.validate();
  return spec;
}

void SourceSpec::validate() const {
  if (kind == SourceKind::student_t && (!(param > 2.0) || param != std::floor(param)))
    throw DomainError("student_t source needs an integer df > 2 for unit variance");
  if (kind == SourceKind::two_point && !(param > 0.0 && param < 1.0))
    throw DomainError("two-point source needs 0 < p < 1");
}

std::string SourceSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case SourceKind::uniform: return "uniform";
    case SourceKind::exponential: return "exponential";
    case SourceKind::laplace: return "laplace";
    case SourceKind::gaussian: return "gaussian";
    case SourceKind::student_t: os << "t(" << param << ")"; return os.str();
    case SourceKind::two_point: os << "two-point(" << param << ")"; return os.str();
  }
  return "?";
}

double SourceSpec::excess_kurtosis() const {
  switch (kind) {
    case SourceKind::uniform: return -1.2;
    case SourceKind::exponential: return 6.0;
    case SourceKind::laplace: return 3.0;
    case SourceKind::gaussian: return 0.0;
    case SourceKind::student_t:
      return param > 4.0 ? 6.0 / (param - 4.0) : std::numeric_limits<double>::infinity();
    case SourceKind::two_point: {
      const double pq = param * (1.0 - param);
      return (1.0 - 6.0 * pq) / pq;
    }
  }
  return 0.0;
}

Vector SourceSpec::sample(Index n, Rng& rng) const {
  validate();
  Vector out(n);
  switch (kind) {
    case SourceKind::uniform: {
      const double half = std::sqrt(3.0);
      for (Index i = 0; i < n; ++i) out(i) = half * (2.0 * rng.uniform() - 1.0);
      break;
    }
    case SourceKind::exponential:
      for (Index i = 0; i < n; ++i) out(i) = -std::log(rng.uniform()) - 1.0;
      break;
    case SourceKind::laplace: {
      const double scale = 1.0 / std::sqrt(2.0);
      for (Index i = 0; i < n; ++i) {
        const double u = rng.uniform() - 0.5;
        out(i) = -scale * std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u));
      }
      break;
    }
    case SourceKind::gaussian:
      for (Index i = 0; i < n; ++i) out(i) = rng.normal();
      break;
    case SourceKind::student_t: {
      const double df = param;
      const double scale = std::sqrt((df - 2.0) / df);
      for (Index i = 0; i < n; ++i) {
        double chi2 = 0.0;
        for (int k = 0; k < static_cast<int>(df); ++k) {
          const double v = rng.normal();
          chi2 += v * v;
        }
        out(i) = scale * rng.normal() / std::sqrt(chi2 / df);
      }
      break;
    }
    case SourceKind::two_point: {
      const double prob = param;
      const double sd = std::sqrt(prob * (1.0 - prob));
      for (Index i = 0; i < n; ++i) out(i) = ((rng.uniform() < prob ? 1.0 : 0.0) - prob) / sd;
      break;
    }
  }
  return out;
}

SimulatedData simulate_ic_data(Index n, const std::vector<SourceSpec>& sources, const Matrix& A,
                               const Vector& b, std::uint64_t seed) {
  const Index p = static_cast<Index>(sources.size());
  if (p == 0) throw DomainError("simulate_ic_data: no sources");
  if (A.rows() != p || A.cols() != p || b.size() != p)
    throw DomainError("simulate_ic_data: A must be p x p and b length p, p = number of sources");
  require_nonsingular(A, "mixing matrix A");
  SimulatedData out;
  out.Z_true.resize(n, p);
  for (Index j = 0; j < p; ++j) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(j)));
    out.Z_true.col(j) = sources[static_cast<std::size_t>(j)].sample(n, rng);
  }
  out.X = (out.Z_true * A.transpose()).rowwise() + b.transpose();
  return out;
}

Matrix random_mixing(Index p, std::uint64_t seed, double max_condition) {
  Rng rng(mix_seed(seed, 0xA11CEULL));
  const Matrix Q1 = random_orthogonal(p, rng);
  const Matrix Q2 = random_orthogonal(p, rng);
  Vector s(p);
  const double log_max = std::log(max_condition);
  for (Index i = 0; i < p; ++i) s(i) = std::exp(log_max * rng.uniform());
  return Q1 * s.asDiagonal() * Q2;
}

std::vector<Index> max_weight_assignment(const Matrix& M) {
  // Hungarian algorithm (potentials, O(p^3)) minimizing cost = -M.
  const Index p = M.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(p + 1, 0.0), v(p + 1, 0.0), minv(p + 1);
  std::vector<Index> match(p + 1, 0), way(p + 1, 0);
  std::vector<char> used(p + 1);
  for (Index i = 1; i <= p; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = match[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= p; ++j) {
        if (used[j]) continue;
        const double cur = -M(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= p; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<Index> perm(p);
  for (Index j = 1; j <= p; ++j) perm[match[j] - 1] = j - 1;
  return perm;
}

double md_index(const Matrix& W, const Matrix& A) {
  require_nonsingular(W, "md_index: W");
  require_nonsingular(A, "md_index: A");
  if (W.cols() != A.rows()) throw DomainError("md_index: W and A are not conformable");
  const Index p = W.rows();
  if (p == 1) return 0.0;
  const Matrix G = W * A;
  Matrix Gt(p, p);
  for (Index i = 0; i < p; ++i) {
    const auto sq = G.row(i).array().square();
    Gt.row(i) = sq / sq.sum();
  }
  const auto perm = max_weight_assignment(Gt);
  // Summed in column order so that permuting the rows of W is bit-exact.
  std::vector<double> by_col(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) by_col[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = Gt(i, perm[static_cast<std::size_t>(i)]);
  double trace = 0.0;
  for (double x : by_col) trace += x;
  const double gap = std::max(0.0, static_cast<double>(p) - trace);
  return std::sqrt(gap) / std::sqrt(static_cast<double>(p - 1));
}

}  // namespace coda_ica
