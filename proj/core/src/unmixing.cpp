#include <coda_ica/unmixing.hpp>
#include <coda_ica/scatter.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coda_ica {

SignedPermutation SignedPermutation::identity(Index p) {
  SignedPermutation s;
  s.perm.resize(static_cast<std::size_t>(p));
  std::iota(s.perm.begin(), s.perm.end(), Index{0});
  s.signs.assign(static_cast<std::size_t>(p), 1);
  return s;
}

Matrix SignedPermutation::apply_rows(const Matrix& M) const {
  Matrix out(M.rows(), M.cols());
  for (std::size_t i = 0; i < perm.size(); ++i)
    out.row(static_cast<Index>(i)) = signs[i] * M.row(perm[i]);
  return out;
}

Matrix SignedPermutation::apply_cols(const Matrix& M) const {
  Matrix out(M.rows(), M.cols());
  for (std::size_t i = 0; i < perm.size(); ++i)
    out.col(static_cast<Index>(i)) = signs[i] * M.col(perm[i]);
  return out;
}

Matrix SignedPermutation::matrix() const {
  const Index p = static_cast<Index>(perm.size());
  Matrix P = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) P(i, perm[static_cast<std::size_t>(i)]) = signs[static_cast<std::size_t>(i)];
  return P;
}

namespace {

// Greedy assignment on |M|: repeatedly take the largest remaining entry.
// Entry (i, j) means output slot i is taken from source j with sign(M(i,j)).
SignedPermutation greedy_assign(const Matrix& M) {
  const Index p = M.rows();
  SignedPermutation s;
  s.perm.assign(static_cast<std::size_t>(p), -1);
  s.signs.assign(static_cast<std::size_t>(p), 1);
  std::vector<bool> row_used(static_cast<std::size_t>(p), false), col_used(static_cast<std::size_t>(p), false);
  for (Index step = 0; step < p; ++step) {
    double best = -1.0;
    Index bi = 0, bj = 0;
    for (Index i = 0; i < p; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (Index j = 0; j < p; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        if (std::abs(M(i, j)) > best) {
          best = std::abs(M(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
    s.perm[static_cast<std::size_t>(bi)] = bj;
    s.signs[static_cast<std::size_t>(bi)] = M(bi, bj) < 0 ? -1 : 1;
  }
  return s;
}

}  // namespace

SignedPermutation match_to_reference(const Matrix& W, const Matrix& W_ref) {
  if (W.rows() != W.cols() || W_ref.rows() != W.rows() || W_ref.cols() != W.cols())
    throw DomainError("match_to_reference: matrices must be square and of equal size");
  Eigen::FullPivLU<Matrix> lu(W);
  if (!lu.isInvertible()) throw DomainError("match_to_reference: W is singular");
  return greedy_assign(W_ref * lu.inverse());
}

SignedPermutation match_scores(const Matrix& Z, const Matrix& Z_ref) {
  if (Z.rows() != Z_ref.rows() || Z.cols() != Z_ref.cols())
    throw DomainError("match_scores: score matrices differ in shape");
  return greedy_assign(Z_ref.transpose() * Z);
}

UnmixingResult finalize_unmixing(const Matrix& X, const Matrix& W_raw, const Vector& b,
                                 std::string method, Diagnostics diagnostics,
                                 std::vector<ComponentInfo> raw_info) {
  const Index p = W_raw.rows();
  Matrix W = W_raw;
  const Matrix Xc = X.rowwise() - b.transpose();
  Matrix Z = Xc * W.transpose();

  if (raw_info.empty()) raw_info.resize(static_cast<std::size_t>(p));
  Vector skew = skewness(Z);
  for (Index k = 0; k < p; ++k) {
    bool flip = false;
    if (std::abs(skew(k)) < 1e-3) {
      Index arg = 0;
      W.row(k).cwiseAbs().maxCoeff(&arg);
      flip = W(k, arg) < 0;
    } else {
      flip = skew(k) < 0;
    }
    if (flip) {
      W.row(k) *= -1.0;
      Z.col(k) *= -1.0;
      skew(k) = -skew(k);
    }
  }
  const Vector kurt = excess_kurtosis(Z);

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index c) {
    if (std::abs(kurt(a) - kurt(c)) < 1e-12) return false;
    return kurt(a) > kurt(c);
  });

  UnmixingResult res;
  res.W.resize(p, W.cols());
  res.Z.resize(Z.rows(), p);
  diagnostics.components.clear();
  for (Index k = 0; k < p; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    res.W.row(k) = W.row(src);
    res.Z.col(k) = Z.col(src);
    ComponentInfo info = raw_info[static_cast<std::size_t>(src)];
    info.raw_index = src;
    info.kurtosis = kurt(src);
    info.skewness = skew(src);
    diagnostics.components.push_back(std::move(info));
  }
  res.A = res.W.partialPivLu().inverse();
  res.b = b;
  res.method = std::move(method);
  res.diagnostics = std::move(diagnostics);
  return res;
}

}  // namespace coda_ica
