#include <coda_ica/scatter.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coda_ica {

SymmetricEigen symmetric_eigen(const Matrix& M) {
  if (M.rows() != M.cols()) throw DomainError("symmetric_eigen: matrix must be square");
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric_eigen: eigendecomposition failed");

  const Index p = S.rows();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ev(a) > ev(b); });

  SymmetricEigen out{Vector(p), Matrix(p, p)};
  for (Index k = 0; k < p; ++k) {
    out.values(k) = ev(order[static_cast<std::size_t>(k)]);
    Vector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

Matrix inverse_sqrt_symmetric(const Matrix& M, double rel_tol) {
  const SymmetricEigen eig = symmetric_eigen(M);
  const Index p = eig.values.size();
  const double largest = eig.values(0);
  const double smallest = eig.values(p - 1);
  if (!(largest > 0.0) || !(smallest > rel_tol * largest)) {
    std::ostringstream os;
    os << "covariance is singular or not positive definite: smallest eigenvalue " << smallest
       << " vs largest " << largest << " (ratio must exceed " << rel_tol << ")";
    throw SingularCovariance(os.str());
  }
  return eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.vectors.transpose();
}

Vector column_means(const Matrix& X) { return X.colwise().mean().transpose(); }

Matrix covariance(const Matrix& X) {
  const Matrix Y = X.rowwise() - X.colwise().mean();
  return (Y.transpose() * Y) / static_cast<double>(X.rows());
}

WhitenedData whiten(const Matrix& X) {
  if (X.cols() < 1) throw DomainError("whiten: need at least one column");
  if (X.rows() <= X.cols()) {
    std::ostringstream os;
    os << "whiten: need more observations than variables (n = " << X.rows()
       << ", p = " << X.cols() << ")";
    throw SingularCovariance(os.str());
  }
  WhitenedData w;
  w.mean = column_means(X);
  w.cov = covariance(X);
  w.cov_inv_sqrt = inverse_sqrt_symmetric(w.cov);
  w.X_st = (X.rowwise() - w.mean.transpose()) * w.cov_inv_sqrt;
  return w;
}

Matrix cov4(const Matrix& X) {
  const WhitenedData w = whiten(X);
  const Index p = X.cols();
  const Matrix Y = X.rowwise() - w.mean.transpose();
  // r_t = y_t' cov^{-1} y_t = |x_st,t|^2
  const Vector r = w.X_st.rowwise().squaredNorm();
  const Matrix weighted = Y.array().colwise() * r.array();
  const Matrix S = (weighted.transpose() * Y) / static_cast<double>(X.rows());
  const Matrix out = S / static_cast<double>(p + 2);
  return 0.5 * (out + out.transpose());
}

namespace {

void check_index(Index p, Index i, Index j) {
  if (i < 0 || j < 0 || i >= p || j >= p) {
    std::ostringstream os;
    os << "cumulant index (" << i << ", " << j << ") out of range for p = " << p;
    throw DomainError(os.str());
  }
}

void subtract_structure(Matrix& C, Index i, Index j) {
  C(i, j) -= 1.0;
  C(j, i) -= 1.0;
  if (i == j) C.diagonal().array() -= 1.0;
}

}  // namespace

CumulantMatrix cumulant_matrix(const Matrix& X_st, Index i, Index j) {
  const Index p = X_st.cols();
  check_index(p, i, j);
  const Vector w = X_st.col(i).cwiseProduct(X_st.col(j));
  const Matrix weighted = X_st.array().colwise() * w.array();
  Matrix C = (weighted.transpose() * X_st) / static_cast<double>(X_st.rows());
  subtract_structure(C, i, j);
  return {i, j, std::move(C)};
}

std::vector<CumulantMatrix> cumulant_matrices(const Matrix& X_st,
                                              std::span<const std::pair<Index, Index>> pairs) {
  const Index p = X_st.cols();
  std::vector<CumulantMatrix> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    check_index(p, i, j);
    out.push_back({i, j, Matrix::Zero(p, p)});
  }
  // Single pass over the rows; each matrix accumulates in row order.
  Matrix outer(p, p);
  for (Index t = 0; t < X_st.rows(); ++t) {
    const auto x = X_st.row(t);
    outer.noalias() = x.transpose() * x;
    for (auto& cm : out) cm.C.noalias() += outer(cm.i, cm.j) * outer;
  }
  const double inv_n = 1.0 / static_cast<double>(X_st.rows());
  for (auto& cm : out) {
    cm.C *= inv_n;
    subtract_structure(cm.C, cm.i, cm.j);
  }
  return out;
}

std::vector<std::pair<Index, Index>> band_pairs(Index p, Index k) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      if (std::abs(i - j) < k) pairs.emplace_back(i, j);
  return pairs;
}

Vector excess_kurtosis(const Matrix& Z) {
  const Matrix Y = Z.rowwise() - Z.colwise().mean();
  const double n = static_cast<double>(Z.rows());
  Vector out(Z.cols());
  for (Index j = 0; j < Z.cols(); ++j) {
    const double m2 = Y.col(j).squaredNorm() / n;
    const double m4 = Y.col(j).array().square().square().sum() / n;
    out(j) = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

Vector skewness(const Matrix& Z) {
  const Matrix Y = Z.rowwise() - Z.colwise().mean();
  const double n = static_cast<double>(Z.rows());
  Vector out(Z.cols());
  for (Index j = 0; j < Z.cols(); ++j) {
    const double m2 = Y.col(j).squaredNorm() / n;
    const double m3 = Y.col(j).array().cube().sum() / n;
    out(j) = m3 / std::pow(m2, 1.5);
  }
  return out;
}

}  // namespace coda_ica
