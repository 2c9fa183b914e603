#include <coda_ica/coda.hpp>

#include <cmath>
#include <sstream>

namespace coda_ica {

namespace {

void require_positive(const Eigen::Ref<const Matrix>& X, const char* what) {
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      const double v = X(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << ": part values must be finite and > 0, got " << v << " at row " << i + 1
           << ", column " << j + 1;
        throw DomainError(os.str());
      }
    }
  }
}

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw DomainError("closure constant kappa must be a positive finite number");
}

}  // namespace

CompositionMatrix::CompositionMatrix(Matrix data, std::optional<double> row_total,
                                     std::vector<std::string> part_names)
    : data_(std::move(data)), row_total_(row_total), part_names_(std::move(part_names)) {
  require_positive(data_, "CompositionMatrix");
  if (!part_names_.empty() && static_cast<Index>(part_names_.size()) != data_.cols())
    throw DomainError("CompositionMatrix: number of part names does not match column count");
  if (row_total_) {
    require_kappa(*row_total_);
    for (Index i = 0; i < data_.rows(); ++i) {
      const double s = data_.row(i).sum();
      if (std::abs(s - *row_total_) > 1e-9 * *row_total_) {
        std::ostringstream os;
        os << "CompositionMatrix: row " << i + 1 << " sums to " << s << ", expected "
           << *row_total_;
        throw DomainError(os.str());
      }
    }
  }
}

CompositionMatrix CompositionMatrix::closed(double kappa) const {
  return CompositionMatrix(closure_rows(data_, kappa), kappa, part_names_);
}

ContrastMatrix ContrastMatrix::standard(Index d) {
  if (d < 2) throw DomainError("contrast_matrix: need at least 2 parts");
  Matrix V = Matrix::Zero(d, d - 1);
  for (Index i = 1; i < d; ++i) {
    const double scale = std::sqrt(static_cast<double>(i) / static_cast<double>(i + 1));
    V.col(i - 1).head(i).setConstant(scale / static_cast<double>(i));
    V(i, i - 1) = -scale;
  }
  return ContrastMatrix(std::move(V), kStandardId);
}

ContrastMatrix ContrastMatrix::from_matrix(Matrix V, std::string basis_id, double tol) {
  if (V.rows() < 2 || V.cols() != V.rows() - 1)
    throw DomainError("contrast matrix must be d x (d-1) with d >= 2");
  const Matrix gram = V.transpose() * V;
  const double ortho = (gram - Matrix::Identity(V.cols(), V.cols())).cwiseAbs().maxCoeff();
  if (ortho > tol) {
    std::ostringstream os;
    os << "contrast matrix columns are not orthonormal (max |V'V - I| = " << ortho << ")";
    throw DomainError(os.str());
  }
  const double colsum = V.colwise().sum().cwiseAbs().maxCoeff();
  if (colsum > tol) {
    std::ostringstream os;
    os << "contrast matrix columns must sum to zero (max |sum| = " << colsum << ")";
    throw DomainError(os.str());
  }
  if (basis_id == kStandardId) basis_id = "custom";
  return ContrastMatrix(std::move(V), std::move(basis_id));
}

Vector closure(const Vector& x, double kappa) {
  require_kappa(kappa);
  require_positive(x.transpose(), "closure");
  return x * (kappa / x.sum());
}

Vector clr(const Vector& x) {
  require_positive(x.transpose(), "clr");
  const Vector logs = x.array().log().matrix();
  return (logs.array() - logs.mean()).matrix();
}

Vector clr_inv(const Vector& y, double kappa) {
  require_kappa(kappa);
  // Shifting by the maximum keeps exp() in range; closure removes the shift.
  const double shift = y.size() > 0 ? y.maxCoeff() : 0.0;
  const Vector e = (y.array() - shift).exp().matrix();
  return e * (kappa / e.sum());
}

Vector ilr(const Vector& x, const ContrastMatrix& V) {
  if (x.size() != V.parts()) throw DomainError("ilr: part count does not match contrast matrix");
  return V.matrix().transpose() * clr(x);
}

Vector ilr_inv(const Vector& y, const ContrastMatrix& V, double kappa) {
  if (y.size() != V.coords()) throw DomainError("ilr_inv: coordinate count does not match contrast matrix");
  return clr_inv(V.matrix() * y, kappa);
}

Vector ilr_balances(const Vector& x) {
  require_positive(x.transpose(), "ilr_balances");
  const Index d = x.size();
  if (d < 2) throw DomainError("ilr_balances: need at least 2 parts");
  Vector out(d - 1);
  double log_prefix = 0.0;
  for (Index i = 1; i < d; ++i) {
    log_prefix += std::log(x(i - 1));
    const double fi = static_cast<double>(i);
    out(i - 1) = std::sqrt(fi / (fi + 1.0)) * (log_prefix / fi - std::log(x(i)));
  }
  return out;
}

Matrix closure_rows(const Matrix& X, double kappa) {
  require_kappa(kappa);
  require_positive(X, "closure");
  return (X.array().colwise() / X.rowwise().sum().array()).matrix() * kappa;
}

Matrix clr_rows(const Matrix& X) {
  require_positive(X, "clr");
  const Matrix logs = X.array().log().matrix();
  return logs.colwise() - logs.rowwise().mean();
}

Matrix clr_inv_rows(const Matrix& Y, double kappa) {
  require_kappa(kappa);
  Matrix out(Y.rows(), Y.cols());
  for (Index i = 0; i < Y.rows(); ++i) out.row(i) = clr_inv(Y.row(i).transpose(), kappa).transpose();
  return out;
}

Matrix ilr_rows(const Matrix& X, const ContrastMatrix& V) {
  if (X.cols() != V.parts()) throw DomainError("ilr: part count does not match contrast matrix");
  return clr_rows(X) * V.matrix();
}

Matrix ilr_inv_rows(const Matrix& Y, const ContrastMatrix& V, double kappa) {
  if (Y.cols() != V.coords()) throw DomainError("ilr_inv: coordinate count does not match contrast matrix");
  return clr_inv_rows(Y * V.matrix().transpose(), kappa);
}

}  // namespace coda_ica
