#pragma once

// Log-ratio geometry of compositional data: closure, clr, ilr and their
// inverses. Observations are rows throughout.

#include <coda_ica/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace coda_ica {

/// n rows of d strictly positive parts. The optional row total records a
/// closed representation; an unset total means the rows are unnormalized.
class CompositionMatrix {
 public:
  CompositionMatrix() = default;
  explicit CompositionMatrix(Matrix data,
                             std::optional<double> row_total = std::nullopt,
                             std::vector<std::string> part_names = {});

  const Matrix& data() const { return data_; }
  std::optional<double> row_total() const { return row_total_; }
  const std::vector<std::string>& part_names() const { return part_names_; }

  Index rows() const { return data_.rows(); }
  Index parts() const { return data_.cols(); }

  /// Rescaled copy with every row summing to kappa.
  CompositionMatrix closed(double kappa = 1.0) const;

 private:
  Matrix data_;
  std::optional<double> row_total_;
  std::vector<std::string> part_names_;
};

/// d x (d-1) log-contrast basis linking clr and ilr coordinates.
class ContrastMatrix {
 public:
  /// Pivot-balance basis: column i holds sqrt(i/(i+1)) * (1/i, ..., 1/i, -1,
  /// 0, ..., 0).
  static ContrastMatrix standard(Index d);

  /// User-supplied basis. Validates orthonormal columns and zero column sums.
  static ContrastMatrix from_matrix(Matrix V, std::string basis_id = "custom",
                                    double tol = 1e-10);

  const Matrix& matrix() const { return V_; }
  const std::string& basis_id() const { return basis_id_; }
  Index parts() const { return V_.rows(); }
  Index coords() const { return V_.cols(); }
  bool is_standard() const { return basis_id_ == kStandardId; }

  static constexpr const char* kStandardId = "pivot-balance";

 private:
  ContrastMatrix(Matrix V, std::string id) : V_(std::move(V)), basis_id_(std::move(id)) {}
  Matrix V_;
  std::string basis_id_;
};

inline ContrastMatrix contrast_matrix(Index d) { return ContrastMatrix::standard(d); }

Vector closure(const Vector& x, double kappa = 1.0);
Vector clr(const Vector& x);
Vector clr_inv(const Vector& y, double kappa = 1.0);
Vector ilr(const Vector& x, const ContrastMatrix& V);
Vector ilr_inv(const Vector& y, const ContrastMatrix& V, double kappa = 1.0);

/// Pivot-balance coordinates computed directly from part ratios, without
/// going through clr. Agrees with ilr(x, contrast_matrix(d)).
Vector ilr_balances(const Vector& x);

// Row-wise batch variants.
Matrix closure_rows(const Matrix& X, double kappa = 1.0);
Matrix clr_rows(const Matrix& X);
Matrix clr_inv_rows(const Matrix& Y, double kappa = 1.0);
Matrix ilr_rows(const Matrix& X, const ContrastMatrix& V);
Matrix ilr_inv_rows(const Matrix& Y, const ContrastMatrix& V, double kappa = 1.0);

}  // namespace coda_ica
