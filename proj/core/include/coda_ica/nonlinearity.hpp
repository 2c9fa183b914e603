#pragma once

#include <coda_ica/types.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace coda_ica {

/// A FastICA measuring function G with its derivatives g = G' and g' = G''.
/// G is centred so that E[G(y)] = 0 for y ~ N(0, 1).
///
/// Families:
///   pow3   g(x) = x^3                  G(x) = (x^4 - 3) / 4
///   tanh   g(x) = tanh(x)              G(x) = log cosh(x) - c_t
///   gaus   g(x) = x exp(-x^2/2)        G(x) = -exp(-x^2/2) - c_g
///   g4     g(x) = (x + 0.6)_-^2
///   g5     g(x) = (x - 0.6)_+^2
///   g6..g14  g(x) = (x - a)_+^2 + (x + a)_-^2,  a = 0, 0.2, ..., 1.6
/// g1, g2, g3 are aliases of pow3, tanh, gaus.
class Nonlinearity {
 public:
  enum class Family { pow3, tanh, gaus, left_tail, right_tail, two_tail };

  static Nonlinearity pow3();
  static Nonlinearity tanh();
  static Nonlinearity gaus();
  /// Accepts pow3, tanh, gaus and g1..g14. Throws DomainError listing the
  /// valid ids otherwise.
  static Nonlinearity from_id(std::string_view id);
  static std::vector<std::string> valid_ids();

  const std::string& id() const { return id_; }
  Family family() const { return family_; }
  double shift() const { return shift_; }
  /// E[raw G(y)] for y ~ N(0,1); subtracted inside G().
  double gaussian_offset() const { return offset_; }
  /// Standard deviation of G(y) for y ~ N(0, 1).
  double gaussian_sd() const { return sd_; }

  double G(double x) const { return G_raw(x) - offset_; }
  double g(double x) const;
  double dg(double x) const;

  // Elementwise over a column.
  Vector G(const Vector& x) const;
  Vector g(const Vector& x) const;
  Vector dg(const Vector& x) const;
  /// g and g' together; for tanh this costs one tanh per element.
  void g_dg(const Eigen::Ref<const Vector>& x, Vector& g_out, Vector& dg_out) const;

 private:
  Nonlinearity(std::string id, Family family, double shift);
  double G_raw(double x) const;

  std::string id_;
  Family family_;
  double shift_;
  double offset_ = 0.0;
  double sd_ = 0.0;
};

/// The default adaptive-deflation candidates g1..g14.
std::vector<Nonlinearity> candidate_set();

}  // namespace coda_ica
