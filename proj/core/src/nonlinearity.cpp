#include <coda_ica/nonlinearity.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace coda_ica {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? x : 0.0; }

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

constexpr double kShifts[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6};

}  // namespace

Nonlinearity::Nonlinearity(std::string id, Family family, double shift)
    : id_(std::move(id)), family_(family), shift_(shift) {
  // Gaussian expectation of the raw G by composite Simpson on [-12, 12].
  // Breakpoints of the piecewise families fall on grid nodes.
  constexpr int kIntervals = 24000;
  constexpr double lo = -12.0, hi = 12.0;
  const double h = (hi - lo) / kIntervals;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double x = lo + h * i;
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double G = G_raw(x);
    const double phi = std::exp(-0.5 * x * x);
    m1 += w * G * phi;
    m2 += w * G * G * phi;
  }
  const double scale = h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
  offset_ = m1 * scale;
  // Closed forms where they exist.
  if (family_ == Family::pow3) offset_ = 0.75;
  if (family_ == Family::gaus) offset_ = -1.0 / std::numbers::sqrt2;
  sd_ = std::sqrt(std::max(0.0, m2 * scale - offset_ * offset_));
}

Nonlinearity Nonlinearity::pow3() { return {"pow3", Family::pow3, 0.0}; }
Nonlinearity Nonlinearity::tanh() { return {"tanh", Family::tanh, 0.0}; }
Nonlinearity Nonlinearity::gaus() { return {"gaus", Family::gaus, 0.0}; }

std::vector<std::string> Nonlinearity::valid_ids() {
  std::vector<std::string> ids = {"pow3", "tanh", "gaus"};
  for (int i = 1; i <= 14; ++i) ids.push_back("g" + std::to_string(i));
  return ids;
}

Nonlinearity Nonlinearity::from_id(std::string_view id) {
  if (id == "pow3") return pow3();
  if (id == "tanh") return tanh();
  if (id == "gaus") return gaus();
  if (id.size() >= 2 && id[0] == 'g') {
    int k = 0;
    bool digits = true;
    for (char c : id.substr(1)) {
      if (c < '0' || c > '9') digits = false;
      else k = 10 * k + (c - '0');
    }
    if (digits && k >= 1 && k <= 14) {
      const std::string name(id);
      switch (k) {
        case 1: return {name, Family::pow3, 0.0};
        case 2: return {name, Family::tanh, 0.0};
        case 3: return {name, Family::gaus, 0.0};
        case 4: return {name, Family::left_tail, 0.6};
        case 5: return {name, Family::right_tail, 0.6};
        default: return {name, Family::two_tail, kShifts[k - 6]};
      }
    }
  }
  std::ostringstream os;
  os << "unknown nonlinearity '" << id << "'; valid ids:";
  for (const auto& v : valid_ids()) os << ' ' << v;
  throw DomainError(os.str());
}

double Nonlinearity::G_raw(double x) const {
  const double a = shift_;
  switch (family_) {
    case Family::pow3: return 0.25 * x * x * x * x;
    case Family::tanh: return log_cosh(x);
    case Family::gaus: return -std::exp(-0.5 * x * x);
    case Family::left_tail: return std::pow(neg(x + a), 3) / 3.0;
    case Family::right_tail: return std::pow(pos(x - a), 3) / 3.0;
    case Family::two_tail: return (std::pow(pos(x - a), 3) + std::pow(neg(x + a), 3)) / 3.0;
  }
  return 0.0;
}

double Nonlinearity::g(double x) const {
  const double a = shift_;
  switch (family_) {
    case Family::pow3: return x * x * x;
    case Family::tanh: return std::tanh(x);
    case Family::gaus: return x * std::exp(-0.5 * x * x);
    case Family::left_tail: { const double m = neg(x + a); return m * m; }
    case Family::right_tail: { const double m = pos(x - a); return m * m; }
    case Family::two_tail: {
      const double u = pos(x - a), l = neg(x + a);
      return u * u + l * l;
    }
  }
  return 0.0;
}

// At the breakpoints the right derivative is used.
double Nonlinearity::dg(double x) const {
  const double a = shift_;
  switch (family_) {
    case Family::pow3: return 3.0 * x * x;
    case Family::tanh: { const double t = std::tanh(x); return 1.0 - t * t; }
    case Family::gaus: return (1.0 - x * x) * std::exp(-0.5 * x * x);
    case Family::left_tail: return x + a < 0.0 ? 2.0 * (x + a) : 0.0;
    case Family::right_tail: return x - a >= 0.0 ? 2.0 * (x - a) : 0.0;
    case Family::two_tail: {
      double d = 0.0;
      if (x - a >= 0.0) d += 2.0 * (x - a);
      if (x + a < 0.0) d += 2.0 * (x + a);
      return d;
    }
  }
  return 0.0;
}

Vector Nonlinearity::G(const Vector& x) const {
  return x.unaryExpr([this](double v) { return G(v); });
}
Vector Nonlinearity::g(const Vector& x) const {
  return x.unaryExpr([this](double v) { return g(v); });
}
Vector Nonlinearity::dg(const Vector& x) const {
  return x.unaryExpr([this](double v) { return dg(v); });
}

void Nonlinearity::g_dg(const Eigen::Ref<const Vector>& x, Vector& g_out, Vector& dg_out) const {
  const Index n = x.size();
  g_out.resize(n);
  dg_out.resize(n);
  switch (family_) {
    case Family::pow3:
      g_out = x.array().cube().matrix();
      dg_out = (3.0 * x.array().square()).matrix();
      return;
    case Family::tanh:
      for (Index i = 0; i < n; ++i) {
        const double t = std::tanh(x(i));
        g_out(i) = t;
        dg_out(i) = 1.0 - t * t;
      }
      return;
    case Family::gaus:
      for (Index i = 0; i < n; ++i) {
        const double v = x(i);
        const double e = std::exp(-0.5 * v * v);
        g_out(i) = v * e;
        dg_out(i) = (1.0 - v * v) * e;
      }
      return;
    default:
      for (Index i = 0; i < n; ++i) {
        g_out(i) = g(x(i));
        dg_out(i) = dg(x(i));
      }
  }
}

std::vector<Nonlinearity> candidate_set() {
  std::vector<Nonlinearity> out;
  for (int i = 1; i <= 14; ++i) out.push_back(Nonlinearity::from_id("g" + std::to_string(i)));
  return out;
}

}  // namespace coda_ica
