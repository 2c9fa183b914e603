#include <coda_ica/jointdiag.hpp>

#include <cmath>
#include <sstream>

namespace coda_ica {

double diagonal_mass(std::span<const Matrix> matrices, const Matrix& U) {
  double s = 0.0;
  for (const auto& M : matrices) s += (U.transpose() * M * U).diagonal().squaredNorm();
  return s;
}

double off_diagonal_mass(std::span<const Matrix> matrices, const Matrix& U) {
  double s = 0.0;
  for (const auto& M : matrices) {
    const Matrix R = U.transpose() * M * U;
    s += R.squaredNorm() - R.diagonal().squaredNorm();
  }
  return s;
}

JointDiagResult joint_diagonalize(std::span<const Matrix> matrices,
                                  const JointDiagOptions& options) {
  if (matrices.empty()) throw DomainError("joint_diagonalize: no matrices");
  if (!(options.tol > 0.0)) throw DomainError("joint_diagonalize: tol must be > 0");
  if (options.max_sweeps < 1) throw DomainError("joint_diagonalize: max_sweeps must be >= 1");
  const Index p = matrices.front().rows();
  for (const auto& M : matrices)
    if (M.rows() != p || M.cols() != p)
      throw DomainError("joint_diagonalize: all matrices must be p x p with the same p");

  // Work on the horizontal stack [M_1 ... M_K], rotated in place.
  const Index K = static_cast<Index>(matrices.size());
  Matrix stack(p, p * K);
  for (Index k = 0; k < K; ++k)
    stack.middleCols(k * p, p) = 0.5 * (matrices[static_cast<std::size_t>(k)] +
                                        matrices[static_cast<std::size_t>(k)].transpose());

  JointDiagResult res;
  res.U = Matrix::Identity(p, p);

  bool active = p > 1;
  while (active && res.sweeps < options.max_sweeps) {
    active = false;
    ++res.sweeps;
    for (Index a = 0; a < p - 1; ++a) {
      for (Index b = a + 1; b < p; ++b) {
        // 2x2 statistics of h_k = (M_k[a,a] - M_k[b,b], 2 M_k[a,b]).
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (Index k = 0; k < K; ++k) {
          const Index off = k * p;
          const double h1 = stack(a, off + a) - stack(b, off + b);
          const double h2 = stack(a, off + b) + stack(b, off + a);
          g11 += h1 * h1;
          g12 += h1 * h2;
          g22 += h2 * h2;
        }
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        // Angle of the dominant eigenvector of [[g11, g12], [g12, g22]], halved.
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Sub-tolerance rotations are still applied; they only stop counting
        // towards another sweep.
        if (s == 0.0) continue;
        if (std::abs(s) > options.tol) active = true;

        // U <- U G,  M_k <- G' M_k G  with G = [[c, -s], [s, c]] on (a, b).
        for (Index r = 0; r < p; ++r) {
          const double ua = res.U(r, a), ub = res.U(r, b);
          res.U(r, a) = c * ua + s * ub;
          res.U(r, b) = -s * ua + c * ub;
        }
        for (Index col = 0; col < p * K; ++col) {
          const double ma = stack(a, col), mb = stack(b, col);
          stack(a, col) = c * ma + s * mb;
          stack(b, col) = -s * ma + c * mb;
        }
        for (Index k = 0; k < K; ++k) {
          const Index off = k * p;
          for (Index r = 0; r < p; ++r) {
            const double ma = stack(r, off + a), mb = stack(r, off + b);
            stack(r, off + a) = c * ma + s * mb;
            stack(r, off + b) = -s * ma + c * mb;
          }
        }
      }
    }
  }
  res.converged = !active;

  for (Index k = 0; k < K; ++k) {
    const auto blk = stack.middleCols(k * p, p);
    const double diag = blk.diagonal().squaredNorm();
    res.diag_criterion += diag;
    res.off_criterion += blk.squaredNorm() - diag;
  }

  if (!res.converged) {
    std::ostringstream os;
    os << "joint_diagonalize: no convergence after " << res.sweeps
       << " sweeps (off-diagonal mass " << res.off_criterion << ")";
    throw JointDiagError(os.str(), std::move(res));
  }
  return res;
}

}  // namespace coda_ica
