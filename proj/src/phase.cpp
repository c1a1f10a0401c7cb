#include "unisim/phase.hpp"

#include <cmath>
#include <numbers>

#include "unisim/linalg.hpp"

namespace unisim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_pair_vector(int n, const RealVector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != PairIndex::count(n))
    throw shape_error(std::string(what) + ": vector length is not n(n-1)/2");
}

}  // namespace

PairIndex::PairIndex(int n) : n_(n) {
  if (n < 1) throw shape_error("PairIndex: n must be positive");
  pairs_.reserve(count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
}

std::size_t PairIndex::index(int i, int j) const {
  // Rows before i contribute (n-1) + (n-2) + ... + (n-i) pairs.
  const std::size_t before =
      static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * n_ - i - 1) / 2;
  return before + static_cast<std::size_t>(j - i - 1);
}

double wrap_to_pi(double angle) {
  double w = std::fmod(angle + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod can return exactly 2 pi after the shift for tiny negative inputs.
  if (w >= kTwoPi) w -= kTwoPi;
  return w - kPi;
}

double arg_0_2pi(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

PhaseData extract_phase(const ComplexMatrix& t, double tol_zero) {
  require_square(t, "extract_phase");
  const int n = static_cast<int>(t.rows());
  const PairIndex pairs(n);

  PhaseData p;
  p.n = n;
  p.r.resize(static_cast<Eigen::Index>(pairs.size()));
  p.phi.resize(static_cast<Eigen::Index>(pairs.size()));
  p.zero_mask.assign(pairs.size(), false);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    p.r(static_cast<Eigen::Index>(k)) = std::abs(t(i, j));
  }
  const double r_max = p.r.size() > 0 ? p.r.maxCoeff() : 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto e = static_cast<Eigen::Index>(k);
    const auto [i, j] = pairs[k];
    if (p.r(e) <= tol_zero * r_max) {
      p.zero_mask[k] = true;
      p.phi(e) = 0.0;
    } else {
      // arg in [0, 2 pi) shifted by -pi lands in [-pi, pi) directly.
      p.phi(e) = arg_0_2pi(t(i, j)) - kPi;
    }
  }
  return p;
}

RealMatrix build_R(int n, const RealVector& w) {
  require_pair_vector(n, w, "build_R");
  if ((w.array() < 0.0).any()) throw error("build_R: negative weight");

  const int dim = n - 1;
  RealMatrix r = RealMatrix::Zero(dim, dim);
  const PairIndex pairs(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const double wk = w(static_cast<Eigen::Index>(k));
    r(i, i) += wk;
    if (j < dim) {
      r(j, j) += wk;
      r(i, j) -= wk;
      r(j, i) -= wk;
    }
  }
  return r;
}

RealVector build_b(int n, const RealVector& r, const RealVector& phi) {
  require_pair_vector(n, r, "build_b");
  require_pair_vector(n, phi, "build_b");

  RealVector b = RealVector::Zero(std::max(n - 1, 0));
  const PairIndex pairs(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const auto e = static_cast<Eigen::Index>(k);
    const double term = r(e) * phi(e);
    b(i) += term;
    if (j < n - 1) b(j) -= term;
  }
  return b;
}

RealVector phase_invariants(int n, const RealVector& r, const RealVector& psi) {
  require_pair_vector(n, r, "phase_invariants");
  const PairIndex pairs(n);
  RealVector f(r.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const double psi_j = j < n - 1 ? psi(j) : 0.0;
    f(static_cast<Eigen::Index>(k)) = r(static_cast<Eigen::Index>(k)) * (psi(i) - psi_j);
  }
  return f;
}

PhaseSolution solve_phase(const PhaseData& p, const IntVector& m,
                          double tol_consistent) {
  require_pair_vector(p.n, p.phi, "solve_phase");
  if (m.size() != p.phi.size()) throw shape_error("solve_phase: m has wrong length");

  const RealVector shifted = p.phi + kTwoPi * m.cast<double>();
  const RealMatrix r_mat = build_R(p.n, p.r);
  const RealVector b = build_b(p.n, p.r, shifted);

  const PsdSolution sol = solve_psd_consistent(r_mat, -b, tol_consistent);
  PhaseSolution out;
  out.psi = sol.x;
  out.solver_residual = sol.residual;
  out.f = phase_invariants(p.n, p.r, out.psi);
  return out;
}

RealVector transformed_phases(const PhaseData& p, const IntVector& m,
                              const RealVector& psi) {
  const PairIndex pairs(p.n);
  RealVector out(p.phi.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const auto e = static_cast<Eigen::Index>(k);
    const double psi_j = j < p.n - 1 ? psi(j) : 0.0;
    out(e) = p.phi(e) + kTwoPi * m(e) + psi(i) - psi_j;
  }
  return out;
}

double k_residual(const PhaseData& p, const RealVector& phi_transformed) {
  const RealVector b = build_b(p.n, p.r, phi_transformed);
  return b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace unisim
