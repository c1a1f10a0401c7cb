#include <doctest.h>

#include <numbers>
#include <random>

#include "test_helpers.hpp"
#include "unisim/phase.hpp"

using namespace unisim;
using namespace unisim::testing;

namespace {

constexpr double kPi = std::numbers::pi;

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

// r >= 0 with a random sparsity pattern; every fifth draw is all zero.
RealVector random_weights(int n, std::mt19937_64& rng, int trial) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealVector r(static_cast<Eigen::Index>(PairIndex::count(n)));
  const double density = trial % 5 == 0 ? 0.0 : unit(rng);
  for (Eigen::Index k = 0; k < r.size(); ++k) r(k) = unit(rng) < density ? unit(rng) : 0.0;
  return r;
}

PhaseData random_phase_data(int n, std::mt19937_64& rng, int trial) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  PhaseData p;
  p.n = n;
  p.r = random_weights(n, rng, trial);
  p.phi.resize(p.r.size());
  p.zero_mask.assign(static_cast<std::size_t>(p.r.size()), false);
  for (Eigen::Index k = 0; k < p.r.size(); ++k) {
    p.phi(k) = angle(rng);
    p.zero_mask[static_cast<std::size_t>(k)] = p.r(k) == 0.0;
  }
  return p;
}

IntVector random_m(std::size_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(-3, 3);
  IntVector m(static_cast<Eigen::Index>(count));
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = pick(rng);
  return m;
}

}  // namespace

TEST_CASE("PairIndex is lexicographic") {
  const PairIndex p(4);
  const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(p.pairs() == expected);
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(p.index(p[k].first, p[k].second) == k);
  CHECK(PairIndex(1).size() == 0);
  CHECK(PairIndex::count(6) == 15);
}

TEST_CASE("wrap_to_pi lands in [-pi, pi)") {
  CHECK(wrap_to_pi(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_to_pi(-kPi) == doctest::Approx(-kPi));
  CHECK(wrap_to_pi(3.0 * kPi + 0.5) == doctest::Approx(-kPi + 0.5));
  CHECK(wrap_to_pi(-1e-300) < kPi);
  for (double x : {-10.0, -3.2, 0.0, 2.0, 7.5, 100.0}) {
    const double w = wrap_to_pi(x);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
    CHECK(std::abs(std::remainder(w - x, 2.0 * kPi)) <= 1e-12);
  }
}

TEST_CASE("extract_phase examples") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  PhaseData p = extract_phase(d);
  CHECK(p.r.norm() == 0.0);
  CHECK(p.phi.norm() == 0.0);
  CHECK(std::all_of(p.zero_mask.begin(), p.zero_mask.end(), [](bool b) { return b; }));

  ComplexMatrix t(2, 2);
  t << 1.0, Complex(0.0, 1.0), 0.0, 2.0;
  p = extract_phase(t);
  CHECK(p.r(0) == 1.0);
  CHECK(p.phi(0) == doctest::Approx(-kPi / 2));
  CHECK_FALSE(p.zero_mask[0]);

  t(0, 1) = -3.0;
  p = extract_phase(t);
  CHECK(p.r(0) == 3.0);
  CHECK(p.phi(0) == doctest::Approx(0.0));

  // Positive reals sit on the cut: arg 0 maps to -pi.
  t(0, 1) = 2.0;
  CHECK(extract_phase(t).phi(0) == doctest::Approx(-kPi));
}

TEST_CASE("extract_phase masks numerically zero entries") {
  ComplexMatrix t = ComplexMatrix::Zero(3, 3);
  t(0, 1) = Complex(0.0, 5.0);
  t(0, 2) = Complex(1e-14, 1e-14);
  t(1, 2) = Complex(-1.0, 0.0);
  const PhaseData p = extract_phase(t);
  CHECK(p.zero_mask == std::vector<bool>{false, true, false});
  CHECK(p.phi(1) == 0.0);
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK(p.r(k) >= 0.0);
    CHECK(p.phi(k) >= -kPi);
    CHECK(p.phi(k) < kPi);
  }
}

TEST_CASE("build_R examples") {
  CHECK(build_R(2, vec({2.0})) == RealMatrix::Constant(1, 1, 2.0));
  RealMatrix expected(2, 2);
  expected << 2.0, -1.0, -1.0, 2.0;
  CHECK(build_R(3, vec({1.0, 1.0, 1.0})) == expected);
  CHECK(build_R(4, RealVector::Zero(6)) == RealMatrix::Zero(3, 3));
  CHECK_THROWS(build_R(3, vec({1.0, -0.5, 1.0})));
  CHECK_THROWS_AS(build_R(3, vec({1.0})), shape_error);
}

TEST_CASE("build_b examples") {
  CHECK(build_b(2, vec({3.0}), vec({0.25}))(0) == doctest::Approx(0.75));
  const RealVector b = build_b(3, vec({1.0, 1.0, 1.0}), vec({kPi / 2, 0.0, -kPi / 2}));
  CHECK(b(0) == doctest::Approx(kPi / 2));
  CHECK(b(1) == doctest::Approx(-kPi));
  CHECK(build_b(4, RealVector::Ones(6), RealVector::Zero(6)).norm() == 0.0);
}

TEST_CASE("solve_phase examples") {
  PhaseData zero;
  zero.n = 3;
  zero.r = RealVector::Zero(3);
  zero.phi = vec({0.3, -1.0, 2.0});
  zero.zero_mask.assign(3, true);
  PhaseSolution s = solve_phase(zero, IntVector::Zero(3));
  CHECK(s.psi.norm() == 0.0);
  CHECK(s.f.norm() == 0.0);

  PhaseData two;
  two.n = 2;
  two.r = vec({1.5});
  two.phi = vec({0.7});
  two.zero_mask.assign(1, false);
  s = solve_phase(two, IntVector::Zero(1));
  CHECK(s.psi(0) == doctest::Approx(-0.7));
  CHECK(s.f(0) == doctest::Approx(-1.5 * 0.7));

  // r = (1, 0, 0): R = [[1, -1], [-1, 1]] with null space span{(1, 1)}.
  PhaseData singular;
  singular.n = 3;
  singular.r = vec({1.0, 0.0, 0.0});
  singular.phi = vec({0.4, 0.0, 0.0});
  singular.zero_mask = {false, true, true};
  s = solve_phase(singular, IntVector::Zero(3));
  const RealVector shifted = s.psi + 3.7 * RealVector::Ones(2);
  const RealVector f_shifted = phase_invariants(3, singular.r, shifted);
  CHECK(s.f(0) == doctest::Approx(f_shifted(0)).epsilon(1e-14));
  CHECK(s.f(0) == doctest::Approx(-0.4));
  // Minimum norm picks the symmetric split.
  CHECK(s.psi(0) == doctest::Approx(-0.2));
  CHECK(s.psi(1) == doctest::Approx(0.2));
}

TEST_CASE("k_residual examples") {
  std::mt19937_64 rng(5);
  const PhaseData p = random_phase_data(5, rng, 1);
  const IntVector m = random_m(p.r.size(), rng);
  const PhaseSolution s = solve_phase(p, m);
  CHECK(k_residual(p, transformed_phases(p, m, s.psi)) <= 1e-9 * std::max(1.0, p.r.sum()));

  PhaseData zero = p;
  zero.r.setZero();
  CHECK(k_residual(zero, p.phi) == 0.0);

  PhaseData two;
  two.n = 2;
  two.r = vec({5.0});
  two.phi = vec({1.0});
  two.zero_mask.assign(1, false);
  CHECK(k_residual(two, vec({0.0})) == 0.0);
}

TEST_CASE("R(r) is symmetric positive semidefinite") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 7;
    const RealMatrix r = build_R(n, random_weights(n, rng, trial));
    CHECK(r == r.transpose());
    const double min_eig = Eigen::SelfAdjointEigenSolver<RealMatrix>(r).eigenvalues().minCoeff();
    CHECK(min_eig >= -1e-12 * std::max(r.norm(), 1.0));
  }
}

TEST_CASE("phase system is always consistent") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 7;
    const PhaseData p = random_phase_data(n, rng, trial);
    const IntVector m = random_m(p.r.size(), rng);
    const RealVector b = build_b(n, p.r, p.phi + 2.0 * kPi * m.cast<double>());
    const PhaseSolution s = solve_phase(p, m);
    CHECK(s.solver_residual <= 1e-10 * (1.0 + b.norm()));
  }
}

TEST_CASE("f does not depend on the null-space component of psi") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> t_dist(-10.0, 10.0);
  int singular_cases = 0;
  for (int trial = 0; singular_cases < 100 && trial < 5000; ++trial) {
    const int n = 3 + trial % 5;
    const PhaseData p = random_phase_data(n, rng, trial);
    const RealMatrix r = build_R(n, p.r);
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(r);
    const double cut = 1e-12 * std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    std::vector<Eigen::Index> null_ids;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
      if (std::abs(eig.eigenvalues()(k)) <= cut) null_ids.push_back(k);
    if (null_ids.empty()) continue;
    ++singular_cases;

    const IntVector m = random_m(p.r.size(), rng);
    const PhaseSolution s = solve_phase(p, m);
    for (Eigen::Index id : null_ids) {
      const RealVector shifted = s.psi + t_dist(rng) * eig.eigenvectors().col(id);
      CHECK((phase_invariants(n, p.r, shifted) - s.f).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  CHECK(singular_cases == 100);
}

TEST_CASE("R(r) singularity follows the support graph") {
  CHECK(build_R(3, vec({1.0, 1.0, 1.0})).determinant() != doctest::Approx(0.0));
  CHECK(build_R(3, vec({1.0, 0.0, 0.0})).determinant() == doctest::Approx(0.0));
  // Chain 1-2-3 grounded through (3, n) only: still nonsingular.
  CHECK(std::abs(build_R(4, vec({1.0, 0.0, 0.0, 1.0, 0.0, 1.0})).determinant()) > 1e-12);
  // No edge to the last node: singular.
  CHECK(std::abs(build_R(4, vec({1.0, 1.0, 0.0, 1.0, 0.0, 0.0})).determinant()) <= 1e-12);
}

TEST_CASE("build_b is linear in phi") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const PhaseData p = random_phase_data(n, rng, trial + 1);
    const IntVector m = random_m(p.r.size(), rng);
    const RealVector lhs = build_b(n, p.r, p.phi + 2.0 * kPi * m.cast<double>());
    const RealVector rhs = build_b(n, p.r, p.phi) + 2.0 * kPi * build_b(n, p.r, m.cast<double>());
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
  }
}
