#include <doctest.h>

#include <numbers>

#include "test_helpers.hpp"
#include "unisim/oracle.hpp"
#include "unisim/stability.hpp"

using namespace unisim;
using namespace unisim::testing;

TEST_CASE("builtin_a4 layout") {
  const ComplexMatrix a = builtin_a4(Complex(0.5, 0.0));
  CHECK(is_upper_triangular(a));
  for (int k = 0; k < 4; ++k) CHECK(a(k, k) == Complex(k + 1.0));
  CHECK(a(0, 1) == Complex(0.0, 1.0));
  CHECK(a(1, 3) == Complex(0.0, 1.0));
  CHECK(a(2, 3) == Complex(0.5));
}

TEST_CASE("positive_superdiagonal_form") {
  const ComplexMatrix a = builtin_a4(0.0);
  const ComplexMatrix p = positive_superdiagonal_form(a);
  CHECK(std::abs(p(0, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(p(1, 2) - 1.0) <= 1e-15);
  CHECK(std::abs(p(1, 3) - 1.0) <= 1e-15);
  CHECK(p.diagonal() == a.diagonal());
  CHECK((p.cwiseAbs() - a.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-15);

  const ComplexMatrix t = random_upper(4, 3);
  const ComplexVector x = random_phases(4, 4);
  const ComplexMatrix tc = x.asDiagonal() * t * x.conjugate().asDiagonal();
  CHECK((positive_superdiagonal_form(t) - positive_superdiagonal_form(tc)).norm() <= 1e-12);
}

TEST_CASE("hausdorff_distance") {
  const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  const ComplexMatrix one = ComplexMatrix::Ones(2, 2);
  CHECK(hausdorff_distance({z}, {z}) == 0.0);
  CHECK(hausdorff_distance({z}, {z, one}) == doctest::Approx(2.0));
  CHECK(hausdorff_distance({z, one}, {one, z}) == 0.0);
  CHECK(std::isinf(hausdorff_distance({}, {z})));
}

TEST_CASE("zero perturbation gives distance zero") {
  PerturbationSpec spec;
  spec.magnitudes = {0.0};
  spec.baseline = true;
  const StabilityReport r = run_perturbation(builtin_a4(0.0), spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].family_distance == 0.0);
  CHECK(r.rows[0].ratio == 0.0);
  CHECK(*r.rows[0].baseline_distance == 0.0);
}

TEST_CASE("family distance shrinks with the perturbation") {
  PerturbationSpec spec;
  spec.magnitudes = {1e-6, 1e-2, 1e-4, 1e-2};
  spec.arguments = {0.0, std::numbers::pi / 2, std::numbers::pi};
  spec.baseline = true;
  const StabilityReport r = run_perturbation(builtin_a4(0.0), spec);
  REQUIRE(r.rows.size() == 9);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double mag = std::abs(r.rows[k].epsilon);
    CHECK(r.rows[k].family_distance <= 10.0 * mag);
    if (k % 3 != 0) CHECK(mag < std::abs(r.rows[k - 1].epsilon));
  }
  // The baseline jumps at the negative real axis.
  CHECK(*r.rows[8].baseline_distance >= 0.1);
}

TEST_CASE("run_perturbation is deterministic") {
  PerturbationSpec spec;
  spec.magnitudes = {1e-3};
  spec.arguments = {1.0};
  const auto a = run_perturbation(builtin_a4(0.0), spec);
  const auto b = run_perturbation(builtin_a4(0.0), spec);
  CHECK(a.rows[0].family_distance == b.rows[0].family_distance);
}

TEST_CASE("run_perturbation on a general matrix") {
  const ComplexMatrix a = gen_nonderogatory(3, std::vector<Complex>{1.0, 2.0, 3.0}, 8);
  PerturbationSpec spec;
  spec.entry = {0, 2};
  spec.magnitudes = {1e-4};
  const auto r = run_perturbation(a, spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(std::isfinite(r.rows[0].family_distance));

  spec.entry = {2, 1};
  CHECK_THROWS_AS(run_perturbation(a, spec), error);
  spec.entry = {0, 2};
  spec.magnitudes = {-1.0};
  CHECK_THROWS_AS(run_perturbation(a, spec), error);
}

TEST_CASE("canonical_triangular_form") {
  const ComplexMatrix t = random_upper(3, 1);
  CHECK(canonical_triangular_form(t, {}).T == t);
  const ComplexMatrix a = random_complex(3, 3, 2);
  const SchurForm s = canonical_triangular_form(a, {});
  CHECK(strict_lower_norm(s.T) <= 1e-12 * a.norm());
  CHECK((s.U * s.T * s.U.adjoint() - a).norm() <= 1e-12 * a.norm());
}
