#include <doctest.h>

#include <random>
#include <vector>

#include "test_helpers.hpp"
#include "unisim/oracle.hpp"
#include "unisim/similarity.hpp"
#include "unisim/stability.hpp"

using namespace unisim;
using namespace unisim::testing;

namespace {

ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& u) { return u * a * u.adjoint(); }

std::vector<Complex> spectrum_for(int n, int kind) {
  std::vector<Complex> s;
  for (int i = 0; i < n; ++i) s.emplace_back(1.0 + i, 0.3 * i);
  if (kind == 1 && n >= 2) s[1] = s[0];
  if (kind == 2 && n >= 3) s[2] = s[1] = s[0];
  return s;
}

}  // namespace

TEST_CASE("reason names") {
  CHECK(to_string(Reason::Similar) == "Similar");
  CHECK(to_string(Reason::SpectraMismatch) == "SpectraMismatch");
  CHECK(to_string(Reason::NotNonderogatory) == "NotNonderogatory");
  CHECK(to_string(Reason::MagnitudeMismatch) == "MagnitudeMismatch");
  CHECK(to_string(Reason::NoFamilyIntersection) == "NoFamilyIntersection");
}

TEST_CASE("certificate_residual examples") {
  const ComplexMatrix a = random_complex(3, 3, 1);
  const ComplexMatrix u = random_unitary(3, 2);
  CHECK(certificate_residual(a, a, ComplexMatrix::Identity(3, 3)) == 0.0);
  CHECK(certificate_residual(a, conjugate(a, u), u) <= 1e-14);
  CHECK(certificate_residual(a, 2.0 * a, ComplexMatrix::Identity(3, 3)) == doctest::Approx(1.0));
}

TEST_CASE("a matrix is similar to itself") {
  for (int n = 1; n <= 5; ++n) {
    const std::vector<Complex> s = spectrum_for(n, 0);
    const ComplexMatrix a = gen_nonderogatory(n, s, 10 + static_cast<std::uint64_t>(n));
    const Verdict v = check_unitary_similarity(a, a);
    CHECK(v.similar);
    CHECK(v.reason == Reason::Similar);
    REQUIRE(v.certificate);
    CHECK(unitarity_defect(*v.certificate) <= 1e-10);
    CHECK(*v.residual <= 1e-7);
  }
}

TEST_CASE("unitarily similar pairs are accepted with a certificate") {
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    const int kind = (trial / 4) % 3;
    const auto seed = static_cast<std::uint64_t>(500 + trial);
    const ComplexMatrix a = gen_nonderogatory(n, spectrum_for(n, kind), seed);
    const ComplexMatrix b = conjugate(a, random_unitary(n, seed + 7));
    const Verdict v = check_unitary_similarity(a, b);
    CHECK_MESSAGE(v.similar, "trial " << trial << " reason " << to_string(v.reason));
    if (!v.certificate) continue;
    CHECK(certificate_residual(a, b, *v.certificate) <= 1e-7);
    CHECK(unitarity_defect(*v.certificate) <= 1e-8);
  }
}

TEST_CASE("verdict is symmetric") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const auto seed = static_cast<std::uint64_t>(900 + trial);
    const ComplexMatrix a = gen_nonderogatory(n, spectrum_for(n, trial % 2), seed);
    ComplexMatrix b = conjugate(a, random_unitary(n, seed + 1));
    if (trial % 2 == 1) b(0, n - 1) += 0.5;
    const Verdict ab = check_unitary_similarity(a, b);
    const Verdict ba = check_unitary_similarity(b, a);
    CHECK(ab.similar == ba.similar);
  }
}

TEST_CASE("different spectra") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  b.diagonal() << 1.0, 3.0;
  const Verdict v = check_unitary_similarity(a, b);
  CHECK_FALSE(v.similar);
  CHECK(v.reason == Reason::SpectraMismatch);
  CHECK_FALSE(v.certificate);
}

TEST_CASE("same spectrum with a different magnitude") {
  ComplexMatrix a = builtin_a4(0.0);
  ComplexMatrix b = a;
  b(0, 2) = a(0, 2) * (std::abs(a(0, 2)) + 1.0) / std::abs(a(0, 2));
  const Verdict v = check_unitary_similarity(a, b);
  CHECK_FALSE(v.similar);
  CHECK(v.reason == Reason::MagnitudeMismatch);
  REQUIRE(v.magnitude_gap);
  CHECK(*v.magnitude_gap == doctest::Approx(1.0));
}

TEST_CASE("conjugation by a diagonal unitary keeps the verdict similar") {
  const ComplexMatrix a = builtin_a4(Complex(0.0, 0.3));
  const ComplexVector x = random_phases(4, 3);
  const Verdict v = check_unitary_similarity(a, x.asDiagonal() * a * x.conjugate().asDiagonal());
  CHECK(v.similar);
}

TEST_CASE("derogatory input is refused") {
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const Verdict v = check_unitary_similarity(id, id);
  CHECK_FALSE(v.similar);
  CHECK(v.reason == Reason::NotNonderogatory);

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 1.0, 2.0;
  CHECK(check_unitary_similarity(d, d).reason == Reason::NotNonderogatory);
}

TEST_CASE("simple spectrum reports an infinite margin") {
  const ComplexMatrix a = builtin_a4(0.0);
  const Verdict v = check_unitary_similarity(a, a);
  CHECK(std::isinf(v.nonderogatory_margin));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(check_unitary_similarity(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(2, 3)),
                  shape_error);
  CHECK_THROWS_AS(check_unitary_similarity(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)),
                  shape_error);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(check_unitary_similarity(bad, bad), non_finite_error);

  const ComplexMatrix big = gen_nonderogatory(7, spectrum_for(7, 0), 4);
  CHECK_THROWS_AS(check_unitary_similarity(big, big), budget_error);

  Config cfg;
  cfg.tol_match = -1.0;
  CHECK_THROWS(check_unitary_similarity(big, big, cfg));
}
