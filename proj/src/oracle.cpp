#include "unisim/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "unisim/linalg.hpp"

namespace unisim {

namespace {

// A word of length len packed as bits, first letter most significant;
// 0 = s, 1 = t. True when no rotation is smaller.
bool is_least_rotation(std::uint32_t bits, int len) {
  const std::uint32_t mask = len >= 32 ? ~0u : ((1u << len) - 1u);
  std::uint32_t rot = bits;
  for (int k = 1; k < len; ++k) {
    rot = ((rot << 1) | (rot >> (len - 1))) & mask;
    if (rot < bits) return false;
  }
  return true;
}

std::string unpack(std::uint32_t bits, int len) {
  std::string s(static_cast<std::size_t>(len), 's');
  for (int k = 0; k < len; ++k)
    if ((bits >> (len - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = 't';
  return s;
}

ComplexMatrix gaussian_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) * std::numbers::sqrt2 * 0.5;
    }
  return g;
}

Complex unit_disc_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = std::sqrt(unit(rng));
  const double angle = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(radius, angle);
}

}  // namespace

Word::Word(std::string letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw error("Word: empty word");
  for (char c : letters_)
    if (c != 's' && c != 't') throw error("Word: letters must be 's' or 't'");
}

Complex trace_word(const ComplexMatrix& m, const Word& w) {
  require_square(m, "trace_word");
  const ComplexMatrix adj = m.adjoint();
  ComplexMatrix prod = w.letters()[0] == 's' ? m : adj;
  ComplexMatrix next(m.rows(), m.cols());
  for (std::size_t k = 1; k < w.size(); ++k) {
    next.noalias() = prod * (w.letters()[k] == 's' ? m : adj);
    prod.swap(next);
  }
  return prod.trace();
}

TraceReport specht_pearcy_test(const ComplexMatrix& a, const ComplexMatrix& b,
                               int max_len, double tol_trace) {
  require_square(a, "specht_pearcy_test");
  require_square(b, "specht_pearcy_test");
  if (a.rows() != b.rows()) throw shape_error("specht_pearcy_test: dimension mismatch");
  if (max_len < 1) throw error("specht_pearcy_test: word length must be at least 1");
  if (max_len > kMaxWordLength)
    throw budget_error("specht_pearcy_test: word count exceeds the enumeration budget");

  const Eigen::Index n = a.rows();
  const double base = 1.0 + std::max(a.norm(), b.norm());
  const ComplexMatrix letters_a[2] = {a, a.adjoint()};
  const ComplexMatrix letters_b[2] = {b, b.adjoint()};

  // prefix[d] holds the product of the first d + 1 letters.
  std::vector<ComplexMatrix> prefix_a(static_cast<std::size_t>(max_len), ComplexMatrix(n, n));
  std::vector<ComplexMatrix> prefix_b(static_cast<std::size_t>(max_len), ComplexMatrix(n, n));

  TraceReport report;
  std::vector<int> letter(static_cast<std::size_t>(max_len), -1);
  int depth = 0;
  std::uint32_t bits = 0;
  std::vector<double> scales(static_cast<std::size_t>(max_len + 1), 1.0);
  for (int d = 1; d <= max_len; ++d) scales[static_cast<std::size_t>(d)] = scales[static_cast<std::size_t>(d - 1)] * base;

  // Depth-first over words; letter[depth] is the letter being tried there.
  while (depth >= 0) {
    auto& cur = letter[static_cast<std::size_t>(depth)];
    if (++cur > 1) {
      cur = -1;
      --depth;
      bits >>= 1;
      continue;
    }
    if (cur == 1) bits |= 1u; else bits &= ~1u;

    const auto d = static_cast<std::size_t>(depth);
    if (depth == 0) {
      prefix_a[0] = letters_a[cur];
      prefix_b[0] = letters_b[cur];
    } else {
      prefix_a[d].noalias() = prefix_a[d - 1] * letters_a[cur];
      prefix_b[d].noalias() = prefix_b[d - 1] * letters_b[cur];
    }

    const int len = depth + 1;
    if (is_least_rotation(bits, len)) {
      ++report.words_checked;
      const double diff = std::abs(prefix_a[d].trace() - prefix_b[d].trace());
      if (diff > tol_trace * scales[static_cast<std::size_t>(len)]) {
        report.verdict = TraceVerdict::Refuted;
        report.word = unpack(bits, len);
        report.difference = diff;
        return report;
      }
    }

    if (len < max_len) {
      ++depth;
      bits <<= 1;
    }
  }
  return report;
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw shape_error("random_unitary: n must be positive");
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of diag(R) makes the distribution Haar.
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const Complex phase = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

GeneratedMatrix gen_nonderogatory_factors(std::span<const Complex> spectrum,
                                          std::uint64_t seed) {
  const int n = static_cast<int>(spectrum.size());
  if (n < 1) throw shape_error("gen_nonderogatory: empty spectrum");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GeneratedMatrix out;
  out.T = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.T(i, i) = spectrum[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) out.T(i, j) = unit_disc_sample(rng);
  }

  // Chain each repeated eigenvalue to its next occurrence with a coupling of
  // magnitude in [0.5, 1].
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (spectrum[static_cast<std::size_t>(j)] == spectrum[static_cast<std::size_t>(i)]) {
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        out.T(i, j) = std::polar(0.5 + 0.5 * unit(rng), angle);
        break;
      }

  out.Q = random_unitary(n, rng());
  // Conjugating a scalar by a phase is the identity; skip the rounding.
  out.A = n == 1 ? out.T : ComplexMatrix(out.Q * out.T * out.Q.adjoint());
  return out;
}

ComplexMatrix gen_nonderogatory(int n, std::span<const Complex> spectrum,
                                std::uint64_t seed) {
  if (static_cast<int>(spectrum.size()) != n)
    throw shape_error("gen_nonderogatory: spectrum length differs from n");
  return gen_nonderogatory_factors(spectrum, seed).A;
}

}  // namespace unisim
