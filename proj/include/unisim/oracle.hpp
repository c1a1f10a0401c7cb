#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "unisim/types.hpp"

namespace unisim {

/// Word over {s, t}: 's' stands for M and 't' for M*.
class Word {
public:
  explicit Word(std::string letters);

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

private:
  std::string letters_;
};

/// tr W(M, M*), multiplying left to right.
Complex trace_word(const ComplexMatrix& m, const Word& w);

enum class TraceVerdict { Consistent, Refuted };

struct TraceReport {
  TraceVerdict verdict = TraceVerdict::Consistent;
  /// First refuting word, when any.
  std::optional<std::string> word;
  double difference = 0.0;
  std::uint64_t words_checked = 0;
};

/// Largest word length the enumeration budget admits (2^(L+1) <= 2^21).
constexpr int kMaxWordLength = 20;

/// Compares tr W(A, A*) with tr W(B, B*) for every word of length <= L, one
/// word per cyclic rotation class. A word of length l refutes when the
/// difference exceeds tol_trace (1 + max ||.||_F)^l.
TraceReport specht_pearcy_test(const ComplexMatrix& a, const ComplexMatrix& b,
                               int max_len, double tol_trace = 1e-8);

/// Haar-distributed unitary from a seeded complex Gaussian matrix.
ComplexMatrix random_unitary(int n, std::uint64_t seed);

struct GeneratedMatrix {
  ComplexMatrix A;
  ComplexMatrix T;
  /// A = Q T Q*.
  ComplexMatrix Q;
};

/// Random nonderogatory matrix with the given spectrum; repeated eigenvalues
/// are joined by a nonzero coupling chain so each has a single Jordan block.
GeneratedMatrix gen_nonderogatory_factors(std::span<const Complex> spectrum,
                                          std::uint64_t seed);

ComplexMatrix gen_nonderogatory(int n, std::span<const Complex> spectrum,
                                std::uint64_t seed);

}  // namespace unisim
