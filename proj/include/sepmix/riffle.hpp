#pragma once

#include <sepmix/combinatorics.hpp>
#include <sepmix/pile_size_law.hpp>

#include <cstdint>
#include <vector>

namespace sepmix::riffle {

// One-step probability that every block of a type-lambda set partition gets a
// constant selection indicator: sum over multiplicity sub-vectors (r_j).
BigRat q_lambda(const PileSizeLaw& f, const comb::Partition& la);

// Inclusion-exclusion separation s(t) = 1 - sum_{lambda} w_lambda q_lambda^t.
BigRat exact_separation(const PileSizeLaw& f, unsigned t);

struct FloatValue {
  double value = 0;
  bool clamped = false;
};
// Floating evaluation of the same alternating sum; out-of-range results are
// clamped to [0,1] and flagged.
FloatValue exact_separation_f(const PileSizeLaw& f, unsigned t);

// Two- and three-card agreement probabilities.
BigRat q2(const PileSizeLaw& f);
BigRat q3(const PileSizeLaw& f);

// Cutoff time parametrizations; logarithms are natural throughout.
long dense_time(int n, double q2_value, double c);  // round((2 ln n + c)/(-ln q2))
long sparse_time(int n, int k, double c);           // floor((n/k)(ln n + c))
long uniform_driven_time(int n, double c);          // floor(a ln n + b c sqrt(ln n))

// Window position actually realized by an integer time (the inverse of the
// corresponding time map). Profile references are evaluated here: one time
// step is a visible fraction of the window at dense scales, so comparing at
// the nominal c would conflate rounding with estimation error.
double dense_effective_c(int n, double q2_value, long t);
double sparse_effective_c(int n, int k, long t);
double uniform_driven_effective_c(int n, long t);

// E[(U_t)_r] = (n)_r (binom(n-r,k)/binom(n,k))^t, evaluated in log space.
double untouched_factorial_moment(int n, int k, long t, int r);

// Var(K/n) * ln n, reported as a concentration diagnostic for user laws.
double variance_diagnostic(const PileSizeLaw& f);

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
  uint64_t successes = 0;
  uint64_t trials = 0;
};

// Monte Carlo estimate of P[T > t] where T is the first time all row
// histories are distinct. Cards carry 64-bit history hashes updated on
// selection; hash-equal groups at the horizon are verified exactly against
// the stored selection histories. Bit-identical for fixed (seed, trials)
// regardless of worker count.
McEstimate simulate_sst(const PileSizeLaw& f, long t, uint64_t trials, uint64_t seed,
                        int workers = 0);

inline constexpr uint32_t kBeyondHorizon = 0xffffffffu;

// Per-trial stopping times via exact partition refinement of the row
// histories; entries are kBeyondHorizon when T exceeds the horizon.
std::vector<uint32_t> simulate_sst_times(const PileSizeLaw& f, long t, uint64_t trials,
                                         uint64_t seed, int workers = 0);

// Full selection history of a single trial, for inspection and tests.
struct RowHistorySample {
  int n = 0;
  long horizon = 0;
  std::vector<std::vector<uint8_t>> rows;  // rows[i][s] = card i selected at step s+1
  uint32_t all_distinct_time = kBeyondHorizon;
};
RowHistorySample sample_row_history(const PileSizeLaw& f, long t, uint64_t seed,
                                    uint64_t trial);

}  // namespace sepmix::riffle
