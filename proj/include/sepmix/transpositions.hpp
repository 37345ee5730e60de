#pragma once

#include <sepmix/combinatorics.hpp>

#include <cstdint>
#include <vector>

namespace sepmix::rt {

inline constexpr int kExactNCycleCap = 30;
inline constexpr int kSmallSeparationCap = 6;
inline constexpr int kSpectralSumCap = 60;

// Hook eigenvalues of random transpositions: p_{(n-j,1^j)} = 1 - 2j/n with
// multiplicity binom(n-1, j) and alternating character sign (-1)^j.
struct HookEntry {
  int j = 0;
  double eigenvalue = 0;
  int sign = 1;
  double log_multiplicity = 0;
};
struct HookSpectrum {
  int n = 0;
  std::vector<HookEntry> entries;
};
HookSpectrum hook_spectrum(int n);

// n! P^m(id, n-cycle) = sum_j binom(n-1,j) (-1)^j (1-2j/n)^m.
BigRat ncycle_ratio_exact(int n, long m);

struct ConditionedValue {
  double value = 0;
  double condition = 0;  // sum |terms| / |value|
  bool reliable = true;  // false when condition > 1e12 or terms overflow
};
ConditionedValue ncycle_ratio(int n, long m);

long m_time(int n, double c);  // floor((n/2)(ln n + c)), clamped at 0
double separation_lower_bound(int n, double c);

// Character-inversion transition ratios n! P^m(id, rho) over all classes.
struct ClassRatio {
  comb::Partition cls;
  BigRat ratio;
};
struct SmallSeparation {
  BigRat separation;
  comb::Partition argmin_class;
  std::vector<ClassRatio> ratios;
};
SmallSeparation exact_separation_small(int n, long m);

// (n(ln n + c)/n!) sum_{lambda != (n)} f^2 (1/sqrt(e^c n))^{n-1-(2/n)diag};
// include_trivial adds the lambda = (n) term n(ln n + c)/n!.
double spectral_weight_sum(int n, double c, bool include_trivial);

// Biased random transpositions with |A| = n-1, |B| = 1.
struct BiasedParams {
  int n = 0;
  double a = 0, b = 0;
  BiasedParams(int n, double a, double b);  // checks a(n-1)+b = n, 0 < b <= a
  static BiasedParams from_epsilon(int n, double eps);
};
double biased_eigenvalue(const BiasedParams& params, const comb::Partition& la,
                         const comb::Partition& mu);

struct BiasedBound {
  double bound = 0;       // delta_max e^{delta_max} * weight_sum
  double delta_max = 0;   // max_{lambda,mu} |tbar(1-q) - t(1-p)|
  double weight_sum = 0;  // sum_{lambda != (n)} f^2 e^{-t(1-p)}
};
BiasedBound biased_comparison_bound(int n, double c, double eps);
BiasedBound biased_comparison_bound(int n, double c);  // eps = 1/n!

// 3 t eps sum_lambda f^2 e^{-t(1-p_lambda)} with t = (n/2)(ln n + c).
double central_perturbation_bound(int n, double c, double eps);

struct TouchedLabelsResult {
  std::vector<uint64_t> histogram;  // histogram[u] = trials with U = u
  uint64_t trials = 0;
  double p_ge2 = 0, se_ge2 = 0;
  double mean_u = 0;
};
// U = number of labels untouched by m independent uniform label pairs.
TouchedLabelsResult simulate_touched_labels(int n, long m, uint64_t trials,
                                            uint64_t seed, int workers = 0);

}  // namespace sepmix::rt
