#pragma once

#include <sepmix/chain.hpp>
#include <sepmix/exact.hpp>

#include <vector>

namespace sepmix::walks {

// Ring rates of a coordinate-refresh walk, normalized to total rate 1.
class RateVector {
 public:
  explicit RateVector(std::vector<double> rates);
  static RateVector uniform(int n);
  // alpha_1 = 1/n + b, remaining coordinates a_n = 1/n - b/(n-1).
  static RateVector first_coordinate_perturbed(int n, double b);
  // First half 1+2b over n, second half 1-2b over n.
  static RateVector half_split(int n, double b);

  int n() const { return static_cast<int>(rates_.size()); }
  const std::vector<double>& rates() const { return rates_; }
  double alpha_min() const { return alpha_min_; }
  int gamma() const { return gamma_; }  // coordinates ringing at the minimum rate

 private:
  std::vector<double> rates_;
  double alpha_min_ = 0;
  int gamma_ = 0;
};

// s(t) = 1 - prod_k (1 - e^{-alpha_k t}); direct product for n <= 1000,
// log1p-sum beyond (the two branches are cross-checked in tests).
double hypercube_separation(const RateVector& rates, double t);

// Uniform coordinate refresh on (Z/mZ)^n: s(t) = 1 - (1 - e^{-t/n})^n,
// independent of m (m >= 2 validated).
double zmn_separation_uniform(int m, long long n, double t);

// Paired time of the lazy chain Q = (1-alpha) I + alpha P.
double lazy_time_map(double t, double alpha);

// Comparison sums of the first-coordinate perturbation on (Z/mZ)^n at the
// paired times tbar = a_n^{-1}(ln(n-1)+c) and t = n(ln n + c); s1 is the
// proof's triangle-inequality bound, s1_exact the exact absolute sum.
struct PerturbedSums {
  double s0 = 0;
  double s1 = 0;
  double s1_exact = 0;
};
PerturbedSums perturbed_comparison_sums(int m, int n, double b, double c,
                                        bool with_exact_s1 = false);

// Half-split comparison bound between rates b and b2 at their paired times.
double halfsplit_comparison_bound(int n, double b, double b2, double c);

// Continuity sums B_n(c) for the two perturbed hypercube families, split as
// bounded part + vanishing part.
struct ContinuityParts {
  double bounded_part = 0;
  double vanishing_part = 0;
  double total = 0;
};
ContinuityParts hypercube_continuity_first_coordinate(int n, double b, double c);
ContinuityParts hypercube_continuity_half_split(int n, double b, double c);

// Bernoulli-Laplace spectral data: gaps 4j(n-j+1)/n^2 and spherical
// dimensions binom(n,j) - binom(n,j-1) for j = 0..n/2.
struct BLSpectrum {
  int n = 0;
  std::vector<double> gap;
  std::vector<double> log_dim;
};
BLSpectrum bl_spectrum(int n);
BigInt bl_dimension_exact(int n, int j);

// B_n(c) = (n/4) sum_{j>=1} d_{n,j} lambda_{n,j} e^{-(n/4)(ln n + c) lambda_{n,j}}.
double bl_continuity_sum(long long n, double c);
// sum_{j=1}^{n/2} j e^{Aj} n^{j(j-1)/n} / j!, the dominating series.
double bl_dominating_bound(long long n, double A);

// Birth-death Bernoulli-Laplace kernel on {0..n/2}, exact arithmetic.
inline constexpr int kBLKernelCap = 200;
chain::ChainKernel bl_kernel(int n);

// Product-chain kernels for brute-force checks (floating mode).
chain::ChainKernel hypercube_kernel(const RateVector& rates);
chain::ChainKernel zmn_kernel(int m, const RateVector& rates);

// Character spectral data of the hypercube walk (table mode, n <= 8;
// multiplicity mode enumerates all 2^n eigenvalues, n <= 20).
chain::SpectralDecomposition hypercube_spectrum_table(const RateVector& rates);
chain::SpectralDecomposition hypercube_spectrum_multiplicities(const RateVector& rates);

// Separation at t = alpha_min^{-1}(ln gamma + c) together with the
// profile-hypothesis diagnostic sup_{alpha_k > alpha_min} gamma^{-alpha_k/alpha_min}.
struct GumbelCheck {
  double time = 0;
  double value = 0;
  double hypothesis_sup = 0;  // 0 when every coordinate rings at the minimum rate
};
GumbelCheck gumbel_profile_check(const RateVector& rates, double c);

}  // namespace sepmix::walks
