#pragma once

#include <sepmix/exact.hpp>
#include <sepmix/pile_size_law.hpp>

#include <cstdint>
#include <vector>

namespace sepmix::chain {

enum class Mode { exact, floating };

// Dense row-stochastic kernel over an explicit finite state space, carrying
// its stationary distribution. Exact kernels also keep a double view for the
// floating-point paths (uniformization, diagnostics).
class ChainKernel {
 public:
  static ChainKernel exact(std::vector<BigRat> matrix, std::vector<BigRat> stationary);
  static ChainKernel floating(std::vector<double> matrix, std::vector<double> stationary);

  Mode mode() const { return mode_; }
  size_t size() const { return n_; }
  bool reversible() const { return reversible_; }

  const BigRat& at(size_t x, size_t y) const { return rmat_[x * n_ + y]; }
  double at_d(size_t x, size_t y) const { return dmat_[x * n_ + y]; }
  const std::vector<BigRat>& stationary() const { return rpi_; }
  const BigRat& pi(size_t x) const { return rpi_[x]; }
  double pi_d(size_t x) const { return dpi_[x]; }
  const std::vector<double>& matrix_d() const { return dmat_; }
  const std::vector<double>& stationary_d() const { return dpi_; }

 private:
  ChainKernel() = default;
  Mode mode_ = Mode::floating;
  size_t n_ = 0;
  std::vector<BigRat> rmat_, rpi_;
  std::vector<double> dmat_, dpi_;
  bool reversible_ = false;
};

struct SepPoint {
  double value = 0;
  size_t witness = 0;  // maximizing terminal state, lowest index on ties
};
struct ExactSepPoint {
  BigRat value;
  size_t witness = 0;
};

// t-step distribution row from x by iterated vector-kernel products.
std::vector<BigRat> transition_row_exact(const ChainKernel& k, size_t x, unsigned t);
std::vector<double> transition_row_d(const ChainKernel& k, size_t x, unsigned t);
// One exact step applied in place; row is a distribution over states.
void evolve_row_exact(const ChainKernel& k, std::vector<BigRat>& row);
// Full t-step matrix by repeated squaring.
std::vector<BigRat> power_exact(const ChainKernel& k, unsigned t);
std::vector<double> power_d(const ChainKernel& k, unsigned t);

// Separation s_x(t) = max_y (1 - P^t(x,y)/pi(y)).
ExactSepPoint separation_discrete_exact(const ChainKernel& k, unsigned t, size_t x);
SepPoint separation_discrete(const ChainKernel& k, unsigned t, size_t x);
// Continuous-time kernel e^{-t(I-P)} via uniformization; the Poisson tail is
// cut at 1e-14 with a hard term cap of 10(t+20).
SepPoint separation_continuous(const ChainKernel& k, double t, size_t x);

// Spectral data for a reversible kernel: eigenvalues p_j with either plain
// multiplicities or an eigenfunction table orthonormal in l2(pi).
class SpectralDecomposition {
 public:
  static SpectralDecomposition with_multiplicities(std::vector<double> eigenvalues,
                                                   std::vector<double> multiplicities);
  static SpectralDecomposition with_table(std::vector<double> eigenvalues,
                                          std::vector<std::vector<double>> functions,
                                          std::vector<double> pi);

  bool has_table() const { return !functions_.empty(); }
  size_t terms() const { return eigenvalues_.size(); }
  size_t states() const { return pi_.size(); }
  double eigenvalue(size_t j) const { return eigenvalues_[j]; }
  double gap(size_t j) const { return 1.0 - eigenvalues_[j]; }
  double multiplicity(size_t j) const { return multiplicities_[j]; }
  const std::vector<double>& function(size_t j) const { return functions_[j]; }
  const std::vector<double>& pi() const { return pi_; }

 private:
  std::vector<double> eigenvalues_;
  std::vector<double> multiplicities_;
  std::vector<std::vector<double>> functions_;
  std::vector<double> pi_;
};

// Separation of the continuous-time kernel evaluated through the spectral sum
// P^t(x,y)/pi(y) = sum_j f_j(x) f_j(y) e^{-t(1-p_j)}.
SepPoint separation_continuous_spectral(const SpectralDecomposition& spec, double t,
                                        size_t x);

// Comparison bounds for simultaneously diagonalizable reversible chains.
double comparison_bound_discrete(const SpectralDecomposition& p,
                                 const SpectralDecomposition& q, size_t x, unsigned t);
double comparison_bound_discrete_transitive(const SpectralDecomposition& p,
                                            const SpectralDecomposition& q, unsigned t);
double comparison_bound_continuous(const SpectralDecomposition& p,
                                   const SpectralDecomposition& q, size_t x, double t,
                                   double tbar);
double comparison_bound_continuous_transitive(const SpectralDecomposition& p,
                                              const SpectralDecomposition& q, double t,
                                              double tbar);

// Continuity sums w * sum_{j>=2} ... lambda_j e^{-(t+cw) lambda_j}, with the
// constant eigenfunction (gap 0) excluded.
double continuity_sum(const SpectralDecomposition& spec, size_t x, double t, double w,
                      double c);
double continuity_sum_transitive(const SpectralDecomposition& spec, double t, double w,
                                 double c);

// Brute-force shuffle kernels on S_n (state count n!), exact arithmetic.
inline constexpr int kShuffleKernelCap = 6;
ChainKernel riffle_kernel(const PileSizeLaw& f);
ChainKernel k_to_top_kernel(int n, int k);
ChainKernel random_transpositions_kernel(int n);

// Lexicographic rank/unrank of permutations of {0,...,n-1}.
std::vector<int> perm_unrank(int n, size_t rank);
size_t perm_rank(const std::vector<int>& perm);

// Numeric spectrum of a reversible kernel via Jacobi rotations on the
// symmetrized matrix. Used for self-consistency checks only; comparison
// tests are driven by analytic family spectra.
SpectralDecomposition jacobi_spectrum(const ChainKernel& k);

}  // namespace sepmix::chain
