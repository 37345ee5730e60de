#pragma once

#include <sepmix/exact.hpp>

#include <vector>

namespace sepmix {

// Pile-size distribution f on {1,...,n} driving the inverse riffle shuffle.
// Masses are held exactly; decimal or fractional inputs are parsed to exact
// rationals, so the rational-mode invariants hold for every constructible law.
class PileSizeLaw {
 public:
  static PileSizeLaw uniform(int n);
  static PileSizeLaw delta(int n, int k);
  static PileSizeLaw from_masses(std::vector<BigRat> mass);  // mass[k-1] = f(k)

  int n() const { return n_; }
  const BigRat& mass(int k) const { return mass_[k - 1]; }
  double mass_d(int k) const { return cdf_[k - 1] - (k >= 2 ? cdf_[k - 2] : 0.0); }
  // cdf()[k-1] = f(1) + ... + f(k); last entry exactly 1 for sampling.
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  explicit PileSizeLaw(std::vector<BigRat> mass);
  int n_ = 0;
  std::vector<BigRat> mass_;
  std::vector<double> cdf_;
};

}  // namespace sepmix
