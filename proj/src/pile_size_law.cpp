#include <sepmix/pile_size_law.hpp>

namespace sepmix {

PileSizeLaw::PileSizeLaw(std::vector<BigRat> mass) : mass_(std::move(mass)) {
  n_ = static_cast<int>(mass_.size());
  if (n_ < 1) throw validation_error("PileSizeLaw: empty mass vector");
  BigRat total = 0;
  for (const auto& m : mass_) {
    if (m < 0) throw validation_error("PileSizeLaw: negative mass");
    total += m;
  }
  if (total != 1) throw validation_error("PileSizeLaw: masses must sum to 1");
  cdf_.resize(n_);
  BigRat cum = 0;
  for (int k = 0; k < n_; ++k) {
    cum += mass_[k];
    cdf_[k] = to_double(cum);
  }
  cdf_[n_ - 1] = 1.0;
}

PileSizeLaw PileSizeLaw::uniform(int n) {
  if (n < 1) throw validation_error("PileSizeLaw: n must be >= 1");
  return PileSizeLaw(std::vector<BigRat>(n, make_rat(1, n)));
}

PileSizeLaw PileSizeLaw::delta(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw validation_error("PileSizeLaw: need 1 <= k <= n");
  std::vector<BigRat> mass(n, BigRat(0));
  mass[k - 1] = 1;
  return PileSizeLaw(std::move(mass));
}

PileSizeLaw PileSizeLaw::from_masses(std::vector<BigRat> mass) {
  return PileSizeLaw(std::move(mass));
}

}  // namespace sepmix
