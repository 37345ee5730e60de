#include <sepmix/chain.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sepmix::chain {

namespace {

constexpr double kFloatTol = 1e-12;

void validate_float(const std::vector<double>& mat, const std::vector<double>& pi,
                    size_t n) {
  for (size_t x = 0; x < n; ++x) {
    double row = 0;
    for (size_t y = 0; y < n; ++y) {
      if (mat[x * n + y] < -kFloatTol) throw validation_error("kernel: negative entry");
      row += mat[x * n + y];
    }
    if (std::abs(row - 1.0) > kFloatTol)
      throw validation_error("kernel: row does not sum to 1");
  }
  double mass = 0;
  for (size_t x = 0; x < n; ++x) {
    if (pi[x] <= 0) throw validation_error("kernel: stationary mass must be positive");
    mass += pi[x];
  }
  if (std::abs(mass - 1.0) > kFloatTol)
    throw validation_error("kernel: stationary does not sum to 1");
  for (size_t y = 0; y < n; ++y) {
    double acc = 0;
    for (size_t x = 0; x < n; ++x) acc += pi[x] * mat[x * n + y];
    if (std::abs(acc - pi[y]) > kFloatTol)
      throw validation_error("kernel: stationary is not invariant");
  }
}

bool reversible_float(const std::vector<double>& mat, const std::vector<double>& pi,
                      size_t n) {
  for (size_t x = 0; x < n; ++x)
    for (size_t y = x + 1; y < n; ++y)
      if (std::abs(pi[x] * mat[x * n + y] - pi[y] * mat[y * n + x]) > kFloatTol)
        return false;
  return true;
}

}  // namespace

ChainKernel ChainKernel::exact(std::vector<BigRat> matrix, std::vector<BigRat> stationary) {
  ChainKernel k;
  k.mode_ = Mode::exact;
  k.n_ = stationary.size();
  if (k.n_ == 0 || matrix.size() != k.n_ * k.n_)
    throw validation_error("kernel: matrix/stationary size mismatch");
  for (size_t x = 0; x < k.n_; ++x) {
    BigRat row = 0;
    for (size_t y = 0; y < k.n_; ++y) {
      if (matrix[x * k.n_ + y] < 0) throw validation_error("kernel: negative entry");
      row += matrix[x * k.n_ + y];
    }
    if (row != 1) throw validation_error("kernel: row does not sum to 1");
  }
  BigRat mass = 0;
  for (const auto& p : stationary) {
    if (p <= 0) throw validation_error("kernel: stationary mass must be positive");
    mass += p;
  }
  if (mass != 1) throw validation_error("kernel: stationary does not sum to 1");
  for (size_t y = 0; y < k.n_; ++y) {
    BigRat acc = 0;
    for (size_t x = 0; x < k.n_; ++x) acc += stationary[x] * matrix[x * k.n_ + y];
    if (acc != stationary[y]) throw validation_error("kernel: stationary is not invariant");
  }
  k.reversible_ = true;
  for (size_t x = 0; x < k.n_ && k.reversible_; ++x)
    for (size_t y = x + 1; y < k.n_; ++y)
      if (stationary[x] * matrix[x * k.n_ + y] != stationary[y] * matrix[y * k.n_ + x]) {
        k.reversible_ = false;
        break;
      }
  k.dmat_.resize(k.n_ * k.n_);
  k.dpi_.resize(k.n_);
  for (size_t i = 0; i < matrix.size(); ++i) k.dmat_[i] = to_double(matrix[i]);
  for (size_t i = 0; i < k.n_; ++i) k.dpi_[i] = to_double(stationary[i]);
  k.rmat_ = std::move(matrix);
  k.rpi_ = std::move(stationary);
  return k;
}

ChainKernel ChainKernel::floating(std::vector<double> matrix, std::vector<double> stationary) {
  ChainKernel k;
  k.mode_ = Mode::floating;
  k.n_ = stationary.size();
  if (k.n_ == 0 || matrix.size() != k.n_ * k.n_)
    throw validation_error("kernel: matrix/stationary size mismatch");
  validate_float(matrix, stationary, k.n_);
  k.reversible_ = reversible_float(matrix, stationary, k.n_);
  k.dmat_ = std::move(matrix);
  k.dpi_ = std::move(stationary);
  return k;
}

void evolve_row_exact(const ChainKernel& k, std::vector<BigRat>& row) {
  const size_t n = k.size();
  std::vector<BigRat> next(n, BigRat(0));
  for (size_t y = 0; y < n; ++y) {
    if (row[y] == 0) continue;
    for (size_t z = 0; z < n; ++z) {
      if (k.at(y, z) == 0) continue;
      next[z] += row[y] * k.at(y, z);
    }
  }
  row = std::move(next);
}

std::vector<BigRat> transition_row_exact(const ChainKernel& k, size_t x, unsigned t) {
  if (k.mode() != Mode::exact) throw validation_error("transition_row_exact: float kernel");
  std::vector<BigRat> row(k.size(), BigRat(0));
  row[x] = 1;
  for (unsigned s = 0; s < t; ++s) evolve_row_exact(k, row);
  return row;
}

std::vector<double> transition_row_d(const ChainKernel& k, size_t x, unsigned t) {
  const size_t n = k.size();
  std::vector<double> row(n, 0.0), next(n);
  row[x] = 1.0;
  const auto& mat = k.matrix_d();
  for (unsigned s = 0; s < t; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t y = 0; y < n; ++y) {
      if (row[y] == 0) continue;
      const double* py = &mat[y * n];
      for (size_t z = 0; z < n; ++z) next[z] += row[y] * py[z];
    }
    row.swap(next);
  }
  return row;
}

namespace {

std::vector<BigRat> mat_mul_exact(const std::vector<BigRat>& a,
                                  const std::vector<BigRat>& b, size_t n) {
  std::vector<BigRat> out(n * n, BigRat(0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k2 = 0; k2 < n; ++k2) {
      if (a[i * n + k2] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if (b[k2 * n + j] == 0) continue;
        out[i * n + j] += a[i * n + k2] * b[k2 * n + j];
      }
    }
  return out;
}

std::vector<double> mat_mul_d(const std::vector<double>& a, const std::vector<double>& b,
                              size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t k2 = 0; k2 < n; ++k2) {
      double v = a[i * n + k2];
      if (v == 0) continue;
      const double* pb = &b[k2 * n];
      double* po = &out[i * n];
      for (size_t j = 0; j < n; ++j) po[j] += v * pb[j];
    }
  return out;
}

}  // namespace

std::vector<BigRat> power_exact(const ChainKernel& k, unsigned t) {
  if (k.mode() != Mode::exact) throw validation_error("power_exact: float kernel");
  const size_t n = k.size();
  std::vector<BigRat> result(n * n, BigRat(0));
  for (size_t i = 0; i < n; ++i) result[i * n + i] = 1;
  std::vector<BigRat> base(k.size() * k.size());
  for (size_t i = 0; i < n * n; ++i) base[i] = k.at(i / n, i % n);
  while (t > 0) {
    if (t & 1u) result = mat_mul_exact(result, base, n);
    t >>= 1u;
    if (t > 0) base = mat_mul_exact(base, base, n);
  }
  return result;
}

std::vector<double> power_d(const ChainKernel& k, unsigned t) {
  const size_t n = k.size();
  std::vector<double> result(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) result[i * n + i] = 1.0;
  std::vector<double> base = k.matrix_d();
  while (t > 0) {
    if (t & 1u) result = mat_mul_d(result, base, n);
    t >>= 1u;
    if (t > 0) base = mat_mul_d(base, base, n);
  }
  return result;
}

namespace {

ExactSepPoint sep_from_row_exact(const std::vector<BigRat>& row,
                                 const std::vector<BigRat>& pi) {
  // max_y (1 - row[y]/pi(y)); ties resolved toward the lowest state index.
  size_t witness = 0;
  BigRat best = row[0] / pi[0];
  for (size_t y = 1; y < row.size(); ++y) {
    BigRat ratio = row[y] / pi[y];
    if (ratio < best) {
      best = ratio;
      witness = y;
    }
  }
  return {BigRat(1) - best, witness};
}

SepPoint sep_from_row_d(const std::vector<double>& row, const std::vector<double>& pi) {
  size_t witness = 0;
  double best = row[0] / pi[0];
  for (size_t y = 1; y < row.size(); ++y) {
    double ratio = row[y] / pi[y];
    if (ratio < best) {
      best = ratio;
      witness = y;
    }
  }
  return {1.0 - best, witness};
}

constexpr size_t kSquaringStateCap = 200;

}  // namespace

ExactSepPoint separation_discrete_exact(const ChainKernel& k, unsigned t, size_t x) {
  if (x >= k.size()) throw validation_error("separation: state out of range");
  std::vector<BigRat> row;
  if (k.size() <= kSquaringStateCap && t > 1) {
    auto pt = power_exact(k, t);
    row.assign(pt.begin() + x * k.size(), pt.begin() + (x + 1) * k.size());
  } else {
    row = transition_row_exact(k, x, t);
  }
  return sep_from_row_exact(row, k.stationary());
}

SepPoint separation_discrete(const ChainKernel& k, unsigned t, size_t x) {
  if (x >= k.size()) throw validation_error("separation: state out of range");
  if (k.mode() == Mode::exact) {
    auto ex = separation_discrete_exact(k, t, x);
    return {to_double(ex.value), ex.witness};
  }
  std::vector<double> row;
  if (k.size() <= kSquaringStateCap && t > 1) {
    auto pt = power_d(k, t);
    row.assign(pt.begin() + x * k.size(), pt.begin() + (x + 1) * k.size());
  } else {
    row = transition_row_d(k, x, t);
  }
  return sep_from_row_d(row, k.stationary_d());
}

SepPoint separation_continuous(const ChainKernel& k, double t, size_t x) {
  if (x >= k.size()) throw validation_error("separation: state out of range");
  if (t < 0) throw validation_error("separation_continuous: t must be >= 0");
  if (t > 700) throw numeric_error("separation_continuous: t too large for uniformization");
  const size_t n = k.size();
  const auto& mat = k.matrix_d();
  std::vector<double> v(n, 0.0), next(n), acc(n, 0.0);
  v[x] = 1.0;
  double weight = std::exp(-t);  // Poisson(t) mass at 0
  double cum = weight;
  for (size_t y = 0; y < n; ++y) acc[y] = weight * v[y];
  const double cap = 10.0 * (t + 20.0);
  for (double k2 = 1;; ++k2) {
    if (1.0 - cum < 1e-14) break;
    if (k2 > cap) throw numeric_error("separation_continuous: term cap exceeded");
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t y = 0; y < n; ++y) {
      if (v[y] == 0) continue;
      const double* py = &mat[y * n];
      for (size_t z = 0; z < n; ++z) next[z] += v[y] * py[z];
    }
    v.swap(next);
    weight *= t / k2;
    cum += weight;
    for (size_t y = 0; y < n; ++y) acc[y] += weight * v[y];
  }
  return sep_from_row_d(acc, k.stationary_d());
}

SpectralDecomposition SpectralDecomposition::with_multiplicities(
    std::vector<double> eigenvalues, std::vector<double> multiplicities) {
  if (eigenvalues.size() != multiplicities.size() || eigenvalues.empty())
    throw validation_error("spectral data: eigenvalue/multiplicity size mismatch");
  for (double p : eigenvalues)
    if (std::abs(p) > 1 + 1e-12)
      throw validation_error("spectral data: |eigenvalue| > 1");
  for (double m : multiplicities)
    if (m < 1) throw validation_error("spectral data: multiplicity < 1");
  SpectralDecomposition s;
  s.eigenvalues_ = std::move(eigenvalues);
  s.multiplicities_ = std::move(multiplicities);
  return s;
}

SpectralDecomposition SpectralDecomposition::with_table(
    std::vector<double> eigenvalues, std::vector<std::vector<double>> functions,
    std::vector<double> pi) {
  if (eigenvalues.size() != functions.size() || eigenvalues.empty())
    throw validation_error("spectral data: eigenvalue/function size mismatch");
  for (double p : eigenvalues)
    if (std::abs(p) > 1 + 1e-12)
      throw validation_error("spectral data: |eigenvalue| > 1");
  const size_t n = pi.size();
  for (const auto& f : functions)
    if (f.size() != n) throw validation_error("spectral data: function length mismatch");
  for (size_t i = 0; i < functions.size(); ++i)
    for (size_t j = i; j < functions.size(); ++j) {
      double inner = 0;
      for (size_t x = 0; x < n; ++x) inner += functions[i][x] * functions[j][x] * pi[x];
      double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(inner - expect) > 1e-10)
        throw validation_error("spectral data: eigenfunctions not orthonormal in l2(pi)");
    }
  SpectralDecomposition s;
  s.eigenvalues_ = std::move(eigenvalues);
  s.multiplicities_.assign(s.eigenvalues_.size(), 1.0);
  s.functions_ = std::move(functions);
  s.pi_ = std::move(pi);
  return s;
}

SepPoint separation_continuous_spectral(const SpectralDecomposition& spec, double t,
                                        size_t x) {
  if (!spec.has_table())
    throw validation_error("spectral separation: eigenfunction table required");
  const size_t n = spec.states();
  size_t witness = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t y = 0; y < n; ++y) {
    double ratio = 0;
    for (size_t j = 0; j < spec.terms(); ++j)
      ratio += spec.function(j)[x] * spec.function(j)[y] * std::exp(-t * spec.gap(j));
    if (ratio < best) {
      best = ratio;
      witness = y;
    }
  }
  return {1.0 - best, witness};
}

namespace {

void check_pair(const SpectralDecomposition& p, const SpectralDecomposition& q,
                bool need_tables) {
  if (p.terms() != q.terms())
    throw validation_error("comparison: spectral dimensions differ");
  if (need_tables && (!p.has_table() || !q.has_table()))
    throw validation_error("comparison: eigenfunction table required");
  if (need_tables && p.states() != q.states())
    throw validation_error("comparison: state spaces differ");
}

template <typename Weight>
double bound_with_table(const SpectralDecomposition& p, size_t x, Weight weight) {
  const size_t n = p.states();
  double best = 0;
  for (size_t y = 0; y < n; ++y) {
    double acc = 0;
    for (size_t j = 0; j < p.terms(); ++j)
      acc += std::abs(p.function(j)[x] * p.function(j)[y] * weight(j));
    best = std::max(best, acc);
  }
  return best;
}

template <typename Weight>
double bound_transitive(const SpectralDecomposition& p, Weight weight) {
  double acc = 0;
  for (size_t j = 0; j < p.terms(); ++j)
    acc += p.multiplicity(j) * std::abs(weight(j));
  return acc;
}

}  // namespace

double comparison_bound_discrete(const SpectralDecomposition& p,
                                 const SpectralDecomposition& q, size_t x, unsigned t) {
  check_pair(p, q, true);
  auto w = [&](size_t j) {
    return std::pow(p.eigenvalue(j), static_cast<double>(t)) -
           std::pow(q.eigenvalue(j), static_cast<double>(t));
  };
  return bound_with_table(p, x, w);
}

double comparison_bound_discrete_transitive(const SpectralDecomposition& p,
                                            const SpectralDecomposition& q, unsigned t) {
  check_pair(p, q, false);
  auto w = [&](size_t j) {
    return std::pow(p.eigenvalue(j), static_cast<double>(t)) -
           std::pow(q.eigenvalue(j), static_cast<double>(t));
  };
  return bound_transitive(p, w);
}

double comparison_bound_continuous(const SpectralDecomposition& p,
                                   const SpectralDecomposition& q, size_t x, double t,
                                   double tbar) {
  check_pair(p, q, true);
  auto w = [&](size_t j) {
    return std::exp(-t * p.gap(j)) - std::exp(-tbar * q.gap(j));
  };
  return bound_with_table(p, x, w);
}

double comparison_bound_continuous_transitive(const SpectralDecomposition& p,
                                              const SpectralDecomposition& q, double t,
                                              double tbar) {
  check_pair(p, q, false);
  auto w = [&](size_t j) {
    return std::exp(-t * p.gap(j)) - std::exp(-tbar * q.gap(j));
  };
  return bound_transitive(p, w);
}

namespace {
constexpr double kGapZero = 1e-14;
}

double continuity_sum(const SpectralDecomposition& spec, size_t x, double t, double w,
                      double c) {
  if (!spec.has_table())
    throw validation_error("continuity_sum: eigenfunction table required");
  const size_t n = spec.states();
  double best = 0;
  for (size_t y = 0; y < n; ++y) {
    double acc = 0;
    for (size_t j = 0; j < spec.terms(); ++j) {
      double gap = spec.gap(j);
      if (gap <= kGapZero) continue;
      acc += std::abs(spec.function(j)[x] * spec.function(j)[y]) * gap *
             std::exp(-(t + c * w) * gap);
    }
    best = std::max(best, acc);
  }
  return w * best;
}

double continuity_sum_transitive(const SpectralDecomposition& spec, double t, double w,
                                 double c) {
  double acc = 0;
  for (size_t j = 0; j < spec.terms(); ++j) {
    double gap = spec.gap(j);
    if (gap <= kGapZero) continue;
    acc += spec.multiplicity(j) * gap * std::exp(-(t + c * w) * gap);
  }
  return w * acc;
}

std::vector<int> perm_unrank(int n, size_t rank) {
  std::vector<size_t> fact(n, 1);
  for (int i = 1; i < n; ++i) fact[i] = fact[i - 1] * i;
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) {
    size_t f = fact[n - 1 - i];
    size_t idx = rank / f;
    rank %= f;
    perm[i] = pool[idx];
    pool.erase(pool.begin() + static_cast<long>(idx));
  }
  return perm;
}

size_t perm_rank(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<size_t> fact(n, 1);
  for (int i = 1; i < n; ++i) fact[i] = fact[i - 1] * i;
  size_t rank = 0;
  for (int i = 0; i < n; ++i) {
    size_t smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller;
    rank += smaller * fact[n - 1 - i];
  }
  return rank;
}

namespace {

size_t checked_sn_states(int n) {
  if (n < 1 || n > kShuffleKernelCap)
    throw size_error("shuffle kernel: n out of range (1..6)");
  size_t states = 1;
  for (int i = 2; i <= n; ++i) states *= i;
  return states;
}

}  // namespace

ChainKernel riffle_kernel(const PileSizeLaw& f) {
  const int n = f.n();
  const size_t states = checked_sn_states(n);
  std::vector<BigRat> mat(states * states, BigRat(0));
  // Selection of the card set A (bitmask over card labels) with probability
  // f(|A|)/binom(n,|A|); selected cards move to the top preserving order.
  std::vector<BigRat> subset_prob(n + 1);
  for (int k = 1; k <= n; ++k)
    subset_prob[k] = f.mass(k) / BigRat(binomial(n, k));
  for (size_t r = 0; r < states; ++r) {
    auto deck = perm_unrank(n, r);  // position -> card
    std::vector<int> moved(n);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      int k = __builtin_popcount(mask);
      if (subset_prob[k] == 0) continue;
      int top = 0, bottom = k;
      for (int pos = 0; pos < n; ++pos) {
        int card = deck[pos];
        if (mask & (1u << card))
          moved[top++] = card;
        else
          moved[bottom++] = card;
      }
      mat[r * states + perm_rank(moved)] += subset_prob[k];
    }
  }
  std::vector<BigRat> pi(states, make_rat(1, static_cast<long>(states)));
  return ChainKernel::exact(std::move(mat), std::move(pi));
}

ChainKernel k_to_top_kernel(int n, int k) {
  if (k < 1 || k > n) throw validation_error("k_to_top_kernel: need 1 <= k <= n");
  return riffle_kernel(PileSizeLaw::delta(n, k));
}

ChainKernel random_transpositions_kernel(int n) {
  const size_t states = checked_sn_states(n);
  std::vector<BigRat> mat(states * states, BigRat(0));
  const BigRat hold = make_rat(1, n);                              // labels equal
  const BigRat swap2 = make_rat(2, static_cast<long>(n) * n);      // ordered pair either way
  for (size_t r = 0; r < states; ++r) {
    auto deck = perm_unrank(n, r);
    mat[r * states + r] += hold;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        auto next = deck;
        std::swap(next[i], next[j]);
        mat[r * states + perm_rank(next)] += swap2;
      }
  }
  std::vector<BigRat> pi(states, make_rat(1, static_cast<long>(states)));
  return ChainKernel::exact(std::move(mat), std::move(pi));
}

SpectralDecomposition jacobi_spectrum(const ChainKernel& k) {
  if (!k.reversible())
    throw validation_error("jacobi_spectrum: kernel must be reversible");
  const size_t n = k.size();
  const auto& pi = k.stationary_d();
  std::vector<double> a(n * n);
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      a[x * n + y] = std::sqrt(pi[x] / pi[y]) * k.at_d(x, y);
  // Symmetrize exactly to keep the rotation loop clean under roundoff.
  for (size_t x = 0; x < n; ++x)
    for (size_t y = x + 1; y < n; ++y) {
      double s = 0.5 * (a[x * n + y] + a[y * n + x]);
      a[x * n + y] = a[y * n + x] = s;
    }
  std::vector<double> v(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-26) break;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        double theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double cos_r = 1.0 / std::sqrt(t * t + 1.0);
        double sin_r = t * cos_r;
        for (size_t i = 0; i < n; ++i) {
          double aip = a[i * n + p], aiq = a[i * n + q];
          a[i * n + p] = cos_r * aip - sin_r * aiq;
          a[i * n + q] = sin_r * aip + cos_r * aiq;
        }
        for (size_t i = 0; i < n; ++i) {
          double api = a[p * n + i], aqi = a[q * n + i];
          a[p * n + i] = cos_r * api - sin_r * aqi;
          a[q * n + i] = sin_r * api + cos_r * aqi;
        }
        for (size_t i = 0; i < n; ++i) {
          double vip = v[i * n + p], viq = v[i * n + q];
          v[i * n + p] = cos_r * vip - sin_r * viq;
          v[i * n + q] = sin_r * vip + cos_r * viq;
        }
      }
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return a[i * n + i] > a[j * n + j]; });
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> functions;
  for (size_t j : order) {
    eigenvalues.push_back(std::clamp(a[j * n + j], -1.0, 1.0));
    std::vector<double> f(n);
    for (size_t x = 0; x < n; ++x) f[x] = v[x * n + j] / std::sqrt(pi[x]);
    functions.push_back(std::move(f));
  }
  return SpectralDecomposition::with_table(std::move(eigenvalues), std::move(functions),
                                           std::vector<double>(pi.begin(), pi.end()));
}

}  // namespace sepmix::chain
