#include <sepmix/product_walks.hpp>

#include <sepmix/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sepmix::walks {

namespace {

double log_binom(long long n, long long k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

double safe_exp(double x) { return x < -745.0 ? 0.0 : std::exp(x); }

// Sum of exp(logs[i]) with peak scaling and pairwise accumulation.
double exp_sum(std::vector<double>& logs) {
  if (logs.empty()) return 0.0;
  double peak = *std::max_element(logs.begin(), logs.end());
  if (peak == -std::numeric_limits<double>::infinity()) return 0.0;
  for (double& lg : logs) lg = safe_exp(lg - peak);
  return std::exp(peak) * pairwise_sum(logs);
}

}  // namespace

RateVector::RateVector(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw validation_error("RateVector: empty");
  for (double r : rates_)
    if (!(r > 0)) throw validation_error("RateVector: rates must be positive");
  if (std::abs(pairwise_sum(rates_) - 1.0) > 1e-12)
    throw validation_error("RateVector: rates must sum to 1");
  alpha_min_ = *std::min_element(rates_.begin(), rates_.end());
  gamma_ = 0;
  for (double r : rates_)
    if (r <= alpha_min_ * (1 + 1e-12)) ++gamma_;
}

RateVector RateVector::uniform(int n) {
  if (n < 1) throw validation_error("RateVector: n must be >= 1");
  return RateVector(std::vector<double>(n, 1.0 / n));
}

RateVector RateVector::first_coordinate_perturbed(int n, double b) {
  if (n < 2) throw validation_error("RateVector: n must be >= 2");
  double a_n = 1.0 / n - b / (n - 1);
  if (!(b > 0) || b >= 1 || a_n <= 0)
    throw validation_error("RateVector: need 0 < b < 1 with 1/n > b/(n-1)");
  std::vector<double> rates(n, a_n);
  rates[0] = 1.0 / n + b;
  return RateVector(std::move(rates));
}

RateVector RateVector::half_split(int n, double b) {
  if (n < 2 || n % 2 != 0) throw validation_error("RateVector: n must be even");
  if (!(b > 0) || b >= 0.5) throw validation_error("RateVector: need 0 < b < 1/2");
  std::vector<double> rates(n);
  for (int k = 0; k < n / 2; ++k) rates[k] = (1 + 2 * b) / n;
  for (int k = n / 2; k < n; ++k) rates[k] = (1 - 2 * b) / n;
  return RateVector(std::move(rates));
}

double hypercube_separation(const RateVector& rates, double t) {
  if (t < 0) throw validation_error("hypercube_separation: t must be >= 0");
  if (rates.n() <= 1000) {
    double prod = 1.0;
    for (double a : rates.rates()) prod *= -std::expm1(-a * t);
    return 1.0 - prod;
  }
  double log_prod = 0.0;
  for (double a : rates.rates()) {
    double factor = -std::expm1(-a * t);
    if (factor <= 0) return 1.0;
    log_prod += std::log(factor);
  }
  return -std::expm1(log_prod);
}

double zmn_separation_uniform(int m, long long n, double t) {
  if (m < 2) throw validation_error("zmn_separation_uniform: m must be >= 2");
  if (n < 1 || t < 0)
    throw validation_error("zmn_separation_uniform: need n >= 1, t >= 0");
  double factor = -std::expm1(-t / static_cast<double>(n));
  if (factor <= 0) return 1.0;
  if (n <= 1000) return 1.0 - std::pow(factor, static_cast<double>(n));
  return -std::expm1(static_cast<double>(n) * std::log(factor));
}

double lazy_time_map(double t, double alpha) {
  if (!(alpha > 0) || alpha > 1)
    throw validation_error("lazy_time_map: alpha must be in (0, 1]");
  return t / alpha;
}

PerturbedSums perturbed_comparison_sums(int m, int n, double b, double c,
                                        bool with_exact_s1) {
  if (m < 2) throw validation_error("perturbed_comparison_sums: m must be >= 2");
  if (n < 3) throw validation_error("perturbed_comparison_sums: n too small");
  double a_n = 1.0 / n - b / (n - 1.0);
  if (!(b > 0) || b >= 1 || a_n <= 0)
    throw validation_error("perturbed_comparison_sums: need 0 < b < 1 with a_n > 0");
  double u = (m - 1) * std::exp(-c);
  double log_a = (n - 1.0) * std::log1p(u / (n - 1.0));
  double log_b = (n - 1.0) * std::log1p(u / n);
  double rho = (1.0 / n + b) / a_n;
  PerturbedSums out;
  out.s0 = std::exp(log_b) * std::expm1(log_a - log_b);
  out.s1 = (m - 1) * safe_exp(-rho * (std::log(n - 1.0) + c) + log_a) +
           (m - 1) * safe_exp(-c - std::log(static_cast<double>(n)) + log_b);
  if (with_exact_s1) {
    double lp = std::log(n - 1.0) + c;  // slow-coordinate time scale
    double l = std::log(static_cast<double>(n)) + c;
    std::vector<double> logs;
    logs.reserve(n);
    for (int j = 0; j <= n - 1; ++j) {
      double x = -(rho + j) * lp;
      double y = -(j + 1.0) * l;
      double hi = std::max(x, y), lo = std::min(x, y);
      double diff_log = hi + std::log1p(-safe_exp(lo - hi));
      if (!std::isfinite(diff_log)) continue;
      logs.push_back(log_binom(n - 1, j) + (j + 1.0) * std::log(m - 1.0) + diff_log);
    }
    out.s1_exact = exp_sum(logs);
  }
  return out;
}

double halfsplit_comparison_bound(int n, double b, double b2, double c) {
  if (n < 2 || n % 2 != 0) throw validation_error("halfsplit: n must be even");
  if (!(b > 0) || b >= 0.5 || !(b2 > 0) || b2 >= 0.5)
    throw validation_error("halfsplit: need b, b2 in (0, 1/2)");
  double big_n = n / 2.0;
  double log_l = std::log(big_n) + c;
  double r = (1 + 2 * b) / (1 - 2 * b);
  double r2 = (1 + 2 * b2) / (1 - 2 * b2);
  double common = std::exp(big_n * std::log1p(safe_exp(-log_l)));
  return common * (std::expm1(big_n * std::log1p(safe_exp(-r * log_l))) +
                   std::expm1(big_n * std::log1p(safe_exp(-r2 * log_l))));
}

ContinuityParts hypercube_continuity_first_coordinate(int n, double b, double c) {
  double a_n = 1.0 / n - b / (n - 1.0);
  if (!(b > 0) || b >= 1 || a_n <= 0)
    throw validation_error("continuity: need 0 < b < 1 with a_n > 0");
  double x = std::exp(-c) / (n - 1.0);
  double rho = (1.0 / n + b) / a_n;
  ContinuityParts out;
  out.bounded_part = std::exp(-c + (n - 2.0) * std::log1p(x));
  double log_x_rho = rho * std::log(x);
  out.vanishing_part =
      safe_exp(log_x_rho + std::log(rho) + (n - 1.0) * std::log1p(x)) +
      safe_exp(log_x_rho + std::log((n - 1.0) * x) + (n - 2.0) * std::log1p(x));
  out.total = out.bounded_part + out.vanishing_part;
  return out;
}

ContinuityParts hypercube_continuity_half_split(int n, double b, double c) {
  if (n < 2 || n % 2 != 0) throw validation_error("continuity: n must be even");
  if (!(b > 0) || b >= 0.5) throw validation_error("continuity: need b in (0, 1/2)");
  double big_n = n / 2.0;
  double log_l = std::log(big_n) + c;
  double r = (1 + 2 * b) / (1 - 2 * b);
  ContinuityParts out;
  out.bounded_part = std::exp(big_n * std::log1p(safe_exp(-r * log_l))) *
                     big_n * safe_exp(-log_l) *
                     std::exp((big_n - 1) * std::log1p(safe_exp(-log_l)));
  out.vanishing_part = std::exp(big_n * std::log1p(safe_exp(-log_l))) * r * big_n *
                       safe_exp(-r * log_l) *
                       std::exp((big_n - 1) * std::log1p(safe_exp(-r * log_l)));
  out.total = out.bounded_part + out.vanishing_part;
  return out;
}

BLSpectrum bl_spectrum(int n) {
  if (n < 2 || n % 2 != 0) throw validation_error("bl_spectrum: n must be even");
  BLSpectrum spec;
  spec.n = n;
  for (int j = 0; j <= n / 2; ++j) {
    spec.gap.push_back(4.0 * j * (n - j + 1.0) / (static_cast<double>(n) * n));
    spec.log_dim.push_back(log_binom(n, j) +
                           std::log((n - 2.0 * j + 1.0) / (n - j + 1.0)));
  }
  return spec;
}

BigInt bl_dimension_exact(int n, int j) {
  if (j < 0 || j > n / 2) throw validation_error("bl_dimension_exact: bad j");
  if (j == 0) return BigInt(1);
  return binomial(n, j) - binomial(n, j - 1);
}

double bl_continuity_sum(long long n, double c) {
  if (n < 2 || n % 2 != 0) throw validation_error("bl_continuity_sum: n must be even");
  double ln_n = std::log(static_cast<double>(n));
  if (ln_n + c <= 0)
    throw validation_error("bl_continuity_sum: time ln n + c must be positive");
  double t = 0.25 * static_cast<double>(n) * (ln_n + c);
  std::vector<double> logs;
  logs.reserve(n / 2);
  for (long long j = 1; j <= n / 2; ++j) {
    double lam = 4.0 * j * (n - j + 1.0) / (static_cast<double>(n) * n);
    double log_dim = log_binom(n, j) + std::log((n - 2.0 * j + 1.0) / (n - j + 1.0));
    logs.push_back(std::log(0.25 * n * lam) + log_dim - t * lam);
  }
  return exp_sum(logs);
}

double bl_dominating_bound(long long n, double A) {
  if (n < 2 || n % 2 != 0) throw validation_error("bl_dominating_bound: n must be even");
  double ln_n = std::log(static_cast<double>(n));
  std::vector<double> logs;
  logs.reserve(n / 2);
  for (long long j = 1; j <= n / 2; ++j) {
    double dj = static_cast<double>(j);
    logs.push_back(std::log(dj) + A * dj + dj * (dj - 1.0) / n * ln_n -
                   std::lgamma(dj + 1.0));
  }
  return exp_sum(logs);
}

chain::ChainKernel bl_kernel(int n) {
  if (n < 2 || n % 2 != 0) throw validation_error("bl_kernel: n must be even");
  if (n > kBLKernelCap) throw size_error("bl_kernel: n exceeds cap (200)");
  const int states = n / 2 + 1;
  std::vector<BigRat> mat(static_cast<size_t>(states) * states, BigRat(0));
  for (int x = 0; x < states; ++x) {
    BigRat down = rat_pow(make_rat(2L * x, n), 2);
    BigRat up = rat_pow(make_rat(n - 2L * x, n), 2);
    if (x > 0) mat[static_cast<size_t>(x) * states + (x - 1)] = down;
    if (x < states - 1) mat[static_cast<size_t>(x) * states + (x + 1)] = up;
    mat[static_cast<size_t>(x) * states + x] = BigRat(1) - down - up;
  }
  BigInt total = binomial(n, n / 2);
  std::vector<BigRat> pi(states);
  for (int x = 0; x < states; ++x) {
    BigInt half = binomial(n / 2, x);
    pi[x] = make_rat(half * half, total);
  }
  return chain::ChainKernel::exact(std::move(mat), std::move(pi));
}

chain::ChainKernel hypercube_kernel(const RateVector& rates) {
  const int n = rates.n();
  if (n > 12) throw size_error("hypercube_kernel: n exceeds cap (12)");
  const size_t states = size_t{1} << n;
  std::vector<double> mat(states * states, 0.0);
  for (size_t x = 0; x < states; ++x) {
    mat[x * states + x] = 0.5;
    for (int k = 0; k < n; ++k)
      mat[x * states + (x ^ (size_t{1} << k))] = rates.rates()[k] / 2;
  }
  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  return chain::ChainKernel::floating(std::move(mat), std::move(pi));
}

chain::ChainKernel zmn_kernel(int m, const RateVector& rates) {
  if (m < 2) throw validation_error("zmn_kernel: m must be >= 2");
  const int n = rates.n();
  double states_d = std::pow(static_cast<double>(m), n);
  if (states_d > 4096) throw size_error("zmn_kernel: state space too large");
  const size_t states = static_cast<size_t>(states_d + 0.5);
  std::vector<double> mat(states * states, 0.0);
  std::vector<size_t> stride(n, 1);
  for (int k = 1; k < n; ++k) stride[k] = stride[k - 1] * m;
  for (size_t x = 0; x < states; ++x) {
    mat[x * states + x] += 1.0 / m;
    for (int k = 0; k < n; ++k) {
      size_t digit = (x / stride[k]) % m;
      size_t base = x - digit * stride[k];
      for (size_t v = 0; v < static_cast<size_t>(m); ++v) {
        if (v == digit) continue;
        mat[x * states + (base + v * stride[k])] += rates.rates()[k] / m;
      }
    }
  }
  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  return chain::ChainKernel::floating(std::move(mat), std::move(pi));
}

chain::SpectralDecomposition hypercube_spectrum_table(const RateVector& rates) {
  const int n = rates.n();
  if (n > 8) throw size_error("hypercube_spectrum_table: n exceeds cap (8)");
  const size_t states = size_t{1} << n;
  std::vector<double> eig(states);
  std::vector<std::vector<double>> fn(states, std::vector<double>(states));
  for (size_t v = 0; v < states; ++v) {
    double lam = 0;
    for (int k = 0; k < n; ++k)
      if (v & (size_t{1} << k)) lam += rates.rates()[k];
    eig[v] = 1.0 - lam;
    for (size_t x = 0; x < states; ++x)
      fn[v][x] = (__builtin_popcountll(v & x) % 2 == 0) ? 1.0 : -1.0;
  }
  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  return chain::SpectralDecomposition::with_table(std::move(eig), std::move(fn),
                                                  std::move(pi));
}

chain::SpectralDecomposition hypercube_spectrum_multiplicities(const RateVector& rates) {
  const int n = rates.n();
  if (n > 20) throw size_error("hypercube_spectrum_multiplicities: n exceeds cap (20)");
  const size_t states = size_t{1} << n;
  std::vector<double> eig(states), mult(states, 1.0);
  for (size_t v = 0; v < states; ++v) {
    double lam = 0;
    for (int k = 0; k < n; ++k)
      if (v & (size_t{1} << k)) lam += rates.rates()[k];
    eig[v] = 1.0 - lam;
  }
  return chain::SpectralDecomposition::with_multiplicities(std::move(eig),
                                                           std::move(mult));
}

GumbelCheck gumbel_profile_check(const RateVector& rates, double c) {
  GumbelCheck out;
  double gamma = static_cast<double>(rates.gamma());
  out.time = (std::log(gamma) + c) / rates.alpha_min();
  if (out.time < 0) out.time = 0;
  out.value = hypercube_separation(rates, out.time);
  out.hypothesis_sup = 0;
  for (double a : rates.rates()) {
    if (a <= rates.alpha_min() * (1 + 1e-12)) continue;
    out.hypothesis_sup =
        std::max(out.hypothesis_sup, std::exp(-(a / rates.alpha_min()) * std::log(gamma)));
  }
  return out;
}

}  // namespace sepmix::walks
