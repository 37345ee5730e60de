#include <sepmix/transpositions.hpp>

#include <sepmix/numeric.hpp>
#include <sepmix/parallel.hpp>
#include <sepmix/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sepmix::rt {

namespace {

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

HookSpectrum hook_spectrum(int n) {
  if (n < 2) throw validation_error("hook_spectrum: n must be >= 2");
  HookSpectrum spec;
  spec.n = n;
  spec.entries.reserve(n);
  for (int j = 0; j < n; ++j) {
    HookEntry e;
    e.j = j;
    e.eigenvalue = 1.0 - 2.0 * j / n;
    e.sign = (j % 2 == 0) ? 1 : -1;
    e.log_multiplicity = log_binom(n - 1, j);
    spec.entries.push_back(e);
  }
  return spec;
}

BigRat ncycle_ratio_exact(int n, long m) {
  if (n < 2) throw validation_error("ncycle_ratio_exact: n must be >= 2");
  if (n > kExactNCycleCap) throw size_error("ncycle_ratio_exact: n exceeds cap");
  if (m < 0) throw validation_error("ncycle_ratio_exact: m must be >= 0");
  BigRat total = 0;
  for (int j = 0; j < n; ++j) {
    BigRat term = BigRat(binomial(n - 1, j)) *
                  rat_pow(make_rat(n - 2L * j, n), static_cast<unsigned long>(m));
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

ConditionedValue ncycle_ratio(int n, long m) {
  if (n < 2) throw validation_error("ncycle_ratio: n must be >= 2");
  if (m < 0) throw validation_error("ncycle_ratio: m must be >= 0");
  std::vector<double> logs;
  std::vector<int> signs;
  logs.reserve(n);
  signs.reserve(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double base = 1.0 - 2.0 * static_cast<double>(j) / n;
    if (2 * j == n && m >= 1) continue;  // eigenvalue 0, gone after one step
    double log_mag = log_binom(n - 1, j);
    if (m >= 1) log_mag += static_cast<double>(m) * std::log(std::abs(base));
    int sign = (j % 2 == 0) ? 1 : -1;
    if (base < 0 && (m % 2 != 0)) sign = -sign;
    logs.push_back(log_mag);
    signs.push_back(sign);
    max_log = std::max(max_log, log_mag);
  }
  ConditionedValue out;
  if (max_log > 700) {
    // Terms overflow doubles (m far below the cutoff scale); the alternating
    // sum cannot be evaluated in this mode.
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.condition = std::numeric_limits<double>::infinity();
    out.reliable = false;
    return out;
  }
  std::vector<double> terms(logs.size()), magnitudes(logs.size());
  for (size_t i = 0; i < logs.size(); ++i) {
    magnitudes[i] = std::exp(logs[i]);
    terms[i] = signs[i] * magnitudes[i];
  }
  double value = pairwise_sum(terms);
  double abs_sum = pairwise_sum(magnitudes);
  out.value = value;
  out.condition = value == 0 ? std::numeric_limits<double>::infinity()
                             : abs_sum / std::abs(value);
  out.reliable = out.condition <= 1e12;
  return out;
}

long m_time(int n, double c) {
  double m = std::floor(0.5 * n * (std::log(static_cast<double>(n)) + c));
  return m < 0 ? 0 : static_cast<long>(m);
}

double separation_lower_bound(int n, double c) {
  return 1.0 - ncycle_ratio(n, m_time(n, c)).value;
}

SmallSeparation exact_separation_small(int n, long m) {
  if (n < 2) throw validation_error("exact_separation_small: n must be >= 2");
  if (n > kSmallSeparationCap)
    throw size_error("exact_separation_small: n exceeds cap (6)");
  if (m < 0) throw validation_error("exact_separation_small: m must be >= 0");
  comb::CharacterTable table(n);
  const auto& shapes = table.partitions();
  std::vector<BigRat> eig;  // p_lambda = 1/n + (2/n^2) diag(lambda)
  eig.reserve(shapes.size());
  for (const auto& la : shapes)
    eig.push_back(make_rat(n + 2 * comb::diag_content(la), static_cast<long>(n) * n));
  SmallSeparation out;
  out.ratios.reserve(shapes.size());
  for (size_t c = 0; c < shapes.size(); ++c) {
    BigRat ratio = 0;
    for (size_t s = 0; s < shapes.size(); ++s) {
      long chi = static_cast<long>(table.value_at(static_cast<int>(s), static_cast<int>(c)));
      if (chi == 0) continue;
      ratio += BigRat(comb::dimension(shapes[s]) * chi) *
               rat_pow(eig[s], static_cast<unsigned long>(m));
    }
    out.ratios.push_back({shapes[c], ratio});
  }
  size_t argmin = 0;
  for (size_t c = 1; c < out.ratios.size(); ++c)
    if (out.ratios[c].ratio < out.ratios[argmin].ratio) argmin = c;
  out.argmin_class = out.ratios[argmin].cls;
  out.separation = BigRat(1) - out.ratios[argmin].ratio;
  return out;
}

namespace {

// log of sum_lambda f_lambda^2 e^{-t_n(c)(1 - p_lambda)} with
// t_n(c) = (n/2)(ln n + c); the exponential factor is
// (1/sqrt(e^c n))^{n-1-(2/n)diag(lambda)}.
double log_weighted_exp_sum(int n, double c, bool include_trivial) {
  if (n < 2) throw validation_error("spectral sum: n must be >= 2");
  if (n > kSpectralSumCap) throw size_error("spectral sum: n exceeds cap (60)");
  if (std::log(static_cast<double>(n)) + c <= 0)
    throw validation_error("spectral sum: time ln n + c must be positive");
  auto partitions = comb::enumerate_partitions(n);
  std::vector<double> logs;
  logs.reserve(partitions.size());
  double half_log = 0.5 * (c + std::log(static_cast<double>(n)));
  for (const auto& la : partitions) {
    bool trivial = la.length() == 1;
    if (trivial && !include_trivial) continue;
    double exponent =
        n - 1.0 - 2.0 * static_cast<double>(comb::diag_content(la)) / n;
    logs.push_back(2 * comb::log_dimension(la) - exponent * half_log);
  }
  double peak = *std::max_element(logs.begin(), logs.end());
  std::vector<double> scaled;
  scaled.reserve(logs.size());
  for (double lg : logs) scaled.push_back(std::exp(lg - peak));
  return peak + std::log(pairwise_sum(scaled));
}

}  // namespace

double spectral_weight_sum(int n, double c, bool include_trivial) {
  double ln_n = std::log(static_cast<double>(n));
  double prefactor = std::log(n * (ln_n + c)) - log_factorial(n);
  return std::exp(prefactor + log_weighted_exp_sum(n, c, include_trivial));
}

BiasedParams::BiasedParams(int n_in, double a_in, double b_in) : n(n_in), a(a_in), b(b_in) {
  if (n < 2) throw validation_error("BiasedParams: n must be >= 2");
  if (!(b > 0) || b > a) throw validation_error("BiasedParams: need 0 < b <= a");
  if (std::abs(a * (n - 1) + b - n) > 1e-12 * n)
    throw validation_error("BiasedParams: a(n-1) + b must equal n");
}

BiasedParams BiasedParams::from_epsilon(int n, double eps) {
  return BiasedParams(n, 1.0 + eps / (n - 1), 1.0 - eps);
}

double biased_eigenvalue(const BiasedParams& params, const comb::Partition& la,
                         const comb::Partition& mu) {
  const int n = params.n;
  if (la.n() != n || mu.n() != n - 1)
    throw validation_error("biased_eigenvalue: sizes must be n and n-1");
  auto corners = comb::corners_removed(la);
  if (std::find(corners.begin(), corners.end(), mu) == corners.end())
    throw validation_error("biased_eigenvalue: mu is not a corner removal of lambda");
  double a = params.a, b = params.b;
  double n2 = static_cast<double>(n) * n;
  return (a * a * (n - 1) + b * b) / n2 +
         2 * (a * a - a * b) / n2 * static_cast<double>(comb::diag_content(mu)) +
         2 * a * b / n2 * static_cast<double>(comb::diag_content(la));
}

BiasedBound biased_comparison_bound(int n, double c, double eps) {
  if (eps < 0) throw validation_error("biased_comparison_bound: eps must be >= 0");
  BiasedBound out;
  if (eps == 0) return out;
  BiasedParams params = BiasedParams::from_epsilon(n, eps);
  double ln_n = std::log(static_cast<double>(n));
  double t = 0.5 * n * (ln_n + c);
  double n2 = static_cast<double>(n) * n;
  auto partitions = comb::enumerate_partitions(n);
  double delta_max = 0;
  // tbar(1-q) - t(1-p) = (t/b) eps [ (p-q)/eps + (1-p) ], expanded in eps so
  // that nothing large cancels; the direct subtraction drowns in roundoff
  // once eps is below the machine epsilon of t(1-p).
  for (const auto& la : partitions) {
    double diag_la = static_cast<double>(comb::diag_content(la));
    double p = 1.0 / n + 2.0 * diag_la / n2;
    for (const auto& mu : comb::corners_removed(la)) {
      double diag_mu = static_cast<double>(comb::diag_content(mu));
      double pq_over_eps = (-eps * n + 2.0 * diag_la * (n - 2.0 + eps) -
                            2.0 * diag_mu * n * (1.0 + eps / (n - 1.0))) /
                           (n2 * (n - 1.0));
      double delta = std::abs(t / params.b * eps * (pq_over_eps + (1.0 - p)));
      delta_max = std::max(delta_max, delta);
    }
  }
  out.delta_max = delta_max;
  out.weight_sum = std::exp(log_weighted_exp_sum(n, c, false));
  out.bound = delta_max * std::exp(delta_max) * out.weight_sum;
  return out;
}

BiasedBound biased_comparison_bound(int n, double c) {
  return biased_comparison_bound(n, c, std::exp(-log_factorial(n)));
}

double central_perturbation_bound(int n, double c, double eps) {
  if (eps < 0) throw validation_error("central_perturbation_bound: eps must be >= 0");
  if (eps == 0) return 0;
  double t = 0.5 * n * (std::log(static_cast<double>(n)) + c);
  return 3.0 * t * eps * std::exp(log_weighted_exp_sum(n, c, true));
}

TouchedLabelsResult simulate_touched_labels(int n, long m, uint64_t trials,
                                            uint64_t seed, int workers) {
  if (n < 1) throw validation_error("simulate_touched_labels: n must be >= 1");
  if (m < 0 || trials < 1)
    throw validation_error("simulate_touched_labels: need m >= 0, trials >= 1");
  struct WorkerState {
    std::vector<uint64_t> stamp;
    std::vector<uint64_t> histogram;
    uint64_t epoch = 0;
  };
  TouchedLabelsResult out;
  out.trials = trials;
  out.histogram.assign(n + 1, 0);
  run_trials(
      trials, workers,
      [&] {
        WorkerState st;
        st.stamp.assign(n, 0);
        st.histogram.assign(n + 1, 0);
        return st;
      },
      [&](WorkerState& st, uint64_t trial) {
        CounterRng rng(seed, trial);
        ++st.epoch;
        int untouched = n;
        for (long s = 0; s < 2 * m; ++s) {
          auto label = rng.next_below(static_cast<uint64_t>(n));
          if (st.stamp[label] != st.epoch) {
            st.stamp[label] = st.epoch;
            --untouched;
          }
        }
        ++st.histogram[untouched];
      },
      [&](WorkerState& st) {
        for (int u = 0; u <= n; ++u) out.histogram[u] += st.histogram[u];
      });
  uint64_t ge2 = 0;
  double mean = 0;
  for (int u = 0; u <= n; ++u) {
    if (u >= 2) ge2 += out.histogram[u];
    mean += static_cast<double>(u) * static_cast<double>(out.histogram[u]);
  }
  out.p_ge2 = static_cast<double>(ge2) / static_cast<double>(trials);
  out.se_ge2 = std::sqrt(out.p_ge2 * (1 - out.p_ge2) / static_cast<double>(trials));
  out.mean_u = mean / static_cast<double>(trials);
  return out;
}

}  // namespace sepmix::rt
