#include <sepmix/riffle.hpp>

#include <sepmix/parallel.hpp>
#include <sepmix/profiles.hpp>
#include <sepmix/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sepmix::riffle {

BigRat q_lambda(const PileSizeLaw& f, const comb::Partition& la) {
  if (la.n() != f.n()) throw validation_error("q_lambda: |lambda| != n");
  const int n = f.n();
  auto mult = la.multiplicities();  // j -> m_j
  std::vector<std::pair<int, int>> sizes(mult.begin(), mult.end());
  std::vector<int> r(sizes.size(), 0);
  BigRat total = 0;
  // Odometer over sub-vectors 0 <= r_j <= m_j, skipping the all-zero one.
  for (;;) {
    size_t pos = 0;
    while (pos < r.size() && r[pos] == sizes[pos].second) {
      r[pos] = 0;
      ++pos;
    }
    if (pos == r.size()) break;
    ++r[pos];
    long chosen = 0;
    BigInt combos = 1;
    for (size_t i = 0; i < r.size(); ++i) {
      chosen += static_cast<long>(sizes[i].first) * r[i];
      combos *= binomial(sizes[i].second, r[i]);
    }
    total += BigRat(combos) / BigRat(binomial(n, chosen)) * f.mass(static_cast<int>(chosen));
  }
  return total;
}

BigRat exact_separation(const PileSizeLaw& f, unsigned t) {
  BigRat sum = 0;
  for (const auto& la : comb::enumerate_partitions(f.n()))
    sum += BigRat(comb::mobius_type_weight(la)) * rat_pow(q_lambda(f, la), t);
  return BigRat(1) - sum;
}

FloatValue exact_separation_f(const PileSizeLaw& f, unsigned t) {
  double sum = 0;
  for (const auto& la : comb::enumerate_partitions(f.n()))
    sum += comb::mobius_type_weight(la).get_d() *
           std::pow(to_double(q_lambda(f, la)), static_cast<double>(t));
  FloatValue out;
  out.value = 1.0 - sum;
  if (out.value < 0.0 || out.value > 1.0) {
    out.clamped = true;
    out.value = std::clamp(out.value, 0.0, 1.0);
  }
  return out;
}

BigRat q2(const PileSizeLaw& f) {
  const int n = f.n();
  BigRat total = 0;
  for (int k = 1; k <= n; ++k)
    total += f.mass(k) * BigRat(binomial(k, 2) + binomial(n - k, 2)) / BigRat(binomial(n, 2));
  return total;
}

BigRat q3(const PileSizeLaw& f) {
  const int n = f.n();
  BigRat total = 0;
  for (int k = 1; k <= n; ++k)
    total += f.mass(k) * BigRat(binomial(k, 3) + binomial(n - k, 3)) / BigRat(binomial(n, 3));
  return total;
}

long dense_time(int n, double q2_value, double c) {
  if (n < 2) throw validation_error("dense_time: n must be >= 2");
  if (q2_value >= 1.0)
    throw validation_error("dense_time: degenerate law with q2 >= 1");
  if (q2_value <= 0.0) throw validation_error("dense_time: q2 must be positive");
  return std::lround((2 * std::log(n) + c) / (-std::log(q2_value)));
}

long sparse_time(int n, int k, double c) {
  if (n < 2 || k < 1) throw validation_error("sparse_time: need n >= 2, k >= 1");
  double t = std::floor(static_cast<double>(n) / k * (std::log(n) + c));
  return t < 0 ? 0 : static_cast<long>(t);
}

namespace {

std::pair<double, double> uniform_driven_constants() {
  using std::numbers::pi;
  double catalan = profiles::catalan_constant();
  double v = 4 + pi * std::log(2.0) - 4 * catalan - pi * pi / 4;
  return {4 / (4 - pi), 4 * std::sqrt(v) / std::pow(4 - pi, 1.5)};
}

}  // namespace

long uniform_driven_time(int n, double c) {
  if (n < 2) throw validation_error("uniform_driven_time: n must be >= 2");
  auto [a, b] = uniform_driven_constants();
  double t = std::floor(a * std::log(n) + b * c * std::sqrt(std::log(n)));
  return t < 0 ? 0 : static_cast<long>(t);
}

double dense_effective_c(int n, double q2_value, long t) {
  if (q2_value <= 0 || q2_value >= 1)
    throw validation_error("dense_effective_c: q2 must be in (0,1)");
  return -static_cast<double>(t) * std::log(q2_value) - 2 * std::log(n);
}

double sparse_effective_c(int n, int k, long t) {
  return static_cast<double>(t) * k / n - std::log(n);
}

double uniform_driven_effective_c(int n, long t) {
  auto [a, b] = uniform_driven_constants();
  double ln_n = std::log(n);
  return (static_cast<double>(t) - a * ln_n) / (b * std::sqrt(ln_n));
}

double untouched_factorial_moment(int n, int k, long t, int r) {
  if (r < 0 || r > n) throw validation_error("untouched_factorial_moment: bad r");
  if (k < 1 || k > n) throw validation_error("untouched_factorial_moment: bad k");
  if (r == 0) return 1.0;
  if (n - r < k) return 0.0;  // some of the r cards must be touched
  double log_falling = 0;
  for (int i = 0; i < r; ++i) log_falling += std::log(static_cast<double>(n - i));
  auto lc = [](int a, int b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  };
  double log_ratio = lc(n - r, k) - lc(n, k);
  return std::exp(log_falling + static_cast<double>(t) * log_ratio);
}

double variance_diagnostic(const PileSizeLaw& f) {
  const int n = f.n();
  double mean = 0, second = 0;
  for (int k = 1; k <= n; ++k) {
    double y = static_cast<double>(k) / n;
    double m = f.mass_d(k);
    mean += m * y;
    second += m * y * y;
  }
  return (second - mean * mean) * std::log(static_cast<double>(n));
}

namespace {

// Selection machinery shared by the simulators. Selections are a pure
// function of (seed, trial), so trials can be re-run independently.
struct TrialBuffers {
  std::vector<int> pool;                       // Fisher-Yates index buffer
  std::vector<uint64_t> hash;                  // per-card history hash
  std::vector<std::vector<uint32_t>> history;  // per-card selected steps
  std::vector<int> order;                      // scratch for hash grouping
};

int draw_pile_size(const PileSizeLaw& f, CounterRng& rng) {
  double u = rng.next_unit();
  const auto& cdf = f.cdf();
  return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
}

// Runs one trial and reports whether some pair of rows is equal at the
// horizon. Hash-equal groups are confirmed against the stored histories, so
// hash accidents cannot produce a false collision.
bool trial_has_collision(const PileSizeLaw& f, long t, uint64_t seed, uint64_t trial,
                         TrialBuffers& buf) {
  const int n = f.n();
  if (n == 1) return false;
  CounterRng rng(seed, trial);
  buf.pool.resize(n);
  std::iota(buf.pool.begin(), buf.pool.end(), 0);
  buf.hash.assign(n, 0);
  buf.history.resize(n);
  for (auto& h : buf.history) h.clear();
  for (long s = 1; s <= t; ++s) {
    int k = draw_pile_size(f, rng);
    uint64_t step_const = CounterRng::mix(0x5bf0315226aa4e71ULL + static_cast<uint64_t>(s));
    for (int i = 0; i < k; ++i) {
      auto j = i + static_cast<int>(rng.next_below(static_cast<uint64_t>(n - i)));
      std::swap(buf.pool[i], buf.pool[j]);
      int card = buf.pool[i];
      buf.hash[card] += step_const;
      buf.history[card].push_back(static_cast<uint32_t>(s));
    }
  }
  buf.order.resize(n);
  std::iota(buf.order.begin(), buf.order.end(), 0);
  std::sort(buf.order.begin(), buf.order.end(),
            [&](int a, int b) { return buf.hash[a] < buf.hash[b]; });
  for (int lo = 0; lo < n;) {
    int hi = lo + 1;
    while (hi < n && buf.hash[buf.order[hi]] == buf.hash[buf.order[lo]]) ++hi;
    if (hi - lo >= 2) {
      for (int a = lo; a < hi; ++a)
        for (int b = a + 1; b < hi; ++b)
          if (buf.history[buf.order[a]] == buf.history[buf.order[b]]) return true;
    }
    lo = hi;
  }
  return false;
}

// Exact stopping time of one trial via partition refinement: groups of cards
// with identical histories are split by each selection, and T is the first
// step at which every group is a singleton.
uint32_t trial_stopping_time(const PileSizeLaw& f, long t, uint64_t seed, uint64_t trial) {
  const int n = f.n();
  if (n == 1) return 0;  // a single row is vacuously distinct
  CounterRng rng(seed, trial);
  std::vector<int> pool(n), group(n, 0), group_size{n};
  std::iota(pool.begin(), pool.end(), 0);
  int non_singletons = 1;
  std::vector<int> touched_groups, bucket_of;  // per-step scratch
  std::vector<std::vector<int>> buckets;
  bucket_of.assign(1, -1);
  for (long s = 1; s <= t; ++s) {
    int k = draw_pile_size(f, rng);
    touched_groups.clear();
    for (int i = 0; i < k; ++i) {
      auto j = i + static_cast<int>(rng.next_below(static_cast<uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
      int card = pool[i];
      int g = group[card];
      if (group_size[g] == 1) continue;
      if (bucket_of[g] < 0) {
        bucket_of[g] = static_cast<int>(buckets.size());
        buckets.emplace_back();
        touched_groups.push_back(g);
      }
      buckets[bucket_of[g]].push_back(card);
    }
    for (int g : touched_groups) {
      auto& members = buckets[bucket_of[g]];
      int selected = static_cast<int>(members.size());
      if (selected < group_size[g]) {
        // Proper split: selected cards form a new group.
        int fresh = static_cast<int>(group_size.size());
        group_size.push_back(selected);
        bucket_of.push_back(-1);
        for (int card : members) group[card] = fresh;
        group_size[g] -= selected;
        if (group_size[g] > 1) ++non_singletons;
        if (selected == 1) --non_singletons;
      }
      members.clear();
      bucket_of[g] = -1;
    }
    buckets.clear();
    if (non_singletons == 0) return static_cast<uint32_t>(s);
  }
  return kBeyondHorizon;
}

}  // namespace

McEstimate simulate_sst(const PileSizeLaw& f, long t, uint64_t trials, uint64_t seed,
                        int workers) {
  if (trials < 1) throw validation_error("simulate_sst: trials must be >= 1");
  if (t < 0) throw validation_error("simulate_sst: t must be >= 0");
  uint64_t successes = 0;
  run_trials(
      trials, workers,
      [] { return std::pair<TrialBuffers, uint64_t>{{}, 0}; },
      [&](auto& state, uint64_t trial) {
        if (trial_has_collision(f, t, seed, trial, state.first)) ++state.second;
      },
      [&](auto& state) { successes += state.second; });
  McEstimate out;
  out.successes = successes;
  out.trials = trials;
  out.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  out.std_error =
      std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

std::vector<uint32_t> simulate_sst_times(const PileSizeLaw& f, long t, uint64_t trials,
                                         uint64_t seed, int workers) {
  if (trials < 1) throw validation_error("simulate_sst_times: trials must be >= 1");
  std::vector<uint32_t> times(trials, kBeyondHorizon);
  run_trials(
      trials, workers, [] { return 0; },
      [&](int&, uint64_t trial) { times[trial] = trial_stopping_time(f, t, seed, trial); },
      [](int&) {});
  return times;
}

RowHistorySample sample_row_history(const PileSizeLaw& f, long t, uint64_t seed,
                                    uint64_t trial) {
  const int n = f.n();
  RowHistorySample out;
  out.n = n;
  out.horizon = t;
  out.rows.assign(n, std::vector<uint8_t>(t, 0));
  CounterRng rng(seed, trial);
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (long s = 1; s <= t; ++s) {
    int k = draw_pile_size(f, rng);
    for (int i = 0; i < k; ++i) {
      auto j = i + static_cast<int>(rng.next_below(static_cast<uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
      out.rows[pool[i]][s - 1] = 1;
    }
  }
  out.all_distinct_time = trial_stopping_time(f, t, seed, trial);
  return out;
}

}  // namespace sepmix::riffle
