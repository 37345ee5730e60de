#include <doctest.h>
#include <sepmix/chain.hpp>
#include <sepmix/riffle.hpp>
#include <sepmix/rng.hpp>

#include <cmath>
#include <numeric>

using namespace sepmix;
using namespace sepmix::riffle;
using comb::Partition;

namespace {

PileSizeLaw random_rational_law(int n, uint64_t seed) {
  CounterRng rng(seed, 3);
  std::vector<BigRat> mass(n);
  long total = 0;
  std::vector<long> raw(n);
  for (int k = 0; k < n; ++k) {
    raw[k] = 1 + static_cast<long>(rng.next_below(20));
    total += raw[k];
  }
  for (int k = 0; k < n; ++k) mass[k] = make_rat(raw[k], total);
  return PileSizeLaw::from_masses(std::move(mass));
}

}  // namespace

TEST_CASE("pile size law validation") {
  CHECK_THROWS_AS(PileSizeLaw::from_masses({make_rat(1, 2), make_rat(1, 3)}),
                  validation_error);
  CHECK_THROWS_AS(PileSizeLaw::delta(4, 5), validation_error);
  auto f = PileSizeLaw::uniform(3);
  CHECK(f.mass(2) == make_rat(1, 3));
  CHECK(f.cdf().back() == 1.0);
}

TEST_CASE("q_lambda: discrete type is certain, full-deck block is f(n)") {
  for (int n : {2, 3, 5, 7}) {
    auto f = PileSizeLaw::uniform(n);
    CHECK(q_lambda(f, Partition(std::vector<int>(n, 1))) == 1);
    CHECK(q_lambda(f, Partition({n})) == f.mass(n));
    auto g = random_rational_law(n, 11 + n);
    CHECK(q_lambda(g, Partition(std::vector<int>(n, 1))) == 1);
    CHECK(q_lambda(g, Partition({n})) == g.mass(n));
  }
  // n = 2, uniform, lambda = (2): the only term is f(2)/C(2,2) = 1/2.
  CHECK(q_lambda(PileSizeLaw::uniform(2), Partition({2})) == make_rat(1, 2));
}

TEST_CASE("exact separation: two cards give (1/2)^t, t = 0 gives 1") {
  auto f = PileSizeLaw::uniform(2);
  for (unsigned t = 0; t <= 10; ++t)
    CHECK(exact_separation(f, t) == rat_pow(make_rat(1, 2), t));
  for (int n : {2, 3, 6}) {
    CHECK(exact_separation(PileSizeLaw::uniform(n), 0) == 1);
    CHECK(exact_separation(PileSizeLaw::delta(n, 1), 0) == 1);
  }
  CHECK(exact_separation(PileSizeLaw::uniform(1), 5) == 0);
}

TEST_CASE("exact separation equals kernel brute force") {
  for (int n = 2; n <= 4; ++n) {
    std::vector<PileSizeLaw> laws{PileSizeLaw::uniform(n), PileSizeLaw::delta(n, 1),
                                  PileSizeLaw::delta(n, std::max(1, n - 1)),
                                  random_rational_law(n, 100 + n)};
    if (n >= 2) laws.push_back(PileSizeLaw::delta(n, 2));
    for (const auto& f : laws) {
      auto kernel = chain::riffle_kernel(f);
      for (unsigned t = 0; t <= 6; ++t)
        CHECK(exact_separation(f, t) ==
              chain::separation_discrete_exact(kernel, t, 0).value);
    }
  }
}

TEST_CASE("exact separation is within [0,1] and non-increasing, n = 12") {
  for (const auto& f :
       {PileSizeLaw::uniform(12), random_rational_law(12, 7), PileSizeLaw::delta(12, 5)}) {
    BigRat prev = 2;
    for (unsigned t = 0; t <= 30; ++t) {
      BigRat s = exact_separation(f, t);
      CHECK(s >= 0);
      CHECK(s <= 1);
      CHECK(s <= prev);
      prev = s;
    }
  }
}

TEST_CASE("float evaluation tracks the exact value") {
  auto f = random_rational_law(9, 21);
  for (unsigned t : {0u, 2u, 5u, 12u}) {
    auto fv = exact_separation_f(f, t);
    CHECK(fv.value ==
          doctest::Approx(to_double(exact_separation(f, t))).epsilon(1e-9));
  }
}

TEST_CASE("q2 closed forms") {
  for (int n : {2, 5, 9, 30}) {
    // Uniform law: q2 = (2n-1)/(3n).
    CHECK(q2(PileSizeLaw::uniform(n)) == make_rat(2 * n - 1, 3 * n));
    for (int k = 1; k <= n; ++k) {
      BigRat expect = BigRat(binomial(k, 2) + binomial(n - k, 2)) / BigRat(binomial(n, 2));
      CHECK(q2(PileSizeLaw::delta(n, k)) == expect);
      // Agreement plus disagreement probability is exactly 1.
      BigRat disagree = make_rat(2L * k * (n - k), static_cast<long>(n) * (n - 1));
      CHECK(expect + disagree == 1);
    }
    CHECK(q2(PileSizeLaw::delta(n, n)) == 1);
  }
}

TEST_CASE("q3 definition checks") {
  for (int n : {3, 6, 10}) {
    for (int k : {1, 2, n - 1, n}) {
      BigRat expect = BigRat(binomial(k, 3) + binomial(n - k, 3)) / BigRat(binomial(n, 3));
      CHECK(q3(PileSizeLaw::delta(n, k)) == expect);
      CHECK(q3(PileSizeLaw::delta(n, k)) <= q2(PileSizeLaw::delta(n, k)));
    }
    CHECK(q3(PileSizeLaw::uniform(n)) <= q2(PileSizeLaw::uniform(n)));
  }
}

TEST_CASE("time parametrizations") {
  // n = 2000, k = 1000: q2 = 999000/1999000, t = round(2 ln 2000 / -ln q2).
  double q = to_double(q2(PileSizeLaw::delta(2000, 1000)));
  long t = dense_time(2000, q, 0.0);
  CHECK(t == std::lround(2 * std::log(2000.0) / -std::log(q)));
  CHECK(t == 22);
  CHECK(sparse_time(3000, 1, 0.0) == 24019);
  // k = n/2 exactly: q2 slightly below 1/2, so t is near 2 log2 n.
  double qh = to_double(q2(PileSizeLaw::delta(1024, 512)));
  CHECK(qh < 0.5);
  CHECK(std::abs(dense_time(1024, qh, 0.0) - 2 * std::log2(1024.0)) <= 1.0);
  CHECK_THROWS_AS(dense_time(100, 1.0, 0.0), validation_error);
  CHECK(uniform_driven_time(10000, 0.0) == 42);
  CHECK(uniform_driven_time(10000, 1.0) == 46);
  CHECK(uniform_driven_time(10000, -1.0) == 39);
}

TEST_CASE("effective window positions invert the time maps") {
  // dense: t = (2 ln n + c_eff)/(-ln q2) exactly at the realized integer t.
  double q = to_double(q2(PileSizeLaw::delta(2000, 1000)));
  for (double c : {-1.0, 0.0, 1.0, 2.0}) {
    long t = dense_time(2000, q, c);
    double c_eff = dense_effective_c(2000, q, t);
    CHECK(std::abs(c_eff - c) <= 0.5 * -std::log(q) + 1e-9);
    CHECK(dense_time(2000, q, c_eff) == t);
  }
  for (double c : {-1.0, 0.0, 2.0}) {
    long t = sparse_time(3000, 1, c);
    CHECK(std::abs(sparse_effective_c(3000, 1, t) - c) <= 1.0 / 3000 + 1e-12);
    long tu = uniform_driven_time(10000, c);
    CHECK(std::abs(uniform_driven_effective_c(10000, tu) - c) <=
          1.0 / (1.08 * std::sqrt(std::log(10000.0))) + 1e-9);
  }
}

TEST_CASE("untouched factorial moments") {
  CHECK(untouched_factorial_moment(50, 3, 17, 0) == 1.0);
  for (int r : {1, 2, 5}) CHECK(untouched_factorial_moment(40, 40, 3, r) == 0.0);
  // n = 3000, k = 1, t = floor(n ln n), r = 1: within 0.01 of 1.
  long t = sparse_time(3000, 1, 0.0);
  CHECK(std::abs(untouched_factorial_moment(3000, 1, t, 1) - 1.0) <= 0.01);
  // Exact small case: n = 4, k = 2, t = 1, r = 2: 4*3 * C(2,2)/C(4,2) = 2.
  CHECK(untouched_factorial_moment(4, 2, 1, 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("variance diagnostic vanishes for deterministic laws") {
  CHECK(variance_diagnostic(PileSizeLaw::delta(100, 37)) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // Uniform law: Var(K/n) -> 1/12.
  CHECK(variance_diagnostic(PileSizeLaw::uniform(2000)) ==
        doctest::Approx(std::log(2000.0) / 12).epsilon(1e-2));
}

TEST_CASE("simulate_sst at t = 0 and against the exact formula") {
  auto f2 = PileSizeLaw::uniform(2);
  auto est0 = simulate_sst(f2, 0, 500, 42);
  CHECK(est0.estimate == 1.0);

  auto est = simulate_sst(f2, 3, 100000, 42);
  double exact = 1.0 / 8;
  CHECK(std::abs(est.estimate - exact) <= 3 * est.std_error + 1e-12);

  auto f6 = PileSizeLaw::uniform(6);
  auto est6 = simulate_sst(f6, 8, 100000, 7);
  double exact6 = to_double(exact_separation(f6, 8));
  CHECK(std::abs(est6.estimate - exact6) <= 4 * est6.std_error);
}

TEST_CASE("simulate_sst is worker-count invariant and seed-deterministic") {
  auto f = PileSizeLaw::uniform(5);
  auto a = simulate_sst(f, 6, 20000, 123, 1);
  auto b = simulate_sst(f, 6, 20000, 123, 4);
  CHECK(a.successes == b.successes);
  auto c = simulate_sst(f, 6, 20000, 123, 1);
  CHECK(a.successes == c.successes);
  auto d = simulate_sst(f, 6, 20000, 124, 1);
  CHECK(a.successes != d.successes);  // different seed, different draws
}

TEST_CASE("stopping-time emission agrees with the horizon estimator") {
  for (const auto& f : {PileSizeLaw::uniform(6), PileSizeLaw::delta(6, 2),
                        random_rational_law(6, 5)}) {
    long horizon = 12;
    auto times = simulate_sst_times(f, horizon, 4000, 99, 2);
    for (long t : {0L, 2L, 5L, 12L}) {
      auto est = simulate_sst(f, t, 4000, 99, 2);
      uint64_t beyond = 0;
      for (uint32_t tt : times)
        if (tt == kBeyondHorizon || tt > static_cast<uint32_t>(t)) ++beyond;
      CHECK(beyond == est.successes);
    }
  }
}

TEST_CASE("row history sample is internally consistent") {
  auto f = PileSizeLaw::uniform(5);
  for (uint64_t trial : {0ull, 3ull, 17ull}) {
    auto sample = sample_row_history(f, 10, 31, trial);
    REQUIRE(sample.rows.size() == 5);
    // Recompute the first all-distinct time directly from the bit rows.
    uint32_t expected = kBeyondHorizon;
    for (long t = 1; t <= sample.horizon && expected == kBeyondHorizon; ++t) {
      bool all_distinct = true;
      for (int a = 0; a < 5 && all_distinct; ++a)
        for (int b = a + 1; b < 5 && all_distinct; ++b) {
          bool same = true;
          for (long s = 0; s < t; ++s)
            if (sample.rows[a][s] != sample.rows[b][s]) {
              same = false;
              break;
            }
          if (same) all_distinct = false;
        }
      if (all_distinct) expected = static_cast<uint32_t>(t);
    }
    CHECK(sample.all_distinct_time == expected);
  }
}

TEST_CASE("degenerate full-deck law never separates") {
  auto f = PileSizeLaw::delta(4, 4);
  CHECK(exact_separation(f, 9) == 1);
  auto est = simulate_sst(f, 9, 200, 5);
  CHECK(est.estimate == 1.0);
}
