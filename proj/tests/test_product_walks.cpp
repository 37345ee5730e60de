#include <doctest.h>
#include <sepmix/chain.hpp>
#include <sepmix/product_walks.hpp>
#include <sepmix/profiles.hpp>

#include <cmath>

using namespace sepmix;
using namespace sepmix::walks;

TEST_CASE("rate vector validation and derived fields") {
  auto u = RateVector::uniform(4);
  CHECK(u.alpha_min() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(u.gamma() == 4);
  auto p = RateVector::first_coordinate_perturbed(10, 0.5);
  CHECK(p.gamma() == 9);
  CHECK(p.rates()[0] == doctest::Approx(0.6).epsilon(1e-13));
  CHECK_THROWS_AS(RateVector({0.5, 0.4}), validation_error);
  CHECK_THROWS_AS(RateVector({1.2, -0.2}), validation_error);
  CHECK_THROWS_AS(RateVector::first_coordinate_perturbed(3, 0.9), validation_error);
  CHECK_THROWS_AS(RateVector::half_split(5, 0.1), validation_error);
}

TEST_CASE("hypercube separation closed form") {
  auto u2 = RateVector::uniform(2);
  CHECK(hypercube_separation(u2, 0.0) == 1.0);
  for (double t : {0.4, 1.5, 4.0}) {
    double closed = 1 - std::pow(-std::expm1(-t / 2), 2.0);
    CHECK(hypercube_separation(u2, t) == doctest::Approx(closed).epsilon(1e-14));
  }
  // Uniform rates at t = n(ln n + c): 1 - (1 - e^{-c}/n)^n, near the Gumbel limit.
  auto big = RateVector::uniform(1000000);
  double t0 = 1e6 * std::log(1e6);
  CHECK(std::abs(hypercube_separation(big, t0) - profiles::gumbel(0.0)) <= 1e-5);
  // The direct product and the log1p branch agree at the switchover.
  for (int n : {999, 1000, 1001, 1002}) {
    auto r = RateVector::uniform(n);
    double t = n * std::log(static_cast<double>(n));
    double direct = 1.0;
    for (double a : r.rates()) direct *= -std::expm1(-a * t);
    CHECK(hypercube_separation(r, t) == doctest::Approx(1 - direct).epsilon(1e-12));
  }
}

TEST_CASE("hypercube product formula matches uniformization brute force") {
  for (int n : {2, 4, 6}) {
    auto rates = RateVector::uniform(n);
    auto kernel = hypercube_kernel(rates);
    for (double t : {0.5, 1.0, 2.0, 5.0, n * std::log(static_cast<double>(n))}) {
      double brute = chain::separation_continuous(kernel, t, 0).value;
      CHECK(std::abs(hypercube_separation(rates, t) - brute) <= 1e-9);
    }
    auto perturbed = RateVector::first_coordinate_perturbed(n == 2 ? 4 : n, 0.3);
    auto pk = hypercube_kernel(perturbed);
    double t = 2.0;
    CHECK(std::abs(hypercube_separation(perturbed, t) -
                   chain::separation_continuous(pk, t, 3).value) <= 1e-9);
  }
}

TEST_CASE("zmn separation: m-independence and brute force") {
  CHECK(zmn_separation_uniform(3, 6, 0.0) == 1.0);
  for (double t : {1.0, 4.0})
    CHECK(zmn_separation_uniform(2, 9, t) == doctest::Approx(zmn_separation_uniform(7, 9, t)).epsilon(1e-14));
  for (int n : {2, 3, 4}) {
    auto kernel = zmn_kernel(3, RateVector::uniform(n));
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      double brute = chain::separation_continuous(kernel, t, 0).value;
      CHECK(std::abs(zmn_separation_uniform(3, n, t) - brute) <= 1e-9);
    }
  }
  double c = 0.0;
  long long n = 1000000;
  double t = static_cast<double>(n) * (std::log(static_cast<double>(n)) + c);
  CHECK(std::abs(zmn_separation_uniform(5, n, t) - profiles::gumbel(c)) <= 1e-5);
  CHECK_THROWS_AS(zmn_separation_uniform(1, 5, 1.0), validation_error);
}

TEST_CASE("lazy time map identity") {
  CHECK(lazy_time_map(3.5, 1.0) == 3.5);
  CHECK(lazy_time_map(1.0, 0.01) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK_THROWS_AS(lazy_time_map(1.0, 0.0), validation_error);
  CHECK_THROWS_AS(lazy_time_map(1.0, 1.5), validation_error);
  // Lazy chain rates alpha * alpha_k at time t/alpha reproduce s(t) exactly.
  auto rates = RateVector::uniform(8);
  double alpha = 1.0 / 3;
  for (double t : {1.0, 5.0, 20.0}) {
    double lazy_prod = 1.0;
    for (double a : rates.rates())
      lazy_prod *= -std::expm1(-(alpha * a) * lazy_time_map(t, alpha));
    CHECK(std::abs(hypercube_separation(rates, t) - (1 - lazy_prod)) <= 1e-12);
  }
}

TEST_CASE("perturbed comparison sums: closed form vs direct enumeration") {
  for (int m : {2, 3}) {
    for (int n : {40, 70}) {
      double b = 0.4, c = 0.3;
      auto sums = perturbed_comparison_sums(m, n, b, c, true);
      double lp = std::log(n - 1.0) + c, l = std::log(static_cast<double>(n)) + c;
      double s0 = 0;
      for (int j = 0; j <= n - 1; ++j)
        s0 += binomial(n - 1, j).get_d() * std::pow(m - 1.0, j) *
              std::abs(std::exp(-j * lp) - std::exp(-j * l));
      CHECK(sums.s0 == doctest::Approx(s0).epsilon(1e-10));
      // The triangle-inequality bound dominates the exact absolute sum.
      CHECK(sums.s1 >= sums.s1_exact - 1e-12);
    }
  }
  CHECK_THROWS_AS(perturbed_comparison_sums(3, 5, 0.9, 0.0), validation_error);
}

TEST_CASE("zmn comparison error decays over n (m = 3, b = 1/2, c = 0)") {
  double prev = 1e9;
  for (int n : {100, 1000, 10000}) {
    auto sums = perturbed_comparison_sums(3, n, 0.5, 0.0);
    double total = sums.s0 + sums.s1;
    CHECK(total < prev);
    prev = total;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("perturbed hypercube: bound dominates the true paired gap") {
  // Both sides in closed form: uniform at t = n(ln n + c), perturbed at
  // tbar = a_n^{-1}(ln(n-1) + c); the transitive bound is S0 + S1 with m = 2.
  for (int n : {6, 8}) {
    double b = 0.4;
    auto uniform = RateVector::uniform(n);
    auto perturbed = RateVector::first_coordinate_perturbed(n, b);
    double a_n = 1.0 / n - b / (n - 1.0);
    for (double c : {-1.0, 0.0, 1.0}) {
      double t = n * (std::log(static_cast<double>(n)) + c);
      double tbar = (std::log(n - 1.0) + c) / a_n;
      double gap = std::abs(hypercube_separation(perturbed, tbar) -
                            hypercube_separation(uniform, t));
      auto sums = perturbed_comparison_sums(2, n, b, c, true);
      CHECK(gap <= sums.s0 + sums.s1 + 1e-10);
      // Exact transitive sum over all 2^n characters sits between the two.
      double exact_sum = 0;
      for (size_t v = 0; v < (size_t{1} << n); ++v) {
        double lam_p = 0, lam_q = 0;
        for (int k = 0; k < n; ++k)
          if (v & (size_t{1} << k)) {
            lam_p += 1.0 / n;
            lam_q += perturbed.rates()[k];
          }
        exact_sum += std::abs(std::exp(-tbar * lam_q) - std::exp(-t * lam_p));
      }
      CHECK(gap <= exact_sum + 1e-10);
      CHECK(exact_sum <= sums.s0 + sums.s1 + 1e-10);
      CHECK(sums.s0 + sums.s1_exact == doctest::Approx(exact_sum).epsilon(1e-9));
    }
  }
}

TEST_CASE("spectral comparison bounds dominate 16-state brute force") {
  const int n = 4;
  double b = 0.3;
  auto uniform = RateVector::uniform(n);
  auto perturbed = RateVector::first_coordinate_perturbed(n, b);
  auto spec_p = hypercube_spectrum_table(uniform);
  auto spec_q = hypercube_spectrum_table(perturbed);
  auto kp = hypercube_kernel(uniform);
  auto kq = hypercube_kernel(perturbed);
  // Discrete time, same t on both chains.
  for (unsigned t : {1u, 3u, 6u}) {
    double gap = std::abs(chain::separation_discrete(kp, t, 0).value -
                          chain::separation_discrete(kq, t, 0).value);
    CHECK(gap <= chain::comparison_bound_discrete(spec_p, spec_q, 0, t) + 1e-10);
  }
  // Continuous time at the paired cutoff positions.
  double a_n = 1.0 / n - b / (n - 1.0);
  for (double c : {-1.0, 0.0, 1.0}) {
    double t = n * (std::log(static_cast<double>(n)) + c);
    double tbar = (std::log(n - 1.0) + c) / a_n;
    double gap = std::abs(chain::separation_continuous(kp, t, 0).value -
                          chain::separation_continuous(kq, tbar, 0).value);
    CHECK(gap <= chain::comparison_bound_continuous(spec_p, spec_q, 0, t, tbar) + 1e-10);
  }
}

TEST_CASE("continuity sum of the uniform hypercube has a binomial closed form") {
  const int n = 4;
  auto spec = hypercube_spectrum_table(RateVector::uniform(n));
  double t = n * std::log(static_cast<double>(n)), w = n, c = 0.0;
  double closed = 0;
  for (int j = 1; j <= n; ++j)
    closed += n * binomial(n, j).get_d() * (static_cast<double>(j) / n) *
              std::exp(-std::log(static_cast<double>(n)) * j);
  CHECK(chain::continuity_sum(spec, 0, t, w, c) ==
        doctest::Approx(closed).epsilon(1e-12));
  auto mult = hypercube_spectrum_multiplicities(RateVector::uniform(n));
  CHECK(chain::continuity_sum_transitive(mult, t, w, c) ==
        doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("half-split comparison bound") {
  // b = b2 leaves a positive bound although the true gap is zero.
  CHECK(halfsplit_comparison_bound(100, 0.1, 0.1, 0.0) > 0);
  double b1e4 = halfsplit_comparison_bound(10000, 0.1, 0.2, 0.0);
  CHECK(b1e4 == doctest::Approx(0.03874328867524125).epsilon(1e-10));
  CHECK(b1e4 < 0.1);
  CHECK(halfsplit_comparison_bound(100000, 0.1, 0.2, 0.0) < b1e4);
  CHECK(halfsplit_comparison_bound(1000, 0.1, 0.2, 0.0) > b1e4);
}

TEST_CASE("hypercube continuity sums") {
  // First-coordinate family: the bounded part tends to e^{-c} e^{e^{-c}}.
  auto big = hypercube_continuity_first_coordinate(1000000, 0.5, 0.0);
  CHECK(std::abs(big.bounded_part - std::exp(1.0)) <= 1e-4);
  CHECK(big.vanishing_part <= 1e-300);
  auto mid = hypercube_continuity_first_coordinate(100, 0.5, 0.0);
  CHECK(mid.vanishing_part < 1e-8);
  // Half-split family: the fast part is 5.85e-2 at b = 0.1 and drops below
  // 1e-3 by b = 0.2 (n = 10^4, c = 0).
  auto hs1 = hypercube_continuity_half_split(10000, 0.1, 0.0);
  CHECK(hs1.vanishing_part == doctest::Approx(0.05847872962191854).epsilon(1e-10));
  auto hs2 = hypercube_continuity_half_split(10000, 0.2, 0.0);
  CHECK(hs2.vanishing_part < 1e-3);
  CHECK(hs1.bounded_part > 0);
  CHECK(std::isfinite(hs1.bounded_part));
}

TEST_CASE("BL spectrum values") {
  auto spec = bl_spectrum(4);
  REQUIRE(spec.gap.size() == 3);
  CHECK(spec.gap[0] == 0.0);
  CHECK(spec.gap[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spec.gap[2] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(std::exp(spec.log_dim[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::exp(spec.log_dim[1]) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::exp(spec.log_dim[2]) == doctest::Approx(2.0).epsilon(1e-12));
  // Dimensions telescope to binom(n, n/2).
  for (int n : {4, 10, 30}) {
    BigInt total = 0;
    for (int j = 0; j <= n / 2; ++j) total += bl_dimension_exact(n, j);
    CHECK(total == binomial(n, n / 2));
  }
}

TEST_CASE("BL kernel: birth-death structure and reversibility") {
  auto k = bl_kernel(4);
  CHECK(k.size() == 3);
  CHECK(k.at(0, 1) == 1);  // x = 0 forces an up-step
  CHECK(k.reversible());
  for (int n : {8, 20}) CHECK(bl_kernel(n).reversible());
  CHECK_THROWS_AS(bl_kernel(5), validation_error);
  CHECK_THROWS_AS(bl_kernel(202), size_error);
  // Eigenvalue gaps of the kernel match the closed forms.
  for (int n : {4, 6, 10}) {
    auto spec = chain::jacobi_spectrum(bl_kernel(n));
    auto closed = bl_spectrum(n);
    for (size_t j = 0; j < closed.gap.size(); ++j)
      CHECK(1.0 - spec.eigenvalue(j) == doctest::Approx(closed.gap[j]).epsilon(1e-10));
  }
}

TEST_CASE("BL separation: spectral path vs uniformization at n = 4") {
  auto k = bl_kernel(4);
  auto spec = chain::jacobi_spectrum(k);
  for (double t : {0.5, 1.0, 3.0}) {
    double a = chain::separation_continuous(k, t, 2).value;
    double b = chain::separation_continuous_spectral(spec, t, 2).value;
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("BL continuity sum and dominating bound") {
  // Cross-module oracle: the generic transitive continuity sum over the
  // closed-form spectrum reproduces bl_continuity_sum.
  for (int n : {4, 12}) {
    auto spec = bl_spectrum(n);
    std::vector<double> eig, mult;
    for (size_t j = 0; j < spec.gap.size(); ++j) {
      eig.push_back(1.0 - spec.gap[j]);
      mult.push_back(std::exp(spec.log_dim[j]));
    }
    auto sd = chain::SpectralDecomposition::with_multiplicities(eig, mult);
    double w = n / 4.0, t = w * std::log(static_cast<double>(n));
    for (double c : {-0.5, 0.0, 1.0})
      CHECK(bl_continuity_sum(n, c) ==
            doctest::Approx(chain::continuity_sum_transitive(sd, t, w, c)).epsilon(1e-12));
  }
  // B_n(0) approaches e.
  CHECK(std::abs(bl_continuity_sum(10000, 0.0) - std::exp(1.0)) <= 0.2);
  for (long long n : {100, 1000, 10000})
    for (double c : {-2.0, 0.0, 2.0}) {
      double b = bl_continuity_sum(n, c);
      CHECK(std::isfinite(b));
      CHECK(b <= bl_dominating_bound(n, 2.0));
    }
}

TEST_CASE("gumbel profile check") {
  auto uniform = RateVector::uniform(1000000);
  auto g0 = gumbel_profile_check(uniform, 0.0);
  CHECK(std::abs(g0.value - profiles::gumbel(0.0)) <= 1e-5);
  CHECK(g0.hypothesis_sup == 0.0);
  auto perturbed = RateVector::first_coordinate_perturbed(10000, 0.5);
  auto gp = gumbel_profile_check(perturbed, 0.0);
  CHECK(std::abs(gp.value - profiles::gumbel(0.0)) <= 1e-3);
  CHECK(gp.hypothesis_sup <= 1e-300);
  double prev = 2.0;
  for (double c : {-1.0, 0.0, 2.0, 5.0}) {
    double cur = gumbel_profile_check(uniform, c).value;
    CHECK(cur < prev);
    prev = cur;
  }
}
