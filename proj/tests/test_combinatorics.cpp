#include <doctest.h>
#include <sepmix/combinatorics.hpp>

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

using namespace sepmix;
using namespace sepmix::comb;

namespace {

// Independent oracle: partition counts via the Euler pentagonal recurrence.
long pentagonal_p(int n) {
  static std::vector<long> cache{1};
  for (int m = static_cast<int>(cache.size()); m <= n; ++m) {
    long total = 0;
    for (int k = 1;; ++k) {
      long g1 = static_cast<long>(k) * (3 * k - 1) / 2;
      long g2 = static_cast<long>(k) * (3 * k + 1) / 2;
      if (g1 > m && g2 > m) break;
      long term = 0;
      if (g1 <= m) term += cache[m - g1];
      if (g2 <= m) term += cache[m - g2];
      total += (k % 2 == 1) ? term : -term;
    }
    cache.push_back(total);
  }
  return cache[n];
}

// Independent oracle: count standard Young tableaux by brute enumeration.
long count_syt(const std::vector<int>& shape) {
  std::vector<int> filled(shape.size(), 0);
  int n = std::accumulate(shape.begin(), shape.end(), 0);
  auto rec = [&](auto&& self, int next) -> long {
    if (next > n) return 1;
    long total = 0;
    for (size_t r = 0; r < shape.size(); ++r) {
      if (filled[r] == shape[r]) continue;
      if (r > 0 && filled[r - 1] <= filled[r]) continue;
      ++filled[r];
      total += self(self, next + 1);
      --filled[r];
    }
    return total;
  };
  return rec(rec, 1);
}

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

}  // namespace

TEST_CASE("partition construction and views") {
  Partition la({4, 2, 2, 1});
  CHECK(la.n() == 9);
  CHECK(la.length() == 4);
  std::map<int, int> mult = la.multiplicities();
  CHECK(mult == std::map<int, int>{{4, 1}, {2, 2}, {1, 1}});
  CHECK(Partition::from_multiplicities(mult) == la);
  CHECK_THROWS_AS(P({2, 3}), validation_error);
  CHECK_THROWS_AS(P({3, 0}), validation_error);
}

TEST_CASE("enumerate_partitions counts match the pentagonal oracle") {
  CHECK(enumerate_partitions(1).size() == 1);
  CHECK(enumerate_partitions(4).size() == 5);    // pentagonal oracle: p(4) = 5
  CHECK(enumerate_partitions(10).size() == 42);  // pentagonal oracle: p(10) = 42
  for (int n = 1; n <= 25; ++n)
    CHECK(static_cast<long>(enumerate_partitions(n).size()) == pentagonal_p(n));
  CHECK_THROWS_AS(enumerate_partitions(61), size_error);
  CHECK_THROWS_AS(enumerate_partitions(15, 12), size_error);
}

TEST_CASE("enumerate_partitions is reverse-lexicographic and duplicate-free") {
  for (int n : {5, 8, 11}) {
    auto parts = enumerate_partitions(n);
    CHECK(parts.front() == P({n}));
    CHECK(parts.back() == P(std::vector<int>(n, 1)));
    std::set<std::vector<int>> seen;
    for (size_t i = 0; i < parts.size(); ++i) {
      CHECK(parts[i].n() == n);
      CHECK(seen.insert(parts[i].parts()).second);
      if (i > 0) CHECK(parts[i - 1].parts() > parts[i].parts());
    }
  }
}

TEST_CASE("dimension: hooks, single rows, and the SYT oracle") {
  CHECK(dimension(P({7})) == 1);
  CHECK(dimension(P({1, 1, 1, 1})) == 1);
  // d_{(n-j,1^j)} = binom(n-1, j); n = 7, j = 2.
  CHECK(dimension(P({5, 1, 1})) == binomial(6, 2));
  CHECK(dimension(P({3, 2})) == count_syt({3, 2}));  // oracle value 5
  CHECK(count_syt({3, 2}) == 5);
  for (int n = 2; n <= 8; ++n)
    for (const auto& la : enumerate_partitions(n))
      CHECK(dimension(la) == count_syt(la.parts()));
}

TEST_CASE("dimension squares sum to n!") {
  for (int n = 1; n <= 12; ++n) {
    BigInt total = 0;
    for (const auto& la : enumerate_partitions(n)) {
      BigInt d = dimension(la);
      total += d * d;
    }
    CHECK(total == factorial(n));
  }
}

TEST_CASE("log_dimension agrees with exact dimension at the boundary") {
  for (int n : {24, 25, 26}) {
    for (const auto& la : enumerate_partitions(n)) {
      double exact_log = std::log(dimension(la).get_d());
      double approx = log_dimension(la);
      CHECK(std::abs(exact_log - approx) <= 1e-9 * std::max(1.0, std::abs(exact_log)));
    }
  }
}

TEST_CASE("diag_content closed forms") {
  for (int n : {3, 5, 9}) {
    CHECK(diag_content(P({n})) == static_cast<long long>(n) * (n - 1) / 2);
    for (int j = 1; j < n; ++j) {
      std::vector<int> hook{n - j};
      hook.insert(hook.end(), j, 1);
      if (hook[0] < 1 || (j > 0 && hook[0] < 1)) continue;
      if (n - j >= 1)
        CHECK(diag_content(P(hook)) ==
              static_cast<long long>(n) * (n - 1) / 2 - static_cast<long long>(n) * j);
    }
  }
  CHECK(diag_content(P({2, 1})) == 0);
}

TEST_CASE("characters: dimension at identity, hooks at the n-cycle") {
  for (int n = 2; n <= 8; ++n) {
    CharacterTable table(n, 12);
    Partition identity_class(std::vector<int>(n, 1));
    Partition ncycle({n});
    for (const auto& la : table.partitions()) {
      CHECK(BigInt(static_cast<long>(table.value(la, identity_class))) == dimension(la));
      // Hooks (n-j, 1^j) give (-1)^j at the n-cycle, everything else vanishes.
      const auto& parts = la.parts();
      bool is_hook = parts[0] == n || std::all_of(parts.begin() + 1, parts.end(),
                                                  [](int p) { return p == 1; });
      if (is_hook) {
        int j = la.length() - 1;
        CHECK(table.value(la, ncycle) == ((j % 2 == 0) ? 1 : -1));
      } else {
        CHECK(table.value(la, ncycle) == 0);
      }
    }
  }
}

TEST_CASE("character column orthogonality") {
  for (int n = 2; n <= 8; ++n) {
    CharacterTable table(n, 12);
    for (const auto& rho : table.partitions()) {
      BigInt total = 0;
      for (const auto& la : table.partitions()) {
        long chi = static_cast<long>(table.value(la, rho));
        total += BigInt(chi) * BigInt(chi);
      }
      CHECK(total * class_size(rho) == factorial(n));
    }
  }
}

TEST_CASE("character frozen small values") {
  CHECK(character(P({2, 1}), P({3})) == -1);
  CHECK(character(P({2, 1}), P({2, 1})) == 0);
  CHECK(character(P({2, 1}), P({1, 1, 1})) == 2);
  CHECK_THROWS_AS(character(P({7, 6}), P({13})), size_error);
  CHECK_THROWS_AS(character(P({2, 1}), P({2})), validation_error);
}

TEST_CASE("mobius_type_weight") {
  // lambda = 1^n: n! / (1^n n!) = 1.
  for (int n : {1, 2, 5, 9}) CHECK(mobius_type_weight(P(std::vector<int>(n, 1))) == 1);
  CHECK(mobius_type_weight(P({2})) == -1);  // oracle: 2! * (-1) / (2*1)
  CHECK(mobius_type_weight(P({3})) == 2);   // oracle: 3! * (+1) / (3*1)
  CHECK(mobius_type_weight(P({2, 1})) == -3);
  // Mobius values over the whole lattice sum to 0 for n >= 2 (and 1 for n = 1).
  for (int n = 2; n <= 10; ++n) {
    BigInt total = 0;
    for (const auto& la : enumerate_partitions(n)) total += mobius_type_weight(la);
    CHECK(total == 0);
  }
}

TEST_CASE("class sizes sum to n!") {
  for (int n = 1; n <= 10; ++n) {
    BigInt total = 0;
    for (const auto& la : enumerate_partitions(n)) total += class_size(la);
    CHECK(total == factorial(n));
  }
}

TEST_CASE("branching identity via corner removal") {
  for (int n = 2; n <= 12; ++n) {
    for (const auto& la : enumerate_partitions(n)) {
      BigInt total = 0;
      for (const auto& mu : corners_removed(la)) {
        CHECK(mu.n() == n - 1);
        total += dimension(mu);
      }
      CHECK(total == dimension(la));
    }
  }
}
