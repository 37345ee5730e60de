#include <sepmix/combinatorics.hpp>

#include <algorithm>
#include <cmath>

namespace sepmix::comb {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  long long sum = 0;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw validation_error("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw validation_error("partition parts must be weakly decreasing");
    sum += parts_[i];
  }
  if (sum > (1LL << 30)) throw size_error("partition too large");
  n_ = static_cast<int>(sum);
}

Partition Partition::from_multiplicities(const std::map<int, int>& mult) {
  std::vector<int> parts;
  for (auto it = mult.rbegin(); it != mult.rend(); ++it) {
    if (it->second < 0) throw validation_error("negative multiplicity");
    for (int c = 0; c < it->second; ++c) parts.push_back(it->first);
  }
  return Partition(std::move(parts));
}

std::map<int, int> Partition::multiplicities() const {
  std::map<int, int> mult;
  for (int p : parts_) ++mult[p];
  return mult;
}

std::string Partition::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts_[i]);
  }
  s += ')';
  return s;
}

std::vector<Partition> enumerate_partitions(int n, int cap) {
  if (n < 1) throw validation_error("enumerate_partitions: n must be >= 1");
  if (n > cap) throw size_error("enumerate_partitions: n exceeds cap");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Reverse-lexicographic descent: extend with the largest part allowed.
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

namespace {

std::vector<int> conjugate_parts(const std::vector<int>& parts) {
  if (parts.empty()) return {};
  std::vector<int> conj(parts[0], 0);
  for (int p : parts)
    for (int j = 0; j < p; ++j) ++conj[j];
  return conj;
}

// Hook length of cell (i, j), 0-indexed.
long hook_length(const std::vector<int>& parts, const std::vector<int>& conj,
                 int i, int j) {
  return (parts[i] - j) + (conj[j] - i) - 1;
}

}  // namespace

BigInt dimension(const Partition& la) {
  const auto& parts = la.parts();
  auto conj = conjugate_parts(parts);
  BigInt hooks = 1;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int j = 0; j < parts[i]; ++j)
      hooks *= hook_length(parts, conj, static_cast<int>(i), j);
  return factorial(la.n()) / hooks;
}

double log_dimension(const Partition& la) {
  const auto& parts = la.parts();
  auto conj = conjugate_parts(parts);
  double log_hooks = 0.0;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int j = 0; j < parts[i]; ++j)
      log_hooks += std::log(static_cast<double>(hook_length(parts, conj, static_cast<int>(i), j)));
  return std::lgamma(la.n() + 1.0) - log_hooks;
}

long long diag_content(const Partition& la) {
  long long total = 0;
  const auto& parts = la.parts();
  for (size_t i = 0; i < parts.size(); ++i) {
    // Row i (0-indexed) has contents -i, -i+1, ..., parts[i]-1-i.
    long long p = parts[i];
    total += p * (p - 1) / 2 - p * static_cast<long long>(i);
  }
  return total;
}

BigInt class_size(const Partition& rho) {
  BigInt denom = 1;
  for (auto [part, mult] : rho.multiplicities())
    denom *= int_pow(BigInt(part), mult) * factorial(mult);
  return factorial(rho.n()) / denom;
}

BigInt mobius_type_weight(const Partition& la) {
  BigInt w = class_size(la);
  if ((la.n() - la.length()) % 2 != 0) w = -w;
  return w;
}

std::vector<Partition> corners_removed(const Partition& la) {
  std::vector<Partition> out;
  const auto& parts = la.parts();
  for (size_t i = 0; i < parts.size(); ++i) {
    bool corner = (i + 1 == parts.size()) || (parts[i] > parts[i + 1]);
    if (!corner) continue;
    std::vector<int> next = parts;
    if (--next[i] == 0) next.erase(next.begin() + i);
    out.emplace_back(std::move(next));
  }
  return out;
}

namespace {

std::string shape_key(const std::vector<int>& shape, const std::vector<int>& rho,
                      size_t depth) {
  std::string key;
  key.reserve(shape.size() + rho.size() - depth + 1);
  for (int p : shape) key += static_cast<char>(p);
  key += '\x7f';
  for (size_t i = depth; i < rho.size(); ++i) key += static_cast<char>(rho[i]);
  return key;
}

// Murnaghan-Nakayama recursion over beta-sets (first-column hook lengths).
// Removing a border strip of length r corresponds to replacing a beta number
// b by b - r; the sign is (-1)^{#beta numbers strictly between b-r and b}.
long long mn_recurse(const std::vector<int>& shape, const std::vector<int>& rho,
                     size_t depth, std::unordered_map<std::string, long long>& memo) {
  if (shape.empty()) return 1;
  std::string key = shape_key(shape, rho, depth);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int r = rho[depth];
  const int len = static_cast<int>(shape.size());
  std::vector<int> beta(len);
  for (int i = 0; i < len; ++i) beta[i] = shape[i] + (len - 1 - i);  // strictly decreasing

  long long total = 0;
  for (int i = 0; i < len; ++i) {
    int target = beta[i] - r;
    if (target < 0) continue;
    bool occupied = false;
    int between = 0;
    for (int j = 0; j < len; ++j) {
      if (j == i) continue;
      if (beta[j] == target) occupied = true;
      if (beta[j] > target && beta[j] < beta[i]) ++between;
    }
    if (occupied) continue;
    std::vector<int> nbeta = beta;
    nbeta[i] = target;
    std::sort(nbeta.rbegin(), nbeta.rend());
    std::vector<int> nshape;
    int nlen = static_cast<int>(nbeta.size());
    for (int j = 0; j < nlen; ++j) {
      int part = nbeta[j] - (nlen - 1 - j);
      if (part > 0) nshape.push_back(part);
    }
    long long sub = mn_recurse(nshape, rho, depth + 1, memo);
    total += (between % 2 == 0) ? sub : -sub;
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace

CharacterTable::CharacterTable(int n, int cap) : n_(n) {
  if (n < 1) throw validation_error("CharacterTable: n must be >= 1");
  if (n > cap) throw size_error("CharacterTable: n exceeds character cap");
  parts_ = enumerate_partitions(n);
  for (size_t i = 0; i < parts_.size(); ++i) {
    std::string key;
    for (int p : parts_[i].parts()) key += static_cast<char>(p);
    index_.emplace(std::move(key), static_cast<int>(i));
  }
  std::unordered_map<std::string, long long> memo;
  chi_.assign(parts_.size(), std::vector<long long>(parts_.size(), 0));
  for (size_t s = 0; s < parts_.size(); ++s)
    for (size_t c = 0; c < parts_.size(); ++c)
      chi_[s][c] = mn_recurse(parts_[s].parts(), parts_[c].parts(), 0, memo);
}

int CharacterTable::index_of(const Partition& la) const {
  std::string key;
  for (int p : la.parts()) key += static_cast<char>(p);
  auto it = index_.find(key);
  if (it == index_.end()) throw validation_error("partition not of size n");
  return it->second;
}

long long CharacterTable::value(const Partition& shape, const ConjugacyClass& rho) const {
  return chi_[index_of(shape)][index_of(rho)];
}

long long character(const Partition& shape, const ConjugacyClass& rho, int cap) {
  if (shape.n() != rho.n()) throw validation_error("character: |shape| != |class|");
  if (shape.n() > cap) throw size_error("character: n exceeds character cap");
  std::unordered_map<std::string, long long> memo;
  return mn_recurse(shape.parts(), rho.parts(), 0, memo);
}

}  // namespace sepmix::comb
