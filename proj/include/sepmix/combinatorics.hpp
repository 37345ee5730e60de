#pragma once

#include <sepmix/exact.hpp>

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace sepmix::comb {

inline constexpr int kPartitionCap = 60;  // enumerate_partitions
inline constexpr int kCharacterCap = 12;  // full Murnaghan-Nakayama characters

// Integer partition with weakly decreasing positive parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);
  static Partition from_multiplicities(const std::map<int, int>& mult);

  int n() const { return n_; }
  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  std::map<int, int> multiplicities() const;

  bool operator==(const Partition&) const = default;
  std::string to_string() const;  // "(3,2,1)"

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

// A conjugacy class of S_n is its cycle type.
using ConjugacyClass = Partition;

// All partitions of n in reverse-lexicographic order: (n) first, 1^n last.
std::vector<Partition> enumerate_partitions(int n, int cap = kPartitionCap);

// Hook-length dimension f_lambda of the S_n irreducible, exact.
BigInt dimension(const Partition& la);
// log f_lambda via summed hook logarithms, usable far beyond the exact range.
double log_dimension(const Partition& la);

// diag(lambda) = sum over cells (row r, column s, 1-indexed) of (s - r).
long long diag_content(const Partition& la);

// Number of permutations (equivalently set partitions weighted by block
// rearrangements) of cycle type rho: n! / prod_j j^{m_j} m_j!.
BigInt class_size(const Partition& rho);

// Combined inclusion-exclusion coefficient over the partition lattice:
// (number of set partitions of type lambda) x (Mobius value of one of them)
// = (-1)^{n - length(lambda)} * class_size(lambda).
BigInt mobius_type_weight(const Partition& la);

// All partitions obtained from lambda by removing one corner cell.
std::vector<Partition> corners_removed(const Partition& la);

// Dense Murnaghan-Nakayama character table of S_n, immutable after build.
class CharacterTable {
 public:
  explicit CharacterTable(int n, int cap = kCharacterCap);

  int n() const { return n_; }
  const std::vector<Partition>& partitions() const { return parts_; }
  long long value(const Partition& shape, const ConjugacyClass& rho) const;
  long long value_at(int shape_index, int class_index) const {
    return chi_[shape_index][class_index];
  }
  int index_of(const Partition& la) const;

 private:
  int n_ = 0;
  std::vector<Partition> parts_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<long long>> chi_;  // [shape][class]
};

// Single character value; builds a local recursion cache per call.
long long character(const Partition& shape, const ConjugacyClass& rho,
                    int cap = kCharacterCap);

}  // namespace sepmix::comb
