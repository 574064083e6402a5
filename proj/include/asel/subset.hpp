#pragma once

#include "asel/common.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace asel {

// A selected set of aspect indices. Indices are kept strictly increasing and
// duplicate-free; range against J is validated where a dataset is in scope.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::vector<int> indices);
  Subset(std::initializer_list<int> indices)
      : Subset(std::vector<int>(indices)) {}

  static Subset empty() { return Subset(); }
  static Subset full(int j_count);

  int size() const { return static_cast<int>(idx_.size()); }
  bool is_empty() const { return idx_.empty(); }
  bool contains(int j) const;
  const std::vector<int>& indices() const { return idx_; }

  void check_range(int j_count) const;

  // bitmask encoding, used as a map key and for enumeration (requires J <= 63)
  std::uint64_t mask() const;
  static Subset from_mask(std::uint64_t mask);

  std::string to_string() const;  // e.g. "{0,3,7}"

  bool operator==(const Subset& o) const { return idx_ == o.idx_; }
  bool operator!=(const Subset& o) const { return idx_ != o.idx_; }
  bool operator<(const Subset& o) const { return idx_ < o.idx_; }

 private:
  std::vector<int> idx_;
};

// All subsets of {0..J-1} with exactly `size` elements, in lexicographic
// order of the index vectors.
std::vector<Subset> subsets_of_size(int j_count, int size);

// All subsets with size <= budget, ordered by size then lexicographically.
std::vector<Subset> subsets_up_to(int j_count, int budget);

}  // namespace asel
