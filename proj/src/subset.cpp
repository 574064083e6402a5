#include "asel/subset.hpp"

#include <algorithm>
#include <sstream>

namespace asel {

Subset::Subset(std::vector<int> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 0) throw ConfigError("Subset: negative aspect index");
    if (i > 0 && idx_[i] == idx_[i - 1])
      throw ConfigError("Subset: duplicate aspect index " +
                        std::to_string(idx_[i]));
  }
}

Subset Subset::full(int j_count) {
  std::vector<int> v(static_cast<std::size_t>(j_count));
  for (int j = 0; j < j_count; ++j) v[static_cast<std::size_t>(j)] = j;
  return Subset(std::move(v));
}

bool Subset::contains(int j) const {
  return std::binary_search(idx_.begin(), idx_.end(), j);
}

void Subset::check_range(int j_count) const {
  if (!idx_.empty() && idx_.back() >= j_count)
    throw ConfigError("Subset: aspect index " + std::to_string(idx_.back()) +
                      " out of range for J=" + std::to_string(j_count));
}

std::uint64_t Subset::mask() const {
  std::uint64_t m = 0;
  for (int j : idx_) {
    if (j >= 63) throw ConfigError("Subset::mask: index too large");
    m |= (1ULL << j);
  }
  return m;
}

Subset Subset::from_mask(std::uint64_t mask) {
  std::vector<int> v;
  for (int j = 0; j < 63; ++j)
    if (mask & (1ULL << j)) v.push_back(j);
  return Subset(std::move(v));
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (i) os << ',';
    os << idx_[i];
  }
  os << '}';
  return os.str();
}

namespace {

void combos_rec(int j_count, int size, int start, std::vector<int>& cur,
                std::vector<Subset>& out) {
  if (static_cast<int>(cur.size()) == size) {
    out.push_back(Subset(cur));
    return;
  }
  for (int j = start; j <= j_count - (size - static_cast<int>(cur.size()));
       ++j) {
    cur.push_back(j);
    combos_rec(j_count, size, j + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Subset> subsets_of_size(int j_count, int size) {
  if (size < 0 || size > j_count)
    throw ConfigError("subsets_of_size: size out of range");
  std::vector<Subset> out;
  std::vector<int> cur;
  combos_rec(j_count, size, 0, cur, out);
  return out;
}

std::vector<Subset> subsets_up_to(int j_count, int budget) {
  std::vector<Subset> out;
  const int cap = std::min(budget, j_count);
  for (int s = 0; s <= cap; ++s) {
    auto part = subsets_of_size(j_count, s);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace asel
