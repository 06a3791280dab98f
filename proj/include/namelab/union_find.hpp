// Disjoint-set forest with path compression and union by size.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace namelab {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true if the two sets were distinct.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const { return parent_.size(); }

  // Component members grouped by root, ordered by smallest member.
  std::vector<std::vector<std::uint32_t>> components() {
    std::vector<std::vector<std::uint32_t>> by_root(parent_.size());
    for (std::uint32_t i = 0; i < parent_.size(); ++i)
      by_root[find(i)].push_back(i);
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& group : by_root)
      if (!group.empty()) out.push_back(std::move(group));
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace namelab
