#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epinet {

/// Binary indexed tree of nonnegative weights with prefix search.
template <class T>
class Fenwick {
 public:
  Fenwick() = default;
  explicit Fenwick(std::size_t n) : tree_(n + 1, T{}), value_(n, T{}) {
    for (step_ = 1; step_ * 2 <= n; step_ *= 2) {}
  }

  std::size_t size() const { return value_.size(); }
  T total() const { return total_; }
  T operator[](std::size_t i) const { return value_[i]; }

  void add(std::size_t i, T delta) {
    value_[i] += delta;
    total_ += delta;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }
  void set(std::size_t i, T v) { add(i, v - value_[i]); }

  /// Smallest index i with prefix sum over [0, i] strictly greater than target.
  std::size_t find(T target) const {
    std::size_t pos = 0;
    for (std::size_t s = step_; s > 0; s >>= 1) {
      if (pos + s < tree_.size() && tree_[pos + s] <= target) {
        pos += s;
        target -= tree_[pos];
      }
    }
    if (pos >= value_.size()) throw std::out_of_range("Fenwick::find past end");
    return pos;
  }

 private:
  std::vector<T> tree_;
  std::vector<T> value_;
  T total_{};
  std::size_t step_ = 1;
};

}  // namespace epinet
