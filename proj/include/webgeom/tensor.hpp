#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

#include "webgeom/jet.hpp"

namespace webgeom {

/// Dense array with `Rank` indices, each ranging over {0, 1}.
/// Index 0 is the most significant in the flat layout.
template <class T, std::size_t Rank>
class IndexedArray {
 public:
  static constexpr std::size_t rank = Rank;
  static constexpr std::size_t size = std::size_t{1} << Rank;

  IndexedArray() { data_.fill(T{}); }
  explicit IndexedArray(const T& fill) { data_.fill(fill); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[flat(idx...)];
  }

  T& at(const std::array<int, Rank>& idx) { return data_[flat_array(idx)]; }
  const T& at(const std::array<int, Rank>& idx) const { return data_[flat_array(idx)]; }

  T& flat_at(std::size_t k) { return data_[k]; }
  const T& flat_at(std::size_t k) const { return data_[k]; }

  static std::array<int, Rank> unflatten(std::size_t k) {
    std::array<int, Rank> idx{};
    for (std::size_t r = Rank; r-- > 0;) {
      idx[r] = static_cast<int>(k & 1u);
      k >>= 1;
    }
    return idx;
  }

  /// Calls fn(index_array) for every index in flat order.
  template <class Fn>
  static void for_each_index(Fn&& fn) {
    for (std::size_t k = 0; k < size; ++k) fn(unflatten(k));
  }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  template <class... I>
  static std::size_t flat(I... idx) {
    std::size_t k = 0;
    ((k = (k << 1) | static_cast<std::size_t>(idx)), ...);
    return k;
  }
  static std::size_t flat_array(const std::array<int, Rank>& idx) {
    std::size_t k = 0;
    for (int i : idx) k = (k << 1) | static_cast<std::size_t>(i);
    return k;
  }

  std::array<T, size> data_;
};

template <std::size_t R>
using Tensor = IndexedArray<double, R>;
template <std::size_t R>
using JetTensor = IndexedArray<Jet, R>;

template <std::size_t R>
double max_abs(const Tensor<R>& t) {
  double m = 0.0;
  for (double v : t) m = std::max(m, std::abs(v));
  return m;
}

template <std::size_t R>
Tensor<R> values(const JetTensor<R>& t) {
  Tensor<R> out;
  for (std::size_t k = 0; k < Tensor<R>::size; ++k) out.flat_at(k) = t.flat_at(k).value();
  return out;
}

}  // namespace webgeom
