#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mw/error.hpp"

namespace mw::cnn {

inline std::size_t numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) {
      throw UsageError("tensor dimensions must be positive");
    }
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

inline std::string shape_string(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) {
      s += ",";
    }
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

// Dense n-dimensional value block. The scalar type is a template parameter
// so the same layer code runs in float for training and in double for
// finite-difference verification.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel(shape), T{}) {}
  Tensor(std::vector<int> s, std::vector<T> values) : shape(std::move(s)), data(std::move(values)) {
    if (data.size() != numel(shape)) {
      throw UsageError("tensor data length does not match shape " + shape_string(shape));
    }
  }

  int dim(std::size_t i) const { return shape[i]; }
  std::size_t rank() const { return shape.size(); }
  std::size_t size() const { return data.size(); }

  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }

  void fill(T value) { data.assign(data.size(), value); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out;
    out.shape = shape;
    out.data.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      out.data[i] = static_cast<U>(data[i]);
    }
    return out;
  }
};

}  // namespace mw::cnn
