#pragma once

#include <vector>

#include "mw/cnn/tensor.hpp"
#include "mw/error.hpp"

namespace mw::cnn {

// Classic momentum update: v <- momentum*v - lr*g; w <- w + v.
template <typename T>
void sgd_step(Tensor<T>& param, const Tensor<T>& grad, Tensor<T>& velocity, double lr,
              double momentum) {
  if (!param.same_shape(grad) || !param.same_shape(velocity)) {
    throw UsageError("sgd_step: parameter, gradient and velocity shapes must match");
  }
  const T m = static_cast<T>(momentum);
  const T step = static_cast<T>(lr);
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = m * velocity[i] - step * grad[i];
    param[i] += velocity[i];
  }
}

// Apply the update across a whole parameter set (one velocity per tensor).
template <typename T>
void sgd_step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>*>& grads,
              std::vector<Tensor<T>>& velocities, double lr, double momentum) {
  if (params.size() != grads.size()) {
    throw UsageError("sgd_step: parameter and gradient counts differ");
  }
  if (velocities.empty()) {
    velocities.reserve(params.size());
    for (const Tensor<T>* p : params) {
      velocities.emplace_back(p->shape);
    }
  }
  if (velocities.size() != params.size()) {
    throw UsageError("sgd_step: velocity count does not match parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    sgd_step(*params[i], *grads[i], velocities[i], lr, momentum);
  }
}

}  // namespace mw::cnn
