#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include "mw/rng.hpp"

namespace oracle {

namespace {

// reflect-101 index mapping: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
int reflect101(int i, int n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    if (i < 0) {
      i = -i;
    }
    if (i >= n) {
      i = 2 * (n - 1) - i;
    }
  }
  return i;
}

}  // namespace

std::vector<double> brute_gaussian_blur(const std::vector<double>& image, int width, int height,
                                        int ksize, double sigma) {
  int half = ksize / 2;
  // Explicit 2-D kernel, normalized over the full square.
  std::vector<double> kernel(static_cast<std::size_t>(ksize) * ksize);
  double sum = 0.0;
  for (int ky = -half; ky <= half; ++ky) {
    for (int kx = -half; kx <= half; ++kx) {
      double v = std::exp(-(kx * kx + ky * ky) / (2.0 * sigma * sigma));
      kernel[static_cast<std::size_t>(ky + half) * ksize + (kx + half)] = v;
      sum += v;
    }
  }
  for (double& v : kernel) {
    v /= sum;
  }

  std::vector<double> out(image.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int ky = -half; ky <= half; ++ky) {
        for (int kx = -half; kx <= half; ++kx) {
          int sx = reflect101(x + kx, width);
          int sy = reflect101(y + ky, height);
          acc += kernel[static_cast<std::size_t>(ky + half) * ksize + (kx + half)] *
                 image[static_cast<std::size_t>(sy) * width + sx];
        }
      }
      out[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return out;
}

double geometric_accumulation(double f, double beta, int k) {
  double r = f * (1.0 - std::pow(beta, k + 1)) / (1.0 - beta);
  return std::clamp(r, 0.0, 255.0);
}

int knn_recovery_horizon(double p, int slots, int k, double target_prob) {
  // State: number of buffer slots holding the new intensity. Each frame one
  // uniformly chosen slot is replaced with probability p; replacing a slot
  // that already holds the new value changes nothing.
  std::vector<double> dist(static_cast<std::size_t>(slots) + 1, 0.0);
  dist[0] = 1.0;
  for (int t = 1; t <= 100000; ++t) {
    std::vector<double> next(dist.size(), 0.0);
    for (int c = 0; c <= slots; ++c) {
      if (dist[c] == 0.0) {
        continue;
      }
      double stay_same = (1.0 - p) + p * (static_cast<double>(c) / slots);
      next[c] += dist[c] * stay_same;
      if (c < slots) {
        next[c + 1] += dist[c] * p * (static_cast<double>(slots - c) / slots);
      }
    }
    dist = std::move(next);
    double recovered = 0.0;
    for (int c = k; c <= slots; ++c) {
      recovered += dist[c];
    }
    if (recovered >= target_prob) {
      return t;
    }
  }
  return -1;
}

int count_isolated_pixels(const mw::ForegroundMask& mask) {
  int count = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) {
        continue;
      }
      bool neighbor = false;
      for (int dy = -1; dy <= 1 && !neighbor; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) {
            continue;
          }
          int nx = x + dx;
          int ny = y + dy;
          if (nx >= 0 && nx < mask.width() && ny >= 0 && ny < mask.height() &&
              mask.at(nx, ny)) {
            neighbor = true;
            break;
          }
        }
      }
      if (!neighbor) {
        ++count;
      }
    }
  }
  return count;
}

double iou_with_square(const mw::ForegroundMask& mask, int x0, int y0, int size) {
  long long intersection = 0;
  long long mask_area = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool in_mask = mask.at(x, y);
      bool in_rect = x >= x0 && x < x0 + size && y >= y0 && y < y0 + size;
      mask_area += in_mask ? 1 : 0;
      intersection += (in_mask && in_rect) ? 1 : 0;
    }
  }
  long long rect_area = static_cast<long long>(size) * size;
  long long uni = mask_area + rect_area - intersection;
  return uni == 0 ? 0.0 : static_cast<double>(intersection) / static_cast<double>(uni);
}

void fold_rel_error(GradCheck& gc, double analytic, double numeric, double dead_zone) {
  double denom = std::max(std::abs(analytic), std::abs(numeric));
  if (denom < dead_zone) {
    return;
  }
  gc.max_rel_error = std::max(gc.max_rel_error, std::abs(analytic - numeric) / denom);
  ++gc.comparisons;
}

GradCheck check_layer_gradients(mw::cnn::Layer<double>& layer,
                                const mw::cnn::Tensor<double>& input,
                                std::uint64_t seed, double eps) {
  mw::cnn::Tensor<double> probe = input;
  mw::cnn::Tensor<double> out = layer.forward(probe);

  mw::Rng rng(seed);
  mw::cnn::Tensor<double> c(out.shape);
  for (auto& v : c.data) {
    v = rng.next_double() * 2.0 - 1.0;
  }

  auto objective = [&](const mw::cnn::Tensor<double>& x) {
    mw::cnn::Tensor<double> y = layer.forward(x);
    double j = 0.0;
    for (std::size_t i = 0; i < y.data.size(); ++i) {
      j += c.data[i] * y.data[i];
    }
    return j;
  };

  // Analytic gradients: one forward to refresh caches, one backward.
  layer.zero_grads();
  layer.forward(probe);
  mw::cnn::Tensor<double> grad_in = layer.backward(c);
  std::vector<std::vector<double>> param_grads;
  for (mw::cnn::Tensor<double>* g : layer.grads()) {
    param_grads.push_back(g->data);
  }

  GradCheck gc;
  for (std::size_t i = 0; i < probe.data.size(); ++i) {
    double saved = probe.data[i];
    probe.data[i] = saved + eps;
    double plus = objective(probe);
    probe.data[i] = saved - eps;
    double minus = objective(probe);
    probe.data[i] = saved;
    fold_rel_error(gc, grad_in.data[i], (plus - minus) / (2.0 * eps));
  }

  std::vector<mw::cnn::Tensor<double>*> params = layer.params();
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t]->data.size(); ++i) {
      double saved = params[t]->data[i];
      params[t]->data[i] = saved + eps;
      double plus = objective(probe);
      params[t]->data[i] = saved - eps;
      double minus = objective(probe);
      params[t]->data[i] = saved;
      fold_rel_error(gc, param_grads[t][i], (plus - minus) / (2.0 * eps));
    }
  }
  return gc;
}

GradCheck check_scalar_function(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x,
                                const std::vector<double>& analytic_grad,
                                double eps) {
  GradCheck gc;
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    double saved = probe[i];
    probe[i] = saved + eps;
    double plus = f(probe);
    probe[i] = saved - eps;
    double minus = f(probe);
    probe[i] = saved;
    fold_rel_error(gc, analytic_grad[i], (plus - minus) / (2.0 * eps));
  }
  return gc;
}

}  // namespace oracle
