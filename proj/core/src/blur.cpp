#include "mw/blur.hpp"

#include <cmath>
#include <string>

#include "mw/error.hpp"

namespace mw {

namespace {

// Mirror index into [0, n) without repeating the edge sample: -1 -> 1, n -> n-2.
int reflect(int i, int n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    if (i < 0) {
      i = -i;
    }
    if (i >= n) {
      i = 2 * n - 2 - i;
    }
  }
  return i;
}

void check_params(int ksize, double sigma) {
  if (ksize < 1 || ksize % 2 == 0) {
    throw UsageError("blur kernel size must be odd and positive, got " + std::to_string(ksize));
  }
  if (!(sigma > 0.0)) {
    throw UsageError("blur sigma must be positive");
  }
}

}  // namespace

std::vector<double> gaussian_kernel(int ksize, double sigma) {
  check_params(ksize, sigma);
  std::vector<double> kernel(static_cast<std::size_t>(ksize));
  int half = ksize / 2;
  double sum = 0.0;
  for (int i = 0; i < ksize; ++i) {
    double x = i - half;
    kernel[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += kernel[i];
  }
  for (double& k : kernel) {
    k /= sum;
  }
  return kernel;
}

std::vector<double> gaussian_blur(const std::vector<double>& image, int width, int height,
                                  int ksize, double sigma) {
  check_params(ksize, sigma);
  if (width <= 0 || height <= 0 ||
      image.size() != static_cast<std::size_t>(width) * height) {
    throw UsageError("gaussian_blur: image buffer does not match its dimensions");
  }
  std::vector<double> kernel = gaussian_kernel(ksize, sigma);
  int half = ksize / 2;

  std::vector<double> tmp(image.size());
  for (int y = 0; y < height; ++y) {
    const double* row = image.data() + static_cast<std::size_t>(y) * width;
    double* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        acc += kernel[k + half] * row[reflect(x + k, width)];
      }
      out[x] = acc;
    }
  }

  std::vector<double> result(image.size());
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        acc += kernel[k + half] * tmp[static_cast<std::size_t>(reflect(y + k, height)) * width + x];
      }
      result[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return result;
}

Frame gaussian_blur(const Frame& frame, int ksize, double sigma) {
  if (frame.empty()) {
    throw UsageError("gaussian_blur: empty frame");
  }
  std::vector<double> image(frame.pixel_count());
  for (std::size_t i = 0; i < image.size(); ++i) {
    image[i] = frame.data()[i];
  }
  std::vector<double> blurred = gaussian_blur(image, frame.width(), frame.height(), ksize, sigma);
  Frame out(frame.width(), frame.height(), std::uint8_t{0}, frame.index());
  for (std::size_t i = 0; i < blurred.size(); ++i) {
    double v = std::lround(blurred[i]);
    out.data()[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  return out;
}

}  // namespace mw
