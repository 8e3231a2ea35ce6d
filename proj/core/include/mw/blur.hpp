#pragma once

#include <vector>

#include "mw/frame.hpp"

namespace mw {

// Normalised 1-D Gaussian kernel of odd length `ksize` with the given sigma.
std::vector<double> gaussian_kernel(int ksize, double sigma);

// Separable Gaussian blur over a double-valued image, borders handled by
// mirroring without repeating the edge sample (...cba|abcd|cba...).
// This is the precision path; the Frame overload quantises its result.
std::vector<double> gaussian_blur(const std::vector<double>& image, int width, int height,
                                  int ksize, double sigma);

// Gaussian blur of an 8-bit frame; filtering runs in double precision and
// the result is rounded to the nearest integer.
Frame gaussian_blur(const Frame& frame, int ksize, double sigma);

}  // namespace mw
