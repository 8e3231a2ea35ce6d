#pragma once

#include <cstdint>
#include <utility>

#include "mw/knn_bg.hpp"

namespace mw {

// How per-pixel flow vectors are reduced to a single mean displacement.
// cartesian_mean averages u and v directly; polar_mean averages magnitudes
// and angles separately, then converts back (a literal reading of summing
// "distances" and "directions" on their own).
enum class FlowStatsMode { cartesian_mean, polar_mean };

// How the mean displacement s maps to the inter-sample frame interval.
// direct uses round(s) (faster motion -> sparser samples); inverse uses
// round(inverse_scale / s) so faster motion samples more densely.
enum class IntervalMode { direct, inverse };

struct BlurParams {
  int kernel = 5;      // odd side length
  double sigma = 1.0;  // Gaussian sigma in pixels
};

// Every tunable of the representation pipeline in one place: smoothing,
// background model, silhouette cleanup, flow, adaptive sampling and
// accumulation.
struct PipelineConfig {
  // Accumulation weight for previous samples; in (0,1).
  double beta = 0.9;
  // Frame distance d between the two masks a flow field is computed from.
  int flow_frame_distance = 1;
  // Side length w of the square flow window; odd, >= 3.
  int flow_window = 15;
  // Interval used when the measured displacement is degenerate.
  int fallback_interval = 2;
  // Inclusive clamp range for the sampling interval, in frames.
  int interval_min = 2;
  int interval_max = 30;
  // Samples dropped from each end of a training sequence.
  int trim_count = 5;
  // Representation image size.
  int output_width = 227;
  int output_height = 227;
  // Smallest acceptable minor eigenvalue of the flow structure tensor.
  // Windows on 0/255 masks score several hundred thousand at corners and
  // ~0 along straight edges, so the floor sits well between the two.
  double eigen_threshold = 4000.0;
  // Seed for every stochastic stage (currently the background model).
  std::uint64_t rng_seed = 0;

  BlurParams blur;
  KnnParams knn;
  // Radius of the opening applied to raw foreground masks.
  int morph_radius = 1;

  FlowStatsMode flow_stats = FlowStatsMode::cartesian_mean;
  IntervalMode interval_mode = IntervalMode::direct;
  // Numerator for IntervalMode::inverse: interval = round(inverse_scale / s).
  double inverse_scale = 8.0;

  // Throws UsageError on any out-of-range field.
  void validate() const;
};

}  // namespace mw
