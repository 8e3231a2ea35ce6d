#include "mw/config.hpp"

#include "mw/error.hpp"

namespace mw {

void PipelineConfig::validate() const {
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw UsageError("beta must lie strictly between 0 and 1");
  }
  if (flow_frame_distance < 1) {
    throw UsageError("flow frame distance must be >= 1");
  }
  if (flow_window < 3 || flow_window % 2 == 0) {
    throw UsageError("flow window must be odd and >= 3");
  }
  if (interval_min < 1 || interval_max < interval_min) {
    throw UsageError("interval bounds must satisfy 1 <= min <= max");
  }
  if (fallback_interval < interval_min || fallback_interval > interval_max) {
    throw UsageError("fallback interval must lie inside the interval bounds");
  }
  if (trim_count < 0) {
    throw UsageError("trim count must be >= 0");
  }
  if (output_width < 1 || output_height < 1) {
    throw UsageError("output size must be positive");
  }
  if (eigen_threshold < 0.0) {
    throw UsageError("eigen threshold must be >= 0");
  }
  if (blur.kernel < 1 || blur.kernel % 2 == 0) {
    throw UsageError("blur kernel must be odd and positive");
  }
  if (!(blur.sigma > 0.0)) {
    throw UsageError("blur sigma must be positive");
  }
  if (morph_radius < 1) {
    throw UsageError("morphology radius must be >= 1");
  }
  if (interval_mode == IntervalMode::inverse && !(inverse_scale > 0.0)) {
    throw UsageError("inverse interval scale must be positive");
  }
  knn.validate();
}

}  // namespace mw
