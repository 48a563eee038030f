#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ii/error.hpp"

namespace ii {

// One recorded sample: T x C matrix of sensor readings (rows are time steps,
// columns are channels) plus sampling rate and an optional class label.
struct MultiSeries {
  Eigen::MatrixXd values;                   // T x C
  double rate_hz = 0.0;
  std::vector<std::string> channel_names;   // empty or size C
  int label = -1;                           // -1 = unlabeled
  std::string sample_id;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }

  // Throws InvalidSeries unless T >= 2, C >= 1, all values finite, rate_hz > 0.
  void validate() const;
};

// A series mapped onto [0,1] together with the affine map that produced it.
struct RescaledSeries {
  Eigen::VectorXd values;   // in [0,1]
  double min_raw = 0.0;
  double max_raw = 0.0;

  // Inverse of the recorded map. Identity-like when max_raw == min_raw.
  double unscale(double v) const {
    return max_raw > min_raw ? min_raw + v * (max_raw - min_raw) : min_raw;
  }
};

struct LabeledDataset {
  std::vector<MultiSeries> samples;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::vector<int> labels() const;
};

// Affine map of a series onto [0,1]. A constant series maps to all 0.5 so that
// downstream arccos encoding stays defined and centered.
RescaledSeries rescale_unit(const Eigen::VectorXd& series);

// Fixed-length windows at offsets 0, stride, 2*stride, ... while they fit,
// plus a final flush window at offset T-length when the tail would otherwise
// be dropped. A series shorter than `length` yields one window padded by edge
// replication. Labels and metadata are inherited.
std::vector<MultiSeries> window_series(const MultiSeries& s, int length, int stride);

// Window start offsets for a series of `total` rows under the rule above.
std::vector<int> window_offsets(int total, int length, int stride);

}  // namespace ii
