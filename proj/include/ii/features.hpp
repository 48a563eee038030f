#pragma once

#include <string>
#include <vector>

#include "ii/encoders.hpp"

namespace ii {

// n samples by p feature dimensions with an aligned label vector.
struct FeatureMatrix {
  Eigen::MatrixXd x;          // n x p
  std::vector<int> labels;    // length n, -1 = unlabeled
  std::string modality_tag;

  int rows() const { return static_cast<int>(x.rows()); }
  int dims() const { return static_cast<int>(x.cols()); }

  void validate() const;
  FeatureMatrix subset(const std::vector<int>& row_indices) const;
};

// Deterministic hand-crafted descriptor: bicubic resize to 56x56, a 7x7 grid
// of 8x8 average pools per channel (147 dims), then per-channel mean and
// standard deviation (6 dims), p = 153.
FeatureMatrix baseline_extract(const std::vector<ActivityImage>& images,
                               const std::vector<int>& labels, const std::string& modality_tag);
FeatureMatrix baseline_extract(const std::vector<ActivityImage>& images);

// Validates that the three per-modality runs are row- and label-aligned and
// returns them in the fixed order [base, prewitt, highboost].
std::vector<FeatureMatrix> stack_modalities(std::vector<FeatureMatrix> runs);

constexpr int kBaselineFeatureDims = 153;

}  // namespace ii
