#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ii/features.hpp"

namespace ii {

// Fitted canonical correlation transform between two feature sets.
// Columns of `a` and `b` are scaled so the canonical variates of the
// training data have unit sample variance.
struct CcaModel {
  Eigen::RowVectorXd mean_x;  // p
  Eigen::RowVectorXd mean_y;  // q
  Eigen::MatrixXd a;          // p x d
  Eigen::MatrixXd b;          // q x d
  Eigen::VectorXd corrs;      // d, descending, in [0,1]
  double ridge = 0.0;

  int dim() const { return static_cast<int>(a.cols()); }
};

// Fits CCA on row-aligned feature matrices. `d` = number of canonical pairs
// to keep; pass -1 for min(p, q, n-1). `ridge` is relative: the ridge added
// to each covariance block is ridge * mean of that block's diagonal.
CcaModel cca_fit(const FeatureMatrix& x, const FeatureMatrix& y, int d = -1,
                 double ridge = 1e-4);

// Projects new rows through a fitted model: X' = (x - mean_x) * a, same for y.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cca_transform(const CcaModel& model,
                                                          const Eigen::MatrixXd& x,
                                                          const Eigen::MatrixXd& y);

// Canonical correlation fusion: Z = X' + Y', labels carried through.
FeatureMatrix ccf_fuse(const Eigen::MatrixXd& xprime, const Eigen::MatrixXd& yprime,
                       const std::vector<int>& labels, const std::string& tag = "ccf");

// Fit + fuse in one call on the fitting data.
FeatureMatrix ccf_fuse_pair(const CcaModel& model, const FeatureMatrix& x,
                            const FeatureMatrix& y, const std::string& tag = "ccf");

// Two-stage fusion over the fixed modality order [base, prewitt, highboost]:
// stage 1 fuses base with prewitt, stage 2 fuses that result with highboost.
struct CcfTwoStage {
  CcaModel stage1;
  CcaModel stage2;
};

CcfTwoStage ccf_two_stage_fit(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                              const FeatureMatrix& highboost, int d = -1,
                              double ridge = 1e-4);

FeatureMatrix ccf_two_stage_apply(const CcfTwoStage& model, const FeatureMatrix& base,
                                  const FeatureMatrix& prewitt,
                                  const FeatureMatrix& highboost);

// Convenience: fit on the given data and return its fused features.
FeatureMatrix ccf_two_stage(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                            const FeatureMatrix& highboost, int d = -1,
                            double ridge = 1e-4);

}  // namespace ii
