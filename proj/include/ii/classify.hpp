#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ii/features.hpp"
#include "ii/fusion.hpp"

namespace ii {

// One-vs-rest linear SVM. Inputs are standardized per dimension before
// training; the standardization parameters travel with the model.
struct SvmModel {
  Eigen::MatrixXd w;             // K x d
  Eigen::VectorXd bias;          // K
  Eigen::RowVectorXd feat_mean;  // d
  Eigen::RowVectorXd feat_std;   // d, never zero
  double reg_c = 1.0;

  int num_classes() const { return static_cast<int>(w.rows()); }
  int dims() const { return static_cast<int>(w.cols()); }
};

SvmModel svm_train(const FeatureMatrix& fm, double reg_c = 1.0, int epochs = 200,
                   std::uint64_t seed = 0, int jobs = 1);

// Raw per-class decision scores for each row.
Eigen::MatrixXd svm_scores(const SvmModel& model, const Eigen::MatrixXd& x);

// Argmax over class scores; ties resolve to the lowest class id.
std::vector<int> svm_predict(const SvmModel& model, const FeatureMatrix& fm);
std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& x);

void save_svm(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm(const std::filesystem::path& path);

struct EvalReport {
  double accuracy = 0.0;
  std::vector<double> precision_per_class;
  double macro_precision = 0.0;
  std::vector<std::vector<long long>> confusion;  // [truth][predicted]

  long long total() const;
};

EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth,
                    int num_classes);

std::string report_to_text(const EvalReport& report,
                           const std::vector<std::string>& class_names = {});
void write_confusion_csv(const std::vector<std::vector<long long>>& confusion,
                         const std::vector<std::string>& class_names,
                         const std::filesystem::path& path);

// Aggregate over repeated stratified splits.
struct RepeatedReport {
  std::vector<double> accuracies;        // one per split seed
  std::vector<double> macro_precisions;  // one per split seed
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_macro_precision = 0.0;
  double std_macro_precision = 0.0;
  std::vector<std::vector<long long>> confusion;  // summed over splits

  int repeats() const { return static_cast<int>(accuracies.size()); }
};

struct FusionEvalConfig {
  int cca_dim = -1;
  double cca_ridge = 1e-4;
  double svm_c = 1.0;
  int svm_epochs = 200;
  double train_frac = 0.8;
  int repeats = 20;
  std::uint64_t base_seed = 0;  // split r uses seed base_seed + r
  int jobs = 0;
};

// Repeats a stratified split with seeds 0..repeats-1. `groups[i]` names the
// recording row i came from; all rows of one recording land on the same side
// of every split. Pass an empty vector to treat each row as its own group.
// The fused variant fits the two-stage fusion on training rows only and
// applies the frozen transforms to test rows.
RepeatedReport repeated_fusion_eval(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                                    const FeatureMatrix& highboost,
                                    const std::vector<int>& groups, int num_classes,
                                    const FusionEvalConfig& cfg);

RepeatedReport repeated_single_eval(const FeatureMatrix& fm, const std::vector<int>& groups,
                                    int num_classes, const FusionEvalConfig& cfg);

}  // namespace ii
