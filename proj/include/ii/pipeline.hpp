#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ii/classify.hpp"
#include "ii/encoders.hpp"
#include "ii/features.hpp"
#include "ii/ingest.hpp"

namespace ii {

struct PipelineConfig {
  std::string encoder = "si";
  int window_length = 52;
  int window_stride = 52;
  int mtf_bins = 10;
  double rp_epsilon_pct = 20.0;
  std::string channel_mode = "triplet-rgb";
  int resize_h = 224;
  int resize_w = 224;
  int cca_dim = -1;
  double cca_ridge = 1e-4;
  double svm_c = 1.0;
  int svm_epochs = 200;
  int repeats = 20;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string manifest;
  std::string outdir;
  std::string features_dir;
};

// Assigns one `key = value` pair; unknown keys and unparsable values raise
// ConfigError.
void set_config_key(PipelineConfig& cfg, const std::string& key, const std::string& value);

// Applies a line-oriented `key = value` file ('#' starts a comment) on top of
// whatever cfg already holds.
void merge_config_file(PipelineConfig& cfg, const std::filesystem::path& path);
PipelineConfig load_config_file(const std::filesystem::path& path);

// Echo of every key; feeding each line back through set_config_key
// reproduces the configuration exactly.
std::string print_config(const PipelineConfig& cfg);

// Range and enum checks for every field; ConfigError on violation.
void validate_config(const PipelineConfig& cfg);

// II_SEED, when set, wins over config file and flags.
void apply_env_seed(PipelineConfig& cfg);

EncoderParams encoder_params(const PipelineConfig& cfg);

// One encoded window of one recording, all three modalities at the encoder's
// native resolution.
struct WindowRecord {
  int sample_index = 0;  // position in the manifest
  int window_index = 0;
  std::string sample_id;
  int label = -1;
  ActivityImage base;
  ActivityImage prewitt;
  ActivityImage highboost;
};

// Encodes every window of every manifest entry; deterministic order
// (manifest order, then window offset).
std::vector<WindowRecord> encode_dataset(const LabeledDataset& ds, const PipelineConfig& cfg);

struct EncodeResult {
  int images_written = 0;
  std::filesystem::path index_path;
};

// Writes one PNG per window per modality (resized to resize_h x resize_w)
// plus an index CSV into outdir.
EncodeResult run_encode(const PipelineConfig& cfg);

struct ModalityFeatures {
  FeatureMatrix base;
  FeatureMatrix prewitt;
  FeatureMatrix highboost;
  std::vector<int> groups;  // sample index per row
};

ModalityFeatures extract_features(const std::vector<WindowRecord>& records,
                                  const PipelineConfig& cfg);

struct PipelineResult {
  RepeatedReport fused;
  RepeatedReport base;
  RepeatedReport prewitt;
  RepeatedReport highboost;
  std::filesystem::path report_path;
  std::filesystem::path confusion_path;
};

// Full chain: ingest, encode (PNG export), extract (ITNS export), then
// repeated split evaluation of the fused features against each single
// modality. With features_dir set, the three feature matrices are imported
// instead of computed and the image stage is skipped.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace ii
