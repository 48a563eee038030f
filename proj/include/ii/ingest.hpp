#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ii/core.hpp"
#include "ii/features.hpp"

namespace ii {

struct ManifestEntry {
  std::string path;     // relative to the manifest's directory, or absolute
  int label = -1;
  std::string subject;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> class_names;
  double rate_hz = 0.0;
  std::filesystem::path base_dir;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::filesystem::path resolve(const ManifestEntry& e) const;
};

// One sample per CSV file, one row per time step, comma-separated channels.
// A non-numeric first row is taken as channel names.
MultiSeries load_csv_sample(const std::filesystem::path& path, double rate_hz);

// Line-oriented manifest: a header block of `class: <name>` lines and one
// `rate_hz: <value>` line, then `path,label,subject` entries. '#' starts a
// comment. Validates uniqueness, label ranges, per-class coverage and that
// every referenced file exists.
DatasetManifest load_manifest(const std::filesystem::path& path);

LabeledDataset load_dataset(const DatasetManifest& manifest);

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

// Per-class stratified random split, deterministic for a given seed. Each
// class keeps at least one member on both sides; a class with fewer than two
// members cannot be stratified.
SplitIndices stratified_split_indices(const std::vector<int>& labels, int num_classes,
                                      double train_frac, std::uint64_t seed);

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double train_frac, std::uint64_t seed);

// Feature matrices travel as rank-2 ITNS tensors (rows = samples). Labels are
// not part of the tensor format; imported matrices come back unlabeled.
void export_features(const FeatureMatrix& fm, const std::filesystem::path& path);
FeatureMatrix import_features(const std::filesystem::path& path);

// Plain one-integer-per-line label files used by the standalone CLI stages.
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);
std::vector<int> read_labels(const std::filesystem::path& path);

}  // namespace ii
