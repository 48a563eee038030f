#include "ii/features.hpp"

#include <cmath>

#include "ii/imaging.hpp"

namespace ii {

void FeatureMatrix::validate() const {
  if (rows() < 1 || dims() < 1) throw ShapeError("feature matrix must be at least 1x1");
  if (!x.allFinite()) throw ShapeError("non-finite value in feature matrix");
  if (labels.size() != static_cast<std::size_t>(rows()))
    throw AlignmentError("label vector length does not match feature rows");
}

FeatureMatrix FeatureMatrix::subset(const std::vector<int>& row_indices) const {
  FeatureMatrix out;
  out.modality_tag = modality_tag;
  out.x.resize(static_cast<int>(row_indices.size()), dims());
  out.labels.resize(row_indices.size());
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    const int r = row_indices[i];
    if (r < 0 || r >= rows()) throw RangeError("subset row index out of range");
    out.x.row(static_cast<int>(i)) = x.row(r);
    out.labels[i] = labels[r];
  }
  return out;
}

namespace {

constexpr int kPoolInput = 56;  // resize target
constexpr int kGrid = 7;        // 7x7 cells of 8x8 pixels

void extract_one(const ActivityImage& img, double* out) {
  ActivityImage small = resize_bicubic(img, kPoolInput, kPoolInput);
  int k = 0;
  for (int ch = 0; ch < 3; ++ch) {
    for (int gy = 0; gy < kGrid; ++gy) {
      for (int gx = 0; gx < kGrid; ++gx) {
        double acc = 0.0;
        for (int r = 0; r < 8; ++r)
          for (int c = 0; c < 8; ++c) acc += small.at(gy * 8 + r, gx * 8 + c, ch);
        out[k++] = acc / 64.0;
      }
    }
  }
  for (int ch = 0; ch < 3; ++ch) {
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < kPoolInput; ++r) {
      for (int c = 0; c < kPoolInput; ++c) {
        const double v = small.at(r, c, ch);
        sum += v;
        sumsq += v * v;
      }
    }
    const double n = static_cast<double>(kPoolInput) * kPoolInput;
    const double mean = sum / n;
    out[k] = mean;
    out[k + 3] = std::sqrt(std::max(0.0, sumsq / n - mean * mean));
    ++k;
  }
}

}  // namespace

FeatureMatrix baseline_extract(const std::vector<ActivityImage>& images,
                               const std::vector<int>& labels, const std::string& modality_tag) {
  if (images.empty()) throw ShapeError("baseline_extract needs at least one image");
  if (!labels.empty() && labels.size() != images.size())
    throw AlignmentError("label count does not match image count");

  const int h = images.front().height;
  const int w = images.front().width;
  for (const auto& img : images)
    if (img.height != h || img.width != w)
      throw ShapeError("baseline_extract requires uniform image sizes");

  FeatureMatrix fm;
  fm.modality_tag = modality_tag;
  fm.x.resize(static_cast<int>(images.size()), kBaselineFeatureDims);
  fm.labels = labels.empty() ? std::vector<int>(images.size(), -1) : labels;
  double buf[kBaselineFeatureDims];
  for (std::size_t i = 0; i < images.size(); ++i) {
    extract_one(images[i], buf);
    fm.x.row(static_cast<int>(i)) = Eigen::Map<Eigen::RowVectorXd>(buf, kBaselineFeatureDims);
  }
  return fm;
}

FeatureMatrix baseline_extract(const std::vector<ActivityImage>& images) {
  return baseline_extract(images, {}, "");
}

std::vector<FeatureMatrix> stack_modalities(std::vector<FeatureMatrix> runs) {
  if (runs.size() != 3)
    throw AlignmentError("expected the three modalities [base, prewitt, highboost], got " +
                         std::to_string(runs.size()));
  for (auto& fm : runs) fm.validate();
  const auto& ref = runs.front();
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].rows() != ref.rows())
      throw AlignmentError("modalities disagree on sample count");
    if (runs[i].labels != ref.labels)
      throw AlignmentError("modalities disagree on labels");
  }
  return runs;
}

}  // namespace ii
