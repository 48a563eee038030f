#include "ii/imaging.hpp"

#include <algorithm>
#include <cmath>

namespace ii {

Kernel3x3 prewitt_kernel() {
  Kernel3x3 k;
  k.name = "prewitt";
  k.weights = {1, 1, 1, 0, 0, 0, -1, -1, -1};
  return k;
}

Kernel3x3 highboost_kernel(double amplification) {
  Kernel3x3 k;
  k.name = "highboost";
  k.weights.fill(-1.0);
  k.at(1, 1) = amplification - 1.0;
  return k;
}

Eigen::MatrixXd correlate3x3(const Eigen::MatrixXd& plane, const Kernel3x3& k) {
  const int h = static_cast<int>(plane.rows());
  const int w = static_cast<int>(plane.cols());
  if (h < 1 || w < 1) throw ShapeError("cannot convolve an empty plane");

  Eigen::MatrixXd out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        const int rr = std::clamp(r + dr, 0, h - 1);
        for (int dc = -1; dc <= 1; ++dc) {
          const int cc = std::clamp(c + dc, 0, w - 1);
          acc += k.at(dr + 1, dc + 1) * plane(rr, cc);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ActivityImage convolve3x3(const ActivityImage& img, const Kernel3x3& k) {
  img.validate();
  ActivityImage out = img;

  std::array<Eigen::MatrixXd, 3> responses;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int ch = 0; ch < 3; ++ch) {
    Eigen::MatrixXd plane(img.height, img.width);
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c < img.width; ++c) plane(r, c) = img.at(r, c, ch);
    responses[ch] = correlate3x3(plane, k);
    lo = std::min(lo, responses[ch].minCoeff());
    hi = std::max(hi, responses[ch].maxCoeff());
  }

  // Joint min-max over all channels keeps relative channel intensity intact.
  for (int ch = 0; ch < 3; ++ch) {
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        const double v = hi > lo ? (responses[ch](r, c) - lo) / (hi - lo) : 0.5;
        out.at(r, c, ch) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return out;
}

ActivityImage prewitt_modality(const ActivityImage& img) {
  ActivityImage out = convolve3x3(img, prewitt_kernel());
  out.filter = Filter::prewitt;
  return out;
}

ActivityImage highboost_modality(const ActivityImage& img) {
  ActivityImage out = convolve3x3(img, highboost_kernel());
  out.filter = Filter::highboost;
  return out;
}

namespace {

// Catmull-Rom cubic, a = -0.5.
double cubic_weight(double x) {
  x = std::abs(x);
  if (x <= 1.0) return ((1.5 * x - 2.5) * x) * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

struct TapSet {
  std::array<int, 4> idx;
  std::array<double, 4> w;
};

// Sample positions and weights along one axis with half-pixel centers and
// replicate borders.
std::vector<TapSet> make_taps(int in_size, int out_size) {
  std::vector<TapSet> taps(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  for (int o = 0; o < out_size; ++o) {
    const double src = (o + 0.5) * scale - 0.5;
    const double base = std::floor(src);
    const double t = src - base;
    for (int j = 0; j < 4; ++j) {
      taps[o].idx[j] = std::clamp(static_cast<int>(base) + j - 1, 0, in_size - 1);
      taps[o].w[j] = cubic_weight(t - (j - 1));
    }
  }
  return taps;
}

// Weighted sum evaluated as deltas around the floor neighbor. The weights sum
// to one, so constant input reproduces bit-exactly.
double apply_taps(const TapSet& t, const double* v) {
  const double anchor = v[1];
  return anchor + t.w[0] * (v[0] - anchor) + t.w[2] * (v[2] - anchor) + t.w[3] * (v[3] - anchor);
}

}  // namespace

ActivityImage resize_bicubic(const ActivityImage& img, int out_h, int out_w) {
  img.validate();
  if (out_h < 1 || out_w < 1) throw ShapeError("resize target must be at least 1x1");

  const auto col_taps = make_taps(img.width, out_w);
  const auto row_taps = make_taps(img.height, out_h);

  ActivityImage out = ActivityImage::zeros(out_h, out_w);
  out.encoder = img.encoder;
  out.filter = img.filter;
  out.source_id = img.source_id;

  // Horizontal pass into an intermediate, then vertical.
  std::vector<double> mid(static_cast<std::size_t>(img.height) * out_w * 3);
  auto mid_at = [&](int r, int c, int ch) -> double& {
    return mid[(static_cast<std::size_t>(r) * out_w + c) * 3 + ch];
  };
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < out_w; ++c) {
      const TapSet& taps = col_taps[c];
      for (int ch = 0; ch < 3; ++ch) {
        double v[4];
        for (int j = 0; j < 4; ++j) v[j] = img.at(r, taps.idx[j], ch);
        mid_at(r, c, ch) = apply_taps(taps, v);
      }
    }
  }
  for (int r = 0; r < out_h; ++r) {
    const TapSet& taps = row_taps[r];
    for (int c = 0; c < out_w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double v[4];
        for (int j = 0; j < 4; ++j) v[j] = mid_at(taps.idx[j], c, ch);
        out.at(r, c, ch) = std::clamp(apply_taps(taps, v), 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace ii
