#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ii/encoders.hpp"

namespace ii {

struct Kernel3x3 {
  std::array<double, 9> weights{};  // row-major
  std::string name;

  double at(int r, int c) const { return weights[static_cast<std::size_t>(r) * 3 + c]; }
  double& at(int r, int c) { return weights[static_cast<std::size_t>(r) * 3 + c]; }
};

// Horizontal-edge Prewitt kernel: rows (1,1,1), (0,0,0), (-1,-1,-1).
Kernel3x3 prewitt_kernel();

// High-boost sharpening kernel: amplification * identity minus the 3x3 box
// lowpass. The default amplification of 10 gives center 9 and -1 elsewhere.
Kernel3x3 highboost_kernel(double amplification = 10.0);

// Raw 3x3 correlation (kernel applied as written, no flip) of one plane with
// replicate padding at the borders. Output has the same size; values are not
// renormalized.
Eigen::MatrixXd correlate3x3(const Eigen::MatrixXd& plane, const Kernel3x3& k);

// Correlation of every channel followed by a min-max renormalization over the
// whole image so the result lands back in [0,1]. A constant response maps to
// all 0.5.
ActivityImage convolve3x3(const ActivityImage& img, const Kernel3x3& k);

ActivityImage prewitt_modality(const ActivityImage& img);
ActivityImage highboost_modality(const ActivityImage& img);

// Catmull-Rom bicubic resample (a = -0.5) with half-pixel centers, channels
// independent, replicate borders, output clamped to [0,1].
ActivityImage resize_bicubic(const ActivityImage& img, int out_h, int out_w);

// 8-bit RGB PNG. Quantization is round-half-up of v*255; reading maps bytes
// back with v = q/255.
void write_png(const ActivityImage& img, const std::filesystem::path& path);
ActivityImage read_png(const std::filesystem::path& path);

// Dense row-major tensor of 64-bit floats.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> data;

  std::size_t element_count() const;
};

// Raw tensor file: magic "ITNS", version byte (1), rank byte, rank little-
// endian u32 dims, then row-major IEEE-754 doubles, little-endian.
void write_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

}  // namespace ii
