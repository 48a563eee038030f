#pragma once

// Shared helpers for the test suites: deterministic generators, temp-dir
// scaffolding, and independently implemented oracles the library is checked
// against.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ii/core.hpp"
#include "ii/encoders.hpp"
#include "ii/features.hpp"

namespace support {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// deterministic randomness

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller on top of the raw engine so values do not depend on any
// library's distribution internals.
class Gauss {
 public:
  explicit Gauss(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01(rng_);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool have_ = false;
  double spare_ = 0.0;
};

inline Eigen::VectorXd random_series(std::mt19937_64& rng, int n, double lo = -5.0,
                                     double hi = 5.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols,
                                     double lo = -5.0, double hi = 5.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = uniform(rng, lo, hi);
  return m;
}

inline ii::ActivityImage random_image(std::mt19937_64& rng, int h, int w) {
  ii::ActivityImage img = ii::ActivityImage::zeros(h, w);
  for (auto& p : img.pixels) p = uniform01(rng);
  return img;
}

// ---------------------------------------------------------------------------
// filesystem scaffolding

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("ii_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
            std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path path;
};

inline void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p);
  os << body;
}

inline std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Writes a small but learnable sensor dataset (class-dependent sinusoids plus
// noise) and returns the manifest path.
inline std::filesystem::path make_sensor_dataset(const std::filesystem::path& dir,
                                                 int classes = 3, int per_class = 4,
                                                 int steps = 104, int channels = 6) {
  std::string manifest = "rate_hz: 50\n";
  for (int k = 0; k < classes; ++k) manifest += "class: c" + std::to_string(k) + "\n";
  char cell[32];
  for (int k = 0; k < classes; ++k) {
    for (int s = 0; s < per_class; ++s) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(k) * 1000 + s + 1);
      const double phase = uniform(rng, 0.0, 2.0 * kPi);
      const double freq = 1.0 + k;
      const double amp = 0.5 + 0.4 * k;
      std::string body;
      for (int t = 0; t < steps; ++t) {
        for (int c = 0; c < channels; ++c) {
          const double v = amp * std::sin(2.0 * kPi * freq * t / 50.0 + phase + c) +
                           0.1 * uniform(rng, -1.0, 1.0);
          std::snprintf(cell, sizeof(cell), "%.6f", v);
          body += cell;
          body += (c + 1 < channels) ? ',' : '\n';
        }
      }
      const std::string name = "c" + std::to_string(k) + "_" + std::to_string(s) + ".csv";
      write_text(dir / name, body);
      manifest += name + "," + std::to_string(k) + ",s" + std::to_string(s) + "\n";
    }
  }
  const std::filesystem::path mpath = dir / "manifest.txt";
  write_text(mpath, manifest);
  return mpath;
}

// ---------------------------------------------------------------------------
// oracles

// Angle-sum cosine matrix computed the long way round.
inline Eigen::MatrixXd gaf_bruteforce(const Eigen::VectorXd& raw) {
  const ii::RescaledSeries rs = ii::rescale_unit(raw);
  const int n = static_cast<int>(rs.values.size());
  Eigen::VectorXd phi(n);
  for (int i = 0; i < n; ++i) phi(i) = std::acos(rs.values(i));
  Eigen::MatrixXd g(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) g(l, k) = std::cos(phi(l) + phi(k));
  return g;
}

inline double naive_row_distance(const Eigen::MatrixXd& m, int i, int j) {
  double acc = 0.0;
  for (int c = 0; c < m.cols(); ++c) {
    const double d = m(i, c) - m(j, c);
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Minimum infeasibility of y_i (w . x_i + b) >= 1 over (w, b): phase-1
// simplex on min s subject to y_i (w . x_i + b) + s >= 1, s >= 0. The result
// is 0 for strictly separable data and >= 1 otherwise.
inline double lp_min_infeasibility(const Eigen::MatrixXd& x, const std::vector<int>& y_pm) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  const int nv = 2 * d + 3;  // w+, w-, b+, b-, s
  const int scol = nv - 1;
  const int ncols = nv + n;  // plus one slack per row

  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(n + 1, ncols + 1);
  for (int i = 0; i < n; ++i) {
    const double y = y_pm[i] > 0 ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j) {
      tab(i, j) = -y * x(i, j);
      tab(i, d + j) = y * x(i, j);
    }
    tab(i, 2 * d) = -y;
    tab(i, 2 * d + 1) = y;
    tab(i, scol) = -1.0;
    tab(i, nv + i) = 1.0;
    tab(i, ncols) = -1.0;
  }
  tab(n, scol) = 1.0;  // objective: minimize s

  std::vector<int> basis(n);
  for (int i = 0; i < n; ++i) basis[i] = nv + i;

  const auto pivot = [&](int pr, int pc) {
    tab.row(pr) /= tab(pr, pc);
    for (int r = 0; r <= n; ++r)
      if (r != pr && tab(r, pc) != 0.0) tab.row(r) -= tab(r, pc) * tab.row(pr);
    basis[pr] = pc;
  };

  // s appears with coefficient -1 in every row, so one pivot makes every
  // right-hand side non-negative.
  pivot(0, scol);

  for (int iter = 0; iter < 50000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j)
      if (tab(n, j) < -1e-9) {
        enter = j;  // Bland's rule: lowest eligible index
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < n; ++r) {
      if (tab(r, enter) > 1e-9) {
        const double ratio = tab(r, ncols) / tab(r, enter);
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded; cannot happen for this program
    pivot(leave, enter);
  }
  return -tab(n, ncols);
}

inline bool lp_separable(const Eigen::MatrixXd& x, const std::vector<int>& y_pm) {
  return lp_min_infeasibility(x, y_pm) <= 1e-9;
}

// Best correlation between one-dimensional projections of two 2-column sets,
// found by scanning direction angles on a dense grid.
inline double cca_best_corr_grid(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                 int steps = 3600) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  const Eigen::Matrix2d sxx = xc.transpose() * xc;
  const Eigen::Matrix2d syy = yc.transpose() * yc;
  const Eigen::Matrix2d sxy = xc.transpose() * yc;

  std::vector<Eigen::Vector2d> dirs(steps);
  std::vector<double> vx(steps), vy(steps);
  std::vector<Eigen::RowVector2d> cross(steps);
  for (int i = 0; i < steps; ++i) {
    const double theta = kPi * i / steps;  // directions modulo sign
    dirs[i] << std::cos(theta), std::sin(theta);
    vx[i] = dirs[i].dot(sxx * dirs[i]);
    vy[i] = dirs[i].dot(syy * dirs[i]);
    cross[i] = dirs[i].transpose() * sxy;
  }

  double best = 0.0;
  for (int ia = 0; ia < steps; ++ia) {
    if (vx[ia] <= 0.0) continue;
    for (int ib = 0; ib < steps; ++ib) {
      if (vy[ib] <= 0.0) continue;
      const double cov = cross[ia].dot(dirs[ib]);
      const double corr = std::abs(cov) / std::sqrt(vx[ia] * vy[ib]);
      if (corr > best) best = corr;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// synthetic datasets

// Two-dimensional blobs, one square cloud per center; labels by center index.
inline ii::FeatureMatrix make_blobs(const std::vector<Eigen::Vector2d>& centers,
                                    int per_class, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ii::FeatureMatrix fm;
  const int n = static_cast<int>(centers.size()) * per_class;
  fm.x.resize(n, 2);
  fm.labels.resize(n);
  int row = 0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    for (int i = 0; i < per_class; ++i, ++row) {
      fm.x(row, 0) = centers[k](0) + uniform(rng, -radius, radius);
      fm.x(row, 1) = centers[k](1) + uniform(rng, -radius, radius);
      fm.labels[row] = static_cast<int>(k);
    }
  }
  fm.modality_tag = "blobs";
  return fm;
}

// Three noisy views of one latent class signal. Every view sees the same
// latent sample corrupted by its own independent noise, then projected through
// a fixed view-specific map. Correlating the views isolates the shared
// (class-bearing) directions, so fusing them averages the per-view noise away
// while no single view can.
struct FusionData {
  ii::FeatureMatrix base;
  ii::FeatureMatrix prewitt;
  ii::FeatureMatrix highboost;
};

struct FusionDataParams {
  int classes = 5;
  int per_class = 60;
  int latent_dims = 6;
  int obs_dims = 16;
  double class_sep = 1.0;
  double latent_noise = 0.3;  // shared across views; fusion cannot remove it
  double obs_noise = 1.0;     // independent per view; fusion averages it away
};

inline FusionData make_fusion_dataset(std::uint64_t seed, const FusionDataParams& p = {}) {
  Gauss g(seed);
  const int n = p.classes * p.per_class;

  std::vector<Eigen::VectorXd> centers(p.classes);
  for (auto& c : centers) {
    c.resize(p.latent_dims);
    for (int i = 0; i < p.latent_dims; ++i) c(i) = p.class_sep * g();
  }

  std::vector<Eigen::MatrixXd> proj(3);
  for (auto& m : proj) {
    m.resize(p.latent_dims, p.obs_dims);
    for (int r = 0; r < p.latent_dims; ++r)
      for (int c = 0; c < p.obs_dims; ++c) m(r, c) = g() / std::sqrt(double(p.latent_dims));
  }

  FusionData out;
  ii::FeatureMatrix* views[3] = {&out.base, &out.prewitt, &out.highboost};
  const char* tags[3] = {"base", "prewitt", "highboost"};
  for (int v = 0; v < 3; ++v) {
    views[v]->x.resize(n, p.obs_dims);
    views[v]->labels.resize(n);
    views[v]->modality_tag = tags[v];
  }

  Eigen::VectorXd z(p.latent_dims);
  Eigen::VectorXd zv(p.latent_dims);
  int row = 0;
  for (int k = 0; k < p.classes; ++k) {
    for (int i = 0; i < p.per_class; ++i, ++row) {
      for (int j = 0; j < p.latent_dims; ++j) z(j) = centers[k](j) + p.latent_noise * g();
      for (int v = 0; v < 3; ++v) {
        for (int j = 0; j < p.latent_dims; ++j) zv(j) = z(j) + p.obs_noise * g();
        Eigen::RowVectorXd obs = zv.transpose() * proj[v];
        for (int j = 0; j < p.obs_dims; ++j) obs(j) += 0.1 * g();
        views[v]->x.row(row) = obs;
        views[v]->labels[row] = k;
      }
    }
  }
  return out;
}

}  // namespace support
