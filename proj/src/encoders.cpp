#include "ii/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ii {

std::string to_string(Encoder e) {
  switch (e) {
    case Encoder::SI: return "si";
    case Encoder::GAF: return "gaf";
    case Encoder::MTF: return "mtf";
    case Encoder::RP: return "rp";
  }
  return "?";
}

std::string to_string(Filter f) {
  switch (f) {
    case Filter::none: return "none";
    case Filter::prewitt: return "prewitt";
    case Filter::highboost: return "highboost";
  }
  return "?";
}

std::string to_string(ChannelMode m) {
  return m == ChannelMode::triplet_rgb ? "triplet-rgb" : "gray3";
}

Encoder encoder_from_string(const std::string& s) {
  if (s == "si") return Encoder::SI;
  if (s == "gaf") return Encoder::GAF;
  if (s == "mtf") return Encoder::MTF;
  if (s == "rp") return Encoder::RP;
  throw ConfigError("unknown encoder '" + s + "' (expected si, gaf, mtf or rp)");
}

Filter filter_from_string(const std::string& s) {
  if (s == "none") return Filter::none;
  if (s == "prewitt") return Filter::prewitt;
  if (s == "highboost") return Filter::highboost;
  throw ConfigError("unknown filter '" + s + "'");
}

ChannelMode channel_mode_from_string(const std::string& s) {
  if (s == "triplet-rgb") return ChannelMode::triplet_rgb;
  if (s == "gray3") return ChannelMode::gray3;
  throw ConfigError("unknown channel mode '" + s + "'");
}

ActivityImage ActivityImage::zeros(int h, int w) {
  ActivityImage img;
  img.height = h;
  img.width = w;
  img.pixels.assign(static_cast<std::size_t>(h) * w * 3, 0.0);
  return img;
}

void ActivityImage::validate() const {
  if (height < 1 || width < 1) throw ShapeError("activity image needs positive dimensions");
  if (pixels.size() != static_cast<std::size_t>(height) * width * 3)
    throw ShapeError("activity image pixel buffer does not match its dimensions");
  for (double v : pixels) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw ShapeError("activity image pixel outside [0,1]");
  }
}

const std::array<int, 24>& signal_image_row_order() {
  static const std::array<int, 24> order = {1, 2, 3, 4, 5, 6, 1, 3, 5, 2, 4, 6,
                                            1, 4, 2, 5, 3, 6, 1, 5, 2, 6, 1, 6};
  return order;
}

Eigen::MatrixXd signal_image_stack(const Eigen::MatrixXd& window) {
  if (window.cols() != 6) throw ChannelCountError("signal image needs exactly 6 channels, got " +
                                                  std::to_string(window.cols()));
  const auto& order = signal_image_row_order();
  Eigen::MatrixXd stacked(24, window.rows());
  for (int r = 0; r < 24; ++r) stacked.row(r) = window.col(order[r] - 1).transpose();
  return stacked;
}

ActivityImage encode_signal_image(const MultiSeries& s, int length) {
  if (s.cols() != 6) throw ChannelCountError("signal image needs exactly 6 channels, got " +
                                             std::to_string(s.cols()));
  if (s.rows() != length)
    throw ShapeError("signal image expects a window of exactly " + std::to_string(length) +
                     " rows, got " + std::to_string(s.rows()) + " (use window_series first)");

  Eigen::MatrixXd stacked = signal_image_stack(s.values);
  ActivityImage img = ActivityImage::zeros(24, length);
  img.encoder = Encoder::SI;
  img.source_id = s.sample_id;
  for (int r = 0; r < 24; ++r) {
    RescaledSeries row = rescale_unit(stacked.row(r).transpose());
    for (int c = 0; c < length; ++c)
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = row.values[c];
  }
  return img;
}

GafMatrix encode_gaf(const Eigen::VectorXd& series) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw ShapeError("GAF needs a series of length >= 2");

  RescaledSeries scaled = rescale_unit(series);
  GafMatrix out;
  out.span = n;
  out.phi = scaled.values.array().acos();

  // Product form of cos(phi_l + phi_k): x_l x_k - sqrt(1-x_l^2) sqrt(1-x_k^2).
  Eigen::VectorXd comp = (1.0 - scaled.values.array().square()).cwiseMax(0.0).sqrt();
  out.g = scaled.values * scaled.values.transpose() - comp * comp.transpose();
  return out;
}

namespace {

// Index of the quantile bin for value x given Q-1 interior edges: the number
// of interior edges <= x. Equal values always share a bin.
int bin_index(double x, const Eigen::VectorXd& interior) {
  int b = 0;
  for (int j = 0; j < interior.size(); ++j)
    if (interior[j] <= x) ++b;
  return b;
}

}  // namespace

MtfMatrix encode_mtf(const Eigen::VectorXd& series, int num_bins) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw ShapeError("MTF needs a series of length >= 2");
  if (num_bins < 2 || num_bins > n)
    throw BinCountError("MTF bin count must satisfy 2 <= Q <= n, got Q=" + std::to_string(num_bins) +
                        " with n=" + std::to_string(n));
  if (!series.allFinite()) throw InvalidSeries("non-finite value in series");

  std::vector<double> sorted(series.data(), series.data() + n);
  std::sort(sorted.begin(), sorted.end());

  // Interior edges at empirical quantiles; bins hold near-equal counts when
  // values are distinct, ties collapse into the same bin.
  Eigen::VectorXd interior(num_bins - 1);
  for (int j = 1; j < num_bins; ++j)
    interior[j - 1] = sorted[static_cast<std::size_t>(j) * n / num_bins];

  MtfMatrix out;
  out.bin_edges.resize(num_bins + 1);
  out.bin_edges[0] = sorted.front();
  out.bin_edges.segment(1, num_bins - 1) = interior;
  out.bin_edges[num_bins] = sorted.back();

  out.bin_of.resize(n);
  for (int i = 0; i < n; ++i)
    out.bin_of[i] = std::min(bin_index(series[i], interior), num_bins - 1);

  out.w = Eigen::MatrixXd::Zero(num_bins, num_bins);
  for (int i = 0; i + 1 < n; ++i) out.w(out.bin_of[i], out.bin_of[i + 1]) += 1.0;
  for (int a = 0; a < num_bins; ++a) {
    double total = out.w.row(a).sum();
    if (total > 0.0) out.w.row(a) /= total;
  }

  out.m.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.m(i, j) = out.w(out.bin_of[i], out.bin_of[j]);
  return out;
}

namespace {

// Left as a plain left-to-right accumulation so the result is reproducible
// independent of Eigen's vectorization choices.
double row_distance(const Eigen::MatrixXd& m, int i, int j) {
  double acc = 0.0;
  for (int c = 0; c < m.cols(); ++c) {
    const double d = m(i, c) - m(j, c);
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

RpMatrix encode_rp(const Eigen::MatrixXd& window, double epsilon) {
  const int n = static_cast<int>(window.rows());
  if (n < 2) throw ShapeError("RP needs a window of at least 2 rows");
  if (!(epsilon >= 0.0)) throw RangeError("RP threshold must be >= 0");

  RpMatrix out;
  out.epsilon = epsilon;
  out.r.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.r(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double dist = row_distance(window, i, j);
      const double hit = dist <= epsilon ? 1.0 : 0.0;
      out.r(i, j) = hit;
      out.r(j, i) = hit;
    }
  }
  return out;
}

double epsilon_from_percentile(const Eigen::MatrixXd& window, double pct) {
  const int n = static_cast<int>(window.rows());
  if (n < 2) throw ShapeError("percentile threshold needs at least 2 rows");
  if (!(pct > 0.0 && pct <= 100.0)) throw RangeError("percentile must be in (0,100]");

  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dists.push_back(row_distance(window, i, j));
  std::sort(dists.begin(), dists.end());

  const double pos = pct / 100.0 * (static_cast<double>(dists.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= dists.size()) return dists.back();
  const double frac = pos - static_cast<double>(lo);
  return dists[lo] + frac * (dists[lo + 1] - dists[lo]);
}

Eigen::MatrixXd unit_plane(const GafMatrix& gaf) { return (gaf.g.array() + 1.0) / 2.0; }
Eigen::MatrixXd unit_plane(const MtfMatrix& mtf) { return mtf.m; }
Eigen::MatrixXd unit_plane(const RpMatrix& rp) { return rp.r; }

namespace {

void paint_plane(ActivityImage& img, const Eigen::MatrixXd& plane, int col_offset, int channel) {
  for (int r = 0; r < plane.rows(); ++r)
    for (int c = 0; c < plane.cols(); ++c)
      img.at(r, col_offset + c, channel) = std::clamp(plane(r, c), 0.0, 1.0);
}

}  // namespace

ActivityImage to_activity_image(const std::vector<Eigen::MatrixXd>& planes, ChannelMode mode,
                                Encoder encoder, const std::string& source_id) {
  if (mode == ChannelMode::gray3) {
    if (planes.size() != 1)
      throw ChannelCountError("gray3 mode expects one plane, got " + std::to_string(planes.size()));
    const Eigen::MatrixXd& p = planes.front();
    if (p.rows() < 1 || p.cols() < 1) throw ShapeError("empty encoding plane");
    ActivityImage img = ActivityImage::zeros(static_cast<int>(p.rows()), static_cast<int>(p.cols()));
    img.encoder = encoder;
    img.source_id = source_id;
    for (int ch = 0; ch < 3; ++ch) paint_plane(img, p, 0, ch);
    return img;
  }

  if (planes.size() != 6)
    throw ChannelCountError("triplet-rgb mode expects six per-channel planes, got " +
                            std::to_string(planes.size()));
  const int n = static_cast<int>(planes.front().rows());
  const int w = static_cast<int>(planes.front().cols());
  for (const auto& p : planes)
    if (p.rows() != n || p.cols() != w) throw ShapeError("per-channel planes differ in size");

  // Acceleration axes become the RGB of the left tile, gyro axes the right.
  ActivityImage img = ActivityImage::zeros(n, 2 * w);
  img.encoder = encoder;
  img.source_id = source_id;
  for (int ch = 0; ch < 3; ++ch) {
    paint_plane(img, planes[ch], 0, ch);
    paint_plane(img, planes[3 + ch], w, ch);
  }
  return img;
}

ActivityImage to_activity_image(const GafMatrix& gaf, ChannelMode mode, const std::string& source_id) {
  if (mode == ChannelMode::triplet_rgb)
    throw ChannelCountError("triplet-rgb needs six per-channel encodings, got one GAF matrix");
  return to_activity_image({unit_plane(gaf)}, mode, Encoder::GAF, source_id);
}

ActivityImage to_activity_image(const MtfMatrix& mtf, ChannelMode mode, const std::string& source_id) {
  if (mode == ChannelMode::triplet_rgb)
    throw ChannelCountError("triplet-rgb needs six per-channel encodings, got one MTF matrix");
  return to_activity_image({unit_plane(mtf)}, mode, Encoder::MTF, source_id);
}

ActivityImage to_activity_image(const RpMatrix& rp, ChannelMode mode, const std::string& source_id) {
  if (mode == ChannelMode::triplet_rgb)
    throw ChannelCountError("triplet-rgb needs six per-channel encodings, got one RP matrix");
  return to_activity_image({unit_plane(rp)}, mode, Encoder::RP, source_id);
}

namespace {

// Per-row L2 magnitude, the gray3 reduction of a multichannel window.
Eigen::VectorXd magnitude_series(const Eigen::MatrixXd& window) {
  return window.rowwise().norm();
}

Eigen::VectorXd gray_series(const Eigen::MatrixXd& window) {
  return window.cols() == 1 ? Eigen::VectorXd(window.col(0)) : magnitude_series(window);
}

}  // namespace

ActivityImage encode_window(const MultiSeries& window, Encoder encoder, const EncoderParams& params) {
  window.validate();
  const Eigen::MatrixXd& v = window.values;

  switch (encoder) {
    case Encoder::SI:
      return encode_signal_image(window, window.rows());

    case Encoder::GAF: {
      if (params.mode == ChannelMode::gray3)
        return to_activity_image(encode_gaf(gray_series(v)), params.mode, window.sample_id);
      if (v.cols() != 6)
        throw ChannelCountError("triplet-rgb GAF needs 6 channels, got " + std::to_string(v.cols()));
      std::vector<Eigen::MatrixXd> planes;
      for (int c = 0; c < 6; ++c) planes.push_back(unit_plane(encode_gaf(v.col(c))));
      return to_activity_image(planes, params.mode, Encoder::GAF, window.sample_id);
    }

    case Encoder::MTF: {
      if (params.mode == ChannelMode::gray3)
        return to_activity_image(encode_mtf(gray_series(v), params.mtf_bins), params.mode,
                                 window.sample_id);
      if (v.cols() != 6)
        throw ChannelCountError("triplet-rgb MTF needs 6 channels, got " + std::to_string(v.cols()));
      std::vector<Eigen::MatrixXd> planes;
      for (int c = 0; c < 6; ++c) planes.push_back(unit_plane(encode_mtf(v.col(c), params.mtf_bins)));
      return to_activity_image(planes, params.mode, Encoder::MTF, window.sample_id);
    }

    case Encoder::RP: {
      if (params.mode == ChannelMode::gray3) {
        const double eps = epsilon_from_percentile(v, params.rp_epsilon_pct);
        return to_activity_image(encode_rp(v, eps), params.mode, window.sample_id);
      }
      if (v.cols() != 6)
        throw ChannelCountError("triplet-rgb RP needs 6 channels, got " + std::to_string(v.cols()));
      std::vector<Eigen::MatrixXd> planes;
      for (int c = 0; c < 6; ++c) {
        Eigen::MatrixXd chan = v.col(c);
        const double eps = epsilon_from_percentile(chan, params.rp_epsilon_pct);
        planes.push_back(unit_plane(encode_rp(chan, eps)));
      }
      return to_activity_image(planes, params.mode, Encoder::RP, window.sample_id);
    }
  }
  throw ConfigError("unhandled encoder");
}

}  // namespace ii
