#pragma once

#include <array>
#include <string>
#include <vector>

#include "ii/core.hpp"

namespace ii {

enum class Encoder { SI, GAF, MTF, RP };
enum class Filter { none, prewitt, highboost };
enum class ChannelMode { triplet_rgb, gray3 };

std::string to_string(Encoder e);
std::string to_string(Filter f);
std::string to_string(ChannelMode m);
Encoder encoder_from_string(const std::string& s);
Filter filter_from_string(const std::string& s);
ChannelMode channel_mode_from_string(const std::string& s);

// H x W x 3 image of unit-interval intensities with provenance metadata.
// Pixels are stored row-major, channel-interleaved.
struct ActivityImage {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;   // height * width * 3
  Encoder encoder = Encoder::SI;
  Filter filter = Filter::none;
  std::string source_id;

  double at(int r, int c, int ch) const { return pixels[(static_cast<std::size_t>(r) * width + c) * 3 + ch]; }
  double& at(int r, int c, int ch) { return pixels[(static_cast<std::size_t>(r) * width + c) * 3 + ch]; }

  static ActivityImage zeros(int h, int w);
  // Throws unless H,W >= 1 and every pixel is finite and in [0,1].
  void validate() const;
};

// Gramian angular field, summation form. g[l][k] = cos(phi[l] + phi[k]).
struct GafMatrix {
  Eigen::MatrixXd g;      // n x n, values in [-1,1], symmetric
  Eigen::VectorXd phi;    // n angles in [0,pi]
  int span = 0;           // the constant N regularizing the polar radius; set to n

  // Polar radius of the l-th time stamp, t_l / N with t_l = l+1.
  double radius(int l) const { return static_cast<double>(l + 1) / span; }
};

// Markov transition field. w is the row-normalized Q x Q bin transition
// matrix, m spreads w over all time-point pairs.
struct MtfMatrix {
  Eigen::MatrixXd m;        // n x n, entries in [0,1]
  Eigen::MatrixXd w;        // Q x Q, nonzero rows sum to 1
  Eigen::VectorXd bin_edges;  // Q+1 values: min, interior quantile edges, max
  std::vector<int> bin_of;  // length n, bin index per sample
};

// Recurrence plot: thresholded pairwise distance matrix.
struct RpMatrix {
  Eigen::MatrixXd r;     // n x n, entries in {0,1}, symmetric
  double epsilon = 0.0;
};

// Row-stacking order of the six sensor channels (1-based channel ids). Each
// channel neighbors every other channel, giving a 24-row image.
const std::array<int, 24>& signal_image_row_order();

// The 24 x T stacked matrix before per-row rescaling.
Eigen::MatrixXd signal_image_stack(const Eigen::MatrixXd& window);

// Signal image of a six-channel window: 24 rows in the fixed stacking order,
// each row independently rescaled to [0,1], replicated to 3 channels.
ActivityImage encode_signal_image(const MultiSeries& s, int length = 52);

// GAF of a raw series: rescale to [0,1], encode values as angular cosines,
// build the pairwise angle-sum cosine matrix via its product form.
GafMatrix encode_gaf(const Eigen::VectorXd& series);

// MTF of a raw series with Q quantile bins. Bin edges are empirical quantiles
// (rank-based, ties keep equal values in one bin); w counts first-order
// transitions between consecutive samples and row-normalizes; zero rows stay
// zero; m[i][j] = w[bin_of[i]][bin_of[j]].
MtfMatrix encode_mtf(const Eigen::VectorXd& series, int num_bins = 10);

// RP over all channels jointly: r[i][j] = 1 iff ||row_i - row_j||_2 <= epsilon.
// Zero distance at zero epsilon still recurs (theta(0) = 1).
RpMatrix encode_rp(const Eigen::MatrixXd& window, double epsilon);

// Threshold choice for RP: the pct-th percentile of the off-diagonal pairwise
// distances of the window (linear interpolation between order statistics).
double epsilon_from_percentile(const Eigen::MatrixXd& window, double pct = 20.0);

// Unit-interval planes of the raw encodings (GAF maps [-1,1] onto [0,1]).
Eigen::MatrixXd unit_plane(const GafMatrix& gaf);
Eigen::MatrixXd unit_plane(const MtfMatrix& mtf);
Eigen::MatrixXd unit_plane(const RpMatrix& rp);

// gray3: one plane replicated into all three channels.
// triplet_rgb: six planes, channels 1-3 as RGB of the left tile and 4-6 as
// RGB of the right tile, giving an n x 2n x 3 image.
ActivityImage to_activity_image(const std::vector<Eigen::MatrixXd>& planes, ChannelMode mode,
                                Encoder encoder, const std::string& source_id);

ActivityImage to_activity_image(const GafMatrix& gaf, ChannelMode mode, const std::string& source_id);
ActivityImage to_activity_image(const MtfMatrix& mtf, ChannelMode mode, const std::string& source_id);
ActivityImage to_activity_image(const RpMatrix& rp, ChannelMode mode, const std::string& source_id);

struct EncoderParams {
  int mtf_bins = 10;
  double rp_epsilon_pct = 20.0;
  ChannelMode mode = ChannelMode::triplet_rgb;
};

// Dispatch one window through the chosen encoder. gray3 reduces multichannel
// windows to the per-row magnitude series for GAF/MTF; RP always uses the
// window as a d-dimensional trajectory in gray3 mode and per-channel
// trajectories in triplet mode. SI ignores the channel mode.
ActivityImage encode_window(const MultiSeries& window, Encoder encoder, const EncoderParams& params);

}  // namespace ii
