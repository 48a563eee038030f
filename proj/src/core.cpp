#include "ii/core.hpp"

#include <algorithm>

namespace ii {

void MultiSeries::validate() const {
  if (rows() < 2) throw InvalidSeries("series needs at least 2 rows, got " + std::to_string(rows()));
  if (cols() < 1) throw InvalidSeries("series needs at least 1 channel");
  if (!values.allFinite()) throw InvalidSeries("non-finite value in series '" + sample_id + "'");
  if (!(rate_hz > 0.0)) throw InvalidSeries("rate_hz must be positive");
}

std::vector<int> LabeledDataset::labels() const {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].label;
  return out;
}

RescaledSeries rescale_unit(const Eigen::VectorXd& series) {
  if (series.size() < 1) throw InvalidSeries("cannot rescale an empty series");
  if (!series.allFinite()) throw InvalidSeries("non-finite value in series");

  RescaledSeries out;
  out.min_raw = series.minCoeff();
  out.max_raw = series.maxCoeff();
  if (out.max_raw > out.min_raw) {
    out.values = (series.array() - out.min_raw) / (out.max_raw - out.min_raw);
  } else {
    // Constant series: center the encoding instead of dividing by zero.
    out.values = Eigen::VectorXd::Constant(series.size(), 0.5);
  }
  return out;
}

std::vector<int> window_offsets(int total, int length, int stride) {
  std::vector<int> offsets;
  if (total < length) {
    offsets.push_back(0);
    return offsets;
  }
  for (int k = 0; k * stride <= total - length; ++k) offsets.push_back(k * stride);
  if (offsets.back() != total - length) offsets.push_back(total - length);
  return offsets;
}

std::vector<MultiSeries> window_series(const MultiSeries& s, int length, int stride) {
  if (length < 2) throw RangeError("window length must be >= 2");
  if (stride < 1) throw RangeError("window stride must be >= 1");
  s.validate();

  const int total = s.rows();
  const int channels = s.cols();
  std::vector<MultiSeries> windows;

  for (int offset : window_offsets(total, length, stride)) {
    MultiSeries w;
    w.rate_hz = s.rate_hz;
    w.channel_names = s.channel_names;
    w.label = s.label;
    w.sample_id = s.sample_id;
    w.values.resize(length, channels);
    for (int r = 0; r < length; ++r) {
      const int src = std::min(offset + r, total - 1);  // edge replication past the end
      w.values.row(r) = s.values.row(src);
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace ii
