#include <random>

#include "doctest.h"
#include "ii/core.hpp"
#include "support.hpp"

using namespace ii;

TEST_SUITE("core") {

TEST_CASE("rescale maps extremes to the unit interval ends") {
  Eigen::VectorXd v(5);
  v << 3.0, -1.0, 7.0, 0.0, 5.0;
  RescaledSeries rs = rescale_unit(v);
  CHECK(rs.min_raw == -1.0);
  CHECK(rs.max_raw == 7.0);
  CHECK(rs.values(1) == 0.0);
  CHECK(rs.values(2) == 1.0);
  CHECK(rs.values(0) == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i < 5; ++i) {
    CHECK(rs.values(i) >= 0.0);
    CHECK(rs.values(i) <= 1.0);
  }
}

TEST_CASE("rescale roundtrip recovers the raw values") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd v = support::random_series(rng, 2 + int(rng() % 60), -20.0, 20.0);
    RescaledSeries rs = rescale_unit(v);
    for (int i = 0; i < v.size(); ++i)
      CHECK(rs.unscale(rs.values(i)) == doctest::Approx(v(i)).epsilon(1e-12));
    CHECK(rs.values.minCoeff() == 0.0);
    CHECK(rs.values.maxCoeff() == 1.0);
  }
}

TEST_CASE("rescale of a constant series centers at one half") {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(7, 4.25);
  RescaledSeries rs = rescale_unit(v);
  for (int i = 0; i < 7; ++i) CHECK(rs.values(i) == 0.5);
  CHECK(rs.unscale(0.5) == 4.25);
}

TEST_CASE("rescale rejects empty and non-finite input") {
  CHECK_THROWS_AS(rescale_unit(Eigen::VectorXd()), InvalidSeries);
  Eigen::VectorXd bad(3);
  bad << 1.0, std::nan(""), 2.0;
  CHECK_THROWS_AS(rescale_unit(bad), InvalidSeries);
}

TEST_CASE("window offsets follow stride with a final flush") {
  CHECK(window_offsets(104, 52, 52) == std::vector<int>{0, 52});
  CHECK(window_offsets(100, 52, 52) == std::vector<int>{0, 48});
  CHECK(window_offsets(52, 52, 52) == std::vector<int>{0});
  CHECK(window_offsets(51, 52, 52) == std::vector<int>{0});  // short series
  CHECK(window_offsets(100, 52, 26) == std::vector<int>{0, 26, 48});
  CHECK(window_offsets(10, 4, 3) == std::vector<int>{0, 3, 6});
  CHECK(window_offsets(11, 4, 3) == std::vector<int>{0, 3, 6, 7});
  CHECK(window_offsets(11, 4, 2) == std::vector<int>{0, 2, 4, 6, 7});
}

TEST_CASE("window offsets always cover both ends") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int length = 2 + int(rng() % 40);
    const int total = length + int(rng() % 100);
    const int stride = 1 + int(rng() % 40);
    const auto offs = window_offsets(total, length, stride);
    REQUIRE(!offs.empty());
    CHECK(offs.front() == 0);
    CHECK(offs.back() == total - length);
    for (std::size_t i = 0; i < offs.size(); ++i) {
      CHECK(offs[i] + length <= total);
      if (i > 0) CHECK(offs[i] > offs[i - 1]);
    }
  }
}

TEST_CASE("window contents match the source blocks") {
  std::mt19937_64 rng(21);
  MultiSeries s;
  s.values = support::random_matrix(rng, 23, 3);
  s.rate_hz = 50.0;
  s.label = 2;
  s.sample_id = "probe";
  const auto windows = window_series(s, 8, 5);
  const auto offs = window_offsets(23, 8, 5);
  REQUIRE(windows.size() == offs.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    CHECK(windows[w].rows() == 8);
    CHECK(windows[w].cols() == 3);
    CHECK(windows[w].label == 2);
    CHECK(windows[w].sample_id == "probe");
    CHECK(windows[w].rate_hz == 50.0);
    CHECK(windows[w].values == s.values.block(offs[w], 0, 8, 3));
  }
}

TEST_CASE("short series pad by edge replication") {
  MultiSeries s;
  s.values.resize(3, 2);
  s.values << 1, 2, 3, 4, 5, 6;
  s.rate_hz = 10.0;
  const auto windows = window_series(s, 6, 6);
  REQUIRE(windows.size() == 1);
  const auto& w = windows[0].values;
  CHECK(w.topRows(3) == s.values);
  for (int r = 3; r < 6; ++r) CHECK(w.row(r) == s.values.row(2));
}

TEST_CASE("series validation rejects malformed input") {
  MultiSeries s;
  s.values.resize(1, 2);
  s.values << 0, 0;
  s.rate_hz = 50.0;
  CHECK_THROWS_AS(s.validate(), InvalidSeries);

  s.values.resize(4, 2);
  s.values.setZero();
  s.rate_hz = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidSeries);

  s.rate_hz = 50.0;
  s.values(2, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(s.validate(), InvalidSeries);

  s.values(2, 1) = 0.0;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("windowing rejects bad length or stride") {
  MultiSeries s;
  s.values = Eigen::MatrixXd::Zero(10, 2);
  s.rate_hz = 50.0;
  CHECK_THROWS_AS(window_series(s, 1, 1), RangeError);
  CHECK_THROWS_AS(window_series(s, 4, 0), RangeError);
}

TEST_CASE("dataset exposes its labels in sample order") {
  LabeledDataset ds;
  ds.class_names = {"a", "b"};
  for (int label : {1, 0, 1}) {
    MultiSeries s;
    s.values = Eigen::MatrixXd::Zero(4, 1);
    s.rate_hz = 1.0;
    s.label = label;
    ds.samples.push_back(s);
  }
  CHECK(ds.num_classes() == 2);
  CHECK(ds.labels() == std::vector<int>{1, 0, 1});
}

}  // TEST_SUITE
