#include <cmath>
#include <random>

#include "doctest.h"
#include "ii/encoders.hpp"
#include "support.hpp"

using namespace ii;

namespace {

MultiSeries make_window(const Eigen::MatrixXd& values, const std::string& id = "w") {
  MultiSeries s;
  s.values = values;
  s.rate_hz = 50.0;
  s.sample_id = id;
  return s;
}

}  // namespace

TEST_SUITE("encoders") {

// ---------------------------------------------------------------------- SI

TEST_CASE("signal image stacks channels in the published row order") {
  const auto& order = signal_image_row_order();
  REQUIRE(order.size() == 24);
  // Every unordered channel pair must appear adjacently somewhere.
  bool seen[7][7] = {};
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    seen[order[i]][order[i + 1]] = true;
    seen[order[i + 1]][order[i]] = true;
  }
  for (int a = 1; a <= 6; ++a)
    for (int b = a + 1; b <= 6; ++b) CHECK(seen[a][b]);

  std::mt19937_64 rng(3);
  Eigen::MatrixXd window = support::random_matrix(rng, 52, 6);
  Eigen::MatrixXd stacked = signal_image_stack(window);
  REQUIRE(stacked.rows() == 24);
  REQUIRE(stacked.cols() == 52);
  for (int r = 0; r < 24; ++r)
    CHECK(stacked.row(r).transpose() == window.col(order[r] - 1));
}

TEST_CASE("signal image identifies each row's channel via constant probes") {
  // One channel carries a ramp, the rest are flat; only rows stacked from the
  // ramp channel may vary, and flat rows sit at the 0.5 midpoint.
  const auto& order = signal_image_row_order();
  for (int active = 0; active < 6; ++active) {
    Eigen::MatrixXd values = Eigen::MatrixXd::Constant(52, 6, 2.0);
    for (int t = 0; t < 52; ++t) values(t, active) = t;
    ActivityImage img = encode_signal_image(make_window(values));
    REQUIRE(img.height == 24);
    REQUIRE(img.width == 52);
    for (int r = 0; r < 24; ++r) {
      if (order[r] - 1 == active) {
        for (int t = 0; t < 52; ++t)
          CHECK(img.at(r, t, 0) == doctest::Approx(t / 51.0).epsilon(1e-12));
      } else {
        for (int t = 0; t < 52; ++t) CHECK(img.at(r, t, 0) == 0.5);
      }
    }
  }
}

TEST_CASE("signal image rescales every row to full range") {
  std::mt19937_64 rng(4);
  ActivityImage img = encode_signal_image(make_window(support::random_matrix(rng, 52, 6)));
  img.validate();
  for (int r = 0; r < 24; ++r) {
    double lo = 1.0, hi = 0.0;
    for (int c = 0; c < 52; ++c) {
      lo = std::min(lo, img.at(r, c, 0));
      hi = std::max(hi, img.at(r, c, 0));
      CHECK(img.at(r, c, 0) == img.at(r, c, 1));
      CHECK(img.at(r, c, 0) == img.at(r, c, 2));
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
}

TEST_CASE("signal image rejects wrong channel or row counts") {
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(encode_signal_image(make_window(support::random_matrix(rng, 52, 5))),
                  ChannelCountError);
  CHECK_THROWS_AS(encode_signal_image(make_window(support::random_matrix(rng, 40, 6))),
                  ShapeError);
  CHECK_THROWS_AS(signal_image_stack(support::random_matrix(rng, 52, 7)), ChannelCountError);
}

// --------------------------------------------------------------------- GAF

TEST_CASE("gaf product form equals the direct angle-sum cosine") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 4 + int(rng() % 61);
    Eigen::VectorXd series = support::random_series(rng, n, -10.0, 10.0);
    GafMatrix gaf = encode_gaf(series);
    Eigen::MatrixXd oracle = support::gaf_bruteforce(series);
    REQUIRE(gaf.g.rows() == n);
    CHECK((gaf.g - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("gaf matrix is symmetric with values in [-1,1]") {
  std::mt19937_64 rng(7);
  Eigen::VectorXd series = support::random_series(rng, 48);
  GafMatrix gaf = encode_gaf(series);
  CHECK(gaf.g == gaf.g.transpose());
  CHECK(gaf.g.minCoeff() >= -1.0 - 1e-15);
  CHECK(gaf.g.maxCoeff() <= 1.0 + 1e-15);
  for (int i = 0; i < gaf.phi.size(); ++i) {
    CHECK(gaf.phi(i) >= 0.0);
    CHECK(gaf.phi(i) <= support::kPi);
  }
}

TEST_CASE("gaf closed-form cases") {
  // Constant raw series rescales to all 0.5, so every entry is
  // cos(2 arccos 0.5) = -0.5.
  Eigen::VectorXd flat(2);
  flat << 5, 5;
  const GafMatrix g1 = encode_gaf(flat);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(g1.g(i, j) == doctest::Approx(-0.5).epsilon(1e-12));

  // Endpoints rescale to 0 and 1, giving angles pi/2 and 0.
  Eigen::VectorXd pair(2);
  pair << 0, 10;
  const GafMatrix g2 = encode_gaf(pair);
  CHECK(g2.g(0, 0) == -1.0);
  CHECK(g2.g(0, 1) == 0.0);
  CHECK(g2.g(1, 0) == 0.0);
  CHECK(g2.g(1, 1) == 1.0);
}

TEST_CASE("gaf diagonal recovers the rescaled series") {
  // g(l,l) = cos(2 phi_l) = 2 x_l^2 - 1, so x_l = sqrt((g_ll + 1) / 2) and the
  // recorded affine map takes that back to the raw sample.
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd series = support::random_series(rng, 30, -3.0, 9.0);
    GafMatrix gaf = encode_gaf(series);
    RescaledSeries rs = rescale_unit(series);
    for (int l = 0; l < 30; ++l) {
      const double x = std::sqrt(std::max(0.0, (gaf.g(l, l) + 1.0) / 2.0));
      CHECK(rs.unscale(x) == doctest::Approx(series(l)).epsilon(1e-9));
    }
  }
}

TEST_CASE("gaf polar radius is the normalized time stamp") {
  Eigen::VectorXd series = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
  GafMatrix gaf = encode_gaf(series);
  CHECK(gaf.span == 10);
  CHECK(gaf.radius(0) == doctest::Approx(0.1));
  CHECK(gaf.radius(9) == doctest::Approx(1.0));
}

TEST_CASE("gaf rejects series shorter than two") {
  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(encode_gaf(one), ShapeError);
}

// --------------------------------------------------------------------- MTF

TEST_CASE("mtf matches a hand-counted example") {
  Eigen::VectorXd series(6);
  series << 1, 2, 1, 2, 3, 3;
  MtfMatrix mtf = encode_mtf(series, 3);

  CHECK(mtf.bin_of == std::vector<int>{0, 1, 0, 1, 2, 2});

  Eigen::MatrixXd w(3, 3);
  w << 0.0, 1.0, 0.0,
       0.5, 0.0, 0.5,
       0.0, 0.0, 1.0;
  CHECK(mtf.w == w);

  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(mtf.m(i, j) == w(mtf.bin_of[i], mtf.bin_of[j]));
}

TEST_CASE("mtf transition rows are stochastic or empty") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 12 + int(rng() % 80);
    MtfMatrix mtf = encode_mtf(support::random_series(rng, n), 10);
    for (int a = 0; a < 10; ++a) {
      const double total = mtf.w.row(a).sum();
      if (total != 0.0) CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      for (int b = 0; b < 10; ++b) {
        CHECK(mtf.w(a, b) >= 0.0);
        CHECK(mtf.w(a, b) <= 1.0);
      }
    }
    CHECK(mtf.m.minCoeff() >= 0.0);
    CHECK(mtf.m.maxCoeff() <= 1.0);
  }
}

TEST_CASE("mtf keeps unvisited source bins at zero") {
  Eigen::VectorXd series(4);
  series << 1, 2, 3, 4;
  MtfMatrix mtf = encode_mtf(series, 4);
  CHECK(mtf.bin_of == std::vector<int>{0, 1, 2, 3});
  // The maximum only appears as a destination, so its row never normalizes.
  CHECK(mtf.w.row(3).sum() == 0.0);
  for (int j = 0; j < 4; ++j) CHECK(mtf.m(3, j) == 0.0);
}

TEST_CASE("mtf is invariant to strictly monotone rescaling") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd series = support::random_series(rng, 40);
    MtfMatrix a = encode_mtf(series, 10);
    // Exact-arithmetic monotone maps keep the ordering and all ties.
    MtfMatrix b = encode_mtf(2.0 * series + Eigen::VectorXd::Ones(40), 10);
    MtfMatrix c = encode_mtf(0.25 * series + Eigen::VectorXd::Constant(40, 7.0), 10);
    CHECK(a.bin_of == b.bin_of);
    CHECK(a.bin_of == c.bin_of);
    CHECK(a.m == b.m);
    CHECK(a.m == c.m);
  }
}

TEST_CASE("mtf of an increasing series has no backward transitions") {
  std::mt19937_64 rng(61);
  for (int q : {2, 4, 7}) {
    Eigen::VectorXd up(20);
    double acc = 0.0;
    for (int i = 0; i < 20; ++i) up(i) = acc += support::uniform(rng, 0.1, 1.0);
    const MtfMatrix mtf = encode_mtf(up, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < a; ++b) CHECK(mtf.w(a, b) == 0.0);
    CHECK(mtf.m.minCoeff() >= 0.0);
    CHECK(mtf.m.maxCoeff() <= 1.0);
  }
}

TEST_CASE("mtf puts equal values in the same bin") {
  Eigen::VectorXd series(8);
  series << 5, 1, 5, 2, 5, 3, 5, 4;
  MtfMatrix mtf = encode_mtf(series, 4);
  for (int i : {0, 2, 4, 6}) CHECK(mtf.bin_of[i] == mtf.bin_of[0]);
}

TEST_CASE("mtf of a constant series is the all-ones matrix") {
  MtfMatrix mtf = encode_mtf(Eigen::VectorXd::Constant(12, 3.0), 5);
  for (int i = 0; i < 12; ++i) CHECK(mtf.bin_of[i] == 4);
  CHECK(mtf.m == Eigen::MatrixXd::Ones(12, 12));
}

TEST_CASE("mtf rejects invalid bin counts") {
  Eigen::VectorXd series = Eigen::VectorXd::LinSpaced(8, 0.0, 1.0);
  CHECK_THROWS_AS(encode_mtf(series, 1), BinCountError);
  CHECK_THROWS_AS(encode_mtf(series, 9), BinCountError);
  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(encode_mtf(one, 2), ShapeError);
}

// ---------------------------------------------------------------------- RP

TEST_CASE("rp agrees exactly with the naive threshold oracle") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 4 + int(rng() % 40);
    const int c = 1 + int(rng() % 6);
    Eigen::MatrixXd window = support::random_matrix(rng, n, c);
    const double eps = epsilon_from_percentile(window, 20.0);
    RpMatrix rp = encode_rp(window, eps);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double expect = support::naive_row_distance(window, i, j) <= eps ? 1.0 : 0.0;
        CHECK(rp.r(i, j) == expect);
      }
  }
}

TEST_CASE("rp is binary, symmetric, with a unit diagonal") {
  std::mt19937_64 rng(13);
  Eigen::MatrixXd window = support::random_matrix(rng, 30, 3);
  RpMatrix rp = encode_rp(window, epsilon_from_percentile(window, 35.0));
  CHECK(rp.r == rp.r.transpose());
  for (int i = 0; i < 30; ++i) {
    CHECK(rp.r(i, i) == 1.0);
    for (int j = 0; j < 30; ++j)
      CHECK((rp.r(i, j) == 0.0 || rp.r(i, j) == 1.0));
  }
}

TEST_CASE("rp recurs at zero distance even with zero threshold") {
  Eigen::MatrixXd window(4, 2);
  window << 1, 2, 3, 4, 1, 2, 5, 6;
  RpMatrix rp = encode_rp(window, 0.0);
  CHECK(rp.r(0, 2) == 1.0);  // identical rows
  CHECK(rp.r(2, 0) == 1.0);
  CHECK(rp.r(0, 1) == 0.0);
  CHECK(rp.r(1, 3) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(rp.r(i, i) == 1.0);
}

TEST_CASE("rp is invariant to jointly scaling window and threshold") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd window = support::random_matrix(rng, 25, 4);
    const double eps = epsilon_from_percentile(window, 20.0);
    RpMatrix a = encode_rp(window, eps);
    // Powers of two scale distances without any rounding.
    RpMatrix b = encode_rp(4.0 * window, 4.0 * eps);
    RpMatrix c = encode_rp(0.125 * window, 0.125 * eps);
    CHECK(a.r == b.r);
    CHECK(a.r == c.r);
  }
}

TEST_CASE("rp density grows with the threshold") {
  std::mt19937_64 rng(15);
  Eigen::MatrixXd window = support::random_matrix(rng, 30, 3);
  const double lo = epsilon_from_percentile(window, 10.0);
  const double hi = epsilon_from_percentile(window, 80.0);
  CHECK(lo <= hi);
  RpMatrix a = encode_rp(window, lo);
  RpMatrix b = encode_rp(window, hi);
  CHECK(((b.r - a.r).array() >= 0.0).all());  // monotone: no recurrence lost
  CHECK(a.r.sum() < b.r.sum());
}

TEST_CASE("percentile threshold interpolates the sorted distances") {
  // Three collinear points: pairwise distances 1, 2, 3.
  Eigen::MatrixXd window(3, 1);
  window << 0.0, 1.0, 3.0;
  CHECK(epsilon_from_percentile(window, 100.0) == 3.0);
  CHECK(epsilon_from_percentile(window, 50.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(epsilon_from_percentile(window, 25.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(epsilon_from_percentile(window, 75.0) == doctest::Approx(2.5).epsilon(1e-12));

  // Two distinct rows: one off-diagonal distance, so every percentile is it.
  Eigen::MatrixXd pair(2, 2);
  pair << 0.0, 0.0, 3.0, 4.0;
  for (double pct : {10.0, 50.0, 100.0}) CHECK(epsilon_from_percentile(pair, pct) == 5.0);

  // A constant window has only zero distances.
  CHECK(epsilon_from_percentile(Eigen::MatrixXd::Constant(5, 3, 2.5), 40.0) == 0.0);
}

TEST_CASE("rp rejects invalid arguments") {
  Eigen::MatrixXd window(4, 2);
  window.setZero();
  CHECK_THROWS_AS(encode_rp(Eigen::MatrixXd::Zero(1, 2), 1.0), ShapeError);
  CHECK_THROWS_AS(encode_rp(window, -1.0), RangeError);
  CHECK_THROWS_AS(epsilon_from_percentile(window, 0.0), RangeError);
  CHECK_THROWS_AS(epsilon_from_percentile(window, 100.5), RangeError);
}

// ------------------------------------------------------- images & dispatch

TEST_CASE("unit planes land in the unit interval") {
  std::mt19937_64 rng(16);
  Eigen::VectorXd series = support::random_series(rng, 20);
  Eigen::MatrixXd gp = unit_plane(encode_gaf(series));
  CHECK(gp.minCoeff() >= 0.0);
  CHECK(gp.maxCoeff() <= 1.0);
  GafMatrix gaf = encode_gaf(series);
  CHECK(((gp.array() * 2.0 - 1.0).matrix() - gaf.g).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("gray3 replicates one plane across the channels") {
  std::mt19937_64 rng(17);
  Eigen::VectorXd series = support::random_series(rng, 16);
  ActivityImage img = to_activity_image(encode_gaf(series), ChannelMode::gray3, "s");
  img.validate();
  CHECK(img.height == 16);
  CHECK(img.width == 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      CHECK(img.at(r, c, 0) == img.at(r, c, 1));
      CHECK(img.at(r, c, 0) == img.at(r, c, 2));
    }
}

TEST_CASE("triplet mode tiles two rgb encodings side by side") {
  std::vector<Eigen::MatrixXd> planes;
  for (int c = 0; c < 6; ++c) planes.push_back(Eigen::MatrixXd::Constant(4, 4, c / 10.0));
  ActivityImage img = to_activity_image(planes, ChannelMode::triplet_rgb, Encoder::GAF, "s");
  img.validate();
  CHECK(img.height == 4);
  CHECK(img.width == 8);
  for (int ch = 0; ch < 3; ++ch) {
    CHECK(img.at(1, 1, ch) == ch / 10.0);        // left tile: channels 1-3
    CHECK(img.at(1, 5, ch) == (3 + ch) / 10.0);  // right tile: channels 4-6
  }
}

TEST_CASE("single-matrix conversions refuse triplet mode") {
  std::mt19937_64 rng(18);
  Eigen::VectorXd series = support::random_series(rng, 12);
  CHECK_THROWS_AS(to_activity_image(encode_gaf(series), ChannelMode::triplet_rgb, "s"),
                  ChannelCountError);
}

TEST_CASE("encode_window dispatches by encoder and channel mode") {
  std::mt19937_64 rng(19);
  MultiSeries w = make_window(support::random_matrix(rng, 52, 6), "disp");
  EncoderParams params;

  ActivityImage si = encode_window(w, Encoder::SI, params);
  CHECK(si.height == 24);
  CHECK(si.width == 52);
  CHECK(si.encoder == Encoder::SI);

  ActivityImage gaf = encode_window(w, Encoder::GAF, params);
  CHECK(gaf.height == 52);
  CHECK(gaf.width == 104);
  CHECK(gaf.encoder == Encoder::GAF);
  // Left tile, red channel is the first accelerometer axis' encoding.
  Eigen::MatrixXd plane0 = unit_plane(encode_gaf(w.values.col(0)));
  CHECK(gaf.at(3, 7, 0) == doctest::Approx(plane0(3, 7)).epsilon(1e-15));

  params.mode = ChannelMode::gray3;
  ActivityImage rp = encode_window(w, Encoder::RP, params);
  CHECK(rp.height == 52);
  CHECK(rp.width == 52);
  // gray3 RP treats all channels as one trajectory.
  RpMatrix direct = encode_rp(w.values, epsilon_from_percentile(w.values, params.rp_epsilon_pct));
  for (int i = 0; i < 52; ++i)
    for (int j = 0; j < 52; ++j) CHECK(rp.at(i, j, 0) == direct.r(i, j));

  ActivityImage mtf = encode_window(w, Encoder::MTF, params);
  // gray3 GAF/MTF reduce the window to per-row magnitudes first.
  Eigen::VectorXd mags = w.values.rowwise().norm();
  MtfMatrix mdirect = encode_mtf(mags, params.mtf_bins);
  for (int i = 0; i < 52; ++i)
    for (int j = 0; j < 52; ++j) CHECK(mtf.at(i, j, 0) == mdirect.m(i, j));
}

TEST_CASE("encoder names roundtrip and reject unknowns") {
  for (Encoder e : {Encoder::SI, Encoder::GAF, Encoder::MTF, Encoder::RP})
    CHECK(encoder_from_string(to_string(e)) == e);
  for (Filter f : {Filter::none, Filter::prewitt, Filter::highboost})
    CHECK(filter_from_string(to_string(f)) == f);
  for (ChannelMode m : {ChannelMode::triplet_rgb, ChannelMode::gray3})
    CHECK(channel_mode_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(encoder_from_string("sif"), ConfigError);
  CHECK_THROWS_AS(filter_from_string(""), ConfigError);
  CHECK_THROWS_AS(channel_mode_from_string("rgb"), ConfigError);
}

TEST_CASE("activity image validation flags out-of-range pixels") {
  ActivityImage img = ActivityImage::zeros(2, 2);
  CHECK_NOTHROW(img.validate());
  img.at(1, 1, 2) = 1.5;
  CHECK_THROWS_AS(img.validate(), ShapeError);
  img.at(1, 1, 2) = std::nan("");
  CHECK_THROWS_AS(img.validate(), ShapeError);
}

}  // TEST_SUITE
