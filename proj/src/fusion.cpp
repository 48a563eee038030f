#include "ii/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace ii {

namespace {

void check_aligned(const FeatureMatrix& x, const FeatureMatrix& y) {
  x.validate();
  y.validate();
  if (x.rows() != y.rows())
    throw AlignmentError("feature sets have " + std::to_string(x.rows()) + " and " +
                         std::to_string(y.rows()) + " rows");
  if (x.labels != y.labels)
    throw AlignmentError("feature sets disagree on row labels");
}

struct EigenSym {
  Eigen::MatrixXd inv;        // (S + lambda I)^-1
  Eigen::MatrixXd inv_sqrt;   // (S + lambda I)^-1/2
};

// Inverse and inverse square root of a ridged covariance block via its
// eigendecomposition. Throws if the ridged matrix is still numerically singular.
EigenSym ridged_inverse(const Eigen::MatrixXd& s, double lambda, const char* which) {
  Eigen::MatrixXd r = s;
  r.diagonal().array() += lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success)
    throw SingularCovariance(std::string("eigendecomposition failed for ") + which);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (!(ev(0) > 0.0) || ev(0) <= top * 1e-12)
    throw SingularCovariance(std::string(which) +
                             " covariance is numerically singular; increase the ridge");
  EigenSym out;
  out.inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();
  out.inv_sqrt = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  return out;
}

// Solves with the eigenproblem posed on the x side. cca_fit orients the
// arguments so this runs on the smaller side, which also makes
// cca_fit(x, y) and cca_fit(y, x) exact mirrors of each other.
CcaModel fit_ordered(const Eigen::MatrixXd& xm, const Eigen::MatrixXd& ym, int d,
                     double ridge) {
  const int n = static_cast<int>(xm.rows());
  const int p = static_cast<int>(xm.cols());
  const int q = static_cast<int>(ym.cols());

  CcaModel model;
  model.ridge = ridge;
  model.mean_x = xm.colwise().mean();
  model.mean_y = ym.colwise().mean();

  const Eigen::MatrixXd xc = xm.rowwise() - model.mean_x;
  const Eigen::MatrixXd yc = ym.rowwise() - model.mean_y;
  const double scale = 1.0 / (n - 1);
  const Eigen::MatrixXd sxx = scale * (xc.transpose() * xc);
  const Eigen::MatrixXd syy = scale * (yc.transpose() * yc);
  const Eigen::MatrixXd sxy = scale * (xc.transpose() * yc);

  const double lam_x = ridge * sxx.diagonal().mean();
  const double lam_y = ridge * syy.diagonal().mean();
  const EigenSym rx = ridged_inverse(sxx, lam_x, "first");
  const EigenSym ry = ridged_inverse(syy, lam_y, "second");

  Eigen::MatrixXd m =
      rx.inv_sqrt * sxy * ry.inv * sxy.transpose() * rx.inv_sqrt;
  m = 0.5 * (m + m.transpose());  // kill asymmetry from rounding
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw SingularCovariance("canonical eigenproblem failed to converge");

  model.a.resize(p, d);
  model.b.resize(q, d);
  model.corrs.resize(d);
  for (int j = 0; j < d; ++j) {
    const int idx = p - 1 - j;  // eigenvalues come back ascending
    model.corrs(j) = std::sqrt(std::clamp(es.eigenvalues()(idx), 0.0, 1.0));

    Eigen::VectorXd aj = rx.inv_sqrt * es.eigenvectors().col(idx);
    Eigen::VectorXd bj = ry.inv * (sxy.transpose() * aj);

    double va = aj.dot(sxx * aj);
    if (!(va > 0.0)) va = aj.dot(sxx * aj) + lam_x * aj.squaredNorm();
    if (!(va > 0.0))
      throw SingularCovariance("canonical direction has no variance on the first set");
    aj /= std::sqrt(va);

    double vb = bj.dot(syy * bj);
    if (!(vb > 0.0)) vb = bj.dot(syy * bj) + lam_y * bj.squaredNorm();
    if (!(vb > 0.0)) {
      // Zero cross-covariance in this direction; keep a harmless unit vector.
      bj.setZero();
      bj(0) = 1.0;
      vb = bj.dot(syy * bj) + lam_y;
      if (!(vb > 0.0))
        throw SingularCovariance("canonical direction has no variance on the second set");
    }
    bj /= std::sqrt(vb);

    // Fix the sign so refitting the same data gives identical matrices.
    int peak = 0;
    aj.cwiseAbs().maxCoeff(&peak);
    if (aj(peak) < 0.0) {
      aj = -aj;
      bj = -bj;
    }
    model.a.col(j) = aj;
    model.b.col(j) = bj;
  }
  return model;
}

}  // namespace

CcaModel cca_fit(const FeatureMatrix& x, const FeatureMatrix& y, int d, double ridge) {
  check_aligned(x, y);
  const int n = x.rows();
  const int p = x.dims();
  const int q = y.dims();
  if (n < 3) throw ShapeError("canonical correlation needs at least 3 rows");
  if (!(ridge >= 0.0)) throw RangeError("ridge must be >= 0");

  const int dmax = std::min({p, q, n - 1});
  if (d < 0) d = dmax;
  if (d < 1 || d > dmax)
    throw RangeError("requested " + std::to_string(d) + " canonical pairs, but at most " +
                     std::to_string(dmax) + " exist");

  if (p <= q) return fit_ordered(x.x, y.x, d, ridge);
  CcaModel rev = fit_ordered(y.x, x.x, d, ridge);
  CcaModel model;
  model.ridge = rev.ridge;
  model.mean_x = std::move(rev.mean_y);
  model.mean_y = std::move(rev.mean_x);
  model.a = std::move(rev.b);
  model.b = std::move(rev.a);
  model.corrs = std::move(rev.corrs);
  return model;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cca_transform(const CcaModel& model,
                                                          const Eigen::MatrixXd& x,
                                                          const Eigen::MatrixXd& y) {
  if (x.cols() != model.mean_x.size() || y.cols() != model.mean_y.size())
    throw ShapeError("feature width does not match the fitted model");
  if (x.rows() != y.rows())
    throw AlignmentError("the two feature sets must have the same number of rows");
  Eigen::MatrixXd xp = (x.rowwise() - model.mean_x) * model.a;
  Eigen::MatrixXd yp = (y.rowwise() - model.mean_y) * model.b;
  return {std::move(xp), std::move(yp)};
}

FeatureMatrix ccf_fuse(const Eigen::MatrixXd& xprime, const Eigen::MatrixXd& yprime,
                       const std::vector<int>& labels, const std::string& tag) {
  if (xprime.rows() != yprime.rows() || xprime.cols() != yprime.cols())
    throw ShapeError("canonical variates must have identical shapes to fuse");
  if (static_cast<int>(labels.size()) != xprime.rows())
    throw AlignmentError("label vector does not match fused rows");
  FeatureMatrix out;
  out.x = xprime + yprime;
  out.labels = labels;
  out.modality_tag = tag;
  return out;
}

FeatureMatrix ccf_fuse_pair(const CcaModel& model, const FeatureMatrix& x,
                            const FeatureMatrix& y, const std::string& tag) {
  check_aligned(x, y);
  auto [xp, yp] = cca_transform(model, x.x, y.x);
  return ccf_fuse(xp, yp, x.labels, tag);
}

CcfTwoStage ccf_two_stage_fit(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                              const FeatureMatrix& highboost, int d, double ridge) {
  check_aligned(base, prewitt);
  check_aligned(base, highboost);
  const int n = base.rows();

  const auto stage_dim = [n](int want, int p, int q) {
    const int dmax = std::min({p, q, n - 1});
    return want < 0 ? dmax : std::min(want, dmax);
  };

  CcfTwoStage model;
  const int d1 = stage_dim(d, base.dims(), prewitt.dims());
  model.stage1 = cca_fit(base, prewitt, d1, ridge);
  FeatureMatrix z12 = ccf_fuse_pair(model.stage1, base, prewitt, "stage1");
  const int d2 = stage_dim(d, z12.dims(), highboost.dims());
  model.stage2 = cca_fit(z12, highboost, d2, ridge);
  return model;
}

FeatureMatrix ccf_two_stage_apply(const CcfTwoStage& model, const FeatureMatrix& base,
                                  const FeatureMatrix& prewitt,
                                  const FeatureMatrix& highboost) {
  check_aligned(base, prewitt);
  check_aligned(base, highboost);
  FeatureMatrix z12 = ccf_fuse_pair(model.stage1, base, prewitt, "stage1");
  FeatureMatrix z = ccf_fuse_pair(model.stage2, z12, highboost, "ccf2");
  return z;
}

FeatureMatrix ccf_two_stage(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                            const FeatureMatrix& highboost, int d, double ridge) {
  const CcfTwoStage model = ccf_two_stage_fit(base, prewitt, highboost, d, ridge);
  return ccf_two_stage_apply(model, base, prewitt, highboost);
}

}  // namespace ii
