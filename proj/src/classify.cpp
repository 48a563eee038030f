#include "ii/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include "ii/ingest.hpp"
#include "ii/parallel.hpp"
#include "ii/text.hpp"

namespace ii {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent stream per binary subproblem so the K trainings can run in any
// order (or in parallel) with identical results.
std::uint64_t class_stream_seed(std::uint64_t seed, int k) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(k) + 1));
}

void fisher_yates(std::vector<int>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

SvmModel svm_train(const FeatureMatrix& fm, double reg_c, int epochs, std::uint64_t seed,
                   int jobs) {
  fm.validate();
  if (!(reg_c > 0.0)) throw RangeError("regularization constant must be > 0");
  if (epochs < 1) throw RangeError("epochs must be >= 1");

  int num_classes = 0;
  for (int v : fm.labels) {
    if (v < 0) throw RangeError("every training row needs a label");
    num_classes = std::max(num_classes, v + 1);
  }
  if (num_classes < 2)
    throw ClassCountError("training data holds " + std::to_string(num_classes) +
                          " class(es); need at least 2");

  const int n = fm.rows();
  const int d = fm.dims();

  SvmModel model;
  model.reg_c = reg_c;
  model.feat_mean = fm.x.colwise().mean();
  Eigen::MatrixXd xs = fm.x.rowwise() - model.feat_mean;
  model.feat_std =
      (xs.array().square().colwise().sum() / static_cast<double>(n)).sqrt();
  for (int j = 0; j < d; ++j)
    if (!(model.feat_std(j) > 0.0)) model.feat_std(j) = 1.0;
  xs.array().rowwise() /= model.feat_std.array();

  model.w.setZero(num_classes, d);
  model.bias.setZero(num_classes);

  parallel_for(num_classes, jobs, [&](int k) {
    std::mt19937_64 rng(class_stream_seed(seed, k));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;
    long long t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
      fisher_yates(order, rng);
      for (int i : order) {
        ++t;
        const double eta = 1.0 / (reg_c * static_cast<double>(t));
        const double y = fm.labels[i] == k ? 1.0 : -1.0;
        const double score = xs.row(i).dot(w) + b;
        w *= 1.0 - eta * reg_c;
        if (y * score < 1.0) {
          w += (eta * y) * xs.row(i).transpose();
          b += eta * y;  // bias stays unregularized
        }
      }
    }
    model.w.row(k) = w.transpose();
    model.bias(k) = b;
  });

  return model;
}

Eigen::MatrixXd svm_scores(const SvmModel& model, const Eigen::MatrixXd& x) {
  if (static_cast<int>(x.cols()) != model.dims())
    throw ShapeError("feature width " + std::to_string(x.cols()) +
                     " does not match model width " + std::to_string(model.dims()));
  Eigen::MatrixXd xs = x.rowwise() - model.feat_mean;
  xs.array().rowwise() /= model.feat_std.array();
  Eigen::MatrixXd scores = xs * model.w.transpose();
  scores.rowwise() += model.bias.transpose();
  return scores;
}

std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd scores = svm_scores(model, x);
  std::vector<int> out(scores.rows());
  for (int i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < scores.cols(); ++k)
      if (scores(i, k) > scores(i, best)) best = k;
    out[i] = best;
  }
  return out;
}

std::vector<int> svm_predict(const SvmModel& model, const FeatureMatrix& fm) {
  return svm_predict(model, fm.x);
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw FormatError("truncated model file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw FormatError("truncated model file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

constexpr char kSvmMagic[4] = {'I', 'I', 'S', 'M'};

}  // namespace

void save_svm(const SvmModel& model, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.write(kSvmMagic, 4);
  os.put(1);  // version
  put_u32(os, static_cast<std::uint32_t>(model.num_classes()));
  put_u32(os, static_cast<std::uint32_t>(model.dims()));
  put_f64(os, model.reg_c);
  for (int j = 0; j < model.dims(); ++j) put_f64(os, model.feat_mean(j));
  for (int j = 0; j < model.dims(); ++j) put_f64(os, model.feat_std(j));
  for (int k = 0; k < model.num_classes(); ++k) {
    for (int j = 0; j < model.dims(); ++j) put_f64(os, model.w(k, j));
    put_f64(os, model.bias(k));
  }
  os.flush();
  if (!os) throw IoError("short write to '" + path.string() + "'");
}

SvmModel load_svm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingFileError("cannot open '" + path.string() + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kSvmMagic, 4) != 0)
    throw FormatError("'" + path.string() + "' is not a model file");
  const int version = is.get();
  if (version != 1)
    throw FormatError("unsupported model version " + std::to_string(version));
  const auto num_classes = get_u32(is);
  const auto dims = get_u32(is);
  if (num_classes < 2 || dims < 1) throw FormatError("model header is out of range");

  SvmModel model;
  model.reg_c = get_f64(is);
  model.feat_mean.resize(dims);
  model.feat_std.resize(dims);
  for (std::uint32_t j = 0; j < dims; ++j) model.feat_mean(j) = get_f64(is);
  for (std::uint32_t j = 0; j < dims; ++j) model.feat_std(j) = get_f64(is);
  model.w.resize(num_classes, dims);
  model.bias.resize(num_classes);
  for (std::uint32_t k = 0; k < num_classes; ++k) {
    for (std::uint32_t j = 0; j < dims; ++j) model.w(k, j) = get_f64(is);
    model.bias(k) = get_f64(is);
  }
  is.peek();
  if (!is.eof()) throw FormatError("trailing bytes after model payload");
  return model;
}

long long EvalReport::total() const {
  long long acc = 0;
  for (const auto& row : confusion)
    for (long long v : row) acc += v;
  return acc;
}

EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth,
                    int num_classes) {
  if (predicted.size() != truth.size())
    throw AlignmentError("prediction and truth vectors differ in length");
  if (num_classes < 2) throw ClassCountError("need at least 2 classes to evaluate");
  if (predicted.empty()) throw RangeError("cannot evaluate an empty prediction set");

  EvalReport report;
  report.confusion.assign(num_classes, std::vector<long long>(num_classes, 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes)
      throw RangeError("label outside [0," + std::to_string(num_classes) + ")");
    ++report.confusion[truth[i]][predicted[i]];
  }

  long long correct = 0;
  for (int k = 0; k < num_classes; ++k) correct += report.confusion[k][k];
  report.accuracy = static_cast<double>(correct) / static_cast<double>(predicted.size());

  report.precision_per_class.resize(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    long long predicted_k = 0;
    for (int t = 0; t < num_classes; ++t) predicted_k += report.confusion[t][k];
    report.precision_per_class[k] =
        predicted_k > 0
            ? static_cast<double>(report.confusion[k][k]) / static_cast<double>(predicted_k)
            : 0.0;
  }
  report.macro_precision = mean_of(report.precision_per_class);
  return report;
}

std::string report_to_text(const EvalReport& report,
                           const std::vector<std::string>& class_names) {
  const int num_classes = static_cast<int>(report.precision_per_class.size());
  std::string out;
  out += "accuracy = " + format_double(report.accuracy) + "\n";
  out += "macro_precision = " + format_double(report.macro_precision) + "\n";
  for (int k = 0; k < num_classes; ++k) {
    const std::string name = k < static_cast<int>(class_names.size())
                                 ? class_names[k]
                                 : "class" + std::to_string(k);
    out += "precision " + name + " = " + format_double(report.precision_per_class[k]) + "\n";
  }
  return out;
}

void write_confusion_csv(const std::vector<std::vector<long long>>& confusion,
                         const std::vector<std::string>& class_names,
                         const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  const int num_classes = static_cast<int>(confusion.size());
  const auto name = [&](int k) {
    return k < static_cast<int>(class_names.size()) ? class_names[k]
                                                    : "class" + std::to_string(k);
  };
  os << "truth\\predicted";
  for (int k = 0; k < num_classes; ++k) os << ',' << name(k);
  os << '\n';
  for (int t = 0; t < num_classes; ++t) {
    os << name(t);
    for (int k = 0; k < num_classes; ++k) os << ',' << confusion[t][k];
    os << '\n';
  }
  os.flush();
  if (!os) throw IoError("short write to '" + path.string() + "'");
}

namespace {

struct GroupIndex {
  std::vector<int> group_labels;          // one label per group
  std::vector<std::vector<int>> members;  // rows of each group
};

GroupIndex index_groups(const std::vector<int>& row_labels, const std::vector<int>& groups) {
  GroupIndex gi;
  std::vector<int> id_of;  // compact id per distinct group value, discovery order
  std::unordered_map<int, int> compact;
  compact.reserve(groups.size());
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    const int g = groups.empty() ? static_cast<int>(i) : groups[i];
    auto [it, fresh] = compact.try_emplace(g, static_cast<int>(gi.members.size()));
    if (fresh) {
      gi.members.emplace_back();
      gi.group_labels.push_back(row_labels[i]);
    } else if (gi.group_labels[it->second] != row_labels[i]) {
      throw AlignmentError("rows of one group carry different labels");
    }
    gi.members[it->second].push_back(static_cast<int>(i));
  }
  return gi;
}

// Expands a group-level split into sorted row index lists.
std::pair<std::vector<int>, std::vector<int>> expand_split(const GroupIndex& gi,
                                                           const SplitIndices& split,
                                                           std::size_t total_rows) {
  std::vector<char> in_train(gi.members.size(), 0);
  for (int g : split.train) in_train[g] = 1;
  std::vector<int> train_rows, test_rows;
  std::vector<char> row_train(total_rows, 0);
  for (std::size_t g = 0; g < gi.members.size(); ++g)
    for (int r : gi.members[g])
      if (in_train[g]) row_train[r] = 1;
  for (std::size_t r = 0; r < total_rows; ++r)
    (row_train[r] ? train_rows : test_rows).push_back(static_cast<int>(r));
  return {std::move(train_rows), std::move(test_rows)};
}

void check_labels_in_range(const std::vector<int>& labels, int num_classes) {
  for (int v : labels)
    if (v < 0 || v >= num_classes)
      throw RangeError("row label " + std::to_string(v) + " outside [0," +
                       std::to_string(num_classes) + ")");
}

RepeatedReport aggregate(std::vector<EvalReport>&& reports, int num_classes) {
  RepeatedReport agg;
  agg.confusion.assign(num_classes, std::vector<long long>(num_classes, 0));
  for (const auto& r : reports) {
    agg.accuracies.push_back(r.accuracy);
    agg.macro_precisions.push_back(r.macro_precision);
    for (int t = 0; t < num_classes; ++t)
      for (int k = 0; k < num_classes; ++k) agg.confusion[t][k] += r.confusion[t][k];
  }
  agg.mean_accuracy = mean_of(agg.accuracies);
  agg.std_accuracy = sample_std_of(agg.accuracies, agg.mean_accuracy);
  agg.mean_macro_precision = mean_of(agg.macro_precisions);
  agg.std_macro_precision = sample_std_of(agg.macro_precisions, agg.mean_macro_precision);
  return agg;
}

template <typename SplitEval>
RepeatedReport run_repeats(const std::vector<int>& row_labels, const std::vector<int>& groups,
                           int num_classes, const FusionEvalConfig& cfg, SplitEval&& eval_one) {
  if (!groups.empty() && groups.size() != row_labels.size())
    throw AlignmentError("group vector does not match the number of rows");
  check_labels_in_range(row_labels, num_classes);
  if (num_classes < 2) throw ClassCountError("need at least 2 classes");
  if (cfg.repeats < 1) throw RangeError("repeats must be >= 1");

  const GroupIndex gi = index_groups(row_labels, groups);
  std::vector<EvalReport> reports(cfg.repeats);
  parallel_for(cfg.repeats, cfg.jobs, [&](int rep) {
    const std::uint64_t split_seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
    const SplitIndices split =
        stratified_split_indices(gi.group_labels, num_classes, cfg.train_frac, split_seed);
    auto [train_rows, test_rows] = expand_split(gi, split, row_labels.size());
    reports[rep] = eval_one(train_rows, test_rows, rep);
  });
  return aggregate(std::move(reports), num_classes);
}

}  // namespace

RepeatedReport repeated_fusion_eval(const FeatureMatrix& base, const FeatureMatrix& prewitt,
                                    const FeatureMatrix& highboost,
                                    const std::vector<int>& groups, int num_classes,
                                    const FusionEvalConfig& cfg) {
  base.validate();
  if (prewitt.rows() != base.rows() || highboost.rows() != base.rows())
    throw AlignmentError("modalities differ in row count");
  if (prewitt.labels != base.labels || highboost.labels != base.labels)
    throw AlignmentError("modalities disagree on row labels");

  return run_repeats(
      base.labels, groups, num_classes, cfg,
      [&](const std::vector<int>& train_rows, const std::vector<int>& test_rows, int rep) {
        const FeatureMatrix b_tr = base.subset(train_rows);
        const FeatureMatrix p_tr = prewitt.subset(train_rows);
        const FeatureMatrix h_tr = highboost.subset(train_rows);
        const CcfTwoStage fusion =
            ccf_two_stage_fit(b_tr, p_tr, h_tr, cfg.cca_dim, cfg.cca_ridge);
        const FeatureMatrix z_tr = ccf_two_stage_apply(fusion, b_tr, p_tr, h_tr);
        const FeatureMatrix z_te =
            ccf_two_stage_apply(fusion, base.subset(test_rows), prewitt.subset(test_rows),
                                highboost.subset(test_rows));
        const SvmModel svm =
            svm_train(z_tr, cfg.svm_c, cfg.svm_epochs,
                      cfg.base_seed + static_cast<std::uint64_t>(rep), 1);
        return evaluate(svm_predict(svm, z_te), z_te.labels, num_classes);
      });
}

RepeatedReport repeated_single_eval(const FeatureMatrix& fm, const std::vector<int>& groups,
                                    int num_classes, const FusionEvalConfig& cfg) {
  fm.validate();
  return run_repeats(
      fm.labels, groups, num_classes, cfg,
      [&](const std::vector<int>& train_rows, const std::vector<int>& test_rows, int rep) {
        const FeatureMatrix tr = fm.subset(train_rows);
        const FeatureMatrix te = fm.subset(test_rows);
        const SvmModel svm = svm_train(tr, cfg.svm_c, cfg.svm_epochs,
                                       cfg.base_seed + static_cast<std::uint64_t>(rep), 1);
        return evaluate(svm_predict(svm, te), te.labels, num_classes);
      });
}

}  // namespace ii
