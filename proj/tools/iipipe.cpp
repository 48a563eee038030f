#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ii/classify.hpp"
#include "ii/imaging.hpp"
#include "ii/pipeline.hpp"
#include "ii/text.hpp"

namespace {

// Flag storage for the options shared by every subcommand. Precedence:
// built-in defaults < --config file < explicit flags < II_SEED.
struct Common {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::string encoder, channel_mode, manifest, outdir, features_dir;
  int window_length = 0, window_stride = 0, mtf_bins = 0;
  int resize_h = 0, resize_w = 0, cca_dim = 0, svm_epochs = 0, repeats = 0, jobs = 0;
  double rp_epsilon_pct = 0, cca_ridge = 0, svm_c = 0, train_frac = 0;
  std::uint64_t seed = 0;
  bool print_config = false;
};

void add_common(CLI::App* sub, Common& c) {
  c.sub = sub;
  sub->add_option("--config", c.config_path, "key = value configuration file");
  sub->add_option("--encoder", c.encoder, "si, gaf, mtf or rp");
  sub->add_option("--window-length", c.window_length, "rows per window");
  sub->add_option("--window-stride", c.window_stride, "rows between window starts");
  sub->add_option("--mtf-bins", c.mtf_bins, "quantile bins for the transition field");
  sub->add_option("--rp-epsilon-pct", c.rp_epsilon_pct,
                  "distance percentile for the recurrence threshold");
  sub->add_option("--channel-mode", c.channel_mode, "triplet-rgb or gray3");
  sub->add_option("--resize-h", c.resize_h, "exported image height");
  sub->add_option("--resize-w", c.resize_w, "exported image width");
  sub->add_option("--cca-dim", c.cca_dim, "canonical pairs to keep (-1 = auto)");
  sub->add_option("--cca-ridge", c.cca_ridge, "relative covariance ridge");
  sub->add_option("--svm-c", c.svm_c, "SVM regularization constant");
  sub->add_option("--svm-epochs", c.svm_epochs, "SVM training epochs");
  sub->add_option("--repeats", c.repeats, "number of random splits");
  sub->add_option("--train-frac", c.train_frac, "training fraction per class");
  sub->add_option("--seed", c.seed, "base random seed");
  sub->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  sub->add_option("--manifest", c.manifest, "dataset manifest path");
  sub->add_option("--outdir", c.outdir, "output directory");
  sub->add_option("--features-dir", c.features_dir,
                  "directory with base/prewitt/highboost .itns files");
  sub->add_flag("--print-config", c.print_config,
                "echo the effective configuration and exit");
}

ii::PipelineConfig build_config(const Common& c) {
  ii::PipelineConfig cfg;
  if (!c.config_path.empty()) ii::merge_config_file(cfg, c.config_path);
  const auto used = [&](const char* flag) { return c.sub->count(flag) > 0; };
  if (used("--encoder")) cfg.encoder = c.encoder;
  if (used("--window-length")) cfg.window_length = c.window_length;
  if (used("--window-stride")) cfg.window_stride = c.window_stride;
  if (used("--mtf-bins")) cfg.mtf_bins = c.mtf_bins;
  if (used("--rp-epsilon-pct")) cfg.rp_epsilon_pct = c.rp_epsilon_pct;
  if (used("--channel-mode")) cfg.channel_mode = c.channel_mode;
  if (used("--resize-h")) cfg.resize_h = c.resize_h;
  if (used("--resize-w")) cfg.resize_w = c.resize_w;
  if (used("--cca-dim")) cfg.cca_dim = c.cca_dim;
  if (used("--cca-ridge")) cfg.cca_ridge = c.cca_ridge;
  if (used("--svm-c")) cfg.svm_c = c.svm_c;
  if (used("--svm-epochs")) cfg.svm_epochs = c.svm_epochs;
  if (used("--repeats")) cfg.repeats = c.repeats;
  if (used("--train-frac")) cfg.train_frac = c.train_frac;
  if (used("--seed")) cfg.seed = c.seed;
  if (used("--jobs")) cfg.jobs = c.jobs;
  if (used("--manifest")) cfg.manifest = c.manifest;
  if (used("--outdir")) cfg.outdir = c.outdir;
  if (used("--features-dir")) cfg.features_dir = c.features_dir;
  ii::apply_env_seed(cfg);
  return cfg;
}

// Returns true when the subcommand should stop after echoing the config.
bool handle_print_config(const Common& c, const ii::PipelineConfig& cfg) {
  if (!c.print_config) return false;
  ii::validate_config(cfg);
  std::cout << ii::print_config(cfg);
  return true;
}

ii::FeatureMatrix load_labeled_features(const std::string& features_path,
                                        const std::string& labels_path) {
  ii::FeatureMatrix fm = ii::import_features(features_path);
  if (!labels_path.empty()) {
    std::vector<int> labels = ii::read_labels(labels_path);
    if (static_cast<int>(labels.size()) != fm.rows())
      throw ii::AlignmentError("label file holds " + std::to_string(labels.size()) +
                               " entries but the feature matrix has " +
                               std::to_string(fm.rows()) + " rows");
    fm.labels = std::move(labels);
  }
  return fm;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial activity-image pipeline: encode sensor windows as images, "
               "derive filtered modalities, fuse features and classify"};
  app.require_subcommand(1);

  Common enc_c, filt_c, ext_c, fuse_c, train_c, eval_c, pipe_c;

  CLI::App* enc = app.add_subcommand("encode", "write activity-image PNGs and an index");
  add_common(enc, enc_c);

  CLI::App* filt = app.add_subcommand("filter", "apply a filter to an existing PNG");
  std::string filt_in, filt_out, filt_kind = "prewitt";
  filt->add_option("--in", filt_in, "input PNG")->required();
  filt->add_option("--out", filt_out, "output PNG")->required();
  filt->add_option("--kind", filt_kind, "prewitt or highboost");
  add_common(filt, filt_c);

  CLI::App* ext = app.add_subcommand("extract", "compute per-modality feature matrices");
  std::string ext_out;
  ext->add_option("--features-out", ext_out, "directory for the .itns files");
  add_common(ext, ext_c);

  CLI::App* fuse = app.add_subcommand("fuse", "two-stage fusion of three feature files");
  std::string fuse_labels, fuse_out;
  fuse->add_option("--labels", fuse_labels, "label file for the feature rows");
  fuse->add_option("--out", fuse_out, "fused .itns output")->required();
  add_common(fuse, fuse_c);

  CLI::App* train = app.add_subcommand("train", "train the one-vs-rest linear SVM");
  std::string train_features, train_labels, train_model;
  train->add_option("--features", train_features, "feature .itns file")->required();
  train->add_option("--labels", train_labels, "label file")->required();
  train->add_option("--model", train_model, "model output path")->required();
  add_common(train, train_c);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a trained model");
  std::string eval_features, eval_labels, eval_model, eval_report, eval_confusion;
  eval->add_option("--features", eval_features, "feature .itns file")->required();
  eval->add_option("--labels", eval_labels, "label file")->required();
  eval->add_option("--model", eval_model, "model path")->required();
  eval->add_option("--report", eval_report, "report output path (default: stdout)");
  eval->add_option("--confusion", eval_confusion, "confusion CSV output path");
  add_common(eval, eval_c);

  CLI::App* pipe = app.add_subcommand("pipeline", "full encode-fuse-classify experiment");
  add_common(pipe, pipe_c);

  enc->callback([&] {
    const ii::PipelineConfig cfg = build_config(enc_c);
    if (handle_print_config(enc_c, cfg)) return;
    const ii::EncodeResult result = ii::run_encode(cfg);
    std::cout << "wrote " << result.images_written << " images, index at "
              << result.index_path.string() << "\n";
  });

  filt->callback([&] {
    const ii::PipelineConfig cfg = build_config(filt_c);
    if (handle_print_config(filt_c, cfg)) return;
    const ii::Filter kind = ii::filter_from_string(filt_kind);
    if (kind == ii::Filter::none) throw ii::ConfigError("--kind must be prewitt or highboost");
    const ii::ActivityImage img = ii::read_png(filt_in);
    const ii::ActivityImage out =
        kind == ii::Filter::prewitt ? ii::prewitt_modality(img) : ii::highboost_modality(img);
    ii::write_png(out, filt_out);
    std::cout << "wrote " << filt_out << "\n";
  });

  ext->callback([&] {
    ii::PipelineConfig cfg = build_config(ext_c);
    if (handle_print_config(ext_c, cfg)) return;
    ii::validate_config(cfg);
    if (cfg.manifest.empty()) throw ii::ConfigError("config key 'manifest' is required");
    if (ext_out.empty()) {
      if (cfg.outdir.empty())
        throw ii::ConfigError("give --features-out or an outdir");
      ext_out = (std::filesystem::path(cfg.outdir) / "features").string();
    }
    const ii::DatasetManifest manifest = ii::load_manifest(cfg.manifest);
    const ii::LabeledDataset ds = ii::load_dataset(manifest);
    const auto records = ii::encode_dataset(ds, cfg);
    const ii::ModalityFeatures feats = ii::extract_features(records, cfg);
    std::filesystem::create_directories(ext_out);
    const std::filesystem::path dir(ext_out);
    ii::export_features(feats.base, dir / "base.itns");
    ii::export_features(feats.prewitt, dir / "prewitt.itns");
    ii::export_features(feats.highboost, dir / "highboost.itns");
    ii::write_labels(feats.base.labels, dir / "labels.txt");
    std::cout << "wrote " << feats.base.rows() << " feature rows per modality to " << ext_out
              << "\n";
  });

  fuse->callback([&] {
    const ii::PipelineConfig cfg = build_config(fuse_c);
    if (handle_print_config(fuse_c, cfg)) return;
    if (cfg.features_dir.empty())
      throw ii::ConfigError("config key 'features_dir' is required");
    const std::filesystem::path dir(cfg.features_dir);
    ii::FeatureMatrix base = ii::import_features(dir / "base.itns");
    ii::FeatureMatrix prewitt = ii::import_features(dir / "prewitt.itns");
    ii::FeatureMatrix highboost = ii::import_features(dir / "highboost.itns");
    if (!fuse_labels.empty()) {
      std::vector<int> labels = ii::read_labels(fuse_labels);
      if (static_cast<int>(labels.size()) != base.rows())
        throw ii::AlignmentError("label file does not match the feature rows");
      base.labels = labels;
      prewitt.labels = labels;
      highboost.labels = labels;
    }
    const ii::FeatureMatrix fused =
        ii::ccf_two_stage(base, prewitt, highboost, cfg.cca_dim, cfg.cca_ridge);
    ii::export_features(fused, fuse_out);
    std::cout << "wrote fused features (" << fused.rows() << " x " << fused.dims() << ") to "
              << fuse_out << "\n";
  });

  train->callback([&] {
    const ii::PipelineConfig cfg = build_config(train_c);
    if (handle_print_config(train_c, cfg)) return;
    const ii::FeatureMatrix fm = load_labeled_features(train_features, train_labels);
    const ii::SvmModel model = ii::svm_train(fm, cfg.svm_c, cfg.svm_epochs, cfg.seed, cfg.jobs);
    ii::save_svm(model, train_model);
    std::cout << "trained " << model.num_classes() << "-class model on " << fm.rows()
              << " rows, saved to " << train_model << "\n";
  });

  eval->callback([&] {
    const ii::PipelineConfig cfg = build_config(eval_c);
    if (handle_print_config(eval_c, cfg)) return;
    const ii::FeatureMatrix fm = load_labeled_features(eval_features, eval_labels);
    const ii::SvmModel model = ii::load_svm(eval_model);
    const std::vector<int> pred = ii::svm_predict(model, fm);
    const ii::EvalReport report = ii::evaluate(pred, fm.labels, model.num_classes());
    const std::string text = ii::report_to_text(report);
    if (eval_report.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(eval_report);
      if (!os) throw ii::IoError("cannot open '" + eval_report + "' for writing");
      os << text;
    }
    if (!eval_confusion.empty())
      ii::write_confusion_csv(report.confusion, {}, eval_confusion);
  });

  pipe->callback([&] {
    const ii::PipelineConfig cfg = build_config(pipe_c);
    if (handle_print_config(pipe_c, cfg)) return;
    const ii::PipelineResult result = ii::run_pipeline(cfg);
    std::cout << "fused mean accuracy " << ii::format_double(result.fused.mean_accuracy)
              << " over " << result.fused.repeats() << " splits\n"
              << "report at " << result.report_path.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ii::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ii::SingularCovariance& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const ii::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
