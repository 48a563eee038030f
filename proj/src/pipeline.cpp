#include "ii/pipeline.hpp"

#include <fstream>

#include "ii/imaging.hpp"
#include "ii/parallel.hpp"
#include "ii/text.hpp"

namespace ii {

namespace {

std::string pad3(int v) {
  std::string s = std::to_string(v);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

std::string image_filename(const WindowRecord& rec, const std::string& encoder,
                           Filter filter) {
  return rec.sample_id + "_" + pad3(rec.window_index) + "_" + encoder + "_" +
         to_string(filter) + ".png";
}

void require_path(const std::string& value, const char* key) {
  if (value.empty()) throw ConfigError(std::string("config key '") + key + "' is required");
}

struct WindowTask {
  int sample_index;
  int window_index;
  MultiSeries window;
};

std::vector<WindowTask> window_tasks(const LabeledDataset& ds, const PipelineConfig& cfg) {
  std::vector<WindowTask> tasks;
  for (std::size_t s = 0; s < ds.samples.size(); ++s) {
    auto windows = window_series(ds.samples[s], cfg.window_length, cfg.window_stride);
    for (std::size_t w = 0; w < windows.size(); ++w)
      tasks.push_back({static_cast<int>(s), static_cast<int>(w), std::move(windows[w])});
  }
  return tasks;
}

// Writes the per-modality PNGs (resized for viewing) and the index CSV.
EncodeResult write_images(const std::vector<WindowRecord>& records,
                          const PipelineConfig& cfg) {
  const std::filesystem::path outdir(cfg.outdir);
  const std::filesystem::path imgdir = outdir / "images";
  std::filesystem::create_directories(imgdir);

  parallel_for(static_cast<int>(records.size()), cfg.jobs, [&](int i) {
    const WindowRecord& rec = records[i];
    const ActivityImage* mods[3] = {&rec.base, &rec.prewitt, &rec.highboost};
    for (const ActivityImage* img : mods) {
      const ActivityImage resized = resize_bicubic(*img, cfg.resize_h, cfg.resize_w);
      write_png(resized, imgdir / image_filename(rec, cfg.encoder, img->filter));
    }
  });

  EncodeResult result;
  result.index_path = outdir / "index.csv";
  std::ofstream index(result.index_path);
  if (!index) throw IoError("cannot open '" + result.index_path.string() + "' for writing");
  index << "filename,sample_id,window,label,encoder,filter\n";
  for (const WindowRecord& rec : records) {
    for (const Filter f : {Filter::none, Filter::prewitt, Filter::highboost}) {
      index << image_filename(rec, cfg.encoder, f) << ',' << rec.sample_id << ','
            << rec.window_index << ',' << rec.label << ',' << cfg.encoder << ','
            << to_string(f) << '\n';
      ++result.images_written;
    }
  }
  index.flush();
  if (!index) throw IoError("short write to '" + result.index_path.string() + "'");
  return result;
}

std::string repeated_block(const std::string& tag, const RepeatedReport& rep) {
  std::string out;
  out += tag + " mean_accuracy = " + format_double(rep.mean_accuracy) + "\n";
  out += tag + " std_accuracy = " + format_double(rep.std_accuracy) + "\n";
  out += tag + " mean_macro_precision = " + format_double(rep.mean_macro_precision) + "\n";
  out += tag + " std_macro_precision = " + format_double(rep.std_macro_precision) + "\n";
  return out;
}

}  // namespace

std::vector<WindowRecord> encode_dataset(const LabeledDataset& ds, const PipelineConfig& cfg) {
  const Encoder encoder = encoder_from_string(cfg.encoder);
  const EncoderParams params = encoder_params(cfg);

  std::vector<WindowTask> tasks = window_tasks(ds, cfg);
  std::vector<WindowRecord> records(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), cfg.jobs, [&](int i) {
    const WindowTask& task = tasks[i];
    WindowRecord rec;
    rec.sample_index = task.sample_index;
    rec.window_index = task.window_index;
    rec.sample_id = task.window.sample_id;
    rec.label = task.window.label;
    rec.base = encode_window(task.window, encoder, params);
    rec.prewitt = prewitt_modality(rec.base);
    rec.highboost = highboost_modality(rec.base);
    records[i] = std::move(rec);
  });
  return records;
}

EncodeResult run_encode(const PipelineConfig& cfg) {
  validate_config(cfg);
  require_path(cfg.manifest, "manifest");
  require_path(cfg.outdir, "outdir");

  const DatasetManifest manifest = load_manifest(cfg.manifest);
  const LabeledDataset ds = load_dataset(manifest);
  const std::vector<WindowRecord> records = encode_dataset(ds, cfg);
  return write_images(records, cfg);
}

ModalityFeatures extract_features(const std::vector<WindowRecord>& records,
                                  const PipelineConfig& cfg) {
  if (records.empty()) throw ShapeError("no windows to extract features from");
  std::vector<ActivityImage> base, prewitt, highboost;
  std::vector<int> labels;
  ModalityFeatures out;
  base.reserve(records.size());
  for (const WindowRecord& rec : records) {
    base.push_back(rec.base);
    prewitt.push_back(rec.prewitt);
    highboost.push_back(rec.highboost);
    labels.push_back(rec.label);
    out.groups.push_back(rec.sample_index);
  }
  (void)cfg;
  out.base = baseline_extract(base, labels, "base");
  out.prewitt = baseline_extract(prewitt, labels, "prewitt");
  out.highboost = baseline_extract(highboost, labels, "highboost");
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  validate_config(cfg);
  require_path(cfg.manifest, "manifest");
  require_path(cfg.outdir, "outdir");

  const DatasetManifest manifest = load_manifest(cfg.manifest);
  const LabeledDataset ds = load_dataset(manifest);
  const std::filesystem::path outdir(cfg.outdir);
  std::filesystem::create_directories(outdir);

  ModalityFeatures feats;
  if (cfg.features_dir.empty()) {
    const std::vector<WindowRecord> records = encode_dataset(ds, cfg);
    write_images(records, cfg);
    feats = extract_features(records, cfg);

    const std::filesystem::path featdir = outdir / "features";
    std::filesystem::create_directories(featdir);
    export_features(feats.base, featdir / "base.itns");
    export_features(feats.prewitt, featdir / "prewitt.itns");
    export_features(feats.highboost, featdir / "highboost.itns");
    write_labels(feats.base.labels, featdir / "labels.txt");
  } else {
    // Imported rows must follow manifest order, one row per window per
    // recording; labels and groups are re-derived from the manifest.
    std::vector<int> labels, groups;
    for (std::size_t s = 0; s < ds.samples.size(); ++s) {
      const auto offsets =
          window_offsets(ds.samples[s].rows(), cfg.window_length, cfg.window_stride);
      for (std::size_t w = 0; w < offsets.size(); ++w) {
        labels.push_back(ds.samples[s].label);
        groups.push_back(static_cast<int>(s));
      }
    }

    const std::filesystem::path featdir(cfg.features_dir);
    feats.base = import_features(featdir / "base.itns");
    feats.prewitt = import_features(featdir / "prewitt.itns");
    feats.highboost = import_features(featdir / "highboost.itns");
    for (FeatureMatrix* fm : {&feats.base, &feats.prewitt, &feats.highboost}) {
      if (fm->rows() != static_cast<int>(labels.size()))
        throw AlignmentError("imported '" + fm->modality_tag + "' has " +
                             std::to_string(fm->rows()) + " rows but the manifest implies " +
                             std::to_string(labels.size()));
      fm->labels = labels;
    }
    feats.groups = groups;
  }

  FusionEvalConfig eval_cfg;
  eval_cfg.cca_dim = cfg.cca_dim;
  eval_cfg.cca_ridge = cfg.cca_ridge;
  eval_cfg.svm_c = cfg.svm_c;
  eval_cfg.svm_epochs = cfg.svm_epochs;
  eval_cfg.train_frac = cfg.train_frac;
  eval_cfg.repeats = cfg.repeats;
  eval_cfg.base_seed = cfg.seed;
  eval_cfg.jobs = cfg.jobs;

  const int num_classes = manifest.num_classes();
  PipelineResult result;
  result.fused = repeated_fusion_eval(feats.base, feats.prewitt, feats.highboost,
                                      feats.groups, num_classes, eval_cfg);
  result.base = repeated_single_eval(feats.base, feats.groups, num_classes, eval_cfg);
  result.prewitt = repeated_single_eval(feats.prewitt, feats.groups, num_classes, eval_cfg);
  result.highboost =
      repeated_single_eval(feats.highboost, feats.groups, num_classes, eval_cfg);

  result.report_path = outdir / "report.txt";
  std::ofstream report(result.report_path);
  if (!report) throw IoError("cannot open '" + result.report_path.string() + "' for writing");
  report << "# configuration\n" << print_config(cfg);
  report << "# fused two-stage fusion\n" << repeated_block("fused", result.fused);
  report << "# single-modality ablation\n";
  report << repeated_block("base", result.base);
  report << repeated_block("prewitt", result.prewitt);
  report << repeated_block("highboost", result.highboost);
  report << "# per-split fused results\n";
  for (int r = 0; r < result.fused.repeats(); ++r) {
    report << "split " << r << " accuracy = " << format_double(result.fused.accuracies[r])
           << " macro_precision = " << format_double(result.fused.macro_precisions[r])
           << '\n';
  }
  report.flush();
  if (!report) throw IoError("short write to '" + result.report_path.string() + "'");

  result.confusion_path = outdir / "confusion.csv";
  write_confusion_csv(result.fused.confusion, manifest.class_names, result.confusion_path);
  return result;
}

}  // namespace ii
