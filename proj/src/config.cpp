#include <cstdlib>
#include <fstream>

#include "ii/pipeline.hpp"
#include "ii/text.hpp"

namespace ii {

namespace {

int parse_int_cfg(const std::string& key, const std::string& value) {
  int out = 0;
  if (!parse_int_text(value, out))
    throw ConfigError("key '" + key + "' needs an integer, got '" + value + "'");
  return out;
}

double parse_double_cfg(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!parse_double_text(value, out))
    throw ConfigError("key '" + key + "' needs a number, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64_cfg(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  if (!parse_int_text(value, out))
    throw ConfigError("key '" + key + "' needs a non-negative integer, got '" + value + "'");
  return out;
}

}  // namespace

void set_config_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "encoder") cfg.encoder = value;
  else if (key == "window_length") cfg.window_length = parse_int_cfg(key, value);
  else if (key == "window_stride") cfg.window_stride = parse_int_cfg(key, value);
  else if (key == "mtf_bins") cfg.mtf_bins = parse_int_cfg(key, value);
  else if (key == "rp_epsilon_pct") cfg.rp_epsilon_pct = parse_double_cfg(key, value);
  else if (key == "channel_mode") cfg.channel_mode = value;
  else if (key == "resize_h") cfg.resize_h = parse_int_cfg(key, value);
  else if (key == "resize_w") cfg.resize_w = parse_int_cfg(key, value);
  else if (key == "cca_dim") cfg.cca_dim = parse_int_cfg(key, value);
  else if (key == "cca_ridge") cfg.cca_ridge = parse_double_cfg(key, value);
  else if (key == "svm_c") cfg.svm_c = parse_double_cfg(key, value);
  else if (key == "svm_epochs") cfg.svm_epochs = parse_int_cfg(key, value);
  else if (key == "repeats") cfg.repeats = parse_int_cfg(key, value);
  else if (key == "train_frac") cfg.train_frac = parse_double_cfg(key, value);
  else if (key == "seed") cfg.seed = parse_u64_cfg(key, value);
  else if (key == "jobs") cfg.jobs = parse_int_cfg(key, value);
  else if (key == "manifest") cfg.manifest = value;
  else if (key == "outdir") cfg.outdir = value;
  else if (key == "features_dir") cfg.features_dir = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

void merge_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingFileError("cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim_text(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' at " + path.string() + ":" +
                        std::to_string(line_no));
    const std::string key = trim_text(t.substr(0, eq));
    const std::string value = trim_text(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("empty key at " + path.string() + ":" + std::to_string(line_no));
    set_config_key(cfg, key, value);
  }
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  PipelineConfig cfg;
  merge_config_file(cfg, path);
  return cfg;
}

std::string print_config(const PipelineConfig& cfg) {
  std::string out;
  const auto put = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  put("encoder", cfg.encoder);
  put("window_length", std::to_string(cfg.window_length));
  put("window_stride", std::to_string(cfg.window_stride));
  put("mtf_bins", std::to_string(cfg.mtf_bins));
  put("rp_epsilon_pct", format_double(cfg.rp_epsilon_pct));
  put("channel_mode", cfg.channel_mode);
  put("resize_h", std::to_string(cfg.resize_h));
  put("resize_w", std::to_string(cfg.resize_w));
  put("cca_dim", std::to_string(cfg.cca_dim));
  put("cca_ridge", format_double(cfg.cca_ridge));
  put("svm_c", format_double(cfg.svm_c));
  put("svm_epochs", std::to_string(cfg.svm_epochs));
  put("repeats", std::to_string(cfg.repeats));
  put("train_frac", format_double(cfg.train_frac));
  put("seed", std::to_string(cfg.seed));
  put("jobs", std::to_string(cfg.jobs));
  put("manifest", cfg.manifest);
  put("outdir", cfg.outdir);
  put("features_dir", cfg.features_dir);
  return out;
}

void validate_config(const PipelineConfig& cfg) {
  encoder_from_string(cfg.encoder);       // throws on unknown names
  channel_mode_from_string(cfg.channel_mode);
  if (cfg.window_length < 2) throw ConfigError("window_length must be >= 2");
  if (cfg.window_stride < 1) throw ConfigError("window_stride must be >= 1");
  if (cfg.mtf_bins < 2) throw ConfigError("mtf_bins must be >= 2");
  if (!(cfg.rp_epsilon_pct > 0.0 && cfg.rp_epsilon_pct <= 100.0))
    throw ConfigError("rp_epsilon_pct must lie in (0,100]");
  if (cfg.resize_h < 1 || cfg.resize_w < 1)
    throw ConfigError("resize dimensions must be >= 1");
  if (cfg.cca_dim != -1 && cfg.cca_dim < 1)
    throw ConfigError("cca_dim must be -1 (auto) or >= 1");
  if (!(cfg.cca_ridge >= 0.0)) throw ConfigError("cca_ridge must be >= 0");
  if (!(cfg.svm_c > 0.0)) throw ConfigError("svm_c must be > 0");
  if (cfg.svm_epochs < 1) throw ConfigError("svm_epochs must be >= 1");
  if (cfg.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!(cfg.train_frac > 0.0 && cfg.train_frac < 1.0))
    throw ConfigError("train_frac must lie strictly between 0 and 1");
  if (cfg.jobs < 0) throw ConfigError("jobs must be >= 0");
}

void apply_env_seed(PipelineConfig& cfg) {
  const char* env = std::getenv("II_SEED");
  if (env == nullptr || *env == '\0') return;
  std::uint64_t seed = 0;
  if (!parse_int_text(std::string(env), seed))
    throw ConfigError("II_SEED must be a non-negative integer, got '" + std::string(env) + "'");
  cfg.seed = seed;
}

EncoderParams encoder_params(const PipelineConfig& cfg) {
  EncoderParams params;
  params.mtf_bins = cfg.mtf_bins;
  params.rp_epsilon_pct = cfg.rp_epsilon_pct;
  params.mode = channel_mode_from_string(cfg.channel_mode);
  return params;
}

}  // namespace ii
