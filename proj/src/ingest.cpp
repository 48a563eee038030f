#include "ii/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ii/imaging.hpp"

namespace ii {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& s, int& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const ManifestEntry& e) const {
  std::filesystem::path p(e.path);
  return p.is_absolute() ? p : base_dir / p;
}

MultiSeries load_csv_sample(const std::filesystem::path& path, double rate_hz) {
  std::ifstream is(path);
  if (!is) throw MissingFileError("cannot open '" + path.string() + "'");

  std::vector<std::string> names;
  std::vector<std::vector<double>> body;
  std::string line;
  std::size_t line_no = 0;
  bool first_data_line = true;

  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split_commas(t);

    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (!parse_double(fields[i], row[i])) {
        numeric = false;
        break;
      }

    if (!numeric) {
      if (first_data_line) {
        // Non-numeric first row holds the channel names.
        for (const auto& f : fields) names.push_back(trim(f));
        first_data_line = false;
        continue;
      }
      throw FormatError("non-numeric cell at " + path.string() + ":" + std::to_string(line_no));
    }
    first_data_line = false;
    if (!body.empty() && row.size() != body.front().size())
      throw FormatError("ragged row at " + path.string() + ":" + std::to_string(line_no));
    if (!names.empty() && row.size() != names.size())
      throw FormatError("row width does not match header at " + path.string() + ":" +
                        std::to_string(line_no));
    body.push_back(std::move(row));
  }

  if (body.empty()) throw FormatError("no data rows in '" + path.string() + "'");

  MultiSeries out;
  out.rate_hz = rate_hz;
  out.channel_names = names;
  out.sample_id = path.stem().string();
  out.values.resize(static_cast<int>(body.size()), static_cast<int>(body.front().size()));
  for (std::size_t r = 0; r < body.size(); ++r)
    for (std::size_t c = 0; c < body[r].size(); ++c)
      out.values(static_cast<int>(r), static_cast<int>(c)) = body[r][c];
  out.validate();
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingFileError("cannot open manifest '" + path.string() + "'");

  DatasetManifest m;
  m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;

    if (t.rfind("class:", 0) == 0) {
      const std::string name = trim(t.substr(6));
      if (name.empty()) throw FormatError("empty class name at manifest line " + std::to_string(line_no));
      m.class_names.push_back(name);
      continue;
    }
    if (t.rfind("rate_hz:", 0) == 0) {
      if (!parse_double(t.substr(8), m.rate_hz))
        throw FormatError("bad rate_hz at manifest line " + std::to_string(line_no));
      continue;
    }

    const auto fields = split_commas(t);
    if (fields.size() != 3)
      throw FormatError("expected 'path,label,subject' at manifest line " + std::to_string(line_no));
    ManifestEntry e;
    e.path = trim(fields[0]);
    if (!parse_int(fields[1], e.label))
      throw FormatError("bad label at manifest line " + std::to_string(line_no));
    e.subject = trim(fields[2]);
    if (e.path.empty()) throw FormatError("empty path at manifest line " + std::to_string(line_no));
    m.entries.push_back(std::move(e));
  }

  if (m.class_names.empty()) throw FormatError("manifest declares no classes");
  if (!(m.rate_hz > 0.0)) throw FormatError("manifest must declare a positive rate_hz");
  if (m.entries.empty()) throw FormatError("manifest lists no samples");

  std::set<std::string> seen;
  std::vector<int> per_class(m.class_names.size(), 0);
  for (const auto& e : m.entries) {
    if (!seen.insert(e.path).second) throw FormatError("duplicate path '" + e.path + "' in manifest");
    if (e.label < 0 || e.label >= m.num_classes())
      throw RangeError("label " + std::to_string(e.label) + " outside [0," +
                       std::to_string(m.num_classes()) + ") for '" + e.path + "'");
    ++per_class[e.label];
    if (!std::filesystem::exists(m.resolve(e)))
      throw MissingFileError("manifest references missing file '" + m.resolve(e).string() + "'");
  }
  for (std::size_t k = 0; k < per_class.size(); ++k)
    if (per_class[k] == 0)
      throw FormatError("class '" + m.class_names[k] + "' has no samples in the manifest");
  return m;
}

LabeledDataset load_dataset(const DatasetManifest& manifest) {
  LabeledDataset ds;
  ds.class_names = manifest.class_names;

  std::set<std::string> used_ids;
  int channels = -1;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    MultiSeries s = load_csv_sample(manifest.resolve(e), manifest.rate_hz);
    s.label = e.label;
    if (!used_ids.insert(s.sample_id).second) {
      s.sample_id += "_" + std::to_string(i);
      used_ids.insert(s.sample_id);
    }
    if (channels < 0) channels = s.cols();
    if (s.cols() != channels)
      throw FormatError("sample '" + s.sample_id + "' has " + std::to_string(s.cols()) +
                        " channels, expected " + std::to_string(channels));
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

namespace {

// Stdlib-independent shuffle so a given seed means the same split everywhere.
void fisher_yates(std::vector<int>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

SplitIndices stratified_split_indices(const std::vector<int>& labels, int num_classes,
                                      double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw RangeError("train fraction must lie strictly between 0 and 1");
  if (num_classes < 2) throw ClassCountError("need at least 2 classes to split");

  std::vector<std::vector<int>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes)
      throw RangeError("label " + std::to_string(labels[i]) + " outside [0," +
                       std::to_string(num_classes) + ")");
    by_class[labels[i]].push_back(static_cast<int>(i));
  }

  std::mt19937_64 rng(seed);
  SplitIndices out;
  for (int k = 0; k < num_classes; ++k) {
    auto& members = by_class[k];
    const int n = static_cast<int>(members.size());
    if (n < 2)
      throw StratifyError("class " + std::to_string(k) + " has " + std::to_string(n) +
                          " samples; need at least 2 to stratify");
    fisher_yates(members, rng);
    // Nearest count to the requested fraction, but keep both sides nonempty.
    const int want = static_cast<int>(std::llround(train_frac * n));
    const int take = std::clamp(want, 1, n - 1);
    for (int i = 0; i < n; ++i)
      (i < take ? out.train : out.test).push_back(members[i]);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double train_frac, std::uint64_t seed) {
  const SplitIndices idx =
      stratified_split_indices(ds.labels(), ds.num_classes(), train_frac, seed);
  LabeledDataset train, test;
  train.class_names = ds.class_names;
  test.class_names = ds.class_names;
  for (int i : idx.train) train.samples.push_back(ds.samples[i]);
  for (int i : idx.test) test.samples.push_back(ds.samples[i]);
  return {std::move(train), std::move(test)};
}

void export_features(const FeatureMatrix& fm, const std::filesystem::path& path) {
  fm.validate();
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(fm.rows()), static_cast<std::uint32_t>(fm.dims())};
  t.data.resize(fm.x.size());
  for (int r = 0; r < fm.rows(); ++r)
    for (int c = 0; c < fm.dims(); ++c)
      t.data[static_cast<std::size_t>(r) * fm.dims() + c] = fm.x(r, c);
  write_tensor(t, path);
}

FeatureMatrix import_features(const std::filesystem::path& path) {
  Tensor t = read_tensor(path);
  if (t.dims.size() != 2)
    throw ShapeError("feature file '" + path.string() + "' must hold a rank-2 tensor, got rank " +
                     std::to_string(t.dims.size()));
  const auto n = t.dims[0];
  const auto p = t.dims[1];
  if (n < 1 || p < 1)
    throw ShapeError("feature matrix in '" + path.string() + "' has a zero dimension");

  FeatureMatrix fm;
  fm.modality_tag = path.stem().string();
  fm.labels.assign(n, -1);
  fm.x.resize(static_cast<int>(n), static_cast<int>(p));
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < p; ++c)
      fm.x(static_cast<int>(r), static_cast<int>(c)) = t.data[static_cast<std::size_t>(r) * p + c];
  return fm;
}

void write_labels(const std::vector<int>& labels, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  for (int v : labels) os << v << '\n';
  os.flush();
  if (!os) throw IoError("short write to '" + path.string() + "'");
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingFileError("cannot open '" + path.string() + "'");
  std::vector<int> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    int v = 0;
    if (!parse_int(t, v))
      throw FormatError("bad label at " + path.string() + ":" + std::to_string(line_no));
    out.push_back(v);
  }
  return out;
}

}  // namespace ii
