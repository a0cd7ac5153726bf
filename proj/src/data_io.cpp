#include "glwt/data_io.hpp"

#include "glwt/error.hpp"
#include "glwt/rng.hpp"
#include "glwt/text_io.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>

namespace glwt {

std::string to_string(GraphModel model) {
  switch (model) {
    case GraphModel::ErdosRenyi: return "erdos_renyi";
    case GraphModel::RandomGeometric: return "random_geometric";
    case GraphModel::Grid: return "grid";
  }
  return "unknown";
}

GraphModel parse_graph_model(const std::string& text) {
  if (text == "erdos_renyi") return GraphModel::ErdosRenyi;
  if (text == "random_geometric") return GraphModel::RandomGeometric;
  if (text == "grid") return GraphModel::Grid;
  fail(ErrorKind::InvalidArgument, "unknown graph model '" + text + "'");
}

void SyntheticSpec::validate() const {
  const int nodes = graph_model == GraphModel::Grid ? rows * cols : n;
  if (nodes < 2) fail(ErrorKind::InvalidArgument, "synthetic graphs need at least 2 nodes");
  if (graph_model == GraphModel::ErdosRenyi && !(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "edge probability must lie in [0, 1]");
  }
  if (graph_model == GraphModel::RandomGeometric && !(radius > 0.0)) {
    fail(ErrorKind::InvalidArgument, "radius must be positive");
  }
  if (graph_model == GraphModel::Grid && (rows < 1 || cols < 1)) {
    fail(ErrorKind::InvalidArgument, "grid rows and cols must be positive");
  }
  if (sigma_noise < 0.0) fail(ErrorKind::InvalidArgument, "sigma_noise must be nonnegative");
  if (!(smoothing_scale > 0.0)) fail(ErrorKind::InvalidArgument, "smoothing scale must be positive");
  if (trials < 0) fail(ErrorKind::InvalidArgument, "trials must be nonnegative");
}

namespace {

Graph sample_graph(const SyntheticSpec& spec, Rng& rng) {
  std::vector<Edge> edges;
  switch (spec.graph_model) {
    case GraphModel::ErdosRenyi:
      for (int i = 0; i < spec.n; ++i) {
        for (int j = i + 1; j < spec.n; ++j) {
          if (rng.uniform() < spec.edge_probability) edges.push_back({i, j, 1.0});
        }
      }
      return build_graph(spec.n, std::move(edges));
    case GraphModel::RandomGeometric: {
      std::vector<double> x(static_cast<std::size_t>(spec.n));
      std::vector<double> y(static_cast<std::size_t>(spec.n));
      for (int i = 0; i < spec.n; ++i) {
        x[i] = rng.uniform();
        y[i] = rng.uniform();
      }
      for (int i = 0; i < spec.n; ++i) {
        for (int j = i + 1; j < spec.n; ++j) {
          if (std::hypot(x[i] - x[j], y[i] - y[j]) < spec.radius) edges.push_back({i, j, 1.0});
        }
      }
      return build_graph(spec.n, std::move(edges));
    }
    case GraphModel::Grid: {
      auto id = [&](int r, int c) { return r * spec.cols + c; };
      for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
          if (c + 1 < spec.cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
          if (r + 1 < spec.rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
        }
      }
      return build_graph(spec.rows * spec.cols, std::move(edges));
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown graph model");
}

}  // namespace

Graph gen_graph(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0xA11CE));
  for (int attempt = 0; attempt < 100; ++attempt) {
    Graph g = sample_graph(spec, rng);
    if (g.connected()) return g;
    if (spec.graph_model == GraphModel::Grid) break;
  }
  fail(ErrorKind::ConnectivityFailure, "no connected " + to_string(spec.graph_model) +
                                           " graph after 100 attempts");
}

TrainSample gen_signal_pair(const SpectralBasis& basis, const SyntheticSpec& spec, int trial) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 1000 + static_cast<std::uint64_t>(trial)));
  const int n = basis.n();
  Vector white(n);
  for (int i = 0; i < n; ++i) white[i] = rng.normal();
  Vector eta(n);
  for (int i = 0; i < n; ++i) eta[i] = rng.normal();
  TrainSample s;
  s.clean = filter_apply_exact(basis, spec.smoothing, spec.smoothing_scale, white);
  const double norm = s.clean.norm();
  if (norm > 0.0) s.clean /= norm;
  s.noisy = s.clean + spec.sigma_noise * eta;
  return s;
}

namespace {

using nlohmann::json;

json to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    fail(ErrorKind::SchemaError, std::string("missing array '") + key + "'");
  }
  const json& arr = obj.at(key);
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(ErrorKind::SchemaError, std::string("non-numeric entry in '") + key + "'");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

const json& object_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_object()) {
    fail(ErrorKind::SchemaError, std::string("missing object '") + key + "'");
  }
  return obj.at(key);
}

}  // namespace

std::string format_model(const GlwtModel& model) {
  model.validate();
  json j;
  j["format_version"] = kModelFormatVersion;
  std::vector<double> scales = model.bank.scales;
  j["bank"] = {{"kernel", to_string(model.bank.kernel.family)},
               {"scales", scales},
               {"cheb_order", model.bank.cheb_order},
               {"lambda_max", model.bank.lambda_max}};
  j["modulation"] = {{"threshold", to_json(model.modulation.threshold)},
                     {"gain", to_json(model.modulation.gain)},
                     {"phase", to_json(model.modulation.phase)}};
  j["fusion"] = {{"logits", to_json(model.fusion.logits)}};
  j["tau"] = to_json(model.tau);
  j["epsilon"] = model.epsilon;
  return j.dump(2) + "\n";
}

GlwtModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed model file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j.at("format_version").is_number_integer()) {
    fail(ErrorKind::SchemaError, "missing integer 'format_version'");
  }
  const int version = j.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    fail(ErrorKind::VersionMismatch, "model format_version " + std::to_string(version) +
                                         " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  GlwtModel m;
  try {
    const json& bank = object_field(j, "bank");
    m.bank.kernel.family = parse_kernel_family(bank.at("kernel").get<std::string>());
    const Vector scales = vector_field(bank, "scales");
    m.bank.scales.assign(scales.data(), scales.data() + scales.size());
    m.bank.cheb_order = bank.at("cheb_order").get<int>();
    m.bank.lambda_max = bank.at("lambda_max").get<double>();
    const json& mod = object_field(j, "modulation");
    m.modulation.threshold = vector_field(mod, "threshold");
    m.modulation.gain = vector_field(mod, "gain");
    m.modulation.phase = vector_field(mod, "phase");
    m.fusion.logits = vector_field(object_field(j, "fusion"), "logits");
    m.tau = vector_field(j, "tau");
    m.epsilon = j.at("epsilon").get<double>();
  } catch (const json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("model file: ") + e.what());
  }
  try {
    m.validate();
  } catch (const Error& e) {
    fail(ErrorKind::SchemaError, e.what());
  }
  return m;
}

void save_model(const GlwtModel& model, const std::string& path) {
  write_text_file(path, format_model(model));
}

GlwtModel load_model(const std::string& path) { return parse_model(read_text_file(path)); }

std::vector<int> NodeDataset::train_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < train_mask.size(); ++i) {
    if (train_mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> NodeDataset::test_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < test_mask.size(); ++i) {
    if (test_mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> parse_labels(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<int> labels;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line, '#'));
    if (line.empty()) continue;
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size() || v < 0) {
      fail(ErrorKind::UnknownLabel, "line " + std::to_string(line_no) + ": '" + line +
                                        "' is not a nonnegative integer label");
    }
    labels.push_back(v);
  }
  return labels;
}

void make_split(NodeDataset& data, const SplitSpec& split) {
  const std::size_t n = data.labels.size();
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[data.labels[i]].push_back(static_cast<int>(i));
  data.train_mask.assign(n, 0);
  data.test_mask.assign(n, 1);
  Rng rng(derive_seed(split.seed, 0x5711));
  for (auto& [label, members] : by_class) {
    if (static_cast<int>(members.size()) < split.per_class) {
      fail(ErrorKind::QuotaExceeded, "class " + std::to_string(label) + " has " +
                                         std::to_string(members.size()) + " nodes, quota is " +
                                         std::to_string(split.per_class));
    }
    rng.shuffle(members);
    for (int q = 0; q < split.per_class; ++q) {
      data.train_mask[static_cast<std::size_t>(members[q])] = 1;
      data.test_mask[static_cast<std::size_t>(members[q])] = 0;
    }
  }
}

NodeDataset load_node_dataset(const std::string& graph_path, const std::string& features_path,
                              const std::string& labels_path, const SplitSpec& split) {
  NodeDataset data{read_graph(graph_path), read_matrix_csv(features_path),
                   parse_labels(read_text_file(labels_path)), {}, {}};
  if (data.features.rows() != data.graph.n()) {
    fail(ErrorKind::RowCountMismatch, "features have " + std::to_string(data.features.rows()) +
                                          " rows for " + std::to_string(data.graph.n()) + " nodes");
  }
  if (static_cast<int>(data.labels.size()) != data.graph.n()) {
    fail(ErrorKind::RowCountMismatch, "labels have " + std::to_string(data.labels.size()) +
                                          " rows for " + std::to_string(data.graph.n()) + " nodes");
  }
  make_split(data, split);
  return data;
}

std::string format_sample(const TrainSample& sample) {
  std::string out;
  for (Eigen::Index i = 0; i < sample.clean.size(); ++i) {
    out += format_double(sample.clean[i]) + "," + format_double(sample.noisy[i]) + "\n";
  }
  return out;
}

TrainSample parse_sample(const std::string& text) {
  const Matrix m = parse_matrix_csv(text);
  if (m.rows() == 0 || m.cols() != 2) fail(ErrorKind::SchemaError, "sample file must have two columns");
  return TrainSample{m.col(0), m.col(1)};
}

TrainSample read_sample(const std::string& path) { return parse_sample(read_text_file(path)); }

}  // namespace glwt
