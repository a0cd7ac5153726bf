#pragma once

#include "glwt/pipeline.hpp"
#include "glwt/training.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace glwt {

enum class GraphModel { ErdosRenyi, RandomGeometric, Grid };

std::string to_string(GraphModel model);
GraphModel parse_graph_model(const std::string& text);

struct SyntheticSpec {
  GraphModel graph_model = GraphModel::ErdosRenyi;
  int n = 100;
  double edge_probability = 0.1;  // ErdosRenyi
  double radius = 0.2;            // RandomGeometric
  int rows = 10;                  // Grid
  int cols = 10;
  KernelSpec smoothing;
  double smoothing_scale = 5.0;
  LaplacianKind smoothing_laplacian = LaplacianKind::SymmetricNormalized;
  double sigma_noise = 0.1;
  int trials = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Connected graph, deterministic per spec.seed. Resamples up to 100 times.
/// Throws ConnectivityFailure.
Graph gen_graph(const SyntheticSpec& spec);

/// Clean f = normalize(g(sL) w), w ~ N(0, I); noisy = f + sigma * eta.
/// Both draws come from a stream seeded by (spec.seed, trial), so trials at
/// different sigma share the same clean signal and noise direction.
TrainSample gen_signal_pair(const SpectralBasis& smoothing_basis, const SyntheticSpec& spec,
                            int trial);

/// Model file: versioned JSON.
inline constexpr int kModelFormatVersion = 1;

std::string format_model(const GlwtModel& model);
GlwtModel parse_model(const std::string& text);
void save_model(const GlwtModel& model, const std::string& path);
/// Throws IoFailure, VersionMismatch, SchemaError.
GlwtModel load_model(const std::string& path);

struct SplitSpec {
  int per_class = 20;
  std::uint64_t seed = 0;
};

struct NodeDataset {
  Graph graph;
  Matrix features;  // n x d
  std::vector<int> labels;
  std::vector<char> train_mask;
  std::vector<char> test_mask;

  std::vector<int> train_nodes() const;
  std::vector<int> test_nodes() const;
};

std::vector<int> parse_labels(const std::string& text);

/// Per-class quota sampling: `per_class` training nodes per label, the rest
/// test. Throws QuotaExceeded naming the class.
void make_split(NodeDataset& data, const SplitSpec& split);

/// Throws RowCountMismatch, UnknownLabel, QuotaExceeded.
NodeDataset load_node_dataset(const std::string& graph_path, const std::string& features_path,
                              const std::string& labels_path, const SplitSpec& split);

/// Sample file: one "clean,noisy" pair per line.
std::string format_sample(const TrainSample& sample);
TrainSample parse_sample(const std::string& text);
TrainSample read_sample(const std::string& path);

}  // namespace glwt
