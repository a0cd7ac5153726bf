#pragma once

#include "glwt/error.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace glwt::app {

/// Every flag doubles as a config-file key of the same name.
struct Options {
  std::string out = "out";
  std::uint64_t seed = 0;
  bool check = false;

  // synthetic data
  std::string graph_model = "erdos_renyi";
  int n = 100;
  double p = 0.1;
  double radius = 0.2;
  int rows = 10;
  int cols = 10;
  std::string smoothing_kernel = "heat";
  double smoothing_scale = 5.0;
  std::string smoothing_laplacian = "normalized";
  std::string sigmas = "0.01,0.05,0.1,0.3,0.5";
  int trials = 50;
  int train_trials = 20;

  // filter bank
  std::string kernel = "heat";
  std::string scales = "0.1,0.3,1,3,10";
  int cheb_order = 30;
  std::string laplacian = "normalized";

  // training
  std::string fixtures;  // defaults to out
  double sigma = -1.0;   // negative: every sigma in the manifest
  double step_size = 0.5;
  int epochs = 500;
  double beta = 0.0;
  std::string entropy_mode = "concentration";

  // denoising
  std::string models;  // defaults to out/models
  double heat_scale = 0.5;

  // classification
  std::string graph;
  std::string features;
  std::string labels;
  std::string model;
  int per_class = 20;
  int splits = 10;
  std::string threshold_mode = "signed";
  int max_literals = 2;
  double min_gain = 0.01;

  // rules
  std::string rules_file;
  std::string facts;
  std::string phi;
  std::string tau;
  std::string node_ids;
  std::string node;
  int num_scales = 0;  // 0: infer
};

std::string fixtures_dir(const Options& o);
std::string models_dir(const Options& o);
std::string model_path(const std::string& dir, double sigma);
std::string loss_trace_path(const std::string& dir, double sigma);

void cmd_gen(const Options& o, std::ostream& out);
void cmd_train(const Options& o, std::ostream& out);
void cmd_denoise(const Options& o, std::ostream& out);
void cmd_classify(const Options& o, std::ostream& out);
void cmd_rules_check(const Options& o, std::ostream& out);
void cmd_rules_eval(const Options& o, std::ostream& out);
void cmd_rules_trace(const Options& o, std::ostream& out);
void cmd_rules_export(const Options& o, std::ostream& out);
void cmd_inspect(const Options& o, std::ostream& out);

/// 1 usage, 2 data or validation, 3 numerical failure.
int exit_code(ErrorKind kind);

/// Parses argv, dispatches, and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glwt::app
