#include "commands.hpp"

#include "glwt/data_io.hpp"
#include "glwt/evaluate.hpp"
#include "glwt/experiment.hpp"
#include "glwt/rules.hpp"
#include "glwt/text_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

namespace glwt::app {

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const std::string& item : split(text, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) values.push_back(parse_double(t, what));
  }
  if (values.empty()) fail(ErrorKind::UsageError, what + " needs at least one value");
  return values;
}

SyntheticSpec synthetic_spec(const Options& o) {
  SyntheticSpec s;
  s.graph_model = parse_graph_model(o.graph_model);
  s.n = o.n;
  s.edge_probability = o.p;
  s.radius = o.radius;
  s.rows = o.rows;
  s.cols = o.cols;
  s.smoothing.family = parse_kernel_family(o.smoothing_kernel);
  s.smoothing_scale = o.smoothing_scale;
  s.smoothing_laplacian = parse_laplacian_kind(o.smoothing_laplacian);
  s.trials = o.trials;
  s.seed = o.seed;
  s.validate();
  return s;
}

FilterBank filter_bank(const Options& o) {
  FilterBank bank;
  bank.kernel.family = parse_kernel_family(o.kernel);
  bank.scales = parse_list(o.scales, "scales");
  bank.cheb_order = o.cheb_order;
  bank.validate();
  return bank;
}

EntropyMode entropy_mode(const std::string& text) {
  if (text == "concentration") return EntropyMode::ConcentrationIntent;
  if (text == "as_written") return EntropyMode::AsWritten;
  fail(ErrorKind::UsageError, "entropy_mode must be 'concentration' or 'as_written'");
}

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::string sample_name(const std::string& split_name, double sigma, int trial) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d", trial);
  return "samples/" + split_name + "_sigma" + format_double(sigma) + "_trial" + buf + ".csv";
}

struct ManifestEntry {
  std::string file;
  double sigma = 0.0;
  int trial = 0;
  std::string split;
};

std::vector<ManifestEntry> read_manifest(const std::string& dir) {
  const std::string text = read_text_file(join(dir, "manifest.csv"));
  std::istringstream in(text);
  std::string line;
  std::vector<ManifestEntry> entries;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line) != "file,sigma,trial,split") fail(ErrorKind::SchemaError, "manifest header mismatch");
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 4) {
      fail(ErrorKind::SchemaError, "manifest line " + std::to_string(line_no) + " needs 4 columns");
    }
    entries.push_back(ManifestEntry{trim(cells[0]), parse_double(cells[1], "manifest sigma"),
                                    static_cast<int>(parse_double(cells[2], "manifest trial")),
                                    trim(cells[3])});
  }
  return entries;
}

/// Sigma values in first-appearance order with their samples for one split.
std::vector<std::pair<double, std::vector<TrainSample>>> load_split(const std::string& dir,
                                                                    const std::vector<ManifestEntry>& manifest,
                                                                    const std::string& split_name) {
  std::vector<std::pair<double, std::vector<TrainSample>>> groups;
  for (const ManifestEntry& e : manifest) {
    if (e.split != split_name) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == e.sigma; });
    if (it == groups.end()) {
      groups.emplace_back(e.sigma, std::vector<TrainSample>{});
      it = groups.end() - 1;
    }
    it->second.push_back(read_sample(join(dir, e.file)));
  }
  return groups;
}

std::string format_row(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format_row(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::vector<std::string> parse_ids(const std::string& text) {
  std::vector<std::string> ids;
  if (trim(text).empty()) return ids;
  for (const std::string& item : split(text, ',')) ids.push_back(trim(item));
  return ids;
}

struct LoadedRules {
  RuleProgram program;
  ActivationTensor acts;
};

LoadedRules load_rules_and_activations(const Options& o) {
  if (o.rules_file.empty()) fail(ErrorKind::UsageError, "a rule file is required");
  const std::optional<int> k = o.num_scales > 0 ? std::optional<int>(o.num_scales) : std::nullopt;
  RuleSource source = parse_source(read_text_file(o.rules_file), k);
  LoadedRules out;
  out.program = std::move(source.program);
  if (!o.phi.empty()) {
    const Matrix phi = read_matrix_csv(o.phi).transpose();  // file is nodes x scales
    if (o.tau.empty()) fail(ErrorKind::UsageError, "--tau is required with --phi");
    const std::vector<double> t = parse_list(o.tau, "tau");
    Vector tau(phi.rows());
    if (t.size() == 1) {
      tau.setConstant(t[0]);
    } else if (static_cast<Eigen::Index>(t.size()) == phi.rows()) {
      for (std::size_t i = 0; i < t.size(); ++i) tau[static_cast<Eigen::Index>(i)] = t[i];
    } else {
      fail(ErrorKind::DimensionMismatch, "tau needs 1 or " + std::to_string(phi.rows()) + " values");
    }
    out.acts = binarize(phi, tau, parse_threshold_mode(o.threshold_mode), parse_ids(o.node_ids));
  } else {
    std::vector<Fact> facts = std::move(source.facts);
    if (!o.facts.empty()) facts = parse_source(read_text_file(o.facts), k).facts;
    if (facts.empty()) fail(ErrorKind::UsageError, "no activations: pass --phi, --facts, or facts in the rule file");
    std::optional<int> scales = k;
    if (!scales) {
      int max_scale = out.program.max_scale();
      for (const Fact& f : facts) max_scale = std::max(max_scale, f.scale);
      scales = max_scale + 1;
    }
    out.acts = facts_to_activations(facts, scales);
  }
  return out;
}

int find_node(const ActivationTensor& acts, const std::string& id) {
  for (int i = 0; i < acts.num_nodes(); ++i) {
    if (acts.node_id(i) == id) return i;
  }
  fail(ErrorKind::IndexOutOfRange, "unknown node '" + id + "'");
}

}  // namespace

std::string fixtures_dir(const Options& o) { return o.fixtures.empty() ? o.out : o.fixtures; }
std::string models_dir(const Options& o) { return o.models.empty() ? join(o.out, "models") : o.models; }
std::string model_path(const std::string& dir, double sigma) {
  return join(dir, "model_sigma" + format_double(sigma) + ".json");
}
std::string loss_trace_path(const std::string& dir, double sigma) {
  return join(dir, "loss_sigma" + format_double(sigma) + ".csv");
}

void cmd_gen(const Options& o, std::ostream& out) {
  const SyntheticSpec spec = synthetic_spec(o);
  const std::vector<double> sigmas = parse_list(o.sigmas, "sigmas");
  for (double s : sigmas) {
    if (s < 0.0) fail(ErrorKind::InvalidArgument, "sigma values must be nonnegative");
  }
  if (o.train_trials < 0) fail(ErrorKind::InvalidArgument, "train_trials must be nonnegative");
  const Graph g = gen_graph(spec);
  write_graph(g, join(o.out, "graph.txt"));
  const SpectralBasis basis = spectral_basis(g, spec.smoothing_laplacian);
  std::string manifest = "file,sigma,trial,split\n";
  out << format_row("%-8s %-6s %6s\n", "sigma", "split", "files");
  for (double sigma : sigmas) {
    const std::pair<const char*, std::pair<int, int>> parts[] = {
        {"test", {0, spec.trials}}, {"train", {kTrainTrialOffset, o.train_trials}}};
    for (const auto& [name, range] : parts) {
      const auto samples = make_samples(basis, spec, sigma, range.first, range.second);
      for (int t = 0; t < range.second; ++t) {
        const std::string file = sample_name(name, sigma, t);
        write_text_file(join(o.out, file), format_sample(samples[static_cast<std::size_t>(t)]));
        manifest += file + "," + format_double(sigma) + "," + std::to_string(t) + "," + name + "\n";
      }
      out << format_row("%-8g %-6s %6d\n", sigma, name, range.second);
    }
  }
  write_text_file(join(o.out, "manifest.csv"), manifest);
  out << "graph: " << g.n() << " nodes, " << g.edges().size() << " edges -> " << join(o.out, "graph.txt")
      << "\nmanifest: " << join(o.out, "manifest.csv") << "\n";
}

void cmd_train(const Options& o, std::ostream& out) {
  const std::string dir = fixtures_dir(o);
  const Graph g = read_graph(join(dir, "graph.txt"));
  const FilterBank bank = filter_bank(o);
  const ScaleFilter op = ScaleFilter::automatic(g, parse_laplacian_kind(o.laplacian), bank);
  DenoiseConfig cfg;
  cfg.bank = bank;
  cfg.train.step_size = o.step_size;
  cfg.train.epochs = o.epochs;
  cfg.train.seed = o.seed;
  cfg.loss.beta = o.beta;
  cfg.loss.entropy_mode = entropy_mode(o.entropy_mode);
  const auto groups = load_split(dir, read_manifest(dir), "train");
  const std::string mdir = models_dir(o);
  out << format_row("%-8s %8s %14s %14s\n", "sigma", "samples", "initial_loss", "final_loss");
  int trained = 0;
  for (const auto& [sigma, samples] : groups) {
    if (o.sigma >= 0.0 && sigma != o.sigma) continue;
    const DenoiserFit fit = fit_denoiser(op, samples, sigma, cfg);
    save_model(fit.trained, model_path(mdir, sigma));
    write_text_file(loss_trace_path(mdir, sigma), format_loss_trace(fit.trace));
    out << format_row("%-8g %8zu %14.6e %14.6e\n", sigma, samples.size(), fit.trace.front().mean_loss,
                      fit.trace.back().mean_loss);
    ++trained;
  }
  if (trained == 0) fail(ErrorKind::EmptyDataset, "no training fixtures matched in " + dir);
  out << "models: " << mdir << "\n";
}

void cmd_denoise(const Options& o, std::ostream& out) {
  const std::string dir = fixtures_dir(o);
  const Graph g = read_graph(join(dir, "graph.txt"));
  auto basis = std::make_shared<const SpectralBasis>(spectral_basis(g, parse_laplacian_kind(o.laplacian)));
  const auto groups = load_split(dir, read_manifest(dir), "test");
  if (groups.empty()) fail(ErrorKind::EmptyDataset, "no test fixtures in " + dir);
  std::vector<MethodResult> rows;
  for (const auto& [sigma, samples] : groups) {
    const GlwtModel model = load_model(model_path(models_dir(o), sigma));
    const DenoiseMethods methods(basis, model.bank, o.heat_scale);
    auto scored = score_methods(methods, sigma, model, nullptr, samples);
    rows.insert(rows.end(), scored.begin(), scored.end());
  }
  write_text_file(join(o.out, "results.csv"), format_results_csv(rows));
  out << format_results_table(rows);
  if (o.check) {
    const auto bad = monotonicity_violations(rows);
    if (!bad.empty()) {
      std::string names;
      for (const auto& m : bad) names += (names.empty() ? "" : ", ") + m;
      fail(ErrorKind::CheckFailed, "mse_mean not nondecreasing in sigma for: " + names);
    }
    out << "check: mse_mean nondecreasing in sigma for every method\n";
  }
}

void cmd_classify(const Options& o, std::ostream& out) {
  NodeDataset data;
  if (!o.graph.empty() || !o.features.empty() || !o.labels.empty()) {
    if (o.graph.empty() || o.features.empty() || o.labels.empty()) {
      fail(ErrorKind::UsageError, "--graph, --features and --labels go together");
    }
    data = load_node_dataset(o.graph, o.features, o.labels, SplitSpec{o.per_class, o.seed});
  } else {
    CommunitySpec spec;
    spec.seed = o.seed;
    data = make_community_dataset(spec);
  }
  const GlwtModel model = o.model.empty() ? GlwtModel::identity_like(filter_bank(o)) : load_model(o.model);
  const ScaleFilter op = ScaleFilter::automatic(data.graph, parse_laplacian_kind(o.laplacian), model.bank);
  ClassifyConfig cfg;
  cfg.per_class = o.per_class;
  cfg.splits = o.splits;
  cfg.seed = o.seed;
  cfg.mode = parse_threshold_mode(o.threshold_mode);
  cfg.learn.max_body_literals = o.max_literals;
  cfg.learn.min_gain = o.min_gain;
  const ClassifyReport report = run_classification(data, model, op, cfg);
  const std::string text = format_classify_report(report);
  out << text;
  write_text_file(join(o.out, "classify_report.txt"), text);

  const SplitOutcome& first = report.splits.front();
  write_text_file(join(o.out, "rules.pl"), print_rules(first.learned.program));
  const ActivationTensor acts = binarize(report.phi, first.learned.tau, cfg.mode, data.graph.node_ids());
  std::string traces;
  for (int i = 0; i < acts.num_nodes(); ++i) {
    if (i) traces += '\n';
    traces += trace(first.learned.program, acts, i).text;
  }
  write_text_file(join(o.out, "traces.txt"), traces);

  std::string csv = "node";
  for (int k = 0; k < report.phi.rows(); ++k) csv += "," + ActivationTensor::scale_name(k);
  csv += '\n';
  for (Eigen::Index i = 0; i < report.phi.cols(); ++i) {
    csv += data.graph.node_id(static_cast<int>(i));
    for (Eigen::Index k = 0; k < report.phi.rows(); ++k) csv += "," + format_double(report.phi(k, i));
    csv += '\n';
  }
  write_text_file(join(o.out, "activations.csv"), csv);
  out << "rules (split 0): " << join(o.out, "rules.pl") << "\n";
}

void cmd_rules_check(const Options& o, std::ostream& out) {
  if (o.rules_file.empty()) fail(ErrorKind::UsageError, "a rule file is required");
  const std::optional<int> k = o.num_scales > 0 ? std::optional<int>(o.num_scales) : std::nullopt;
  const RuleSource source = parse_source(read_text_file(o.rules_file), k);
  out << "ok: " << source.program.rules.size() << " rules, " << source.facts.size() << " facts\n";
}

void cmd_rules_eval(const Options& o, std::ostream& out) {
  const LoadedRules r = load_rules_and_activations(o);
  const CrispVerdicts v = evaluate(r.program, r.acts);
  for (int i = 0; i < r.acts.num_nodes(); ++i) {
    for (const std::string& head : v.heads) {
      out << head << "(" << r.acts.node_id(i) << ") :- " << (v.at(i, head) ? "true" : "false") << "\n";
    }
  }
}

void cmd_rules_trace(const Options& o, std::ostream& out) {
  const LoadedRules r = load_rules_and_activations(o);
  if (o.node.empty()) {
    for (int i = 0; i < r.acts.num_nodes(); ++i) {
      if (i) out << '\n';
      out << trace(r.program, r.acts, i).text;
    }
    return;
  }
  out << trace(r.program, r.acts, find_node(r.acts, o.node)).text;
}

void cmd_rules_export(const Options& o, std::ostream& out) {
  const LoadedRules r = load_rules_and_activations(o);
  out << export_facts(r.acts, r.program);
}

void cmd_inspect(const Options& o, std::ostream& out) {
  if (o.model.empty()) fail(ErrorKind::UsageError, "a model file is required");
  const GlwtModel m = load_model(o.model);
  const Vector w = m.weights();
  out << "kernel " << to_string(m.bank.kernel.family) << ", cheb_order " << m.bank.cheb_order
      << ", lambda_max " << format_double(m.bank.lambda_max) << ", epsilon " << format_double(m.epsilon)
      << "\n";
  out << format_row("%-3s %10s %12s %12s %12s %12s %10s %10s\n", "k", "scale", "threshold", "gain",
                    "phase", "logit", "weight", "tau");
  for (int k = 0; k < m.num_scales(); ++k) {
    out << format_row("%-3d %10g %12.6g %12.6g %12.6g %12.6g %10.6f %10.6g\n", k, m.bank.scales[k],
                      m.modulation.threshold[k], m.modulation.gain[k], m.modulation.phase[k],
                      m.fusion.logits[k], w[k], m.tau[k]);
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UsageError:
      return 1;
    case ErrorKind::DecompositionFailure:
    case ErrorKind::DivergedLoss:
      return 3;
    default:
      return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Graph wavelet denoising and rule learning"};
  app.set_config("--config", "", "key=value file; flags of the same name override it");
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_flag("--check", o.check, "assert result properties (denoise: monotone MSE)");

  app.add_option("--graph_model", o.graph_model, "erdos_renyi | random_geometric | grid")->capture_default_str();
  app.add_option("--n", o.n, "nodes")->capture_default_str();
  app.add_option("--p", o.p, "edge probability")->capture_default_str();
  app.add_option("--radius", o.radius, "geometric radius")->capture_default_str();
  app.add_option("--rows", o.rows, "grid rows")->capture_default_str();
  app.add_option("--cols", o.cols, "grid columns")->capture_default_str();
  app.add_option("--smoothing_kernel", o.smoothing_kernel)->capture_default_str();
  app.add_option("--smoothing_scale", o.smoothing_scale)->capture_default_str();
  app.add_option("--smoothing_laplacian", o.smoothing_laplacian)->capture_default_str();
  app.add_option("--sigmas", o.sigmas, "comma-separated noise levels")->capture_default_str()->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--trials", o.trials, "test trials per sigma")->capture_default_str();
  app.add_option("--train_trials", o.train_trials, "training trials per sigma")->capture_default_str();

  app.add_option("--kernel", o.kernel, "heat | mexican_hat | spline")->capture_default_str();
  app.add_option("--scales", o.scales, "comma-separated filter bank scales")->capture_default_str()->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--cheb_order", o.cheb_order)->capture_default_str();
  app.add_option("--laplacian", o.laplacian, "combinatorial | normalized")->capture_default_str();

  app.add_option("--fixtures", o.fixtures, "fixture directory (default: --out)");
  app.add_option("--sigma", o.sigma, "train only this sigma");
  app.add_option("--step_size", o.step_size)->capture_default_str();
  app.add_option("--epochs", o.epochs)->capture_default_str();
  app.add_option("--beta", o.beta, "entropy weight")->capture_default_str();
  app.add_option("--entropy_mode", o.entropy_mode, "concentration | as_written")->capture_default_str();

  app.add_option("--models", o.models, "model directory (default: <out>/models)");
  app.add_option("--heat_scale", o.heat_scale, "fixed heat baseline scale")->capture_default_str();

  app.add_option("--graph", o.graph, "edge-list graph file");
  app.add_option("--features", o.features, "n x d feature CSV");
  app.add_option("--labels", o.labels, "one integer label per line");
  app.add_option("--model", o.model, "model file");
  app.add_option("--per_class", o.per_class)->capture_default_str();
  app.add_option("--splits", o.splits)->capture_default_str();
  app.add_option("--threshold_mode", o.threshold_mode, "signed | absolute")->capture_default_str();
  app.add_option("--max_literals", o.max_literals)->capture_default_str();
  app.add_option("--min_gain", o.min_gain, "bits")->capture_default_str();

  app.add_option("--facts", o.facts, "file of z(node, scaleK, state). facts");
  app.add_option("--phi", o.phi, "nodes x scales CSV of modulated coefficients");
  app.add_option("--tau", o.tau, "one threshold, or one per scale")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--node_ids", o.node_ids, "comma-separated ids for --phi rows")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--node", o.node, "node id to trace");
  app.add_option("--num_scales", o.num_scales, "declared scale count for rule checks");

  app.require_subcommand(1);
  std::map<CLI::App*, void (*)(const Options&, std::ostream&)> handlers;
  auto sub = [&](const char* name, const char* help, void (*fn)(const Options&, std::ostream&)) {
    CLI::App* s = app.add_subcommand(name, help)->fallthrough();
    handlers[s] = fn;
    return s;
  };
  sub("gen", "write a synthetic graph, sample fixtures and manifest", cmd_gen);
  sub("train", "train one model per sigma on the training fixtures", cmd_train);
  sub("denoise", "score glwt and baselines on the test fixtures", cmd_denoise);
  sub("classify", "learn rules over wavelet activations and report accuracy", cmd_classify);
  CLI::App* inspect = sub("inspect", "print model parameters and fusion weights", cmd_inspect);
  inspect->add_option("model", o.model, "model file");
  CLI::App* rules = app.add_subcommand("rules", "rule program tools")->fallthrough();
  rules->require_subcommand(1);
  const std::pair<const char*, void (*)(const Options&, std::ostream&)> rule_cmds[] = {
      {"check", cmd_rules_check}, {"eval", cmd_rules_eval}, {"trace", cmd_rules_trace},
      {"export", cmd_rules_export}};
  for (const auto& [name, fn] : rule_cmds) {
    CLI::App* s = rules->add_subcommand(name)->fallthrough();
    s->add_option("rules", o.rules_file, "rule file")->required();
    handlers[s] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    for (const auto& [s, fn] : handlers) {
      if (s->parsed()) {
        fn(o, out);
        return 0;
      }
    }
    err << "usage error: no command\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace glwt::app
