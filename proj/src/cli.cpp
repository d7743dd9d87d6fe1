#include "hypermp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypermp/error.hpp"
#include "hypermp/homophily.hpp"
#include "hypermp/io.hpp"
#include "hypermp/model.hpp"
#include "hypermp/report.hpp"
#include "hypermp/rewiring.hpp"
#include "hypermp/rng.hpp"
#include "hypermp/sampler.hpp"
#include "hypermp/sampling_analysis.hpp"
#include "hypermp/stats.hpp"
#include "hypermp/train.hpp"

namespace hypermp::cli {

namespace {

struct Options {
  // global
  std::uint64_t seed = 0;
  std::string format = "json";
  bool quiet = false;
  std::string out;

  std::string in;
  // homophily / delta
  std::size_t levels = 2;
  std::size_t t = 1;
  std::vector<double> mu;
  std::string policy = "count";
  // kuniform
  std::size_t k = 3;
  // sample
  std::size_t batch_edges = 0;
  std::size_t nodes_per_edge = 1;
  std::string mode = "uniform";
  std::size_t batches = 1000;
  std::string batch_csv;
  // sampling-analysis
  std::size_t n = 10;
  std::size_t c = 5;
  std::size_t max_epoch = 20;
  std::vector<std::size_t> sizes;
  std::size_t trials = 100000;
  // rewire
  std::string strategy;
  double fraction = 0.0;
  std::string report;
  // train / eval
  std::string model = "multisetmixer";
  double lr = 0.001;
  double wd = 0.0;
  std::size_t epochs = 200;
  std::size_t layers = 2;
  std::size_t hidden = 64;
  std::size_t mlp_hidden = 0;
  double dropout = 0.2;
  std::string optimizer = "adam";
  double train_frac = 0.5;
  double val_frac = 0.25;
  std::string checkpoint = "model.ckpt";
};

IsolatedPolicy parse_policy(const std::string& s) {
  return s == "exclude" ? IsolatedPolicy::kExclude : IsolatedPolicy::kCountAsStable;
}

const LabelAssignment& require_labels(const Dataset& d) {
  if (!d.labels) throw ValidationError("dataset has no labels");
  return *d.labels;
}

const FeatureMatrix& require_features(const Dataset& d) {
  if (!d.features) throw ValidationError("dataset has no features");
  return *d.features;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  void emit(const Report& r) { write(hypermp::emit(r, format())); }

  void write(const std::string& bytes) {
    if (o_.out.empty()) {
      out_ << bytes;
      out_.flush();
    } else {
      write_output(bytes, std::filesystem::path(o_.out));
    }
  }

  void note(const std::string& msg) {
    if (!o_.quiet) err_ << msg << "\n";
  }

  ReportFormat format() const { return o_.format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson; }

  std::vector<double> mu_grid() const { return o_.mu.empty() ? default_mu_grid() : o_.mu; }

  void stats() {
    auto d = load_dataset(o_.in);
    emit(stats_report(compute_stats(d.hypergraph, d.labels ? &*d.labels : nullptr)));
  }

  void homophily() {
    auto d = load_dataset(o_.in);
    const auto& labels = require_labels(d);
    auto trace = mp_homophily<double>(d.hypergraph, labels, o_.levels);
    emit(homophily_report(trace, labels, mu_grid(), parse_policy(o_.policy)));
  }

  void delta() {
    auto d = load_dataset(o_.in);
    auto trace = mp_homophily<double>(d.hypergraph, require_labels(d), std::max(o_.levels, o_.t));
    emit(delta_report(trace, o_.t, mu_grid(), parse_policy(o_.policy)));
  }

  void ce() {
    auto d = load_dataset(o_.in);
    double value = ce_homophily(d.hypergraph, require_labels(d));
    Report r;
    r.json["ce_homophily"] = value;
    r.table.header = {"ce_homophily"};
    r.table.rows.push_back({format_number(value)});
    emit(r);
  }

  void kuniform() {
    auto d = load_dataset(o_.in);
    emit(kuniform_report(kuniform_scores(d.hypergraph, require_labels(d), o_.k)));
  }

  SamplerConfig sampler_config() const {
    SamplerConfig sc;
    sc.batch_edges = o_.batch_edges;
    sc.nodes_per_edge = o_.nodes_per_edge;
    sc.mode = o_.mode == "size" ? SamplingMode::kSizeWeighted : SamplingMode::kUniform;
    sc.seed = o_.seed;
    return sc;
  }

  void sample() {
    auto d = load_dataset(o_.in);
    const auto& labels = require_labels(d);
    auto sc = sampler_config();
    sc.validate(d.hypergraph);
    emit(class_shift_report(class_shift(d.hypergraph, labels, sc, o_.batches)));
    if (!o_.batch_csv.empty()) {
      // Replays the first batches of the same stream, one row per sampled cell.
      Rng rng(sc.seed);
      CsvTable t;
      t.header = {"batch", "row", "edge", "slot", "node", "mask"};
      for (std::size_t b = 0; b < o_.batches; ++b) {
        auto batch = sample_batch(d.hypergraph, sc, rng);
        for (std::size_t i = 0; i < batch.rows(); ++i) {
          auto row = batch.row(i);
          auto mask = batch.row_mask(i);
          for (std::size_t j = 0; j < batch.width; ++j) {
            t.rows.push_back({std::to_string(b), std::to_string(i), std::to_string(batch.edge_ids[i]),
                              std::to_string(j), std::to_string(row[j]), std::to_string(mask[j])});
          }
        }
      }
      write_output(emit_csv(t), std::filesystem::path(o_.batch_csv));
    }
  }

  void sampling_analysis() {
    Report r;
    r.table.header = {"epoch", "pmf"};
    Json pmf = Json::array();
    for (std::size_t ep = 1; ep <= o_.max_epoch; ++ep) {
      double p = first_sample_pmf(o_.n, o_.c, ep);
      pmf.push_back(p);
      r.table.rows.push_back({std::to_string(ep), format_number(p)});
    }
    r.json["n"] = o_.n;
    r.json["c"] = o_.c;
    r.json["expected_first_epoch"] = expected_first_epoch(o_.n, o_.c);
    r.json["pmf"] = std::move(pmf);
    if (!o_.sizes.empty()) {
      auto b = max_wait_bound(o_.sizes, o_.c, o_.trials, o_.seed);
      r.json["sizes"] = o_.sizes;
      r.json["bound"] = b.bound;
      r.json["aven_bound"] = b.aven_bound;
      r.json["monte_carlo_mean"] = b.monte_carlo_mean;
      r.json["trials"] = b.trials;
      r.table.rows.push_back({"bound", format_number(b.bound)});
      r.table.rows.push_back({"aven_bound", format_number(b.aven_bound)});
      r.table.rows.push_back({"monte_carlo_mean", format_number(b.monte_carlo_mean)});
    }
    emit(r);
  }

  void rewire_cmd() {
    auto strategy = parse_strategy(o_.strategy);
    if (!strategy) throw InvalidArgument("unknown strategy " + o_.strategy);
    if (o_.out.empty()) throw InvalidArgument("rewire needs --out");
    RewireSpec spec;
    spec.strategy = *strategy;
    spec.fraction = o_.fraction;
    spec.seed = o_.seed;
    spec.kmeans.seed = o_.seed;
    spec.validate();

    auto d = load_dataset(o_.in);
    const LabelAssignment* labels = d.labels ? &*d.labels : nullptr;
    const FeatureMatrix* features = d.features ? &*d.features : nullptr;
    Dataset result = d;
    result.hypergraph = rewire(d.hypergraph, spec, labels, features);
    save_json(o_.out, result);

    Report r;
    r.json["strategy"] = to_string(spec.strategy);
    r.json["fraction"] = spec.fraction;
    r.json["seed"] = spec.seed;
    r.json["edges_before"] = d.hypergraph.num_edges();
    r.json["edges_after"] = result.hypergraph.num_edges();
    r.json["incidences_before"] = d.hypergraph.num_incidences();
    r.json["incidences_after"] = result.hypergraph.num_incidences();
    r.table.header = {"quantity", "before", "after"};
    r.table.rows.push_back({"edges", std::to_string(d.hypergraph.num_edges()),
                            std::to_string(result.hypergraph.num_edges())});
    if (labels) {
      auto before = mp_homophily<double>(d.hypergraph, *labels, 1);
      auto after = mp_homophily<double>(result.hypergraph, *labels, 1);
      for (std::size_t t = 0; t <= 1; ++t) {
        double b = mean_defined(before.node_scores[t], before.defined);
        double a = mean_defined(after.node_scores[t], after.defined);
        std::string key = "mean_h" + std::to_string(t);
        r.json[key + "_before"] = b;
        r.json[key + "_after"] = a;
        r.table.rows.push_back({key, format_number(b), format_number(a)});
      }
    }
    std::filesystem::path sidecar = o_.report.empty() ? std::filesystem::path(o_.out + ".report.json")
                                                      : std::filesystem::path(o_.report);
    auto bytes = hypermp::emit(r, format());
    write_output(bytes, sidecar);
    out_ << bytes;
    note("wrote " + o_.out + " and " + sidecar.string());
  }

  Split split_for(std::size_t n) const { return random_split(n, o_.train_frac, o_.val_frac, o_.seed); }

  void train_cmd() {
    auto kind = parse_model_kind(o_.model);
    if (!kind) throw InvalidArgument("unknown model " + o_.model);
    auto d = load_dataset(o_.in);
    const auto& labels = require_labels(d);
    const auto& x = require_features(d);

    ModelDims dims{x.cols, o_.hidden, o_.mlp_hidden ? o_.mlp_hidden : o_.hidden, o_.layers,
                   labels.num_classes};
    auto model = init_model(*kind, dims, o_.seed, *kind == ModelKind::kMlpCb ? o_.dropout : 0.0);

    TrainConfig cfg;
    cfg.learning_rate = o_.lr;
    cfg.weight_decay = o_.wd;
    cfg.epochs = o_.epochs;
    cfg.optimizer = o_.optimizer == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdam;
    cfg.seed = o_.seed;
    if (o_.batch_edges > 0 || o_.nodes_per_edge > 1) {
      auto sc = sampler_config();
      sc.seed = 0;
      sc.validate(d.hypergraph);
      cfg.sampler = sc;
    }
    auto rep = train(model, d.hypergraph, x, labels, split_for(d.hypergraph.num_nodes()), cfg);
    save_checkpoint(o_.checkpoint, model);

    Report r;
    r.json = train_report_json(rep);
    r.json["model"] = to_string(*kind);
    r.json["parameter_count"] = model.params.size();
    r.json["checkpoint"] = o_.checkpoint;
    r.table.header = {"epoch", "loss", "train_accuracy", "val_accuracy"};
    for (std::size_t e = 0; e < rep.loss_curve.size(); ++e) {
      r.table.rows.push_back({std::to_string(e + 1), format_number(rep.loss_curve[e]),
                              format_number(rep.train_accuracy_curve[e]),
                              format_number(rep.val_accuracy_curve[e])});
    }
    emit(r);
    note("wrote checkpoint " + o_.checkpoint);
  }

  void eval_cmd() {
    auto model = load_checkpoint(o_.checkpoint);
    auto d = load_dataset(o_.in);
    const auto& labels = require_labels(d);
    const auto& x = require_features(d);
    auto split = split_for(d.hypergraph.num_nodes());
    std::vector<std::uint8_t> all(d.hypergraph.num_nodes(), 1);
    auto logits = forward(model, d.hypergraph, x).logits;

    Report r;
    r.json["model"] = to_string(model.kind);
    r.table.header = {"subset", "accuracy"};
    for (auto [name, mask] : {std::pair<const char*, const std::vector<std::uint8_t>*>{"all", &all},
                              {"train", &split.train},
                              {"val", &split.val},
                              {"test", &split.test}}) {
      double acc = accuracy(logits, labels, *mask);
      r.json[std::string(name) + "_accuracy"] = acc;
      r.table.rows.push_back({name, format_number(acc)});
    }
    emit(r);
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hypergraph homophily, sampling, rewiring and MultiSetMixer toolkit", "hypermp"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", o.quiet, "Suppress informational messages");
  app.add_option("--out", o.out, "Write the report (rewire: the hypergraph) to this file");

  auto input = [&](CLI::App* sub) {
    sub->add_option("--in,--data", o.in, "Dataset file (JSON or edge list)")->required();
  };
  auto homophily_flags = [&](CLI::App* sub) {
    sub->add_option("--mu", o.mu, "μ values (default 0.01..1.00)")
        ->check(CLI::PositiveNumber)
        ->delimiter(',');
    sub->add_option("--policy", o.policy, "Isolated nodes in Δ")
        ->check(CLI::IsMember({"count", "exclude"}));
  };

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  input(stats);

  auto* homophily = app.add_subcommand("homophily", "Message-passing homophily scores");
  input(homophily);
  homophily->add_option("--levels", o.levels, "Number of levels T");
  homophily_flags(homophily);

  auto* delta = app.add_subcommand("delta", "Δ over a μ grid");
  input(delta);
  delta->add_option("--t", o.t, "Level t >= 1")->check(CLI::PositiveNumber);
  homophily_flags(delta);

  auto* ce = app.add_subcommand("ce", "Clique-expansion homophily");
  input(ce);

  auto* kuni = app.add_subcommand("kuniform", "k-uniform affinity scores");
  input(kuni);
  kuni->add_option("--k", o.k, "Hyperedge size")->check(CLI::PositiveNumber);

  auto sampler_flags = [&](CLI::App* sub) {
    sub->add_option("--B", o.batch_edges, "Hyperedges per batch (0 = all)");
    sub->add_option("--L", o.nodes_per_edge, "Nodes per hyperedge")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "Step-1 sampling mode")->check(CLI::IsMember({"uniform", "size"}));
  };

  auto* sample = app.add_subcommand("sample", "Class shift of two-step sampling");
  input(sample);
  sampler_flags(sample);
  sample->add_option("--batches", o.batches, "Number of batches")->check(CLI::PositiveNumber);
  sample->add_option("--batch-csv", o.batch_csv, "Also write sampled batches as CSV");

  auto* analysis = app.add_subcommand("sampling-analysis", "First-sample epoch pmf and max-wait bound");
  analysis->add_option("--n", o.n, "Hyperedge size")->check(CLI::PositiveNumber);
  analysis->add_option("--c", o.c, "Nodes sampled per visit")->check(CLI::PositiveNumber);
  analysis->add_option("--max-epoch", o.max_epoch, "Last epoch of the pmf table")->check(CLI::PositiveNumber);
  analysis->add_option("--sizes", o.sizes, "Hyperedge sizes for the bound")->delimiter(',');
  analysis->add_option("--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);

  auto* rewire = app.add_subcommand("rewire", "Rewire hyperedges");
  input(rewire);
  rewire->add_option("--strategy", o.strategy, "trimming|retention|random-drop|label-split|kmeans-split")
      ->required();
  rewire->add_option("--fraction", o.fraction, "Fraction x of hyperedges")->check(CLI::Range(0.0, 1.0));
  rewire->add_option("--report", o.report, "Sidecar report path (default <out>.report.json)");

  auto model_flags = [&](CLI::App* sub) {
    sub->add_option("--train-frac", o.train_frac, "Training fraction of the split")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--val-frac", o.val_frac, "Validation fraction of the split")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--checkpoint", o.checkpoint, "Checkpoint path");
  };

  auto* train = app.add_subcommand("train", "Train a model");
  input(train);
  sampler_flags(train);
  model_flags(train);
  train->add_option("--model", o.model, "Model")->check(CLI::IsMember({"multisetmixer", "mlp", "mlpcb"}));
  train->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber);
  train->add_option("--wd", o.wd, "Weight decay")->check(CLI::NonNegativeNumber);
  train->add_option("--epochs", o.epochs, "Epochs")->check(CLI::PositiveNumber);
  train->add_option("--layers", o.layers, "Layers T");
  train->add_option("--hidden", o.hidden, "Width d")->check(CLI::PositiveNumber);
  train->add_option("--mlp-hidden", o.mlp_hidden, "Hidden size inside each block (default: --hidden)");
  train->add_option("--dropout", o.dropout, "MLP CB per-hyperedge dropout")->check(CLI::Range(0.0, 0.999));
  train->add_option("--optimizer", o.optimizer, "Optimizer")->check(CLI::IsMember({"adam", "sgd"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  input(eval);
  model_flags(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }
  auto usage = [&](const std::string& msg) {
    err << "error: " << msg << "\n";
    return kUsageError;
  };
  if (o.train_frac + o.val_frac > 1.0) return usage("--train-frac + --val-frac must not exceed 1");
  if (rewire->parsed()) {
    if (!parse_strategy(o.strategy)) return usage("unknown strategy " + o.strategy);
    if (o.out.empty()) return usage("rewire needs --out");
  }
  if (analysis->parsed() && o.c > o.n) return usage("--c must not exceed --n");

  Runner r(o, out, err);
  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "stats") r.stats();
    else if (name == "homophily") r.homophily();
    else if (name == "delta") r.delta();
    else if (name == "ce") r.ce();
    else if (name == "kuniform") r.kuniform();
    else if (name == "sample") r.sample();
    else if (name == "sampling-analysis") r.sampling_analysis();
    else if (name == "rewire") r.rewire_cmd();
    else if (name == "train") r.train_cmd();
    else if (name == "eval") r.eval_cmd();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace hypermp::cli
