#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "json_config.hpp"
#include "margin/attacks.hpp"
#include "margin/baselines.hpp"
#include "margin/bounds.hpp"
#include "margin/dataset.hpp"
#include "margin/error.hpp"
#include "margin/eval.hpp"
#include "margin/kernel.hpp"
#include "margin/model.hpp"
#include "margin/trainer_linear.hpp"
#include "margin/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace margin;

namespace {

// Past roughly this many tableau entries the dense simplex takes minutes.
constexpr double kMaxTableau = 1e5;

struct DataOptions {
  std::string dataset = "mnist";
  std::string data_dir = "data";
  std::vector<int> pair;
  std::size_t subset = 0;
  std::string split;
  std::string snapshot;
};

void add_data_options(CLI::App* app, DataOptions& o, const std::string& split) {
  o.split = split;
  app->add_option("--dataset", o.dataset, "mnist, cifar10 or snapshot")
      ->check(CLI::IsMember({"mnist", "cifar10", "snapshot"}))
      ->capture_default_str();
  app->add_option("--data-dir", o.data_dir, "directory holding mnist/ and cifar10/")->capture_default_str();
  app->add_option("--pair", o.pair, "positive and negative class ids")->expected(2);
  app->add_option("--subset", o.subset, "stratified subsample size (0 keeps everything)")->capture_default_str();
  app->add_option("--split", o.split, "train or test")->check(CLI::IsMember({"train", "test"}))->capture_default_str();
  app->add_option("--snapshot", o.snapshot, "dataset JSON written by an earlier run");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::IoError, path.string() + " is not valid JSON: " + e.what());
  }
}

Dataset load_data(const DataOptions& o, std::uint64_t seed, bool binary) {
  std::optional<Dataset> d;
  if (o.dataset == "snapshot") {
    if (o.snapshot.empty()) throw Error(Errc::InvalidArgument, "--dataset snapshot needs --snapshot");
    d = dataset_from_json(read_json(o.snapshot));
  } else if (o.dataset == "mnist") {
    fs::path dir = fs::path(o.data_dir) / "mnist";
    std::string stem = o.split == "train" ? "train" : "t10k";
    d = load_mnist_idx(dir / (stem + "-images-idx3-ubyte"), dir / (stem + "-labels-idx1-ubyte"));
  } else {
    fs::path dir = fs::path(o.data_dir) / "cifar10";
    std::vector<fs::path> files;
    if (o.split == "train") {
      for (int i = 1; i <= 5; ++i) files.push_back(dir / ("data_batch_" + std::to_string(i) + ".bin"));
    } else {
      files.push_back(dir / "test_batch.bin");
    }
    d = load_cifar10_bin(files);
  }
  if (!o.pair.empty()) d = binarize(*d, o.pair[0], o.pair[1]);
  if (binary && !d->is_binary()) throw Error(Errc::InvalidArgument, "this command needs --pair (or a binary snapshot)");
  if (o.subset > 0 && o.subset < d->size()) d = stratified_subsample(*d, o.subset, seed);
  return *d;
}

// Every option that has a long name, with its final value.
json collect_config(const CLI::App* app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    std::string name = opt->get_single_name();
    if (opt->get_lnames().empty() || name == "help" || name == "config") continue;
    auto res = opt->reduced_results();
    if (res.empty()) {
      if (opt->get_default_str().empty()) continue;
      cfg[name] = opt->get_default_str();
    } else if (res.size() == 1 && opt->get_expected_max() <= 1) {
      cfg[name] = res.front();
    } else {
      cfg[name] = res;
    }
  }
  return cfg;
}

struct Run {
  std::string command;
  std::uint64_t seed = 171;
  const CLI::App* app = nullptr;

  json meta() const { return {{"version", kVersion}, {"command", command}, {"seed", seed}}; }

  void write(const fs::path& path, const std::string& content, const std::vector<std::string>& outputs) const {
    write_file_atomic(path, content);
    json m = meta();
    m["config"] = collect_config(app);
    m["outputs"] = outputs;
    write_file_atomic(fs::path(path.string() + ".manifest.json"), m.dump(2) + "\n");
  }

  void write_json(const fs::path& path, json j, std::vector<std::string> outputs = {}) const {
    j["meta"] = meta();
    if (outputs.empty()) outputs.push_back(path.string());
    write(path, j.dump(2) + "\n", outputs);
  }
};

Model load_model(const std::string& path) {
  return model_from_json(read_json(path));
}

// ---- train ------------------------------------------------------------------

struct TrainOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::string method = "margin";
  std::string solver = "auto";
  double xi = 1.0;
  double v = 1.0;
  std::string input_norm = "linf";
  std::size_t steps = 20000;
  double eta0 = 0.1;
  std::size_t epochs = 10;
  std::size_t batch = 100;
  double lr = 0.01;
  std::string out = "model.json";
};

bool use_lp(const std::string& solver, const Dataset& d, NormKind input_norm) {
  if (solver == "lp") {
    if (input_norm != NormKind::LInf) throw Error(Errc::NormUnsupported, "the LP solver needs --input-norm linf");
    return true;
  }
  if (solver == "subgradient") return false;
  double m = static_cast<double>(d.size());
  double n = static_cast<double>(d.dim());
  // rows m plus slack, columns for a+, a-, b and slacks
  double tableau = (m + 1) * (2 * n + 2 * m + 2);
  return input_norm == NormKind::LInf && d.size() <= 5000 && tableau <= kMaxTableau;
}

void run_train(const TrainOptions& o, const Run& run) {
  Dataset d = load_data(o.data, o.seed, true);
  NormKind input_norm = parse_norm(o.input_norm);
  bool lp = use_lp(o.solver, d, input_norm);
  SubgradientOptions sg;
  sg.steps = o.steps;
  sg.eta0 = o.eta0;

  LinearModel model;
  json extra = json::object();
  if (o.method == "margin") {
    TrainConfig cfg;
    cfg.xi = o.xi;
    cfg.v = o.v;
    cfg.input_norm = input_norm;
    cfg.weight_norm = dual(input_norm);
    model = lp ? train_linear(d, cfg) : train_linear_subgradient(d, cfg, sg);
  } else if (o.method == "natural") {
    model = train_natural(d, o.v, lp ? NaturalSolver::Lp : NaturalSolver::Subgradient, sg);
  } else {
    if (input_norm != NormKind::LInf) throw Error(Errc::NormUnsupported, "adversarial training attacks are l_inf");
    AdversarialTrainingConfig cfg;
    cfg.xi = o.xi;
    cfg.v = o.v;
    cfg.epochs = o.epochs;
    cfg.batch = o.batch;
    cfg.lr = o.lr;
    cfg.seed = o.seed;
    auto res = adversarial_training(d, o.method == "fgsm-at" ? AttackKind::Fgsm : AttackKind::Pgd, cfg);
    model = res.model;
    extra["epoch_robust_hinge"] = res.epoch_robust_hinge;
    lp = false;
  }
  json j = to_json(Model(model));
  j["training"] = {{"method", o.method}, {"solver", lp ? "lp" : "subgradient"}, {"examples", d.size()}};
  for (auto& [k, v] : extra.items()) j["training"][k] = v;
  run.write_json(o.out, j);
  std::cout << json{{"out", o.out}, {"objective", model.objective}, {"solver", lp ? "lp" : "subgradient"}}.dump()
            << "\n";
}

// ---- train-kernel -----------------------------------------------------------

struct KernelOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::string kernel = "rbf";
  double sigma = 0.0;
  int degree = 2;
  double offset = 0.0;
  double v = 1.0;
  double zeta = 1.0;
  std::size_t steps = 20000;
  double eta0 = 0.5;
  std::string out = "kernel_model.json";
};

void run_train_kernel(const KernelOptions& o, const Run& run) {
  Dataset d = load_data(o.data, o.seed, true);
  KernelSpec spec;
  if (o.kernel == "linear") {
    spec = KernelSpec::linear();
  } else if (o.kernel == "rbf") {
    spec = KernelSpec::rbf(o.sigma > 0 ? o.sigma : median_pairwise_distance(d));
  } else {
    spec = KernelSpec::polynomial(o.degree, o.offset);
  }
  KernelTrainOptions opts;
  opts.steps = o.steps;
  opts.eta0 = o.eta0;
  KernelTrainResult res = train_kernel_detailed(d, spec, o.v, o.zeta, opts);
  json j = to_json(Model(res.model));
  j["training"] = {{"examples", d.size()}, {"jitter_attempts", res.jitter_attempts}};
  run.write_json(o.out, j);
  std::cout << json{{"out", o.out}, {"objective", res.model.objective}, {"jitter", res.model.jitter}}.dump() << "\n";
}

// ---- attack -----------------------------------------------------------------

struct AttackOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::string model;
  std::string attack = "pgd";
  double xi = 0.1;
  std::size_t steps = 40;
  double eta = 0.0;
  double c = 1.0;
  double kappa = 0.0;
  double overshoot = 0.02;
  bool budget_scale = false;
  std::string out = "attack.json";
  std::string perturbed;
};

AttackConfig attack_config(const std::string& kind, double xi, std::size_t steps, double eta, double c, double kappa,
                           double overshoot) {
  AttackConfig cfg = AttackConfig::pgd_default(xi);
  cfg.steps = steps;
  if (eta > 0) cfg.eta = eta;
  cfg.c = c;
  cfg.kappa = kappa;
  cfg.overshoot = overshoot;
  if (kind == "deepfool") cfg.deepfool_max_iters = steps;
  cfg.validate();
  return cfg;
}

void run_attack_cmd(const AttackOptions& o, const Run& run) {
  Model model = load_model(o.model);
  Dataset d = load_data(o.data, o.seed, true);
  AttackKind kind = parse_attack(o.attack);
  AttackConfig cfg = attack_config(o.attack, o.xi, o.steps, o.eta, o.c, o.kappa, o.overshoot);
  cfg.seed = o.seed;
  cfg.budget_scale = o.budget_scale;

  json results = json::array();
  std::vector<double> features;
  features.reserve(d.features().size());
  std::size_t successes = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    AttackResult r = run_attack(kind, model, d.x(i), d.label(i), cfg);
    successes += r.success ? 1 : 0;
    results.push_back({{"index", i},
                       {"label", d.label(i)},
                       {"success", r.success},
                       {"perturbation_norm", r.perturbation_norm},
                       {"iterations_used", r.iterations_used},
                       {"adversarial", r.adversarial}});
    features.insert(features.end(), r.adversarial.begin(), r.adversarial.end());
  }
  std::vector<std::string> outputs{o.out};
  if (!o.perturbed.empty()) {
    Dataset adv(d.dim(), std::move(features), d.labels(), d.class_names());
    json snap = to_json(adv);
    snap["meta"] = run.meta();
    run.write(o.perturbed, snap.dump() + "\n", {o.perturbed});
    outputs.push_back(o.perturbed);
  }
  json j = {{"attack", o.attack}, {"xi", o.xi}, {"success_rate", static_cast<double>(successes) / d.size()},
            {"results", results}};
  run.write_json(o.out, j, outputs);
  std::cout << json{{"out", o.out}, {"success_rate", j["success_rate"]}}.dump() << "\n";
}

// ---- eval -------------------------------------------------------------------

struct EvalOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::string model;
  double xi = 0.0;
  std::string out;
};

void run_eval(const EvalOptions& o, const Run& run) {
  Model model = load_model(o.model);
  Dataset d = load_data(o.data, o.seed, true);
  json j = {{"examples", d.size()}, {"accuracy", accuracy(model, d)}};
  const auto* lin = std::get_if<LinearModel>(&model);
  if (lin && o.xi > 0) {
    auto br = robust_error_breakdown(*lin, d, o.xi, lin->config.input_norm);
    j["xi"] = o.xi;
    j["natural_error"] = br.natural;
    j["boundary_error"] = br.boundary;
    j["certified_robust_error"] = br.robust;
  }
  if (!o.out.empty()) run.write_json(o.out, j);
  j["meta"] = run.meta();
  std::cout << j.dump(2) << "\n";
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::vector<std::string> models;
  std::string attack = "fgsm";
  std::vector<double> grid = kDefaultSweepGrid;
  std::size_t steps = 40;
  double eta = 0.0;
  double c = 1.0;
  double kappa = 0.0;
  double overshoot = 0.02;
  bool budget_scale = false;
  std::string format = "csv";
  std::string out = "sweep.csv";
};

void run_sweep(const SweepOptions& o, const Run& run) {
  std::map<std::string, Model> models;
  for (const std::string& spec : o.models) {
    auto eq = spec.find('=');
    std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    if (models.count(name)) throw Error(Errc::InvalidArgument, "duplicate model name " + name);
    models.emplace(name, load_model(path));
  }
  Dataset d = load_data(o.data, o.seed, true);
  AttackConfig base = attack_config(o.attack, 0.0, o.steps, o.eta, o.c, o.kappa, o.overshoot);
  base.seed = o.seed;
  base.budget_scale = o.budget_scale;
  // the sweep fills in xi (and the PGD step) per grid point
  base.eta = o.eta;
  SweepReport rep = attack_sweep(models, d, parse_attack(o.attack), o.grid, base, o.data.dataset);
  rep.seed = o.seed;
  ReportFormat fmt = parse_report_format(o.format);
  std::string body;
  if (fmt == ReportFormat::Csv) {
    body = sweep_csv(rep);
  } else {
    json j = to_json(rep);
    j["meta"] = run.meta();
    body = j.dump(2) + "\n";
  }
  run.write(o.out, body, {o.out});
  std::cout << to_json(rep).dump() << "\n";
}

// ---- roma -------------------------------------------------------------------

struct RomaOptions {
  DataOptions data;
  std::uint64_t seed = 171;
  std::string model;
  double xi = 0.05;
  std::size_t n_perturbations = 100;
  std::string format = "json";
  std::string out;
};

void run_roma(const RomaOptions& o, const Run& run) {
  Model model = load_model(o.model);
  Dataset d = load_data(o.data, o.seed, true);
  RomaReport rep = roma_score(model, d, o.xi, o.n_perturbations, o.seed);
  if (!o.out.empty()) {
    ReportFormat fmt = parse_report_format(o.format);
    if (fmt == ReportFormat::Json) {
      json j = to_json(rep);
      j["meta"] = run.meta();
      run.write(o.out, j.dump(2) + "\n", {o.out});
    } else {
      std::ostringstream s;
      s.precision(17);
      s << "index,fraction_correct\n";
      for (std::size_t i = 0; i < rep.per_point.size(); ++i) s << i << "," << rep.per_point[i] << "\n";
      run.write(o.out, s.str(), {o.out});
    }
  }
  std::cout << json{{"mean", rep.mean}, {"std", rep.std}, {"xi", rep.xi}, {"n_perturbations", rep.n_perturbations},
                    {"seed", rep.seed}}
                   .dump()
            << "\n";
}

// ---- bounds -----------------------------------------------------------------

struct BoundsOptions {
  std::string formula = "simplified";
  std::uint64_t m = 100;
  double delta = 0.05;
  double epsilon = 0.0;
  double gamma = 2.0;
  double r = 1.0;
  double zeta = 1.0;
  double xi = 1.0;
  double u = 1.0;
  double v = 1.0;
  std::uint64_t d = 1;
  std::uint64_t k = 2;
  double risk = 0.0;
  double rademacher = 0.0;
  std::string out;
};

void run_bounds(const BoundsOptions& o, const Run& run, const CLI::App* app) {
  BoundInputs in;
  in.m = o.m;
  in.delta = o.delta;
  in.gamma = o.gamma;
  in.r = o.r;
  in.zeta = o.zeta;
  in.xi = o.xi;
  in.u = o.u;
  in.v = o.v;
  in.d = o.d;
  in.k = o.k;
  in.empirical_risk = o.risk;
  in.rademacher = o.rademacher;

  BoundReport rep;
  if (o.formula == "simplified") {
    // gamma = sqrt(m)/2 turns the linear bound into risk + sqrt(log(2/delta)/(2m)) + 1
    if (app->count("--gamma")) throw Error(Errc::InvalidArgument, "--gamma is fixed by the simplified formula");
    in.gamma = std::sqrt(static_cast<double>(in.m)) / 2;
    rep = bound_linear(in);
  } else {
    rep = evaluate_bound(parse_bound_formula(o.formula), in);
  }
  json j = to_json(rep);
  j["formula"] = o.formula;
  j["inputs"] = {{"m", in.m}, {"delta", in.delta}, {"gamma", in.gamma}, {"r", in.r},   {"zeta", in.zeta},
                 {"xi", in.xi}, {"u", in.u},        {"v", in.v},         {"d", in.d}, {"k", in.k},
                 {"risk", in.empirical_risk},       {"rademacher", in.rademacher}};
  if (app->count("--epsilon")) {
    std::uint64_t n = sample_size(o.epsilon, o.delta);
    j["epsilon"] = o.epsilon;
    j["sample_size"] = n;
    j["confidence_within_epsilon"] = rep.confidence <= o.epsilon;
  }
  if (!o.out.empty()) run.write_json(o.out, j);
  j["meta"] = run.meta();
  std::cout << j.dump(2) << "\n";
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::IoError:
    case Errc::TruncatedFile:
    case Errc::BadMagic:
    case Errc::CountMismatch:
      return 2;
    default:
      return 1;
  }
}

void add_seed(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "random seed")->capture_default_str();
}

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& desc) {
  return app.add_subcommand(name, desc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Margin-based adversarial training for linear and kernel classifiers"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file with option values for the subcommand; flags take precedence");

  TrainOptions train;
  CLI::App* c_train = add_command(app, "train", "train a linear classifier");
  add_data_options(c_train, train.data, "train");
  add_seed(c_train, train.seed);
  c_train->add_option("--method", train.method)
      ->check(CLI::IsMember({"margin", "natural", "fgsm-at", "pgd-at"}))
      ->capture_default_str();
  c_train->add_option("--solver", train.solver)
      ->check(CLI::IsMember({"auto", "lp", "subgradient"}))
      ->capture_default_str();
  c_train->add_option("--xi", train.xi, "adversarial power")->capture_default_str();
  c_train->add_option("--v", train.v, "weight norm budget")->capture_default_str();
  c_train->add_option("--input-norm", train.input_norm)->check(CLI::IsMember({"l1", "l2", "linf"}))->capture_default_str();
  c_train->add_option("--steps", train.steps, "subgradient steps")->capture_default_str();
  c_train->add_option("--eta0", train.eta0, "subgradient step constant")->capture_default_str();
  c_train->add_option("--epochs", train.epochs, "adversarial training epochs")->capture_default_str();
  c_train->add_option("--batch", train.batch, "adversarial training batch size")->capture_default_str();
  c_train->add_option("--lr", train.lr, "adversarial training learning rate")->capture_default_str();
  c_train->add_option("--out", train.out, "model JSON path")->capture_default_str();

  KernelOptions kern;
  CLI::App* c_kernel = add_command(app, "train-kernel", "train a kernel classifier");
  add_data_options(c_kernel, kern.data, "train");
  add_seed(c_kernel, kern.seed);
  c_kernel->add_option("--kernel", kern.kernel)->check(CLI::IsMember({"linear", "rbf", "polynomial"}))->capture_default_str();
  c_kernel->add_option("--sigma", kern.sigma, "RBF width (0 uses the median pairwise distance)")->capture_default_str();
  c_kernel->add_option("--degree", kern.degree)->capture_default_str();
  c_kernel->add_option("--offset", kern.offset)->capture_default_str();
  c_kernel->add_option("--v", kern.v)->capture_default_str();
  c_kernel->add_option("--zeta", kern.zeta, "output-space margin scale")->capture_default_str();
  c_kernel->add_option("--steps", kern.steps)->capture_default_str();
  c_kernel->add_option("--eta0", kern.eta0)->capture_default_str();
  c_kernel->add_option("--out", kern.out)->capture_default_str();

  AttackOptions atk;
  CLI::App* c_attack = add_command(app, "attack", "attack every example of a dataset");
  add_data_options(c_attack, atk.data, "test");
  add_seed(c_attack, atk.seed);
  c_attack->add_option("--model", atk.model)->required();
  c_attack->add_option("--attack", atk.attack)
      ->check(CLI::IsMember({"fgsm", "pgd", "cw", "deepfool", "exact"}))
      ->capture_default_str();
  c_attack->add_option("--xi", atk.xi)->capture_default_str();
  c_attack->add_option("--steps", atk.steps)->capture_default_str();
  c_attack->add_option("--eta", atk.eta, "PGD step (0 uses xi/4)")->capture_default_str();
  c_attack->add_option("--c", atk.c, "CW trade-off")->capture_default_str();
  c_attack->add_option("--kappa", atk.kappa, "CW confidence")->capture_default_str();
  c_attack->add_option("--overshoot", atk.overshoot, "DeepFool overshoot")->capture_default_str();
  c_attack->add_flag("--budget-scale", atk.budget_scale,
                     "FGSM/PGD on linear models: hinge scale xi ||a||_* so no attackable point has zero gradient");
  c_attack->add_option("--out", atk.out)->capture_default_str();
  c_attack->add_option("--perturbed", atk.perturbed, "also write the perturbed dataset here");

  EvalOptions ev;
  CLI::App* c_eval = add_command(app, "eval", "clean accuracy and certified robust error");
  add_data_options(c_eval, ev.data, "test");
  add_seed(c_eval, ev.seed);
  c_eval->add_option("--model", ev.model)->required();
  c_eval->add_option("--xi", ev.xi, "radius for the certified error of linear models")->capture_default_str();
  c_eval->add_option("--out", ev.out);

  SweepOptions sw;
  CLI::App* c_sweep = add_command(app, "sweep", "accuracy against attack strength");
  add_data_options(c_sweep, sw.data, "test");
  add_seed(c_sweep, sw.seed);
  c_sweep->add_option("--model", sw.models, "name=path, repeatable")->required();
  c_sweep->add_option("--attack", sw.attack)
      ->check(CLI::IsMember({"fgsm", "pgd", "cw", "deepfool", "exact"}))
      ->capture_default_str();
  c_sweep->add_option("--grid", sw.grid, "xi values, strictly increasing")->capture_default_str();
  c_sweep->add_option("--steps", sw.steps)->capture_default_str();
  c_sweep->add_option("--eta", sw.eta)->capture_default_str();
  c_sweep->add_option("--c", sw.c)->capture_default_str();
  c_sweep->add_option("--kappa", sw.kappa)->capture_default_str();
  c_sweep->add_option("--overshoot", sw.overshoot)->capture_default_str();
  c_sweep->add_flag("--budget-scale", sw.budget_scale,
                    "FGSM/PGD on linear models: hinge scale xi ||a||_* so no attackable point has zero gradient");
  c_sweep->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_sweep->add_option("--out", sw.out)->capture_default_str();

  RomaOptions ro;
  CLI::App* c_roma = add_command(app, "roma", "robustness under random perturbations");
  add_data_options(c_roma, ro.data, "test");
  add_seed(c_roma, ro.seed);
  c_roma->add_option("--model", ro.model)->required();
  c_roma->add_option("--xi", ro.xi)->capture_default_str();
  c_roma->add_option("--n-perturbations", ro.n_perturbations)->capture_default_str();
  c_roma->add_option("--format", ro.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_roma->add_option("--out", ro.out);

  BoundsOptions bo;
  std::uint64_t bounds_seed = 171;
  CLI::App* c_bounds = add_command(app, "bounds", "generalization bound calculator");
  c_bounds->add_option("--formula", bo.formula)
      ->check(CLI::IsMember({"simplified", "fixed", "uniform", "linear", "kernel", "multiclass", "natural"}))
      ->capture_default_str();
  c_bounds->add_option("--m", bo.m)->capture_default_str();
  c_bounds->add_option("--delta", bo.delta)->capture_default_str();
  c_bounds->add_option("--epsilon", bo.epsilon, "also report the sample size for this accuracy");
  c_bounds->add_option("--gamma", bo.gamma)->capture_default_str();
  c_bounds->add_option("--r", bo.r)->capture_default_str();
  c_bounds->add_option("--zeta", bo.zeta)->capture_default_str();
  c_bounds->add_option("--xi", bo.xi)->capture_default_str();
  c_bounds->add_option("--u", bo.u)->capture_default_str();
  c_bounds->add_option("--v", bo.v)->capture_default_str();
  c_bounds->add_option("--d", bo.d, "VC dimension")->capture_default_str();
  c_bounds->add_option("--k", bo.k, "number of classes")->capture_default_str();
  c_bounds->add_option("--risk", bo.risk, "empirical surrogate risk")->capture_default_str();
  c_bounds->add_option("--rademacher", bo.rademacher, "Rademacher complexity for the fixed/uniform forms")
      ->capture_default_str();
  c_bounds->add_option("--out", bo.out);
  add_seed(c_bounds, bounds_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    if (e.get_name() == "FileError") return 2;
    if (rc != 0 && e.get_name() != "CallForHelp" && e.get_name() != "CallForVersion") {
      std::cerr << app.help();
      return 1;
    }
    return rc;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Run run;
    run.command = sub->get_name();
    run.app = sub;
    if (sub == c_train) {
      run.seed = train.seed;
      run_train(train, run);
    } else if (sub == c_kernel) {
      run.seed = kern.seed;
      run_train_kernel(kern, run);
    } else if (sub == c_attack) {
      run.seed = atk.seed;
      run_attack_cmd(atk, run);
    } else if (sub == c_eval) {
      run.seed = ev.seed;
      run_eval(ev, run);
    } else if (sub == c_sweep) {
      run.seed = sw.seed;
      run_sweep(sw, run);
    } else if (sub == c_roma) {
      run.seed = ro.seed;
      run_roma(ro, run);
    } else {
      run.seed = bounds_seed;
      run_bounds(bo, run, c_bounds);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
