#include "hetinf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "hetinf/bif.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace hetinf {

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["network"] = network;
  j["out_dir"] = out_dir;
  j["seed_data"] = seed_data;
  j["seed_model"] = seed_model;
  j["seed_predict"] = seed_predict;
  j["train_n"] = train_n;
  j["test_n"] = test_n;
  j["sampler"] = sampler;
  j["gibbs_burn_in"] = gibbs.burn_in;
  j["gibbs_thinning"] = gibbs.thinning;
  j["gibbs_allow_zero"] = gibbs.allow_zero_entries;
  j["thresholds"] = thresholds;
  j["score_all_variables"] = score_all_variables;
  j["extra_state_encoding"] = extra_state_encoding;
  if (epochs) j["epochs"] = *epochs;
  if (hidden) j["hidden"] = *hidden;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.network = j.at("network").get<std::string>();
  c.out_dir = j.value("out_dir", std::string());
  c.seed_data = j.value("seed_data", std::uint64_t{1});
  c.seed_model = j.value("seed_model", std::uint64_t{1});
  c.seed_predict = j.value("seed_predict", std::uint64_t{1});
  c.train_n = j.value("train_n", 10000);
  c.test_n = j.value("test_n", 1000);
  c.sampler = j.value("sampler", std::string("ancestral"));
  c.gibbs.burn_in = j.value("gibbs_burn_in", 5000);
  c.gibbs.thinning = j.value("gibbs_thinning", 10);
  c.gibbs.allow_zero_entries = j.value("gibbs_allow_zero", false);
  if (j.contains("thresholds")) {
    c.thresholds = j.at("thresholds").get<std::vector<double>>();
  }
  c.score_all_variables = j.value("score_all_variables", false);
  c.extra_state_encoding = j.value("extra_state_encoding", false);
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
  if (j.contains("hidden")) {
    c.hidden = j.at("hidden").get<std::vector<int>>();
  }
  return c;
}

ObservationPolicy SourceInfo::policy() const {
  if (is_synth) return ObservationPolicy::independent_half(observables);
  return ObservationPolicy::uniform_count();
}

ScoringOptions SourceInfo::scoring(const ExperimentConfig& cfg) const {
  ScoringOptions s;
  s.score_all_variables = cfg.score_all_variables;
  if (is_synth) s.only_variable = target;
  return s;
}

SourceInfo resolve_network(const ExperimentConfig& cfg) {
  SourceInfo info;
  if (cfg.network.rfind("synth:", 0) == 0) {
    const std::string kind_name = cfg.network.substr(6);
    SynthKind kind;
    if (kind_name == "A") {
      kind = SynthKind::A;
    } else if (kind_name == "B") {
      kind = SynthKind::B;
    } else if (kind_name == "C") {
      kind = SynthKind::C;
    } else {
      throw std::invalid_argument("unknown synth kind: " + kind_name);
    }
    SynthSpec spec = synth_markov_border(kind, cfg.seed_data);
    info.is_synth = true;
    info.synth_kind = kind;
    info.target = spec.target;
    info.observables = spec.policy.observables;
    info.net = std::move(spec.net);
    info.name = info.net.name;
  } else {
    info.net = parse_bif_file(cfg.network);
    info.name = fs::path(cfg.network).stem().string();
    if (info.net.name.empty() || info.net.name == "unknown") {
      info.net.name = info.name;
    }
  }
  return info;
}

std::pair<TestSet, TestSet> split_test_set(const TestSet& ts,
                                           std::uint64_t seed) {
  if (ts.cases.size() < 5) return {ts, ts};
  std::vector<int> idx(ts.cases.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  Rng rng(Rng::mix(seed ^ 0x5b117aa));
  rng.shuffle(idx);
  const std::size_t n_val = ts.cases.size() / 5;
  TestSet val = ts;
  TestSet eval = ts;
  val.cases.clear();
  eval.cases.clear();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const TestCase& tc = ts.cases[static_cast<std::size_t>(idx[i])];
    if (i < n_val) {
      val.cases.push_back(tc);
    } else {
      eval.cases.push_back(tc);
    }
  }
  return {val, eval};
}

namespace {

void write_source_json(const ExperimentConfig& cfg, const SourceInfo& info,
                       std::uint64_t net_hash) {
  nlohmann::ordered_json j;
  j["network"] = cfg.network;
  j["name"] = info.name;
  j["is_synth"] = info.is_synth;
  if (info.is_synth) {
    j["synth_kind"] = synth_kind_name(*info.synth_kind);
    j["target"] = info.target;
    j["observables"] = info.observables;
  }
  j["network_hash"] = hex64(net_hash);
  write_text_file(cfg.out_dir + "/source.json", j.dump(2) + "\n");
}

SourceInfo read_source(const ExperimentConfig& cfg) {
  const auto j =
      nlohmann::json::parse(read_text_file(cfg.out_dir + "/source.json"));
  SourceInfo info;
  info.is_synth = j.at("is_synth").get<bool>();
  info.name = j.at("name").get<std::string>();
  if (info.is_synth) {
    const std::string k = j.at("synth_kind").get<std::string>();
    info.synth_kind = k == "A"   ? SynthKind::A
                      : k == "B" ? SynthKind::B
                                 : SynthKind::C;
    info.target = j.at("target").get<int>();
    info.observables = j.at("observables").get<std::vector<int>>();
  }
  info.net =
      network_from_json(read_text_file(cfg.out_dir + "/network.json"));
  return info;
}

std::vector<int> tower_for(const ExperimentConfig& cfg,
                           const SourceInfo& info) {
  if (cfg.hidden) return *cfg.hidden;
  if (info.is_synth) return {10, 10};
  return {64, 128, 128, 64};
}

std::string checkpoint_path(const ExperimentConfig& cfg, ModelKind kind) {
  return cfg.out_dir + "/" + model_kind_name(kind) + "_s" +
         std::to_string(cfg.seed_model) + ".ckpt.json";
}

std::string metrics_csv_header() {
  return "dataset,dataset_hash,model,seed_model,seed_predict,threshold,"
         "n_units,ad,kl,acc\n";
}

void append_metrics_row(const std::string& csv_path, const std::string& row) {
  std::string body;
  if (fs::exists(csv_path)) {
    body = read_text_file(csv_path);
  } else {
    body = metrics_csv_header();
  }
  body += row;
  write_text_file(csv_path, body);
}

std::string metric_cell(double v, bool empty) {
  return empty ? std::string() : format_double(v);
}

}  // namespace

GenDataResult cmd_gen_data(const ExperimentConfig& cfg) {
  const SourceInfo info = resolve_network(cfg);
  fs::create_directories(cfg.out_dir);

  GenDataResult res;
  res.network_hash = network_hash(info.net);
  res.network_json = cfg.out_dir + "/network.json";
  write_text_file(res.network_json, network_to_json(info.net));
  write_source_json(cfg, info, res.network_hash);

  const SamplerKind sampler = cfg.sampler == "gibbs" ? SamplerKind::Gibbs
                                                     : SamplerKind::Ancestral;
  const Dataset train = build_training_set(info.net, cfg.train_n, sampler,
                                           cfg.seed_data, cfg.gibbs);
  res.train_prefix = cfg.out_dir + "/train";
  save_dataset(train, info.net, res.train_prefix);

  const auto oracle = [](const BayesianNetwork& n, const Evidence& e) {
    return posterior_marginals_ve(n, e);
  };
  const TestSet test =
      build_test_set(info.net, cfg.test_n, Rng::mix(cfg.seed_data ^ 0x7e57),
                     oracle, info.policy());
  res.test_prefix = cfg.out_dir + "/test";
  save_test_set(test, info.net, res.test_prefix);
  return res;
}

TrainResult cmd_train(const ExperimentConfig& cfg, ModelKind kind) {
  const SourceInfo info = read_source(cfg);
  const Dataset data = load_dataset(info.net, cfg.out_dir + "/train");
  const TestSet test = load_test_set(info.net, cfg.out_dir + "/test");
  const auto [val, eval] = split_test_set(test, cfg.seed_data);
  (void)eval;

  ModelConfig mc = default_config(kind, cfg.seed_model);
  mc.hidden = tower_for(cfg, info);
  mc.extra_state_encoding = cfg.extra_state_encoding;
  if (cfg.epochs) mc.epochs = *cfg.epochs;
  if (kind == ModelKind::Nc) {
    if (!info.is_synth) {
      throw std::invalid_argument(
          "nc training requires a synthesized network target");
    }
    mc.nc_target = info.target;
  }

  const OneHotLayout layout = build_layout(info.net, mc.extra_state_encoding);
  TrainInputs inputs;
  inputs.data = &data;
  inputs.layout = &layout;
  inputs.policy = info.policy();
  inputs.validation = &val;
  inputs.val_scoring = info.scoring(cfg);

  const TrainedModel model = train_model(inputs, mc);
  TrainResult res;
  res.checkpoint_path = checkpoint_path(cfg, kind);
  res.epochs_ran = static_cast<int>(model.log.size());
  res.best_val_ad = 0.0;
  for (const auto& e : model.log) {
    if (e.epoch == 0 || e.val_ad < res.best_val_ad) {
      res.best_val_ad = e.val_ad;
    }
  }
  save_model(model, res.checkpoint_path);
  return res;
}

EvalResult cmd_eval(const ExperimentConfig& cfg,
                    const std::string& checkpoint_path_in,
                    std::optional<double> threshold) {
  const SourceInfo info = read_source(cfg);
  const TestSet test = load_test_set(info.net, cfg.out_dir + "/test");
  const auto [val, eval] = split_test_set(test, cfg.seed_data);
  (void)val;

  const TrainedModel model = load_model(checkpoint_path_in);
  if (model.network_hash != network_hash(info.net)) {
    throw IoError("checkpoint was trained against a different network");
  }

  ScoringOptions scoring = info.scoring(cfg);
  if (threshold) scoring.threshold = *threshold;

  Rng rng(cfg.seed_predict);
  Rng* rng_ptr = nullptr;
  if (model.kind == ModelKind::Rbm || model.kind == ModelKind::Cgan ||
      model.kind == ModelKind::Cvae) {
    rng_ptr = &rng;
  }
  const auto started = std::chrono::steady_clock::now();
  const MetricsReport rep = evaluate_model(
      [&](const Evidence& ev) { return predict(model, ev, rng_ptr); }, eval,
      model.layout, scoring);
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  EvalResult res;
  res.report = rep;

  fs::create_directories(cfg.out_dir + "/records");
  nlohmann::ordered_json record;
  record["config"] = nlohmann::ordered_json::parse(cfg.to_json());
  record["dataset"] = info.name;
  record["dataset_hash"] = hex64(network_hash(info.net));
  record["model"] = model_kind_name(model.kind);
  record["seed_model"] = cfg.seed_model;
  record["seed_predict"] = cfg.seed_predict;
  record["checkpoint"] = checkpoint_path_in;
  record["testset"] = cfg.out_dir + "/test.csv";
  record["threshold"] =
      threshold ? nlohmann::ordered_json(*threshold)
                : nlohmann::ordered_json(nullptr);
  record["metrics"] = nlohmann::ordered_json::parse(rep.to_json());
  record["wall_ms"] = wall_ms;
  std::string tag = model_kind_name(model.kind) + "_s" +
                    std::to_string(cfg.seed_model);
  if (threshold) tag += "_t" + format_double(*threshold);
  res.record_path = cfg.out_dir + "/records/" + tag + ".json";
  write_text_file(res.record_path, record.dump(2) + "\n");

  std::ostringstream row;
  row << info.name << ',' << hex64(network_hash(info.net)) << ','
      << model_kind_name(model.kind) << ',' << cfg.seed_model << ','
      << cfg.seed_predict << ','
      << (threshold ? format_double(*threshold) : std::string()) << ','
      << rep.units << ',' << metric_cell(rep.ad, rep.empty) << ','
      << metric_cell(rep.kl, rep.empty) << ','
      << metric_cell(rep.acc, rep.empty) << '\n';
  res.csv_path = cfg.out_dir + "/metrics.csv";
  append_metrics_row(res.csv_path, row.str());
  return res;
}

std::string cmd_sweep_threshold(const ExperimentConfig& cfg,
                                const std::string& checkpoint_path_in,
                                const std::vector<double>& grid) {
  const SourceInfo info = read_source(cfg);
  const TestSet test = load_test_set(info.net, cfg.out_dir + "/test");
  const auto [val, eval] = split_test_set(test, cfg.seed_data);
  (void)val;
  const TrainedModel model = load_model(checkpoint_path_in);
  if (model.network_hash != network_hash(info.net)) {
    throw IoError("checkpoint was trained against a different network");
  }

  // Predictions are computed once; thresholds only re-filter the units.
  Rng rng(cfg.seed_predict);
  Rng* rng_ptr = nullptr;
  if (model.kind == ModelKind::Rbm || model.kind == ModelKind::Cgan ||
      model.kind == ModelKind::Cvae) {
    rng_ptr = &rng;
  }
  PredictionSet preds;
  preds.outputs.reserve(eval.cases.size());
  for (const auto& tc : eval.cases) {
    preds.outputs.push_back(predict(model, tc.evidence, rng_ptr));
  }

  std::ostringstream csv;
  csv << "threshold,n_units,ad,kl,acc\n";
  for (double t : grid) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("threshold outside [0, 1]");
    }
    ScoringOptions scoring = info.scoring(cfg);
    scoring.threshold = t;
    const MetricsReport rep =
        evaluate_predictions(preds, eval, model.layout, scoring);
    csv << format_double(t) << ',' << rep.units << ','
        << metric_cell(rep.ad, rep.empty) << ','
        << metric_cell(rep.kl, rep.empty) << ','
        << metric_cell(rep.acc, rep.empty) << '\n';
  }
  const std::string path = cfg.out_dir + "/sweep_" +
                           model_kind_name(model.kind) + "_s" +
                           std::to_string(cfg.seed_model) + ".csv";
  write_text_file(path, csv.str());
  return path;
}

namespace {

MetricsReport run_synth_model(const ExperimentConfig& cfg, ModelKind kind) {
  cmd_train(cfg, kind);
  const EvalResult ev = cmd_eval(cfg, checkpoint_path(cfg, kind));
  return ev.report;
}

}  // namespace

std::string cmd_markov_border(const std::string& out_dir,
                              const std::vector<ModelKind>& kinds,
                              std::uint64_t seed_data,
                              std::uint64_t seed_model,
                              std::uint64_t seed_predict, int train_n,
                              std::optional<int> epochs) {
  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "kind,model,seed_model,ad,kl,acc\n";
  for (const char* kind_name : {"A", "B", "C"}) {
    ExperimentConfig cfg;
    cfg.network = std::string("synth:") + kind_name;
    cfg.out_dir = out_dir + "/" + kind_name;
    cfg.seed_data = seed_data;
    cfg.seed_model = seed_model;
    cfg.seed_predict = seed_predict;
    cfg.train_n = train_n;
    cfg.test_n = 1000;
    cfg.epochs = epochs;
    cmd_gen_data(cfg);
    for (ModelKind kind : kinds) {
      const MetricsReport rep = run_synth_model(cfg, kind);
      csv << kind_name << ',' << model_kind_name(kind) << ',' << seed_model
          << ',' << metric_cell(rep.ad, rep.empty) << ','
          << metric_cell(rep.kl, rep.empty) << ','
          << metric_cell(rep.acc, rep.empty) << '\n';
    }
  }
  const std::string csv_path = out_dir + "/markov_border.csv";
  write_text_file(csv_path, csv.str());

  const HyperpriorReport hp = hyperprior_variance_report(
      Hyperprior{Hyperprior::Kind::Uniform01, 0.0}, 200000,
      Rng::mix(seed_data ^ 0xde17a));
  nlohmann::ordered_json j;
  j["hyperprior"] = "uniform01";
  j["n_draws"] = hp.n_draws;
  j["e_delta"] = hp.e_delta;
  j["var_delta"] = hp.var_delta;
  j["var_alpha"] = hp.var_alpha;
  j["var_delta_ge_var_alpha"] = hp.var_delta_ge_var_alpha;
  write_text_file(out_dir + "/variance_report.json", j.dump(2) + "\n");
  return csv_path;
}

std::string cmd_compare_nc(const std::string& out_dir,
                           std::uint64_t seed_data, std::uint64_t seed_model,
                           std::uint64_t seed_predict, int train_n,
                           std::optional<int> epochs) {
  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "kind,model,seed_model,ad,kl,acc\n";
  for (const char* kind_name : {"A", "B", "C"}) {
    ExperimentConfig cfg;
    cfg.network = std::string("synth:") + kind_name;
    cfg.out_dir = out_dir + "/" + kind_name;
    cfg.seed_data = seed_data;
    cfg.seed_model = seed_model;
    cfg.seed_predict = seed_predict;
    cfg.train_n = train_n;
    cfg.test_n = 1000;
    cfg.epochs = epochs;
    cmd_gen_data(cfg);
    for (ModelKind kind : {ModelKind::Ear, ModelKind::Nc}) {
      const MetricsReport rep = run_synth_model(cfg, kind);
      csv << kind_name << ',' << model_kind_name(kind) << ',' << seed_model
          << ',' << metric_cell(rep.ad, rep.empty) << ','
          << metric_cell(rep.kl, rep.empty) << ','
          << metric_cell(rep.acc, rep.empty) << '\n';
    }
  }
  const std::string csv_path = out_dir + "/compare_nc.csv";
  write_text_file(csv_path, csv.str());
  return csv_path;
}

ReportResult emit_report(const std::vector<std::string>& record_dirs,
                         const std::string& out_dir) {
  fs::create_directories(out_dir);

  std::vector<nlohmann::json> records;
  for (const auto& dir : record_dirs) {
    const fs::path records_dir = fs::path(dir) / "records";
    if (!fs::exists(records_dir)) continue;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(records_dir)) {
      if (entry.path().extension() == ".json") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      records.push_back(nlohmann::json::parse(read_text_file(f)));
    }
  }

  nlohmann::ordered_json report;
  report["records"] = nlohmann::ordered_json::array();
  std::set<std::string> datasets;
  std::set<std::string> models;
  for (const auto& r : records) {
    report["records"].push_back(nlohmann::ordered_json(r));
    if (r.at("threshold").is_null()) {
      datasets.insert(r.at("dataset").get<std::string>());
      models.insert(r.at("model").get<std::string>());
    }
  }

  ReportResult res;
  res.report_json = out_dir + "/report.json";
  write_text_file(res.report_json, report.dump(2) + "\n");

  // dataset x model matrix over the unthresholded records
  std::ostringstream matrix;
  matrix << "model";
  for (const auto& d : datasets) {
    matrix << ',' << d << "_ad," << d << "_kl," << d << "_acc";
  }
  matrix << '\n';
  for (const auto& m : models) {
    matrix << m;
    for (const auto& d : datasets) {
      std::string ad, kl, acc;
      for (const auto& r : records) {
        if (!r.at("threshold").is_null()) continue;
        if (r.at("model") != m || r.at("dataset") != d) continue;
        const auto& met = r.at("metrics");
        if (!met.at("ad").is_null()) {
          ad = format_double(met.at("ad").get<double>());
          kl = format_double(met.at("kl").get<double>());
          acc = format_double(met.at("acc").get<double>());
        }
      }
      matrix << ',' << ad << ',' << kl << ',' << acc;
    }
    matrix << '\n';
  }
  res.matrix_csv = out_dir + "/matrix.csv";
  write_text_file(res.matrix_csv, matrix.str());

  // threshold series per (dataset, model) with thresholded records
  std::set<std::pair<std::string, std::string>> series_keys;
  for (const auto& r : records) {
    if (!r.at("threshold").is_null()) {
      series_keys.insert({r.at("dataset").get<std::string>(),
                          r.at("model").get<std::string>()});
    }
  }
  for (const auto& [d, m] : series_keys) {
    std::ostringstream series;
    series << "threshold,n_units,ad,kl,acc\n";
    std::vector<std::pair<double, const nlohmann::json*>> rows;
    for (const auto& r : records) {
      if (r.at("threshold").is_null()) continue;
      if (r.at("dataset") != d || r.at("model") != m) continue;
      rows.push_back({r.at("threshold").get<double>(), &r});
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, r] : rows) {
      const auto& met = r->at("metrics");
      series << format_double(t) << ',' << met.at("units").get<long long>();
      for (const char* key : {"ad", "kl", "acc"}) {
        series << ',';
        if (!met.at(key).is_null()) {
          series << format_double(met.at(key).get<double>());
        }
      }
      series << '\n';
    }
    const std::string path = out_dir + "/series_" + d + "_" + m + ".csv";
    write_text_file(path, series.str());
    res.series_csv.push_back(path);
  }
  return res;
}

}  // namespace hetinf
