/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// fokusz: command-line entry point for the response pipeline.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "fokusz/cluster.hpp"
#include "fokusz/coder.hpp"
#include "fokusz/conllu.hpp"
#include "fokusz/corpus.hpp"
#include "fokusz/error.hpp"
#include "fokusz/metrics.hpp"
#include "fokusz/report.hpp"
#include "fokusz/runner.hpp"
#include "fokusz/simgen.hpp"
#include "fokusz/stats.hpp"
#include "fokusz/text.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace fokusz {
namespace {

std::vector<FocusCondition> parse_conditions(const std::string& csv) {
  std::vector<FocusCondition> out;
  for (auto part : text::split(csv, ',')) {
    auto c = parse_condition(text::trim(part));
    if (!c) {
      throw Error(ErrorKind::kInvalidArgument, "unknown condition: " + std::string(part));
    }
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "no conditions given");
  return out;
}

Exec exec_for(bool serial) { return serial ? Exec::kSerial : Exec::kParallel; }

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string manifest, endpoint, model, out, conditions = "OBJ_FOC,SUBJ_FOC", wire = "documented";
  std::string image_root;
  int runs = 30, max_inflight = 4, attempts = 3, backoff_ms = 500, timeout_s = 60;
  std::int64_t seed_base = 0;
  bool resume = false, no_seed = false;
  std::size_t limit = 0;
};

int cmd_run(const RunArgs& a) {
  runner::RunConfig cfg;
  cfg.endpoint = a.endpoint;
  cfg.model = a.model;
  cfg.runs = a.runs;
  cfg.conditions = parse_conditions(a.conditions);
  cfg.seed_base = a.seed_base;
  cfg.send_seed = !a.no_seed;
  cfg.max_inflight = a.max_inflight;
  cfg.retry.max_attempts = a.attempts;
  cfg.retry.backoff_base = std::chrono::milliseconds(a.backoff_ms);
  cfg.timeout = std::chrono::seconds(a.timeout_s);
  cfg.wire = a.wire == "openai" ? runner::WireFormat::kOpenAi : runner::WireFormat::kDocumented;
  cfg.output = a.out;
  cfg.image_root = a.image_root.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.image_root);
  cfg.resume = a.resume;
  if (a.limit > 0) cfg.limit = a.limit;
  cfg.api_key = runner::api_key_from_env();

  auto stimuli = load_manifest(a.manifest);
  auto report = runner::run_experiment(cfg, stimuli);
  ordered_json j;
  j["planned"] = report.planned;
  j["already_done"] = report.already_done;
  j["succeeded"] = report.succeeded;
  j["failed"] = report.failed;
  j["requests_sent"] = report.requests_sent;
  std::cout << j.dump(2) << "\n";
  for (const auto& f : report.failures) {
    std::cerr << "failed: " << f.trial_id << " after " << f.attempts << " attempt(s): "
              << f.message << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// code

struct CodeArgs {
  std::string trials, conllu, manifest, out, unmatched;
  bool serial = false;
};

int cmd_code(const CodeArgs& a) {
  auto trials = load_trials(a.trials);
  auto manifest = load_manifest(a.manifest);
  validate_trials(trials, manifest);
  auto parsed = conllu::read(text::read_file(a.conllu));

  std::set<std::string> trial_ids;
  for (const auto& t : trials) trial_ids.insert(t.trial_id);
  ordered_json side;
  side["unmatched_sentences"] = ordered_json::array();
  for (const auto& s : parsed.sentences) {
    auto id = s.response_id();
    if (id && !trial_ids.contains(std::string(*id))) {
      side["unmatched_sentences"].push_back({{"response_id", *id}, {"line", s.first_line}});
    }
  }
  side["unkeyed_sentences"] = ordered_json::array();
  for (std::size_t i : parsed.unkeyed) {
    side["unkeyed_sentences"].push_back({{"line", parsed.sentences[i].first_line}});
  }
  side["malformed_lines"] = ordered_json::array();
  for (const auto& d : parsed.errors) {
    side["malformed_lines"].push_back({{"line", d.line}, {"message", d.message}});
  }

  auto index = coder::index_by_response(parsed.sentences);
  auto coded = coder::code_all(trials, index, manifest, exec_for(a.serial));
  std::vector<CodedTrial> rows;
  rows.reserve(trials.size());
  side["trials_without_parse"] = ordered_json::array();
  std::size_t categorised = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (!index.contains(trials[i].trial_id)) {
      side["trials_without_parse"].push_back(trials[i].trial_id);
    }
    if (coded[i].categorised()) ++categorised;
    rows.push_back({trials[i], coded[i]});
  }
  save_coded(rows, a.out);
  std::string side_path = a.unmatched.empty() ? a.out + ".unmatched.json" : a.unmatched;
  text::write_file_atomic(side_path, side.dump(2) + "\n");

  ordered_json j;
  j["trials"] = trials.size();
  j["categorised"] = categorised;
  j["excluded"] = trials.size() - categorised;
  j["unmatched_sentences"] = side["unmatched_sentences"].size();
  j["malformed_lines"] = parsed.errors.size();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze / report

report::PairBy pair_by_of(const std::string& s) {
  auto p = report::parse_pair_by(s);
  if (!p) throw Error(ErrorKind::kInvalidArgument, "--pair-by must be run or item");
  return *p;
}

struct AnalyzeArgs {
  std::string coded, out_dir, pair_by;
  double alpha = 0.05;
};

int cmd_analyze(const AnalyzeArgs& a) {
  auto coded = load_coded(a.coded);
  report::AnalysisOptions opt;
  opt.pair_by = pair_by_of(a.pair_by);
  opt.alpha = a.alpha;
  auto an = report::analyze(coded, opt);
  fs::path dir = a.out_dir;
  fs::create_directories(dir);
  text::write_file_atomic(dir / "proportions.csv", metrics::proportions_csv(an.profiles));
  text::write_file_atomic(dir / "deltas.csv", metrics::deltas_csv(an.deltas));
  text::write_file_atomic(dir / "deltas_pooled.csv", report::pooled_deltas_csv(an));
  text::write_file_atomic(dir / "indefiniteness.csv", report::indefiniteness_csv(an));
  text::write_file_atomic(dir / "stats.json", report::stats_json(an));
  text::write_file_atomic(dir / "plots.json", report::plot_json(an));
  for (const auto& n : an.notices) std::cerr << "notice: " << n << "\n";
  for (const auto& d : an.pooled_deltas) {
    std::cout << d.source_id << " delta " << text::fixed(d.delta) << "\n";
  }
  return 0;
}

struct ReportArgs {
  std::string coded, pair_by, clusters, out;
  double alpha = 0.05;
};

std::map<std::string, int> load_assignments(const fs::path& path) {
  std::map<std::string, int> out;
  std::string data = text::read_file(path);
  std::size_t n = 0;
  for (auto line : text::split(data, '\n')) {
    if (++n == 1 || text::trim(line).empty()) continue;
    bool ok = true;
    auto f = text::parse_csv_line(line, &ok);
    if (!ok || f.size() != 2) {
      throw Error(ErrorKind::kMalformedRecord, "bad assignments row", n);
    }
    try {
      out[f[0]] = std::stoi(f[1]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kMalformedRecord, "bad cluster index", n);
    }
  }
  return out;
}

int cmd_report(const ReportArgs& a) {
  auto coded = load_coded(a.coded);
  report::AnalysisOptions opt;
  opt.pair_by = pair_by_of(a.pair_by);
  opt.alpha = a.alpha;
  auto an = report::analyze(coded, opt);
  std::map<std::string, int> clusters;
  if (!a.clusters.empty()) clusters = load_assignments(a.clusters);
  std::string out = report::render(an, a.clusters.empty() ? nullptr : &clusters);
  if (a.out.empty()) {
    std::cout << out;
  } else {
    text::write_file_atomic(a.out, out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterArgs {
  std::string coded, out_dir, source_kind = "human", filtered_out;
  int k_min = 1, k_max = 8, k = 0, restarts = 10, max_iter = 300;
  std::uint64_t seed = 0;
  std::vector<int> exclude;
  bool serial = false;
};

int cmd_cluster(const ClusterArgs& a) {
  auto coded = load_coded(a.coded);
  auto profiles = metrics::build_profiles(coded);
  std::vector<metrics::RunProfile> kept;
  for (const auto& p : profiles) {
    if (a.source_kind == "all" || label(p.source_kind) == a.source_kind) kept.push_back(p);
  }
  auto vectors = cluster::build_vectors(kept);
  if (vectors.empty()) throw Error(ErrorKind::kEmptyDataset, "no sources to cluster");
  auto points = cluster::to_points(vectors);
  cluster::KMeansOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  opt.max_iter = a.max_iter;
  Exec exec = exec_for(a.serial);

  fs::path dir = a.out_dir;
  fs::create_directories(dir);
  ordered_json summary;
  int k = a.k;
  int k_max = std::min<int>(a.k_max, static_cast<int>(points.size()));
  if (k_max - a.k_min + 1 >= 3 || k == 0) {
    auto e = cluster::elbow(points, a.k_min, k_max, opt, exec);
    text::write_file_atomic(dir / "curve.json", cluster::curve_json(e));
    summary["elbow_k"] = e.chosen_k;
    summary["low_confidence"] = e.low_confidence;
    if (e.low_confidence) std::cerr << "notice: elbow has no pronounced knee\n";
    if (k == 0) k = e.chosen_k;
  }
  opt.k = k;
  auto c = cluster::kmeans(points, opt, exec);
  text::write_file_atomic(dir / "assignments.csv", cluster::assignments_csv(c));
  summary["k"] = c.k;
  summary["inertia"] = c.inertia;
  summary["sizes"] = c.sizes;
  summary["centroids"] = c.centroids;
  text::write_file_atomic(dir / "clustering.json", summary.dump(2) + "\n");

  if (!a.exclude.empty()) {
    if (a.filtered_out.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "--exclude-cluster needs --filtered-out");
    }
    std::set<int> drop(a.exclude.begin(), a.exclude.end());
    std::vector<CodedTrial> rest;
    for (const auto& r : coded) {
      auto it = c.assignment.find(r.trial.source_id);
      if (it != c.assignment.end() && drop.contains(it->second)) continue;
      rest.push_back(r);
    }
    save_coded(rest, a.filtered_out);
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// power

struct PowerArgs {
  std::string table;
  double alpha = 0.05, power = 0.8;
  int df = 0;
  std::uint64_t cap = stats::kDefaultNCap;
};

stats::ContingencyTable load_table(const fs::path& path) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::string data = text::read_file(path);
  std::size_t n = 0;
  for (auto line : text::split(data, '\n')) {
    ++n;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    bool ok = true;
    auto fields = text::parse_csv_line(t, &ok);
    std::vector<std::uint64_t> row;
    for (const auto& f : fields) {
      auto v = text::trim(f);
      std::uint64_t x = 0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
        throw Error(ErrorKind::kMalformedRecord, "cells must be non-negative integers", n);
      }
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::kMalformedRecord, "ragged table row", n);
    }
    rows.push_back(row);
  }
  return stats::ContingencyTable::from_rows(rows);
}

int cmd_power(const PowerArgs& a) {
  auto table = load_table(a.table);
  auto chi = stats::chi_square(table);
  double v = stats::cramers_v(table);
  double w = std::sqrt(chi.statistic / static_cast<double>(table.total()));
  int df = a.df > 0 ? a.df : static_cast<int>(chi.df);
  ordered_json j;
  j["chi_square"] = {{"method", label(chi.method)},
                     {"statistic", chi.statistic},
                     {"df", chi.df},
                     {"p", chi.p_value}};
  j["cramers_v"] = v;
  auto r = stats::required_n(w, df, a.alpha, a.power, a.cap);
  j["w"] = r.effect_w;
  j["df"] = r.df;
  j["alpha"] = r.alpha;
  j["target_power"] = r.target_power;
  j["required_n"] = r.required_n;
  j["achieved_power"] = r.achieved_power;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimArgs {
  std::string profile, builtin, population, manifest, out_dir, show;
  std::size_t trials = 15;
  std::uint64_t seed = 0;
  bool list = false, serial = false;
};

simgen::StrategyProfile builtin_or_throw(const std::string& name) {
  auto p = simgen::builtin_profile(name);
  if (!p) throw Error(ErrorKind::kInvalidArgument, "no builtin profile named " + name);
  return *p;
}

int cmd_simulate(const SimArgs& a) {
  if (a.list) {
    for (const auto& p : simgen::builtin_profiles()) std::cout << p.name << "\n";
    return 0;
  }
  if (!a.show.empty()) {
    std::cout << simgen::profile_to_json(builtin_or_throw(a.show));
    return 0;
  }
  int sources = !a.profile.empty() + !a.builtin.empty() + !a.population.empty();
  if (sources != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "give exactly one of --profile, --builtin, --population");
  }
  if (a.manifest.empty() || a.out_dir.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "--manifest and --out-dir are required");
  }
  auto stimuli = load_manifest(a.manifest);
  Exec exec = exec_for(a.serial);
  simgen::Dataset d;
  if (!a.population.empty()) {
    std::vector<simgen::Cohort> cohorts;
    for (auto part : text::split(a.population, ',')) {
      auto spec = text::trim(part);
      auto colon = spec.rfind(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorKind::kInvalidArgument, "population entries look like name:count");
      }
      std::string name(spec.substr(0, colon));
      std::size_t count = std::stoul(std::string(spec.substr(colon + 1)));
      simgen::StrategyProfile p =
          fs::exists(name) ? simgen::load_profile(name) : builtin_or_throw(name);
      cohorts.push_back({p, count});
    }
    d = simgen::generate_population(cohorts, stimuli, a.trials, a.seed, exec);
  } else {
    auto p = a.profile.empty() ? builtin_or_throw(a.builtin) : simgen::load_profile(a.profile);
    d = simgen::generate(p, stimuli, a.trials, a.seed, exec);
  }
  fs::path dir = a.out_dir;
  fs::create_directories(dir);
  save_trials(d.trials, dir / "trials.jsonl");
  text::write_file_atomic(dir / "parses.conllu", conllu::write(d.parses));
  std::vector<CodedTrial> gold;
  for (std::size_t i = 0; i < d.trials.size(); ++i) gold.push_back({d.trials[i], d.gold[i]});
  save_coded(gold, dir / "gold.jsonl");
  std::cout << "wrote " << d.trials.size() << " trials to " << dir.string() << "\n";
  return 0;
}

}  // namespace
}  // namespace fokusz

int main(int argc, char** argv) {
  using namespace fokusz;
  CLI::App app{"fokusz: information-structure coding and analysis of Hungarian responses"};
  app.require_subcommand(1);

  RunArgs run;
  auto* r = app.add_subcommand("run", "Query a chat-completions endpoint for every stimulus, "
                                      "condition and run (API key in FOKUSZ_API_KEY)");
  r->add_option("--manifest", run.manifest, "Stimulus manifest CSV")->required();
  r->add_option("--endpoint", run.endpoint, "Full URL of the chat-completions route")->required();
  r->add_option("--model", run.model, "Model identifier; also the source_id of the records")
      ->required();
  r->add_option("--out", run.out, "Trials JSONL to append to")->required();
  r->add_option("--runs", run.runs, "Number of runs")->capture_default_str();
  r->add_option("--conditions", run.conditions, "Comma-separated conditions")
      ->capture_default_str();
  r->add_option("--max-inflight", run.max_inflight, "Concurrent requests")->capture_default_str();
  r->add_flag("--resume", run.resume, "Skip trials already present in --out");
  r->add_option("--seed-base", run.seed_base, "Run r sends seed base + r")->capture_default_str();
  r->add_flag("--no-seed", run.no_seed, "Do not send the seed (it is still recorded)");
  r->add_option("--attempts", run.attempts, "Attempts per trial")->capture_default_str();
  r->add_option("--backoff-ms", run.backoff_ms, "First retry delay, doubled after each retry")
      ->capture_default_str();
  r->add_option("--timeout", run.timeout_s, "Per-request timeout in seconds")
      ->capture_default_str();
  r->add_option("--wire", run.wire, "Image part layout: documented or openai")
      ->check(CLI::IsMember({"documented", "openai"}))
      ->capture_default_str();
  r->add_option("--image-root", run.image_root,
                "Directory for relative image_ref paths (default: the manifest's directory)");
  r->add_option("--limit", run.limit, "Stop after this many new trials (0: no limit)");

  CodeArgs code;
  auto* c = app.add_subcommand("code", "Assign sentence types and IS-types from CoNLL-U parses");
  c->add_option("--trials", code.trials, "Trials JSONL")->required();
  c->add_option("--conllu", code.conllu, "Parses keyed by '# response_id = <trial_id>'")
      ->required();
  c->add_option("--manifest", code.manifest, "Stimulus manifest CSV")->required();
  c->add_option("--out", code.out, "Coded JSONL output")->required();
  c->add_option("--unmatched", code.unmatched,
                "Sidecar report of unmatched or malformed input (default: <out>.unmatched.json)");
  c->add_flag("--serial", code.serial, "Use the single-threaded path");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Write proportion, delta, indefiniteness, test and "
                                          "plot-data files");
  a->add_option("--coded", an.coded, "Coded JSONL")->required();
  a->add_option("--out-dir", an.out_dir, "Output directory")->required();
  a->add_option("--pair-by", an.pair_by, "Pairing key for signed-rank tests: run or item")
      ->required()
      ->check(CLI::IsMember({"run", "item"}));
  a->add_option("--alpha", an.alpha, "Significance level after correction")->capture_default_str();

  ClusterArgs cl;
  auto* k = app.add_subcommand("cluster", "K-means over per-source strategy vectors");
  k->add_option("--coded", cl.coded, "Coded JSONL")->required();
  k->add_option("--out-dir", cl.out_dir, "Output directory")->required();
  k->add_option("--source-kind", cl.source_kind, "Which sources to cluster: human, vlm or all")
      ->check(CLI::IsMember({"human", "vlm", "all"}))
      ->capture_default_str();
  k->add_option("--k-min", cl.k_min, "Smallest k of the elbow curve")->capture_default_str();
  k->add_option("--k-max", cl.k_max, "Largest k of the elbow curve")->capture_default_str();
  k->add_option("--k", cl.k, "Use this k instead of the elbow choice");
  k->add_option("--seed", cl.seed, "Seed")->capture_default_str();
  k->add_option("--restarts", cl.restarts, "k-means++ restarts")->capture_default_str();
  k->add_option("--max-iter", cl.max_iter, "Lloyd iterations per restart")->capture_default_str();
  k->add_option("--exclude-cluster", cl.exclude, "Drop members of this cluster (repeatable)");
  k->add_option("--filtered-out", cl.filtered_out, "Coded JSONL without excluded clusters");
  k->add_flag("--serial", cl.serial, "Use the single-threaded path");

  PowerArgs pw;
  auto* p = app.add_subcommand("power", "Effect size and required sample size for a "
                                        "contingency table");
  p->add_option("--table", pw.table, "CSV of non-negative counts, one row per line")->required();
  p->add_option("--alpha", pw.alpha, "Significance level")->capture_default_str();
  p->add_option("--power", pw.power, "Target power")->capture_default_str();
  p->add_option("--df", pw.df, "Degrees of freedom (default (r-1)(c-1))");
  p->add_option("--cap", pw.cap, "Give up above this N")->capture_default_str();

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate trials, gold parses and gold codings "
                                           "from strategy profiles");
  s->add_option("--profile", sim.profile, "Profile JSON file");
  s->add_option("--builtin", sim.builtin, "Name of a bundled profile");
  s->add_option("--population", sim.population,
                "Comma-separated name:count cohorts, one source per member");
  s->add_option("--manifest", sim.manifest, "Stimulus manifest CSV");
  s->add_option("--out-dir", sim.out_dir, "Output directory");
  s->add_option("--trials-per-condition", sim.trials, "Trials per condition per source")
      ->capture_default_str();
  s->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  s->add_flag("--list-builtins", sim.list, "Print the bundled profile names");
  s->add_option("--show-profile", sim.show, "Print a bundled profile as JSON");
  s->add_flag("--serial", sim.serial, "Use the single-threaded path");

  ReportArgs rep;
  auto* t = app.add_subcommand("report", "Print the summary tables as fixed-width text");
  t->add_option("--coded", rep.coded, "Coded JSONL")->required();
  t->add_option("--pair-by", rep.pair_by, "Pairing key for signed-rank tests: run or item")
      ->required()
      ->check(CLI::IsMember({"run", "item"}));
  t->add_option("--clusters", rep.clusters, "assignments.csv from `fokusz cluster`");
  t->add_option("--alpha", rep.alpha, "Significance level after correction")
      ->capture_default_str();
  t->add_option("--out", rep.out, "Write here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*r) return cmd_run(run);
    if (*c) return cmd_code(code);
    if (*a) return cmd_analyze(an);
    if (*k) return cmd_cluster(cl);
    if (*p) return cmd_power(pw);
    if (*s) return cmd_simulate(sim);
    if (*t) return cmd_report(rep);
  } catch (const Error& e) {
    std::cerr << "fokusz: " << e.what() << "\n";
    return e.kind() == ErrorKind::kIo ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "fokusz: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
