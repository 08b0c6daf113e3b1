// Copyright 2026 The dcpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcpriv/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"

#include "dcpriv/auditor.h"
#include "dcpriv/calibrator.h"
#include "dcpriv/condenser.h"
#include "dcpriv/dataset.h"
#include "dcpriv/error.h"
#include "dcpriv/model_eval.h"
#include "dcpriv/report.h"
#include "dcpriv/run_config.h"
#include "dcpriv/stats.h"

namespace dcpriv {
namespace {

// Thrown from inside pipeline stages so the partial report can name them.
struct StageFailure {
  std::string stage;
  int exit_code;
  std::string message;
};

double ParseReal(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("cannot parse " + what + " from \"" + std::string(s) + "\"");
  }
  return v;
}

// "name=a,b" entries into a bounds map.
std::map<std::string, Bounds> ParseBounds(const std::vector<std::string>& specs) {
  std::map<std::string, Bounds> out;
  for (const std::string& spec : specs) {
    const size_t eq = spec.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--bounds expects <column>=<a>,<b>, got \"" + spec + "\"");
    }
    const std::string name = spec.substr(0, eq);
    const std::string range = spec.substr(eq + 1);
    const size_t comma = range.find(',');
    if (comma == std::string::npos) {
      throw UsageError("--bounds expects <column>=<a>,<b>, got \"" + spec + "\"");
    }
    const Bounds b{ParseReal(range.substr(0, comma), "lower bound"),
                   ParseReal(range.substr(comma + 1), "upper bound")};
    if (!(b.lower < b.upper)) {
      throw UsageError("--bounds for \"" + name + "\" needs lower < upper");
    }
    if (!out.emplace(name, b).second) {
      throw UsageError("--bounds given twice for \"" + name + "\"");
    }
  }
  return out;
}

void EmitReport(const Json& report, const std::optional<std::string>& path,
                std::ostream& out) {
  const std::string text = SerializeReport(report);
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open report file " + *path);
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing report file " + *path);
}

Json FlagsJson(const std::vector<std::string>& flags) {
  std::vector<std::string> sorted = flags;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return Json(sorted);
}

// Per-column calibration block shared by `calibrate` and `pipeline`.
Json CalibrateColumns(const Dataset& data, const std::vector<std::string>& requested,
                      double gamma, bool require_declared,
                      std::vector<std::string>& flags) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw UsageError("--gamma must lie in [0, 1)");
  std::vector<std::string> names = requested.empty() ? data.FeatureNames() : requested;
  Json columns = Json::array();
  double worst = -1.0;
  std::string worst_name;
  for (const std::string& name : names) {
    const Column& col = data.column(name);
    if (!col.bounds_declared) {
      if (require_declared) {
        throw UsageError("column \"" + name +
                         "\" has no declared bounds; pass --bounds " + name + "=<a>,<b>");
      }
      flags.push_back("inferred_bounds");
    }
    const MomentSummary m = Summarize(col.values);
    const Sensitivity s = SensitivityOf(col.bounds);
    PrivacyParams p;
    try {
      p = CalibrateColumn(m, s, gamma);
    } catch (const DegenerateDataError& e) {
      throw DegenerateDataError("column \"" + name + "\": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("column \"" + name + "\": " + e.what());
    }
    if (p.vacuous()) flags.push_back("vacuous_delta");
    Json entry{{"column", name},
               {"bounds", {col.bounds.lower, col.bounds.upper}},
               {"bounds_declared", col.bounds_declared},
               {"sensitivity", s.delta_f},
               {"moments", ToJson(m)},
               {"compromised", m.n - UncompromisedCount(m.n, gamma)},
               {"uncompromised", UncompromisedCount(m.n, gamma)}};
    const Json params = ToJson(p);
    for (const auto& [k, v] : params.items()) entry[k] = v;
    columns.push_back(std::move(entry));
    if (p.epsilon > worst) {
      worst = p.epsilon;
      worst_name = name;
    }
  }
  Json out{{"threat_model", gamma == 0.0 ? "default_threat" : "compromised_threat"},
           {"gamma", gamma},
           {"n", data.n()},
           {"columns", std::move(columns)},
           {"worst_case_epsilon", worst},
           {"worst_case_column", worst_name}};
  if (gamma > 0.0) {
    out["interpretation"] = Json::array(
        {"delta formula symbol D read as the sensitivity delta_f",
         "bare sigma^2 in the delta formula read as sigma_gamma^2",
         "uncompromised totals extrapolated as count times per-record plugin moments"});
  }
  return out;
}

Json CondenseBlock(const CondenseResult& r, const CondenseConfig& cfg,
                   const Dataset& data, const std::optional<std::string>& output) {
  Json j{{"initial_loss", r.loss_trace.front()},
         {"final_loss", r.loss_trace.back()},
         {"iterations", r.iterations},
         {"per_class", cfg.m_per_class},
         {"classes", data.Classes()},
         {"rows", r.synth.m()},
         {"source_rows", data.n()},
         {"oversampled", r.oversampled}};
  j["output"] = output ? Json(*output) : Json(nullptr);
  return j;
}

CondenseConfig MakeCondenseConfig(uint64_t per_class, uint64_t iters, uint64_t seed,
                                  uint64_t feature_dim, double step) {
  CondenseConfig cfg;
  cfg.m_per_class = per_class;
  cfg.iters = iters;
  cfg.seed = seed;
  cfg.feature_dim = feature_dim;
  cfg.step_size = step;
  return cfg;
}

// ---------------------------------------------------------------------------

int CmdCalibrate(const CalibrateArgs& a, std::ostream& out) {
  IngestOptions opt{ParseBounds(a.bounds), a.label, a.clip};
  const Dataset data = IngestCsv(a.input, opt);
  std::vector<std::string> flags;
  Json report = ReportHeader("calibrate", ConfigToJson(a));
  report["status"] = "ok";
  report["results"] = CalibrateColumns(data, a.columns, a.gamma, true, flags);
  report["flags"] = FlagsJson(flags);
  EmitReport(report, a.report, out);
  return kExitOk;
}

int CmdCondense(const CondenseArgs& a, std::ostream& out) {
  IngestOptions opt{ParseBounds(a.bounds), a.label, a.clip};
  const Dataset data = IngestCsv(a.input, opt);
  const CondenseConfig cfg =
      MakeCondenseConfig(a.per_class, a.iters, a.seed, a.feature_dim, a.step);
  const CondenseResult r = Condense(data, cfg);
  WriteCsvFile(a.output, r.synth.ToDataset());
  if (a.loss_trace) {
    std::ofstream f(*a.loss_trace, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open loss trace file " + *a.loss_trace);
    f << Json(r.loss_trace).dump() << "\n";
    if (!f) throw IoError("failed writing " + *a.loss_trace);
  }
  std::vector<std::string> flags;
  if (r.oversampled) flags.push_back("oversampled");
  Json report = ReportHeader("condense", ConfigToJson(a));
  report["status"] = "ok";
  report["results"] = CondenseBlock(r, cfg, data, a.output);
  report["flags"] = FlagsJson(flags);
  EmitReport(report, a.report, out);
  return kExitOk;
}

int CmdAudit(const AuditArgs& a, size_t threads, std::ostream& out) {
  AuditConfig cfg;
  cfg.mechanism = ParseMechanism(a.mechanism);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.gamma = a.gamma;
  cfg.delta = a.delta;
  cfg.slack = a.slack;
  cfg.threshold_grid = a.threshold_grid;
  cfg.column = a.column.value_or("");
  cfg.condense = MakeCondenseConfig(a.per_class, a.iters, a.seed, a.feature_dim, a.step);
  cfg.threads = threads;
  cfg.Validate();
  if (cfg.mechanism == Mechanism::kCondense && !a.label) {
    throw UsageError("--mechanism condense requires --label");
  }

  IngestOptions opt{ParseBounds(a.bounds), a.label, a.clip};
  const Dataset data = IngestCsv(a.input, opt);
  std::vector<std::string> flags;
  const size_t col = cfg.column.empty() ? 0 : data.column_index(cfg.column);
  if (!data.columns[col].bounds_declared) flags.push_back("inferred_bounds");

  const AuditReport rep = RunAudit(data, cfg);
  Json results = ToJson(rep);
  for (const auto& f : results["flags"]) flags.push_back(f.get<std::string>());
  Json report = ReportHeader("audit", ConfigToJson(a));
  report["status"] = "ok";
  report["results"] = std::move(results);
  report["flags"] = FlagsJson(flags);
  EmitReport(report, a.report, out);
  return rep.verdict == Verdict::kConsistent ? kExitOk : kExitAuditViolation;
}

int CmdEvaluate(const EvaluateArgs& a, std::ostream& out) {
  IngestOptions opt{{}, a.label, false};
  const Dataset train = IngestCsv(a.train, opt);
  const Dataset test = IngestCsv(a.test, opt);
  const LinearModel model = Train(train, {a.epochs, a.lr, a.seed});
  const EvalResult r = Evaluate(model, test);
  Json results = ToJson(r);
  results["train_loss_initial"] = model.initial_loss;
  results["train_loss_final"] = model.final_loss;
  Json report = ReportHeader("evaluate", ConfigToJson(a));
  report["status"] = "ok";
  report["results"] = std::move(results);
  report["flags"] = Json::array();
  EmitReport(report, a.report, out);
  return kExitOk;
}

template <typename Fn>
auto RunStage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageFailure{stage, e.exit_code(), e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageFailure{stage, kExitIo, e.what()};
  }
}

int CmdPipeline(const PipelineArgs& a, size_t threads, std::ostream& out,
                std::ostream& err) {
  Json report = ReportHeader("pipeline", ConfigToJson(a));
  Json results = Json::object();
  std::vector<std::string> flags;
  try {
    const IngestOptions opt{ParseBounds(a.bounds), a.label, a.clip};
    const Dataset data = RunStage("ingest", [&] { return IngestCsv(a.input, opt); });

    const CondenseConfig ccfg =
        MakeCondenseConfig(a.per_class, a.iters, a.seed, a.feature_dim, a.step);
    const CondenseResult cond = RunStage("condense", [&] {
      CondenseResult r = Condense(data, ccfg);
      if (a.output) WriteCsvFile(*a.output, r.synth.ToDataset());
      return r;
    });
    if (cond.oversampled) flags.push_back("oversampled");
    results["condense"] = CondenseBlock(cond, ccfg, data, a.output);

    results["calibrate"] = RunStage(
        "calibrate", [&] { return CalibrateColumns(data, {}, a.gamma, false, flags); });

    const AuditReport audit = RunStage("audit", [&] {
      AuditConfig cfg;
      cfg.mechanism = Mechanism::kCondense;
      cfg.trials = a.trials;
      cfg.seed = a.seed;
      cfg.gamma = a.gamma;
      cfg.delta = a.delta;
      cfg.slack = a.slack;
      cfg.threshold_grid = a.threshold_grid;
      cfg.column = a.column.value_or("");
      cfg.condense = ccfg;
      cfg.threads = threads;
      return RunAudit(data, cfg);
    });
    Json audit_json = ToJson(audit);
    for (const auto& f : audit_json["flags"]) flags.push_back(f.get<std::string>());
    results["audit"] = std::move(audit_json);

    results["evaluate"] = RunStage("evaluate", [&] {
      const Dataset test = a.test ? IngestCsv(*a.test, IngestOptions{{}, a.label, false})
                                  : data;
      const TrainParams tp{a.epochs, a.lr, a.seed};
      const Dataset synth = cond.synth.ToDataset();
      const EvalResult full =
          Evaluate(Train(data, tp, TrainedOn::kOriginal), test);
      const EvalResult small =
          Evaluate(Train(synth, tp, TrainedOn::kSynthetic), test);
      return Json{{"evaluated_on", a.test ? "test" : "input"},
                  {"accuracy_original", full.accuracy},
                  {"accuracy_synthetic", small.accuracy},
                  {"utility_gap", full.accuracy - small.accuracy},
                  {"original", ToJson(full)},
                  {"synthetic", ToJson(small)}};
    });
    results["verdict"] = std::string(VerdictName(audit.verdict));
    report["status"] = "ok";
    report["results"] = std::move(results);
    report["flags"] = FlagsJson(flags);
    EmitReport(report, a.report, out);
    return audit.verdict == Verdict::kConsistent ? kExitOk : kExitAuditViolation;
  } catch (const StageFailure& f) {
    err << "dcpriv pipeline: stage " << f.stage << " failed: " << f.message << "\n";
    report["status"] = "failed";
    report["failed_stage"] = f.stage;
    report["error"] = f.message;
    report["exit_code"] = f.exit_code;
    report["results"] = std::move(results);
    report["flags"] = FlagsJson(flags);
    try {
      EmitReport(report, a.report, out);
    } catch (const Error& e) {
      err << "dcpriv pipeline: " << e.what() << "\n";
    }
    return f.exit_code;
  }
}

}  // namespace

size_t ThreadsFromEnv(const char* value) {
  if (value == nullptr) {
    return std::max(1u, std::thread::hardware_concurrency());
  }
  const std::string_view s(value);
  uint64_t n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
    throw UsageError("DCPRIV_THREADS must be a positive integer, got \"" +
                     std::string(s) + "\"");
  }
  return static_cast<size_t>(n);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noiseless-privacy calibration, dataset condensation and "
               "membership-inference auditing",
               "dcpriv"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", std::string(kToolVersion));

  CalibrateArgs cal;
  std::string cal_label, cal_report;
  auto* calibrate = app.add_subcommand("calibrate", "Closed-form (epsilon, delta) per column");
  calibrate->add_option("--input", cal.input, "Input CSV")->required();
  calibrate->add_option("--bounds", cal.bounds, "Column bounds <col>=<a>,<b> (repeatable)")
      ->required();
  calibrate->add_option("--gamma", cal.gamma, "Compromised fraction in [0, 1)");
  calibrate->add_option("--columns", cal.columns, "Columns to calibrate")->delimiter(',');
  calibrate->add_option("--label", cal_label, "Label column to exclude");
  calibrate->add_flag("--clip", cal.clip, "Clip values into bounds");
  calibrate->add_option("--report", cal_report, "Write the JSON report here");

  CondenseArgs con;
  std::string con_trace, con_report;
  auto* condense = app.add_subcommand("condense", "Condense a labeled dataset");
  condense->add_option("--input", con.input, "Input CSV")->required();
  condense->add_option("--label", con.label, "Label column")->required();
  condense->add_option("--per-class", con.per_class, "Synthetic rows per class")->required();
  condense->add_option("--iters", con.iters, "Gradient steps")->required();
  condense->add_option("--seed", con.seed, "Seed")->required();
  condense->add_option("--output", con.output, "Synthetic CSV path")->required();
  condense->add_option("--feature-dim", con.feature_dim, "Random feature width");
  condense->add_option("--step", con.step, "Initial step size");
  condense->add_option("--bounds", con.bounds, "Column bounds <col>=<a>,<b>");
  condense->add_flag("--clip", con.clip, "Clip values into bounds");
  condense->add_option("--loss-trace", con_trace, "Write the loss trace JSON array here");
  condense->add_option("--report", con_report, "Write the JSON report here");

  AuditArgs aud;
  std::string aud_column, aud_label;
  double aud_delta = 0.0;
  auto* audit = app.add_subcommand("audit", "Membership-inference audit of a mechanism");
  audit->add_option("--input", aud.input, "Input CSV")->required();
  audit->add_option("--mechanism", aud.mechanism, "sum or condense")->required();
  audit->add_option("--trials", aud.trials, "Monte Carlo trials (>= 100)")->required();
  audit->add_option("--seed", aud.seed, "Seed")->required();
  audit->add_option("--gamma", aud.gamma, "Compromised fraction in [0, 1)");
  auto* delta_opt = audit->add_option("--delta", aud_delta, "Override delta");
  audit->add_option("--slack", aud.slack, "Reconciliation slack");
  audit->add_option("--report", aud.report, "Write the JSON report here")->required();
  audit->add_option("--column", aud_column, "Audited column (default: first)");
  audit->add_option("--bounds", aud.bounds, "Column bounds <col>=<a>,<b>");
  audit->add_flag("--clip", aud.clip, "Clip values into bounds");
  audit->add_option("--label", aud_label, "Label column");
  audit->add_option("--threshold-grid", aud.threshold_grid, "Threshold grid size (>= 3)");
  audit->add_option("--per-class", aud.per_class, "Condenser rows per class");
  audit->add_option("--iters", aud.iters, "Condenser gradient steps");
  audit->add_option("--feature-dim", aud.feature_dim, "Condenser feature width");
  audit->add_option("--step", aud.step, "Condenser step size");

  EvaluateArgs ev;
  std::string ev_report;
  auto* evaluate = app.add_subcommand("evaluate", "Train and evaluate a linear classifier");
  evaluate->add_option("--train", ev.train, "Training CSV")->required();
  evaluate->add_option("--test", ev.test, "Test CSV")->required();
  evaluate->add_option("--label", ev.label, "Label column")->required();
  evaluate->add_option("--epochs", ev.epochs, "Full-batch epochs")->required();
  evaluate->add_option("--seed", ev.seed, "Seed")->required();
  evaluate->add_option("--lr", ev.lr, "Initial learning rate");
  evaluate->add_option("--report", ev_report, "Write the JSON report here");

  PipelineArgs pipe;
  std::string pipe_output, pipe_test, pipe_column;
  double pipe_delta = 0.0;
  auto* pipeline = app.add_subcommand(
      "pipeline", "Condense, calibrate, audit the condenser and measure utility");
  pipeline->add_option("--input", pipe.input, "Input CSV")->required();
  pipeline->add_option("--label", pipe.label, "Label column")->required();
  pipeline->add_option("--per-class", pipe.per_class, "Synthetic rows per class")->required();
  pipeline->add_option("--trials", pipe.trials, "Audit trials (>= 100)")->required();
  pipeline->add_option("--seed", pipe.seed, "Seed")->required();
  pipeline->add_option("--report", pipe.report, "Write the JSON report here")->required();
  pipeline->add_option("--iters", pipe.iters, "Condenser gradient steps");
  pipeline->add_option("--feature-dim", pipe.feature_dim, "Condenser feature width");
  pipeline->add_option("--step", pipe.step, "Condenser step size");
  pipeline->add_option("--output", pipe_output, "Synthetic CSV path");
  pipeline->add_option("--test", pipe_test, "Held-out test CSV (default: the input)");
  pipeline->add_option("--epochs", pipe.epochs, "Classifier epochs");
  pipeline->add_option("--lr", pipe.lr, "Classifier learning rate");
  pipeline->add_option("--gamma", pipe.gamma, "Compromised fraction in [0, 1)");
  auto* pipe_delta_opt = pipeline->add_option("--delta", pipe_delta, "Override delta");
  pipeline->add_option("--slack", pipe.slack, "Reconciliation slack");
  pipeline->add_option("--column", pipe_column, "Audited column (default: first)");
  pipeline->add_option("--bounds", pipe.bounds, "Column bounds <col>=<a>,<b>");
  pipeline->add_flag("--clip", pipe.clip, "Clip values into bounds");
  pipeline->add_option("--threshold-grid", pipe.threshold_grid, "Threshold grid size");

  std::vector<std::string> argv_copy(args.rbegin(), args.rend());
  try {
    app.parse(argv_copy);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto opt_str = [](CLI::App* sub, const char* flag, const std::string& v) {
    return sub->count(flag) ? std::optional<std::string>(v) : std::nullopt;
  };

  try {
    if (*calibrate) {
      cal.label = opt_str(calibrate, "--label", cal_label);
      cal.report = opt_str(calibrate, "--report", cal_report);
      return CmdCalibrate(cal, out);
    }
    if (*condense) {
      con.loss_trace = opt_str(condense, "--loss-trace", con_trace);
      con.report = opt_str(condense, "--report", con_report);
      return CmdCondense(con, out);
    }
    if (*audit) {
      aud.column = opt_str(audit, "--column", aud_column);
      aud.label = opt_str(audit, "--label", aud_label);
      if (delta_opt->count()) aud.delta = aud_delta;
      return CmdAudit(aud, ThreadsFromEnv(std::getenv("DCPRIV_THREADS")), out);
    }
    if (*evaluate) {
      ev.report = opt_str(evaluate, "--report", ev_report);
      return CmdEvaluate(ev, out);
    }
    if (*pipeline) {
      pipe.output = opt_str(pipeline, "--output", pipe_output);
      pipe.test = opt_str(pipeline, "--test", pipe_test);
      pipe.column = opt_str(pipeline, "--column", pipe_column);
      if (pipe_delta_opt->count()) pipe.delta = pipe_delta;
      const size_t threads = ThreadsFromEnv(std::getenv("DCPRIV_THREADS"));
      return CmdPipeline(pipe, threads, out, err);
    }
  } catch (const Error& e) {
    err << "dcpriv: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "dcpriv: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace dcpriv
