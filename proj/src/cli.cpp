#include "probcrit/cli.hpp"

#include "probcrit/adaptation.hpp"
#include "probcrit/calibration.hpp"
#include "probcrit/elicitation.hpp"
#include "probcrit/ingestion.hpp"
#include "probcrit/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace probcrit {

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

struct Options {
  std::string assessments;
  std::string cases;
  std::string state;
  std::string out;
  std::string state_out;
  std::string rule = "brier";
  std::vector<std::string> rules;  // prequential only
  std::string group_by;
  std::string bins = "twelve";
  double zero_widen_pct = 0.0;
  double max_n = 1000.0;
  std::optional<double> log_floor;
  std::size_t flag_min_cases = 10;
  double flag_threshold = 0.1;
  bool strict = false;
};

AssessmentTable load_assessments(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open assessments file: " + path);
  return parse_assessments(f, path);
}

std::vector<CaseRecord> load_cases(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open cases file: " + path);
  return parse_cases(f, path);
}

CellSet load_cells(const Options& o) {
  if (o.state.empty() == o.assessments.empty()) {
    throw UsageError("exactly one of --state and --assessments is required");
  }
  if (!o.state.empty()) {
    std::ifstream f(o.state, std::ios::binary);
    if (!f) throw Error("cannot open state file: " + o.state);
    return read_state(f, o.state);
  }
  return build_cells(load_assessments(o.assessments),
                     ElicitationPolicy{o.zero_widen_pct, o.max_n, true});
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + path);
  fn(f);
  f.flush();
  if (!f) throw Error("failed while writing: " + path);
}

BinScheme parse_bins(const std::string& spec) {
  if (spec == "twelve") return BinScheme::twelve_group();
  std::vector<double> edges;
  std::stringstream ss(spec);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw UsageError("bad bin edge `" + piece + "` in --bins");
    }
    if (used != piece.size()) throw UsageError("bad bin edge `" + piece + "` in --bins");
    edges.push_back(v);
  }
  try {
    return BinScheme::from_edges(std::move(edges));
  } catch (const Error& e) {
    throw UsageError(std::string("--bins: ") + e.what());
  }
}

// Lenient mode skips invalid cases and reports them; strict mode throws
// before any work is done.
std::vector<CaseRecord> filter_valid_cases(const AssessmentTable& table,
                                           const std::vector<CaseRecord>& cases, bool strict,
                                           std::ostream& err, std::size_t& skipped) {
  std::vector<CaseRecord> valid;
  std::vector<std::string> violations;
  for (const auto& rec : cases) {
    auto v = validate_case(table, rec);
    if (v.empty()) {
      valid.push_back(rec);
    } else {
      violations.insert(violations.end(), v.begin(), v.end());
    }
  }
  if (!violations.empty() && strict) {
    throw ValidationError("case validation failed for " +
                              std::to_string(cases.size() - valid.size()) + " case(s)",
                          violations);
  }
  for (const auto& v : violations) err << "skipping: " << v << "\n";
  skipped = cases.size() - valid.size();
  return valid;
}

int run_score(const Options& o, std::ostream& out, std::ostream& err) {
  const auto table = load_assessments(o.assessments);
  const auto cases = load_cases(o.cases);
  const Rule rule = *rule_from_name(o.rule);
  const GroupKey key = *group_key_from_name(o.group_by.empty() ? "overall" : o.group_by);
  const auto forecasts = point_forecasts(table, ElicitationPolicy{o.zero_widen_pct, o.max_n, true});

  std::size_t skipped = 0;
  const auto valid = filter_valid_cases(table, cases, o.strict, err, skipped);

  std::vector<ScoreRecord> records;
  for (const auto& rec : valid) {
    auto scored = score_case(forecasts, rec, rule, o.log_floor);
    records.insert(records.end(), scored.begin(), scored.end());
  }
  write_file(o.out, [&](std::ostream& f) { write_score_report(f, records, key, rule); });

  out << "scored " << records.size() << " question(s) from " << valid.size() << " case(s)\n";
  if (skipped > 0) out << "skipped " << skipped << " invalid case(s)\n";
  if (!rule_is_proper(rule)) out << "note: the absolute-deviation rule is improper\n";
  for (const auto& rec : records) {
    if (std::isinf(rec.score)) {
      out << "infinite score at (case " << rec.case_id << ", question " << rec.question
          << "): zero probability event occurred\n";
    }
  }
  return kExitOk;
}

int run_decompose(const Options& o, std::ostream& out, std::ostream& err) {
  const auto table = load_assessments(o.assessments);
  const auto cases = load_cases(o.cases);
  const GroupKey key = *group_key_from_name(o.group_by.empty() ? "disease" : o.group_by);
  const auto forecasts = point_forecasts(table, ElicitationPolicy{o.zero_widen_pct, o.max_n, true});

  std::size_t skipped = 0;
  const auto valid = filter_valid_cases(table, cases, o.strict, err, skipped);
  const auto report = decomposition_report(collect_pairs(forecasts, valid), key);
  write_file(o.out, [&](std::ostream& f) { write_decomposition_report(f, report); });

  out << "decomposed scores for " << report.size() << " group(s)\n";
  if (skipped > 0) out << "skipped " << skipped << " invalid case(s)\n";
  return kExitOk;
}

int run_bins(const Options& o, std::ostream& out, std::ostream& err) {
  const BinScheme scheme = parse_bins(o.bins);
  const auto table = load_assessments(o.assessments);
  const auto cases = load_cases(o.cases);
  const auto forecasts = point_forecasts(table, ElicitationPolicy{o.zero_widen_pct, o.max_n, true});

  std::size_t skipped = 0;
  const auto valid = filter_valid_cases(table, cases, o.strict, err, skipped);
  const auto events = response_events(collect_pairs(forecasts, valid));
  const auto bins = reliability_bins(events, scheme);
  write_file(o.out, [&](std::ostream& f) { write_bin_report(f, bins); });

  out << "binned " << events.size() << " event(s) into " << scheme.bin_count() << " bin(s)\n";
  if (skipped > 0) out << "skipped " << skipped << " invalid case(s)\n";
  return kExitOk;
}

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

void print_cell_summary(const CellSet& cells, std::ostream& out) {
  std::size_t degenerate = 0;
  for (const auto& entry : cells.entries()) {
    if (entry.cell.degenerate) ++degenerate;
  }
  out << cells.entries().size() << " cell(s), " << degenerate << " degenerate\n";
  for (const auto& entry : cells.entries()) {
    out << "  " << entry.disease << " / " << entry.question << ": ";
    if (entry.cell.degenerate) {
      out << "degenerate, n capped at " << one_decimal(entry.cell.total()) << "\n";
    } else {
      out << "n=" << one_decimal(entry.cell.total());
      if (entry.implicit_n_unrounded) {
        out << " (unrounded " << fixed6(*entry.implicit_n_unrounded) << ")";
      }
      out << "\n";
    }
  }
}

int run_convert(const Options& o, std::ostream& out, std::ostream&) {
  const auto table = load_assessments(o.assessments);
  const auto cells = build_cells(table, ElicitationPolicy{o.zero_widen_pct, o.max_n, true});
  write_file(o.out, [&](std::ostream& f) { write_state(f, cells); });
  print_cell_summary(cells, out);
  return kExitOk;
}

int run_adapt(const Options& o, std::ostream& out, std::ostream& err) {
  auto cells = load_cells(o);
  const auto cases = load_cases(o.cases);
  const auto report = batch_adapt(cells, cases, o.strict);
  write_file(o.out, [&](std::ostream& f) { write_state(f, cells); });

  for (const auto& v : report.violations) err << "skipping: " << v << "\n";
  out << "applied " << report.cases_applied << " case(s), skipped " << report.cases_skipped
      << " invalid case(s)\n";
  out << "degenerate-cell updates skipped: " << report.degenerate_update_skips << "\n";
  return kExitOk;
}

int run_prequential(const Options& o, std::ostream& out, std::ostream& err) {
  auto cells = load_cells(o);
  const auto cases = load_cases(o.cases);
  std::vector<Rule> rules;
  for (const auto& name : o.rules.empty() ? std::vector<std::string>{"brier"} : o.rules) {
    rules.push_back(*rule_from_name(name));
  }
  const auto trace = prequential_replay(cells, cases, rules, o.log_floor, o.strict);
  write_file(o.out, [&](std::ostream& f) { write_trace_report(f, trace); });
  if (!o.state_out.empty()) {
    write_file(o.state_out, [&](std::ostream& f) { write_state(f, cells); });
  }

  for (const auto& v : trace.violations) err << "skipping: " << v << "\n";
  out << "replayed " << trace.cases_scored << " case(s), skipped " << trace.cases_skipped
      << " invalid case(s)\n";
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const double mean = trace.entries.empty()
                            ? 0.0
                            : trace.cumulative[r] / static_cast<double>(trace.entries.size());
    out << rule_name(rules[r]) << ": cumulative " << fixed6(trace.cumulative[r]) << " over "
        << trace.entries.size() << " question(s), mean " << fixed6(mean) << "\n";
  }
  out << "degenerate-cell updates skipped: " << trace.degenerate_update_skips << "\n";
  for (const auto& flag : flag_unreliable(trace, o.flag_min_cases, o.flag_threshold)) {
    out << "flagged " << (flag.over_confident ? "over-confident" : "diffident") << ": "
        << flag.disease << " / " << flag.question << " (mean R " << fixed6(flag.mean_r)
        << " over " << flag.cases << " case(s))\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"criticism and adaptation of interval probability assessments against case data",
               "probcrit"};
  app.require_subcommand(1);
  Options o;

  const auto add_policy = [&](CLI::App* cmd, bool note_state = false) {
    cmd->add_option("--zero-widen-pct", o.zero_widen_pct,
                    std::string("widen 0-0 judgements to 0-W and 100-100 to (100-W)-100") +
                        (note_state ? " (ignored with --state)" : ""))
        ->check(CLI::Range(0.0, 50.0))
        ->capture_default_str();
    cmd->add_option("--max-n", o.max_n,
                    std::string("implicit sample size standing in for infinity on "
                                "degenerate cells") +
                        (note_state ? " (ignored with --state)" : ""))
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  const auto add_sources = [&](CLI::App* cmd) {
    cmd->add_option("--state", o.state, "prior state file (from convert/adapt)");
    cmd->add_option("--assessments", o.assessments, "assessment CSV to convert on the fly");
    cmd->add_option("--cases", o.cases, "case CSV")->required();
    cmd->add_flag("--strict", o.strict, "abort on any invalid case instead of skipping");
    add_policy(cmd, true);
  };

  auto* score = app.add_subcommand("score", "score forecast midpoints against observed cases");
  score->add_option("--assessments", o.assessments, "assessment CSV")->required();
  score->add_option("--cases", o.cases, "case CSV")->required();
  score->add_option("--rule", o.rule, "scoring rule")
      ->check(CLI::IsMember({"brier", "log", "absdev"}))
      ->capture_default_str();
  score->add_option("--group-by", o.group_by, "mean scores per group (default overall)")
      ->check(CLI::IsMember({"disease", "question", "overall"}));
  score->add_option("--log-floor", o.log_floor, "floor probabilities for the log rule")
      ->check(CLI::NonNegativeNumber);
  score->add_flag("--strict", o.strict, "abort on any invalid case instead of skipping");
  add_policy(score);
  score->add_option("--out", o.out, "report CSV path")->required();

  auto* decompose =
      app.add_subcommand("decompose", "discrimination/reliability decomposition per group");
  decompose->add_option("--assessments", o.assessments, "assessment CSV")->required();
  decompose->add_option("--cases", o.cases, "case CSV")->required();
  decompose->add_option("--group-by", o.group_by, "grouping (default disease)")
      ->check(CLI::IsMember({"disease", "question"}));
  decompose->add_flag("--strict", o.strict, "abort on any invalid case instead of skipping");
  add_policy(decompose);
  decompose->add_option("--out", o.out, "report CSV path")->required();

  auto* bins = app.add_subcommand("bins", "reliability-diagram bin table");
  bins->add_option("--assessments", o.assessments, "assessment CSV")->required();
  bins->add_option("--cases", o.cases, "case CSV")->required();
  bins->add_option("--bins", o.bins,
                   "binning scheme: `twelve` or comma-separated edges like 0,0.2,0.5,1")
      ->capture_default_str();
  bins->add_flag("--strict", o.strict, "abort on any invalid case instead of skipping");
  add_policy(bins);
  bins->add_option("--out", o.out, "report CSV path")->required();

  auto* convert =
      app.add_subcommand("convert", "turn interval assessments into implicit Dirichlet samples");
  convert->add_option("--assessments", o.assessments, "assessment CSV")->required();
  add_policy(convert);
  convert->add_option("--out", o.out, "state JSON path")->required();

  auto* adapt = app.add_subcommand("adapt", "update cells with observed cases in one batch");
  add_sources(adapt);
  adapt->add_option("--out", o.out, "updated state JSON path")->required();

  auto* prequential = app.add_subcommand(
      "prequential", "replay cases one at a time: score with current means, then update");
  add_sources(prequential);
  prequential->add_option("--rule", o.rules, "scoring rule(s), repeatable (default brier)")
      ->check(CLI::IsMember({"brier", "log", "absdev"}));
  prequential->add_option("--log-floor", o.log_floor, "floor probabilities for the log rule")
      ->check(CLI::NonNegativeNumber);
  prequential
      ->add_option("--flag-min-cases", o.flag_min_cases,
                   "cases a cell needs before it can be flagged")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  prequential
      ->add_option("--flag-threshold", o.flag_threshold,
                   "|mean R| above which a cell is flagged")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  prequential->add_option("--out", o.out, "trace CSV path")->required();
  prequential->add_option("--state-out", o.state_out, "also write the final state JSON here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(score)) return run_score(o, out, err);
    if (app.got_subcommand(decompose)) return run_decompose(o, out, err);
    if (app.got_subcommand(bins)) return run_bins(o, out, err);
    if (app.got_subcommand(convert)) return run_convert(o, out, err);
    if (app.got_subcommand(adapt)) return run_adapt(o, out, err);
    if (app.got_subcommand(prequential)) return run_prequential(o, out, err);
    err << "usage error: no subcommand\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return kExitValidation;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << e.what() << "\n";
    return kExitIoFormat;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoFormat;
  }
}

}  // namespace probcrit
