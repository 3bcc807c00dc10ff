// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include "probcrit/adaptation.hpp"
#include "probcrit/calibration.hpp"
#include "probcrit/cli.hpp"
#include "probcrit/elicitation.hpp"
#include "probcrit/ingestion.hpp"
#include "probcrit/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace probcrit;

namespace {

struct Criterion {
  bool passed = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      details.push_back(what);
    }
  }
};

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

std::string fmt(double v, int places = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

std::string data_path(const std::string& name) {
  return std::string(PROBCRIT_DATA_DIR) + "/" + name;
}

Vector random_simplex(std::mt19937& rng, Eigen::Index k) {
  std::exponential_distribution<double> exp1(1.0);
  Vector v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = exp1(rng);
  return v / v.sum();
}

Eigen::Index sample_index(std::mt19937& rng, const Vector& p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    u -= p(i);
    if (u <= 0.0) return i;
  }
  return p.size() - 1;
}

// All points of the k-simplex with coordinates that are multiples of
// 1/steps.
std::vector<Vector> simplex_grid(int k, int steps) {
  std::vector<Vector> grid;
  std::vector<int> parts(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> recurse = [&](int dim, int remaining) {
    if (dim == k - 1) {
      parts[static_cast<std::size_t>(dim)] = remaining;
      Vector v(k);
      for (int i = 0; i < k; ++i) {
        v(i) = static_cast<double>(parts[static_cast<std::size_t>(i)]) / steps;
      }
      grid.push_back(v);
      return;
    }
    for (int take = 0; take <= remaining; ++take) {
      parts[static_cast<std::size_t>(dim)] = take;
      recurse(dim + 1, remaining - take);
    }
  };
  recurse(0, steps);
  return grid;
}

double expected_score(Rule rule, const Vector& truth, const Vector& stated) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < truth.size(); ++j) {
    if (truth(j) == 0.0) continue;  // avoid 0 * inf under the log rule
    total += truth(j) * apply_rule(rule, ProbabilityVector(stated), j);
  }
  return total;
}

// ---- criteria ----

void c1_worked_brier(Criterion& c) {
  const double b = brier(ProbabilityVector(vec({0, 0.954, 0.046, 0, 0})), OutcomeVector(5, 2));
  c.check(std::abs(b - 0.9101) <= 1e-4, "brier = " + fmt(b) + ", want 0.9101 +/- 1e-4");
}

void c2_rescaling(Criterion& c) {
  const auto p = rescale(vec({0, 0.925, 0.045, 0, 0}));
  const double want[5] = {0.0, 0.954, 0.046, 0.0, 0.0};
  for (Eigen::Index i = 0; i < 5; ++i) {
    c.check(fmt(p[i], 3) == fmt(want[i], 3),
            "component " + std::to_string(i) + " renders " + fmt(p[i], 3) + ", want " +
                fmt(want[i], 3));
  }
}

void c3_binary_implicit_sample(Criterion& c) {
  const auto s = implicit_sample_size({{30, 40}, {60, 70}}, {});
  c.check(s.n == 91.0, "n = " + fmt(s.n, 1) + ", want exactly 91");
  c.check(!s.degenerate, "cell flagged degenerate");
}

void c4_table3_end_to_end(Criterion& c) {
  std::ifstream af(data_path("assessments.csv"));
  std::ifstream cf(data_path("cases.csv"));
  c.check(af.good() && cf.good(), "demo data files missing");
  if (!c.passed) return;
  const auto table = parse_assessments(af, "assessments.csv");
  const auto cases = parse_cases(cf, "cases.csv");
  auto cells = build_cells(table, {});

  const auto check_counts = [&](const char* question, std::vector<double> want,
                                double want_total) {
    const auto* entry = cells.find("Aortic stenosis", question);
    c.check(entry != nullptr, std::string(question) + ": cell missing");
    if (entry == nullptr) return;
    for (std::size_t i = 0; i < want.size(); ++i) {
      const double got = entry->cell.counts(static_cast<Eigen::Index>(i));
      c.check(std::abs(got - want[i]) <= 0.5,
              std::string(question) + " count " + std::to_string(i) + " = " + fmt(got) +
                  ", want " + fmt(want[i]) + " +/- 0.5");
    }
    c.check(std::abs(entry->cell.total() - want_total) <= 0.5,
            std::string(question) + " total = " + fmt(entry->cell.total()) + ", want " +
                fmt(want_total) + " +/- 0.5");
  };
  check_counts("Main problem?", {0.0, 65.8, 3.2, 0.0, 0.0}, 69.0);
  check_counts("Grunting?", {3.6, 32.4}, 36.0);

  batch_adapt(cells, cases);
  const auto check_means = [&](const char* question, std::vector<double> want) {
    const auto mean = posterior_mean(cells.find("Aortic stenosis", question)->cell);
    for (std::size_t i = 0; i < want.size(); ++i) {
      const double got = mean[static_cast<Eigen::Index>(i)];
      c.check(std::abs(got - want[i]) <= 0.005,
              std::string(question) + " probability " + std::to_string(i) + " = " + fmt(got) +
                  ", want " + fmt(want[i], 3) + " +/- 0.005");
    }
  };
  check_means("Main problem?", {0.014, 0.929, 0.058});
  check_means("Grunting?", {0.090, 0.910});
}

void c5_sequential_narrative(Criterion& c) {
  const DirichletCell prior{{"Yes", "No"}, vec({32, 59}), false};
  const auto one = posterior_update(prior, {{"Yes", 1}});
  c.check(fmt(posterior_mean(one)[0], 3) == "0.359",
          "after one positive case: " + fmt(posterior_mean(one)[0], 3) + ", want 0.359");
  const auto year = posterior_update(prior, {{"Yes", 7}, {"No", 12}});
  c.check(fmt(posterior_mean(year)[0], 3) == "0.355",
          "after 7 of 19: " + fmt(posterior_mean(year)[0], 3) + ", want 0.355");
}

void c6_decomposition_identity(Criterion& c) {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> karity(2, 5);
  double worst = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    const Eigen::Index k = karity(rng);
    const Vector p = random_simplex(rng, k);
    const Eigen::Index r = sample_index(rng, p);
    const ProbabilityVector pv(p);
    const OutcomeVector e(k, r);
    worst = std::max(worst, std::abs(brier(pv, e) - expected_brier_under_reliability(pv) -
                                     reliability_stat(pv, e)));
  }
  c.check(worst < 1e-12, "worst |B - E0 - R| = " + fmt(worst, 18));
}

void c7_propriety(Criterion& c) {
  for (int k : {2, 3}) {
    const auto grid = simplex_grid(k, 20);
    for (Rule rule : {Rule::brier, Rule::log}) {
      for (std::size_t qi = 0; qi < grid.size(); ++qi) {
        double best = std::numeric_limits<double>::infinity();
        double second = std::numeric_limits<double>::infinity();
        std::size_t best_idx = grid.size();
        for (std::size_t pi = 0; pi < grid.size(); ++pi) {
          const double e = expected_score(rule, grid[qi], grid[pi]);
          if (e < best) {
            second = best;
            best = e;
            best_idx = pi;
          } else if (e < second) {
            second = e;
          }
        }
        if (best_idx != qi || !(second > best + 1e-9)) {
          c.check(false, rule_name(rule) + " (k=" + std::to_string(k) +
                             "): expected score not uniquely minimised at the truth for a "
                             "grid point");
          return;
        }
      }
    }
  }
  // Impropriety witness: under absolute deviation, certainty beats honesty.
  const Vector q = vec({0.7, 0.3});
  const double honest = expected_score(Rule::absdev, q, q);
  const double extreme = expected_score(Rule::absdev, q, vec({1, 0}));
  c.check(extreme < honest, "absdev: E at (1,0) = " + fmt(extreme) + " not below E at truth " +
                                fmt(honest));
}

void c8_prequential_order_invariance(Criterion& c) {
  const std::vector<std::string> outcomes{"y", "y", "n", "y"};
  std::vector<std::size_t> order{0, 1, 2, 3};
  std::vector<double> log_totals, brier_totals;
  Vector first_counts;
  bool counts_match = true;
  do {
    std::vector<CaseRecord> cases;
    for (std::size_t i : order) {
      cases.push_back(CaseRecord{"c" + std::to_string(i), "D", {{"Q", outcomes[i]}}});
    }
    CellSet cells;
    cells.add(CellEntry{"D", "Q", DirichletCell{{"y", "n"}, vec({1.5, 2.5}), false}, {}});
    const auto trace = prequential_replay(cells, cases, {Rule::log, Rule::brier});
    log_totals.push_back(trace.cumulative[0]);
    brier_totals.push_back(trace.cumulative[1]);
    if (first_counts.size() == 0) {
      first_counts = cells.entries()[0].cell.counts;
    } else if ((cells.entries()[0].cell.counts - first_counts).cwiseAbs().maxCoeff() > 1e-9) {
      counts_match = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  c.check(log_totals.size() == 24, "expected 24 permutations");
  double log_spread = 0.0;
  for (double total : log_totals) log_spread = std::max(log_spread, std::abs(total - log_totals[0]));
  c.check(log_spread <= 1e-9, "cumulative log score varies by " + fmt(log_spread, 12));
  c.check(counts_match, "final counts differ across permutations");
  const auto [lo, hi] = std::minmax_element(brier_totals.begin(), brier_totals.end());
  c.check(*hi - *lo > 1e-9,
          "negative control failed: cumulative brier identical across permutations");
}

void c9_calibration_simulation(Criterion& c) {
  std::mt19937 rng(2026);
  std::uniform_int_distribution<int> karity(2, 5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto scheme = BinScheme::twelve_group();

  std::vector<std::pair<double, bool>> events;
  std::vector<double> stated_sum(scheme.bin_count(), 0.0);
  double r_sum = 0.0, r_sumsq = 0.0;
  std::size_t questions = 0;
  while (events.size() < 10000) {
    const Eigen::Index k = karity(rng);
    Vector p;
    if (unif(rng) < 0.1) {  // point masses exercise the singleton bins
      p = Vector::Zero(k);
      p(std::uniform_int_distribution<Eigen::Index>(0, k - 1)(rng)) = 1.0;
    } else {
      p = random_simplex(rng, k);
    }
    const Eigen::Index obs = sample_index(rng, p);
    for (Eigen::Index i = 0; i < k; ++i) {
      events.emplace_back(p(i), i == obs);
      stated_sum[scheme.bin_of(p(i))] += p(i);
    }
    const double r = reliability_stat(ProbabilityVector(p), OutcomeVector(k, obs));
    r_sum += r;
    r_sumsq += r * r;
    ++questions;
  }

  const auto table = reliability_bins(events, scheme);
  c.check(table.total() == events.size(), "bin totals do not conserve");
  for (std::size_t b = 0; b < scheme.bin_count(); ++b) {
    if (table.n[b] == 0) continue;
    const double pbar = stated_sum[b] / static_cast<double>(table.n[b]);
    const double se = std::sqrt(pbar * (1.0 - pbar) / static_cast<double>(table.n[b]));
    const double gap = std::abs(table.fraction(b) - pbar);
    c.check(gap <= 3.0 * se + 1e-12, "bin " + scheme.label(b) + ": |f - p| = " + fmt(gap) +
                                         " exceeds 3 SE = " + fmt(3.0 * se));
  }
  const double n = static_cast<double>(questions);
  const double mean_r = r_sum / n;
  const double sd_r = std::sqrt(std::max(0.0, r_sumsq / n - mean_r * mean_r));
  c.check(std::abs(mean_r) <= 3.0 * sd_r / std::sqrt(n),
          "mean R = " + fmt(mean_r) + " beyond 3 SE = " + fmt(3.0 * sd_r / std::sqrt(n)));
}

void c10_bin_formatter_fixture(Criterion& c) {
  // Aggregates that depend on a specific private data set are covered by
  // the property suites (criteria 6-9); a single reference bin survives
  // here as a formatter fixture.
  std::vector<std::pair<double, bool>> events;
  for (int i = 0; i < 297; ++i) events.emplace_back(0.45, i < 131);
  const auto table = reliability_bins(events);
  c.check(table.n[5] == 297, "fixture events did not land in the 41-50% bin");
  c.check(fmt(table.fraction(5), 2) == "0.44",
          "131/297 renders " + fmt(table.fraction(5), 2) + ", want 0.44");
  std::ostringstream report;
  write_bin_report(report, table);
  c.check(report.str().find("41-50%,0.400000,0.500000,297,131,0.441077") != std::string::npos,
          "bin report line for the fixture not found");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    double budget_seconds;
    void (*body)(Criterion&);
  };
  const std::vector<Entry> plan{
      {1, "worked Brier value 0.9101", 1.0, c1_worked_brier},
      {2, "midpoint rescaling at 3-decimal rendering", 1.0, c2_rescaling},
      {3, "binary implicit sample size n = 91", 1.0, c3_binary_implicit_sample},
      {4, "implicit samples and combined probabilities end to end", 1.0, c4_table3_end_to_end},
      {5, "sequential narrative 33/92 = 0.359 and 39/110 = 0.355", 1.0, c5_sequential_narrative},
      {6, "decomposition identity B = E0(B) + R on 10000 random pairs", 1.0,
       c6_decomposition_identity},
      {7, "propriety of brier/log, impropriety of absolute deviation", 5.0, c7_propriety},
      {8, "prequential log score order-invariance, brier order-dependence", 1.0,
       c8_prequential_order_invariance},
      {9, "simulated forecasts are calibrated within 3 binomial SEs", 5.0,
       c9_calibration_simulation},
      {10, "dataset-dependent aggregates stand-in: bin formatter fixture 131/297 = 0.44", 1.0,
       c10_bin_formatter_fixture},
  };

  int failures = 0;
  for (const auto& entry : plan) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.body(c);
    } catch (const std::exception& e) {
      c.passed = false;
      c.details.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > entry.budget_seconds) {
      c.passed = false;
      c.details.push_back("took " + fmt(elapsed, 2) + "s, budget " +
                          fmt(entry.budget_seconds, 0) + "s");
    }
    std::printf("criterion %2d: %s  %s (%.2fs)\n", entry.id, c.passed ? "PASS" : "FAIL",
                entry.title, elapsed);
    for (const auto& detail : c.details) std::printf("              - %s\n", detail.c_str());
    if (!c.passed) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
