#include "probcrit/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace probcrit {

std::vector<DecompositionRecord> decomposition_report(const std::vector<ScoredPair>& pairs,
                                                      GroupKey key) {
  if (pairs.empty()) throw Error("decomposition over an empty group set");
  std::vector<DecompositionRecord> groups;
  std::vector<double> disc_sums, rel_sums;
  auto group_of = [key](const ScoredPair& pr) -> std::string {
    switch (key) {
      case GroupKey::disease: return pr.disease;
      case GroupKey::question: return pr.question;
      case GroupKey::overall: return "overall";
    }
    return {};
  };
  for (const auto& pair : pairs) {
    const std::string group = group_of(pair);
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (groups[g].group == group) break;
    }
    if (g == groups.size()) {
      groups.push_back(DecompositionRecord{group, 0, 0.0, 0.0});
      disc_sums.push_back(0.0);
      rel_sums.push_back(0.0);
    }
    groups[g].count += 1;
    disc_sums[g] += expected_brier_under_reliability(pair.p);
    rel_sums[g] += reliability_stat(pair.p, OutcomeVector(pair.p.size(), pair.observed));
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].discrimination = disc_sums[g] / static_cast<double>(groups[g].count);
    groups[g].reliability = rel_sums[g] / static_cast<double>(groups[g].count);
  }
  return groups;
}

BinScheme BinScheme::twelve_group() {
  BinScheme s;
  s.twelve_ = true;
  return s;
}

BinScheme BinScheme::from_edges(std::vector<double> edges) {
  if (edges.size() < 2) throw Error("bin scheme needs at least two edges");
  if (edges.front() != 0.0 || edges.back() != 1.0) {
    throw Error("bin edges must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      std::ostringstream os;
      os << "bin edges must be strictly increasing, got " << edges[i - 1] << " then "
         << edges[i];
      throw Error(os.str());
    }
  }
  BinScheme s;
  s.edges_ = std::move(edges);
  return s;
}

std::size_t BinScheme::bin_count() const { return twelve_ ? 12 : edges_.size() - 1; }

std::size_t BinScheme::bin_of(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error("assessed probability outside [0,1]: " + std::to_string(p));
  }
  // A hair of slack keeps values that are a rounding error above a boundary
  // in the lower bin, matching the exact-boundary convention.
  constexpr double kEdgeSlack = 1e-9;
  if (twelve_) {
    if (p == 0.0) return 0;
    if (p == 1.0) return 11;
    for (std::size_t k = 1; k <= 10; ++k) {
      if (p <= static_cast<double>(k) / 10.0 + kEdgeSlack) return k;
    }
    return 10;  // (0.9, 1)
  }
  if (p <= edges_[1] + kEdgeSlack) return 0;  // first bin closed at 0
  for (std::size_t i = 2; i < edges_.size(); ++i) {
    if (p <= edges_[i] + kEdgeSlack) return i - 1;
  }
  return edges_.size() - 2;
}

std::string BinScheme::label(std::size_t bin) const {
  if (twelve_) {
    static const char* kLabels[12] = {"0%",     "1-10%",  "11-20%", "21-30%",
                                      "31-40%", "41-50%", "51-60%", "61-70%",
                                      "71-80%", "81-90%", "91-99%", "100%"};
    return kLabels[bin];
  }
  std::ostringstream os;
  os.precision(6);
  os << (bin == 0 ? '[' : '(') << edges_[bin] << "," << edges_[bin + 1] << "]";
  return os.str();
}

double BinScheme::lo(std::size_t bin) const {
  if (twelve_) {
    if (bin == 0) return 0.0;
    if (bin == 11) return 1.0;
    return static_cast<double>(bin - 1) / 10.0;
  }
  return edges_[bin];
}

double BinScheme::hi(std::size_t bin) const {
  if (twelve_) {
    if (bin == 0) return 0.0;
    if (bin >= 10) return 1.0;
    return static_cast<double>(bin) / 10.0;
  }
  return edges_[bin + 1];
}

std::size_t ReliabilityBinTable::total() const {
  std::size_t sum = 0;
  for (std::size_t v : n) sum += v;
  return sum;
}

double ReliabilityBinTable::fraction(std::size_t bin) const {
  if (n[bin] == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(occurred[bin]) / static_cast<double>(n[bin]);
}

ReliabilityBinTable reliability_bins(const std::vector<std::pair<double, bool>>& events,
                                     const BinScheme& scheme) {
  ReliabilityBinTable table{scheme, std::vector<std::size_t>(scheme.bin_count(), 0),
                            std::vector<std::size_t>(scheme.bin_count(), 0)};
  for (const auto& [p, happened] : events) {
    const std::size_t bin = scheme.bin_of(p);
    table.n[bin] += 1;
    if (happened) table.occurred[bin] += 1;
  }
  return table;
}

std::vector<std::pair<double, bool>> response_events(const std::vector<ScoredPair>& pairs) {
  std::vector<std::pair<double, bool>> events;
  for (const auto& pair : pairs) {
    for (Eigen::Index i = 0; i < pair.p.size(); ++i) {
      events.emplace_back(pair.p[i], i == pair.observed);
    }
  }
  return events;
}

}  // namespace probcrit
