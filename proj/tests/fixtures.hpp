#ifndef PROBCRIT_TESTS_FIXTURES_HPP
#define PROBCRIT_TESTS_FIXTURES_HPP

#include "probcrit/types.hpp"

#include <initializer_list>
#include <random>
#include <string>

namespace fixtures {

inline probcrit::Vector vec(std::initializer_list<double> values) {
  probcrit::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// The three-disease demo grid used throughout: a disease with categorical
// judgements, one with lopsided intervals, and one with a wide interval.
inline probcrit::AssessmentTable demo_table() {
  probcrit::AssessmentTable t;
  const auto nu = t.add_disease("Non-urgent heart disease");
  const auto as = t.add_disease("Aortic stenosis");
  const auto hl = t.add_disease("Hypoplastic left heart");
  const auto main = t.add_question(
      {"Main problem?", {"Cyanosis", "Heart failure", "Asymptomatic murmur", "Arrhythmia",
                         "Other"}});
  const auto grunt = t.add_question({"Grunting?", {"Yes", "No"}});
  t.set_cell(nu, main, {{0, 0}, {0, 0}, {100, 100}, {0, 0}, {0, 0}});
  t.set_cell(as, main, {{0, 0}, {90, 95}, {2, 7}, {0, 0}, {0, 0}});
  t.set_cell(hl, main, {{5, 10}, {90, 95}, {1, 2}, {0, 0}, {0, 0}});
  t.set_cell(nu, grunt, {{5, 10}, {90, 95}});
  t.set_cell(as, grunt, {{5, 15}, {85, 95}});
  t.set_cell(hl, grunt, {{30, 40}, {60, 70}});
  return t;
}

inline std::string data_path(const std::string& name) {
  return std::string(PROBCRIT_DATA_DIR) + "/" + name;
}

// Random point on the k-simplex (flat Dirichlet via normalised exponentials).
inline probcrit::Vector random_simplex(std::mt19937& rng, Eigen::Index k) {
  std::exponential_distribution<double> exp1(1.0);
  probcrit::Vector v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = exp1(rng);
  return v / v.sum();
}

inline Eigen::Index sample_index(std::mt19937& rng, const probcrit::Vector& p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    u -= p(i);
    if (u <= 0.0) return i;
  }
  return p.size() - 1;
}

}  // namespace fixtures

#endif  // PROBCRIT_TESTS_FIXTURES_HPP
