#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "probcrit/elicitation.hpp"

#include <cmath>
#include <random>

using namespace probcrit;
using fixtures::vec;

namespace {

std::vector<IntervalAssessment> as_main() {
  return {{0, 0}, {90, 95}, {2, 7}, {0, 0}, {0, 0}};
}

std::vector<IntervalAssessment> hl_grunt() { return {{30, 40}, {60, 70}}; }

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

TEST_CASE("midpoints") {
  const Vector m = midpoints(as_main());
  CHECK((m - vec({0, 0.925, 0.045, 0, 0})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(midpoints(hl_grunt())(0) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(midpoints({{100, 100}, {0, 0}})(0) == 1.0);
}

TEST_CASE("rescale") {
  const auto p = rescale(vec({0, 0.925, 0.045, 0, 0}));
  CHECK(round3(p[1]) == 0.954);
  CHECK(round3(p[2]) == 0.046);
  CHECK(p.values().sum() == doctest::Approx(1.0).epsilon(1e-12));

  const auto unchanged = rescale(vec({0.10, 0.90}));
  CHECK(unchanged[0] == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(unchanged[1] == doctest::Approx(0.90).epsilon(1e-12));

  const auto half = rescale(vec({0.2, 0.2}));
  CHECK(half[0] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(rescale(vec({0, 0, 0})), Error);
}

TEST_CASE("zero widening") {
  SUBCASE("0-0 widens upward, 100-100 downward") {
    const auto widened = widen_zeros({{0, 0}, {100, 100}, {5, 10}}, {.zero_widen_pct = 4});
    CHECK(widened[0].lo == 0.0);
    CHECK(widened[0].hi == 4.0);
    CHECK(widened[0].midpoint() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(widened[1].lo == 96.0);
    CHECK(widened[1].hi == 100.0);
    CHECK(widened[2].lo == 5.0);  // untouched
    CHECK(widened[2].hi == 10.0);
  }
  SUBCASE("w=0 is the identity") {
    const auto cell = as_main();
    CHECK(widen_zeros(cell, {.zero_widen_pct = 0}) == cell);
  }
  SUBCASE("interior zero-width intervals are untouched") {
    const auto widened = widen_zeros({{50, 50}, {50, 50}}, {.zero_widen_pct = 4});
    CHECK(widened[0].lo == 50.0);
    CHECK(widened[0].hi == 50.0);
  }
  SUBCASE("policy ranges are enforced") {
    CHECK_THROWS_AS(widen_zeros(as_main(), {.zero_widen_pct = 60}), Error);
    CHECK_THROWS_AS(widen_zeros(as_main(), {.zero_widen_pct = -1}), Error);
    CHECK_THROWS_AS(widen_zeros(as_main(), {.zero_widen_pct = 0, .max_n = 0}), Error);
  }
}

TEST_CASE("implicit sample size") {
  SUBCASE("binary symmetric interval") {
    const auto s = implicit_sample_size(hl_grunt(), {});
    CHECK(s.n == 91.0);  // exact after one-decimal rounding
    CHECK(s.n_unrounded == doctest::Approx(91.0).epsilon(1e-9));
    CHECK_FALSE(s.degenerate);
  }
  SUBCASE("the most imprecise response governs") {
    const auto s = implicit_sample_size(as_main(), {});
    // candidates: heart failure 111.0, murmur 0.045*0.955/0.025^2 = 68.76
    CHECK(s.n == 68.8);
    CHECK(s.n_unrounded == doctest::Approx(68.76).epsilon(1e-9));
    CHECK_FALSE(s.degenerate);
  }
  SUBCASE("all-categorical cells are degenerate") {
    const auto s = implicit_sample_size({{0, 0}, {0, 0}, {100, 100}, {0, 0}, {0, 0}},
                                        {.max_n = 500});
    CHECK(s.n == 500.0);
    CHECK(s.degenerate);
  }
  SUBCASE("widening can rescue a degenerate cell") {
    const ElicitationPolicy w4{.zero_widen_pct = 4};
    const auto cell = widen_zeros({{0, 0}, {100, 100}}, w4);
    const auto s = implicit_sample_size(cell, w4);
    CHECK_FALSE(s.degenerate);
    CHECK(s.n == doctest::Approx(49.0));  // 0.02*0.98/0.02^2
  }
}

TEST_CASE("wider intervals never propose a larger sample") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> mid(5.0, 95.0);
  std::uniform_real_distribution<double> width(0.5, 4.0);
  for (int iter = 0; iter < 500; ++iter) {
    const double m = mid(rng);
    double h1 = width(rng), h2 = width(rng);
    if (h1 > h2) std::swap(h1, h2);
    h2 = std::min(h2, std::min(m, 100.0 - m));
    h1 = std::min(h1, h2);
    const std::vector<IntervalAssessment> narrow{{m - h1, m + h1}, {40, 60}};
    const std::vector<IntervalAssessment> wide{{m - h2, m + h2}, {40, 60}};
    CHECK(implicit_sample_size(wide, {}).n_unrounded <=
          implicit_sample_size(narrow, {}).n_unrounded + 1e-9);
  }
}

TEST_CASE("the implicit sample size is never below one") {
  // h <= min(m, 1-m) for any interval inside [0,100], so h^2 <= m(1-m)
  // and every candidate is >= 1. The widest possible judgement, 0-100,
  // sits exactly at the floor.
  CHECK(implicit_sample_size({{0, 100}, {0, 100}}, {}).n == 1.0);
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  for (int iter = 0; iter < 1000; ++iter) {
    double a = pct(rng), b = pct(rng), c = pct(rng), d = pct(rng);
    const std::vector<IntervalAssessment> cell{{std::min(a, b), std::max(a, b)},
                                               {std::min(c, d), std::max(c, d)}};
    const auto s = implicit_sample_size(cell, {});
    if (!s.degenerate) CHECK(s.n_unrounded >= 1.0 - 1e-12);
  }
}

TEST_CASE("to_dirichlet distributes n over the rescaled forecast") {
  SUBCASE("grunting in hypoplastic left heart") {
    const auto cell = to_dirichlet(hl_grunt(), {"Yes", "No"}, {});
    CHECK(cell.counts(0) == doctest::Approx(31.85).epsilon(1e-9));
    CHECK(cell.counts(1) == doctest::Approx(59.15).epsilon(1e-9));
    CHECK(cell.total() == doctest::Approx(91.0).epsilon(1e-9));
    CHECK_FALSE(cell.degenerate);
    // The narrative rounds these to a 32-of-91 imaginary sample.
    CHECK(std::round(cell.counts(0)) == 32.0);
    CHECK(std::round(cell.counts(1)) == 59.0);
  }
  SUBCASE("grunting in aortic stenosis") {
    const auto cell = to_dirichlet({{5, 15}, {85, 95}}, {"Yes", "No"}, {});
    CHECK(cell.counts(0) == doctest::Approx(3.6).epsilon(1e-9));
    CHECK(cell.counts(1) == doctest::Approx(32.4).epsilon(1e-9));
    CHECK(cell.total() == doctest::Approx(36.0).epsilon(1e-9));
  }
  SUBCASE("main problem in aortic stenosis") {
    const auto cell = to_dirichlet(
        as_main(), {"Cyanosis", "Heart failure", "Asymptomatic murmur", "Arrhythmia", "Other"},
        {});
    // n=68.8 spread over the rescaled midpoints; reported as 65.8/3.2 at the
    // printed precision.
    CHECK(cell.counts(0) == 0.0);
    CHECK(cell.counts(1) == doctest::Approx(68.8 * 0.925 / 0.97).epsilon(1e-12));
    CHECK(cell.counts(2) == doctest::Approx(68.8 * 0.045 / 0.97).epsilon(1e-12));
    CHECK(std::abs(cell.counts(1) - 65.8) < 0.5);
    CHECK(std::abs(cell.counts(2) - 3.2) < 0.5);
    CHECK(std::abs(cell.total() - 69.0) < 0.5);
  }
  SUBCASE("counts are n times the forecast") {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> pct(1.0, 99.0);
    for (int iter = 0; iter < 300; ++iter) {
      double a = pct(rng), b = pct(rng), c = pct(rng), d = pct(rng);
      std::vector<IntervalAssessment> cell{{std::min(a, b), std::max(a, b)},
                                           {std::min(c, d), std::max(c, d)}};
      const auto dc = to_dirichlet(cell, {"x", "y"}, {});
      const auto sample = implicit_sample_size(cell, {});
      const auto p = rescale(midpoints(cell));
      CHECK(std::abs(dc.total() - sample.n) < 1e-9);
      CHECK(dc.counts(0) == doctest::Approx(sample.n * p[0]).epsilon(1e-12));
      CHECK(dc.counts.minCoeff() >= 0.0);
    }
  }
  SUBCASE("degenerate cell takes the cap times the point mass") {
    const auto cell =
        to_dirichlet({{0, 0}, {100, 100}}, {"Yes", "No"}, {.max_n = 1000});
    CHECK(cell.degenerate);
    CHECK(cell.counts(0) == 0.0);
    CHECK(cell.counts(1) == 1000.0);
  }
  SUBCASE("widening gives previously-impossible responses positive mass") {
    const auto cell = to_dirichlet({{0, 0}, {90, 95}}, {"Yes", "No"}, {.zero_widen_pct = 4});
    CHECK(cell.counts(0) > 0.0);
    CHECK_FALSE(cell.degenerate);
  }
  SUBCASE("all-zero cells cannot form a forecast") {
    CHECK_THROWS_AS(to_dirichlet({{0, 0}, {0, 0}}, {"x", "y"}, {}), Error);
  }
  SUBCASE("arity mismatch is rejected") {
    CHECK_THROWS_AS(to_dirichlet(hl_grunt(), {"Yes", "No", "Maybe"}, {}), Error);
  }
}

TEST_CASE("build_cells walks the grid in table order") {
  const auto cells = build_cells(fixtures::demo_table(), {});
  REQUIRE(cells.entries().size() == 6);
  CHECK(cells.entries()[0].disease == "Non-urgent heart disease");
  CHECK(cells.entries()[0].question == "Main problem?");
  CHECK(cells.entries()[0].cell.degenerate);
  CHECK(!cells.entries()[0].implicit_n_unrounded.has_value());
  CHECK(cells.entries()[1].question == "Grunting?");
  const auto* as_grunt = cells.find("Aortic stenosis", "Grunting?");
  REQUIRE(as_grunt != nullptr);
  CHECK(as_grunt->cell.total() == doctest::Approx(36.0));
  CHECK(as_grunt->implicit_n_unrounded.value() == doctest::Approx(36.0));
  CHECK(cells.find("Aortic stenosis", "Feeding?") == nullptr);
  CHECK(cells.diseases() ==
        std::vector<std::string>{"Non-urgent heart disease", "Aortic stenosis",
                                 "Hypoplastic left heart"});
}

TEST_CASE("grid errors carry cell coordinates") {
  AssessmentTable table;
  const auto d = table.add_disease("D");
  const auto q = table.add_question({"Q", {"a", "b"}});
  table.set_cell(d, q, {{0, 0}, {0, 0}});
  CHECK_THROWS_WITH_AS(build_cells(table, {}), doctest::Contains("(D, Q)"), Error);
  CHECK_THROWS_WITH_AS(point_forecasts(table, {}), doctest::Contains("(D, Q)"), Error);
}

TEST_CASE("point forecasts use rescaled midpoints") {
  const auto forecasts = point_forecasts(fixtures::demo_table(), {});
  const auto* p = forecasts.find("Aortic stenosis", "Main problem?");
  REQUIRE(p != nullptr);
  CHECK(round3((*p)[1]) == 0.954);
  CHECK(round3((*p)[2]) == 0.046);
  const auto* grunt = forecasts.find("Aortic stenosis", "Grunting?");
  REQUIRE(grunt != nullptr);
  CHECK((*grunt)[0] == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("duplicate cells are rejected") {
  CellSet cells;
  cells.add(CellEntry{"D", "Q", DirichletCell{{"a", "b"}, vec({1, 2}), false}, {}});
  CHECK_THROWS_AS(
      cells.add(CellEntry{"D", "Q", DirichletCell{{"a", "b"}, vec({1, 2}), false}, {}}),
      Error);
}
