#include <doctest.h>

#include <cmath>
#include <fstream>
#include <vector>

#include "fairify/sampler.hpp"
#include "fairify/stats.hpp"
#include "test_paths.hpp"
#include "ttest_cases.hpp"

using namespace fairify;

namespace {

/// Exhaustive O(n^2) pair-counting Kendall tau, the independent check for the
/// merge-count production path.
double naive_tau(const std::vector<double>& x, const std::vector<double>& y, TauVariant variant) {
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) { ++ties_x; continue; }
            if (dy == 0.0) { ++ties_y; continue; }
            if ((dx > 0) == (dy > 0)) ++concordant;
            else ++discordant;
        }
    }
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    if (variant == TauVariant::tau_a) return (concordant - discordant) / n0;
    // pairs tied in x overall (including tied in both) and likewise for y:
    long long tx_all = 0, ty_all = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x[i] == x[j]) ++tx_all;
            if (y[i] == y[j]) ++ty_all;
        }
    }
    return (concordant - discordant) / std::sqrt((n0 - tx_all) * (n0 - ty_all));
}

bool all_tied(const std::vector<double>& v) {
    for (const double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("kendall_tau matches the exhaustive pair-count oracle") {
    Mt19937 rng(2024);
    int checked = 0;
    while (checked < 400) {
        const std::size_t n = 2 + rng.bounded(7);  // 2..8
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.bounded(5));  // small grid forces ties
            y[i] = static_cast<double>(rng.bounded(5));
        }
        if (all_tied(x) || all_tied(y)) continue;
        ++checked;
        CHECK(kendall_tau(x, y, TauVariant::tau_b) ==
              doctest::Approx(naive_tau(x, y, TauVariant::tau_b)).epsilon(1e-12));
        CHECK(kendall_tau(x, y, TauVariant::tau_a) ==
              doctest::Approx(naive_tau(x, y, TauVariant::tau_a)).epsilon(1e-12));
    }
}

TEST_CASE("kendall_tau endpoints on untied inputs") {
    std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> rev{6, 5, 4, 3, 2, 1};
    CHECK(kendall_tau(x, x) == 1.0);  // exact: denominator folds to n0
    CHECK(kendall_tau(x, rev) == -1.0);
}

TEST_CASE("kendall_tau is invariant under strictly increasing transforms") {
    Mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.bounded(10);
        std::vector<double> x(n), y(n), fx(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.bounded(100)) - 50.0;
            y[i] = static_cast<double>(rng.bounded(6));
            fx[i] = x[i] * x[i] * x[i] + 2.0 * x[i];  // strictly increasing
        }
        bool degenerate = true;
        for (std::size_t i = 1; i < n; ++i) degenerate = degenerate && y[i] == y[0];
        if (degenerate) continue;
        CHECK(kendall_tau(x, y) == doctest::Approx(kendall_tau(fx, y)).epsilon(1e-12));
    }
}

TEST_CASE("kendall_tau input validation") {
    std::vector<double> x{1, 2, 3};
    std::vector<double> short_y{1, 2};
    std::vector<double> tied{7, 7, 7};
    try {
        kendall_tau(x, short_y);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::length_mismatch);
    }
    try {
        kendall_tau(x, tied);
        FAIL("expected DegenerateInput");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::degenerate_input);
    }
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("welch t-test matches the high-precision oracle") {
    for (const auto& c : ttest_oracle::welch_cases()) {
        const StatResult r = t_test(c.a, c.b, TestKind::welch_t);
        CHECK(r.statistic == doctest::Approx(c.statistic).epsilon(1e-10));
        CHECK(r.degrees_of_freedom == doctest::Approx(c.df).epsilon(1e-10));
        if (c.p_value > 1e-290) {
            CHECK(r.p_value == doctest::Approx(c.p_value).epsilon(1e-9));
        } else {
            CHECK(r.p_value > 0.0);
        }
    }
}

TEST_CASE("paired t-test matches the high-precision oracle") {
    for (const auto& c : ttest_oracle::paired_cases()) {
        const StatResult r = t_test(c.a, c.b, TestKind::paired_t);
        CHECK(r.statistic == doctest::Approx(c.statistic).epsilon(1e-10));
        CHECK(r.degrees_of_freedom == doctest::Approx(c.df).epsilon(1e-10));
        CHECK(r.p_value == doctest::Approx(c.p_value).epsilon(1e-9));
    }
}

TEST_CASE("student t p-values match the oracle grid") {
    for (const auto& c : ttest_oracle::p_grid()) {
        const double p = student_t_p_two_sided(c.t, c.df);
        if (c.t != 0.0 && c.df / (c.df + c.t * c.t) == 1.0) {
            // t^2 vanishes against df in double precision; 1.0 is the
            // correctly rounded result even though the oracle keeps the
            // sub-epsilon difference.
            CHECK(p == 1.0);
        } else if (c.p_two_sided > 1e-290) {
            CHECK(p == doctest::Approx(c.p_two_sided).epsilon(1e-9));
        } else {
            CHECK(p > 0.0);  // underflow guard keeps p in (0, 1]
        }
    }
}

TEST_CASE("p-value edge behavior") {
    CHECK(student_t_p_two_sided(0.0, 5.0) == 1.0);
    CHECK(student_t_p_two_sided(2.5, 7.0) == student_t_p_two_sided(-2.5, 7.0));
    CHECK(student_t_p_two_sided(1e8, 2.0) > 0.0);
    CHECK_THROWS_AS(student_t_p_two_sided(1.0, 0.0), Error);
}

TEST_CASE("identical samples give t = 0 and p exactly 1") {
    const std::vector<double> a{0.7, 0.8, 0.75, 0.9, 0.85};
    const StatResult r = t_test(a, a, TestKind::welch_t);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
}

TEST_CASE("separating two samples never raises the p-value") {
    // Shift b's mean away from a's in steps; variances are untouched, so the
    // two-sided p must be non-increasing.
    const std::vector<double> a{0.70, 0.74, 0.78, 0.81, 0.77, 0.73, 0.79, 0.75};
    std::vector<double> b{0.71, 0.76, 0.74, 0.80, 0.78, 0.72, 0.77, 0.76};
    double last_p = 1.0 + 1e-12;
    for (int step = 0; step < 40; ++step) {
        const StatResult r = t_test(a, b, TestKind::welch_t);
        CHECK(r.p_value <= last_p + 1e-15);
        last_p = r.p_value;
        for (double& v : b) v += 0.01;
    }
    CHECK(last_p < 1e-6);
}

TEST_CASE("degenerate t-test inputs are rejected") {
    const std::vector<double> flat{5, 5, 5};
    const std::vector<double> varied{1, 2, 3};
    CHECK_THROWS_AS(t_test(flat, flat, TestKind::welch_t), Error);
    CHECK_NOTHROW(t_test(flat, varied, TestKind::welch_t));  // one-sided variance is fine
    CHECK_THROWS_AS(t_test(varied, std::vector<double>{1, 2}, TestKind::paired_t), Error);
    CHECK_THROWS_AS(t_test(flat, flat, TestKind::paired_t), Error);  // all-zero diffs
    CHECK_THROWS_AS(t_test(std::vector<double>{1}, varied, TestKind::welch_t), Error);
}

TEST_CASE("reviewer scores load with validation") {
    const auto scores =
        load_reviewer_scores(testsupport::data_dir() / "reviews" / "reviewer_scores.csv");
    CHECK(scores.rows.size() == 1800);
    const auto& first = scores.rows.front();
    CHECK(first.reviewer_id == "R1");
    CHECK(first.accuracy >= 0.0);
    CHECK(first.accuracy <= 1.0);
}

TEST_CASE("reviewer score file defects are typed") {
    testsupport::TempDir tmp;
    const auto write = [&](const std::string& body) {
        const auto path = tmp / "scores.csv";
        std::ofstream out(path);
        out << body;
        out.close();
        return path;
    };
    const std::string header = "reviewer_id,record_id,setting,accuracy,error_count\n";

    SUBCASE("wrong header") {
        CHECK_THROWS_AS(load_reviewer_scores(write("a,b,c\nj,k,l\n")), Error);
    }
    SUBCASE("duplicate row") {
        try {
            load_reviewer_scores(
                write(header + "R1,r1,llm,0.5,1\nR1,r1,llm,0.6,2\n"));
            FAIL("expected DuplicateRow");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::duplicate_row);
        }
    }
    SUBCASE("accuracy outside [0,1]") {
        try {
            load_reviewer_scores(write(header + "R1,r1,llm,1.5,1\n"));
            FAIL("expected RangeError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::range);
        }
    }
    SUBCASE("malformed numerics and settings") {
        CHECK_THROWS_AS(load_reviewer_scores(write(header + "R1,r1,llm,abc,1\n")), Error);
        CHECK_THROWS_AS(load_reviewer_scores(write(header + "R1,r1,gpt,0.5,1\n")), Error);
        CHECK_THROWS_AS(load_reviewer_scores(write(header + "R1,r1,llm,0.5\n")), Error);
    }
    SUBCASE("empty file / header only") {
        CHECK_THROWS_AS(load_reviewer_scores(write("")), Error);
        CHECK_THROWS_AS(load_reviewer_scores(write(header)), Error);
    }
}

TEST_CASE("agreement table is symmetric with unit diagonal") {
    const auto scores =
        load_reviewer_scores(testsupport::data_dir() / "reviews" / "reviewer_scores.csv");
    const auto table = agreement_table(scores, AgreementMeasure::accuracy);
    REQUIRE(table.reviewers.size() == 3);
    REQUIRE(table.tau.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(table.tau[i][i] == 1.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(table.tau[i][j] == table.tau[j][i]);
            CHECK(table.tau[i][j] >= -1.0);
            CHECK(table.tau[i][j] <= 1.0);
        }
    }
}

TEST_CASE("identical reviewers agree perfectly") {
    ReviewerScoreSet scores;
    for (const char* reviewer : {"A", "B"}) {
        for (int i = 0; i < 6; ++i) {
            scores.rows.push_back({reviewer, "r" + std::to_string(i), Provenance::llm,
                                   0.1 * i, i % 3});
        }
    }
    const auto table = agreement_table(scores, AgreementMeasure::accuracy);
    CHECK(table.tau[0][1] == doctest::Approx(1.0));
    const auto by_error = agreement_table(scores, AgreementMeasure::error_count);
    CHECK(by_error.tau[0][1] == doctest::Approx(1.0));
}

TEST_CASE("coverage gaps are rejected") {
    ReviewerScoreSet scores;
    scores.rows.push_back({"A", "r1", Provenance::llm, 0.5, 1});
    scores.rows.push_back({"A", "r2", Provenance::llm, 0.6, 2});
    scores.rows.push_back({"A", "r3", Provenance::llm, 0.7, 0});
    scores.rows.push_back({"B", "r1", Provenance::llm, 0.5, 1});
    scores.rows.push_back({"B", "r2", Provenance::llm, 0.4, 3});
    try {
        agreement_table(scores, AgreementMeasure::accuracy);
        FAIL("expected CoverageMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_mismatch);
        CHECK(std::string(e.what()).find("r3") != std::string::npos);
    }
}

TEST_CASE("setting means recover the fixture's constructed values") {
    const auto scores =
        load_reviewer_scores(testsupport::data_dir() / "reviews" / "reviewer_scores.csv");
    const auto means = setting_means(scores);

    REQUIRE(means.overall.contains(Provenance::original));
    REQUIRE(means.overall.contains(Provenance::llm));
    REQUIRE(means.overall.contains(Provenance::llm_cedar));

    CHECK(means.overall.at(Provenance::original).mean_accuracy == doctest::Approx(0.79).epsilon(1e-12));
    CHECK(means.overall.at(Provenance::llm).mean_accuracy == doctest::Approx(0.80).epsilon(1e-12));
    CHECK(means.overall.at(Provenance::llm_cedar).mean_accuracy == doctest::Approx(0.97).epsilon(1e-12));

    CHECK(means.overall.at(Provenance::original).mean_error_count == doctest::Approx(1.64).epsilon(1e-12));
    CHECK(means.overall.at(Provenance::llm).mean_error_count == doctest::Approx(1.55).epsilon(1e-12));
    CHECK(means.overall.at(Provenance::llm_cedar).mean_error_count == doctest::Approx(0.85).epsilon(1e-12));

    CHECK(means.per_reviewer.size() == 9);  // 3 reviewers x 3 settings
    for (const auto& [key, value] : means.per_reviewer) CHECK(value.records == 200);

    CHECK_THROWS_AS(setting_means(ReviewerScoreSet{}), Error);
}
