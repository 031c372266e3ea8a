#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairify/errors.hpp"
#include "fairify/record.hpp"

namespace fairify {

enum class TauVariant { tau_b, tau_a };

/// Kendall rank correlation. tau_b applies the per-sequence tie corrections;
/// tau_a divides by n(n-1)/2. Counting runs in O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y,
                   TauVariant variant = TauVariant::tau_b);

enum class TestKind { welch_t, paired_t };

std::string_view to_string(TestKind kind) noexcept;

struct StatResult {
    TestKind test = TestKind::welch_t;
    double statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;  // two-sided, in (0, 1]
    double mean_a = 0.0;
    double mean_b = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

StatResult t_test(std::span<const double> a, std::span<const double> b, TestKind kind);

/// Two-sided Student-t p-value for a statistic with the given degrees of
/// freedom; exactly 1.0 at t = 0 and symmetric in the sign of t.
double student_t_p_two_sided(double t, double df);

namespace detail {
/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);
}  // namespace detail

struct ReviewerScoreRow {
    std::string reviewer_id;
    std::string record_id;
    Provenance setting = Provenance::original;
    double accuracy = 0.0;   // in [0, 1]
    long error_count = 0;
};

struct ReviewerScoreSet {
    std::vector<ReviewerScoreRow> rows;
};

/// CSV layout: reviewer_id,record_id,setting,accuracy,error_count.
ReviewerScoreSet load_reviewer_scores(const std::filesystem::path& path);

enum class AgreementMeasure { error_count, accuracy };

struct AgreementTable {
    std::vector<std::string> reviewers;        // ordered
    std::vector<std::vector<double>> tau;      // square, symmetric
};

/// Pairwise reviewer agreement over the shared (record_id, setting) key set,
/// aligned in lexicographic key order.
AgreementTable agreement_table(const ReviewerScoreSet& scores, AgreementMeasure measure,
                               TauVariant variant = TauVariant::tau_b);

struct MeanScores {
    double mean_accuracy = 0.0;
    double mean_error_count = 0.0;
    std::size_t records = 0;
};

struct SettingMeans {
    // per (reviewer, setting), means over that reviewer's records
    std::map<std::pair<std::string, Provenance>, MeanScores> per_reviewer;
    // per setting, mean over reviewers of the per-reviewer means
    std::map<Provenance, MeanScores> overall;
};

SettingMeans setting_means(const ReviewerScoreSet& scores);

}  // namespace fairify
