#include "fairify/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace fairify {

namespace {

struct RankPair {
    double x;
    double y;
};

/// Strict inversion count of values[], by merge sort. Counts pairs i < j
/// with values[i] > values[j].
std::uint64_t count_inversions(std::vector<double>& values, std::vector<double>& scratch,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t count = count_inversions(values, scratch, lo, mid) +
                          count_inversions(values, scratch, mid, hi);
    std::size_t left = lo, right = mid, out = lo;
    while (left < mid && right < hi) {
        if (values[right] < values[left]) {
            count += mid - left;
            scratch[out++] = values[right++];
        } else {
            scratch[out++] = values[left++];
        }
    }
    while (left < mid) scratch[out++] = values[left++];
    while (right < hi) scratch[out++] = values[right++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              values.begin() + static_cast<std::ptrdiff_t>(lo));
    return count;
}

template <typename Proj>
std::uint64_t tie_pair_count(std::vector<RankPair> sorted, Proj proj) {
    std::sort(sorted.begin(), sorted.end(),
              [&](const RankPair& a, const RankPair& b) { return proj(a) < proj(b); });
    std::uint64_t ties = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && proj(sorted[i]) == proj(sorted[i - 1])) {
            ++run;
        } else {
            ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
            run = 1;
        }
    }
    return ties;
}

double sample_mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size() - 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y, TauVariant variant) {
    if (x.size() != y.size()) {
        throw Error(Errc::length_mismatch, "sequence lengths " + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()));
    }
    const std::size_t n = x.size();
    if (n < 2) throw Error(Errc::degenerate_input, "need at least 2 observations");

    std::vector<RankPair> pairs(n);
    for (std::size_t i = 0; i < n; ++i) pairs[i] = {x[i], y[i]};

    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t ties_x = tie_pair_count(pairs, [](const RankPair& p) { return p.x; });
    const std::uint64_t ties_y = tie_pair_count(pairs, [](const RankPair& p) { return p.y; });
    if (ties_x == n0 || ties_y == n0) {
        throw Error(Errc::degenerate_input, "all-tied sequence has no rank information");
    }

    std::uint64_t ties_xy = 0;
    {
        std::vector<RankPair> sorted = pairs;
        std::sort(sorted.begin(), sorted.end(), [](const RankPair& a, const RankPair& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        std::size_t run = 1;
        for (std::size_t i = 1; i <= sorted.size(); ++i) {
            if (i < sorted.size() && sorted[i].x == sorted[i - 1].x &&
                sorted[i].y == sorted[i - 1].y) {
                ++run;
            } else {
                ties_xy += static_cast<std::uint64_t>(run) * (run - 1) / 2;
                run = 1;
            }
        }
    }

    // Sort by (x, y); strict y-inversions across distinct x are exactly the
    // discordant pairs.
    std::sort(pairs.begin(), pairs.end(), [](const RankPair& a, const RankPair& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<double> ys(n), scratch(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = pairs[i].y;
    const std::uint64_t discordant = count_inversions(ys, scratch, 0, n);

    const std::uint64_t comparable = n0 - ties_x - ties_y + ties_xy;  // C + D
    const double numerator =
        static_cast<double>(comparable) - 2.0 * static_cast<double>(discordant);

    if (variant == TauVariant::tau_a) {
        return numerator / static_cast<double>(n0);
    }
    // One sqrt over the product keeps the untied case exact: for identical
    // untied inputs the denominator is sqrt(n0^2) = n0 and tau is exactly 1.
    const double denom = std::sqrt(static_cast<double>(n0 - ties_x) *
                                   static_cast<double>(n0 - ties_y));
    return numerator / denom;
}

std::string_view to_string(TestKind kind) noexcept {
    return kind == TestKind::welch_t ? "welch_t" : "paired_t";
}

namespace detail {

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // I_x(a,b) = front * cf(a,b,x) / a for x below the crossover, else via
    // the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    const bool swapped = x > (a + 1.0) / (a + b + 2.0);
    if (swapped) {
        std::swap(a, b);
        x = 1.0 - x;
    }

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);

    // Modified Lentz continued fraction.
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }

    const double result = front * h / a;
    return swapped ? 1.0 - result : result;
}

}  // namespace detail

double student_t_p_two_sided(double t, double df) {
    if (df <= 0.0 || !std::isfinite(t)) {
        throw Error(Errc::degenerate_input, "invalid t distribution parameters");
    }
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    const double p = detail::regularized_incomplete_beta(df / 2.0, 0.5, x);
    // Keep p strictly positive; extreme statistics underflow the front term.
    return std::max(p, std::numeric_limits<double>::denorm_min());
}

StatResult t_test(std::span<const double> a, std::span<const double> b, TestKind kind) {
    StatResult result;
    result.test = kind;
    result.n_a = a.size();
    result.n_b = b.size();

    if (kind == TestKind::welch_t) {
        if (a.size() < 2 || b.size() < 2) {
            throw Error(Errc::degenerate_input, "welch t-test requires 2+ observations per sample");
        }
        const double ma = sample_mean(a), mb = sample_mean(b);
        const double va = sample_variance(a, ma), vb = sample_variance(b, mb);
        if (va == 0.0 && vb == 0.0) {
            throw Error(Errc::degenerate_input, "both samples have zero variance");
        }
        const double na = static_cast<double>(a.size());
        const double nb = static_cast<double>(b.size());
        const double se2 = va / na + vb / nb;
        result.mean_a = ma;
        result.mean_b = mb;
        result.statistic = (ma - mb) / std::sqrt(se2);
        result.degrees_of_freedom =
            se2 * se2 /
            ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
    } else {
        if (a.size() != b.size()) {
            throw Error(Errc::length_mismatch, "paired t-test requires equal lengths");
        }
        if (a.size() < 2) {
            throw Error(Errc::degenerate_input, "paired t-test requires 2+ pairs");
        }
        std::vector<double> diffs(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
        const double md = sample_mean(diffs);
        const double vd = sample_variance(diffs, md);
        if (vd == 0.0 && md == 0.0) {
            throw Error(Errc::degenerate_input, "paired differences are all zero");
        }
        if (vd == 0.0) {
            throw Error(Errc::degenerate_input, "paired differences have zero variance");
        }
        result.mean_a = sample_mean(a);
        result.mean_b = sample_mean(b);
        result.statistic = md / std::sqrt(vd / static_cast<double>(a.size()));
        result.degrees_of_freedom = static_cast<double>(a.size() - 1);
    }

    result.p_value = student_t_p_two_sided(result.statistic, result.degrees_of_freedom);
    return result;
}

ReviewerScoreSet load_reviewer_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open reviewer scores '" + path.string() + "'");

    std::string header;
    if (!std::getline(in, header)) {
        throw Error(Errc::format, "reviewer score file is empty: " + path.string());
    }
    const auto header_cols = split_csv_line(header);
    const std::vector<std::string> expected = {"reviewer_id", "record_id", "setting",
                                               "accuracy", "error_count"};
    if (std::vector<std::string>(header_cols.begin(), header_cols.end()) != expected) {
        throw Error(Errc::format, "unexpected header in '" + path.string() +
                                      "'; expected reviewer_id,record_id,setting,accuracy,error_count");
    }

    ReviewerScoreSet scores;
    std::set<std::tuple<std::string, std::string, Provenance>> seen;
    std::string line;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        const auto cols = split_csv_line(line);
        const std::string where = "line " + std::to_string(line_number);
        if (cols.size() != 5) {
            throw Error(Errc::format, where + ": expected 5 columns, got " +
                                          std::to_string(cols.size()));
        }
        ReviewerScoreRow row;
        row.reviewer_id = cols[0];
        row.record_id = cols[1];
        try {
            row.setting = provenance_from_string(cols[2]);
        } catch (const Error&) {
            throw Error(Errc::format, where + ": unknown setting '" + cols[2] + "'");
        }
        try {
            std::size_t used = 0;
            row.accuracy = std::stod(cols[3], &used);
            if (used != cols[3].size()) throw std::invalid_argument(cols[3]);
            row.error_count = std::stol(cols[4], &used);
            if (used != cols[4].size()) throw std::invalid_argument(cols[4]);
        } catch (const std::exception&) {
            throw Error(Errc::format, where + ": malformed numeric field");
        }
        if (row.accuracy < 0.0 || row.accuracy > 1.0) {
            throw Error(Errc::range, where + ": accuracy " + cols[3] + " outside [0,1]");
        }
        if (row.error_count < 0) {
            throw Error(Errc::range, where + ": negative error count");
        }
        if (!seen.insert({row.reviewer_id, row.record_id, row.setting}).second) {
            throw Error(Errc::duplicate_row, where + ": duplicate (" + row.reviewer_id + ", " +
                                                 row.record_id + ", " + cols[2] + ")");
        }
        scores.rows.push_back(std::move(row));
    }
    if (scores.rows.empty()) {
        throw Error(Errc::format, "no score rows in '" + path.string() + "'");
    }
    return scores;
}

AgreementTable agreement_table(const ReviewerScoreSet& scores, AgreementMeasure measure,
                               TauVariant variant) {
    using Key = std::pair<std::string, std::string>;  // (record_id, setting)

    std::map<std::string, std::map<Key, double>> by_reviewer;
    for (const auto& row : scores.rows) {
        const Key key{row.record_id, std::string(to_string(row.setting))};
        const double value = measure == AgreementMeasure::error_count
                                 ? static_cast<double>(row.error_count)
                                 : row.accuracy;
        by_reviewer[row.reviewer_id][key] = value;
    }
    if (by_reviewer.empty()) throw Error(Errc::empty_scores, "no reviewer rows");

    const auto& reference = by_reviewer.begin()->second;
    for (const auto& [reviewer, values] : by_reviewer) {
        if (values.size() == reference.size() &&
            std::equal(values.begin(), values.end(), reference.begin(),
                       [](const auto& a, const auto& b) { return a.first == b.first; })) {
            continue;
        }
        std::string missing;
        for (const auto& [key, _] : reference) {
            if (!by_reviewer[reviewer].contains(key)) {
                missing += " (" + key.first + ", " + key.second + ")";
                if (missing.size() > 120) break;
            }
        }
        throw Error(Errc::coverage_mismatch,
                    "reviewer '" + reviewer + "' does not cover the shared key set;" +
                        (missing.empty() ? " extra keys present" : " missing" + missing));
    }

    AgreementTable table;
    for (const auto& [reviewer, _] : by_reviewer) table.reviewers.push_back(reviewer);

    // Values aligned over the lexicographically sorted shared key set
    // (std::map iteration order).
    std::vector<std::vector<double>> vectors;
    for (const auto& [_, values] : by_reviewer) {
        std::vector<double> v;
        v.reserve(values.size());
        for (const auto& [key, value] : values) v.push_back(value);
        vectors.push_back(std::move(v));
    }

    const std::size_t n = vectors.size();
    table.tau.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double tau = kendall_tau(vectors[i], vectors[j], variant);
            table.tau[i][j] = tau;
            table.tau[j][i] = tau;
        }
    }
    return table;
}

SettingMeans setting_means(const ReviewerScoreSet& scores) {
    if (scores.rows.empty()) throw Error(Errc::empty_scores, "no reviewer rows");

    struct Acc {
        double accuracy = 0.0;
        double errors = 0.0;
        std::size_t n = 0;
    };
    std::map<std::pair<std::string, Provenance>, Acc> acc;
    for (const auto& row : scores.rows) {
        auto& slot = acc[{row.reviewer_id, row.setting}];
        slot.accuracy += row.accuracy;
        slot.errors += static_cast<double>(row.error_count);
        ++slot.n;
    }

    SettingMeans means;
    std::map<Provenance, Acc> overall;
    for (const auto& [key, slot] : acc) {
        MeanScores m{slot.accuracy / static_cast<double>(slot.n),
                     slot.errors / static_cast<double>(slot.n), slot.n};
        means.per_reviewer[key] = m;
        auto& o = overall[key.second];
        o.accuracy += m.mean_accuracy;
        o.errors += m.mean_error_count;
        ++o.n;
    }
    for (const auto& [setting, slot] : overall) {
        means.overall[setting] = MeanScores{slot.accuracy / static_cast<double>(slot.n),
                                            slot.errors / static_cast<double>(slot.n), slot.n};
    }
    return means;
}

}  // namespace fairify
