// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Everything runs offline against bundled fixtures; the CLI
// binary under test is injected at compile time as FAIRIFY_CLI_PATH.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairify/llm.hpp"
#include "fairify/ontology.hpp"
#include "fairify/record.hpp"
#include "fairify/sampler.hpp"
#include "fairify/stats.hpp"
#include "mt19937_expected.hpp"
#include "test_paths.hpp"
#include "ttest_cases.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& summary) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion << ". " << summary << "\n";
    if (!ok) ++g_failures;
}

struct CliResult {
    int exit_code = -1;
    std::chrono::milliseconds elapsed{0};
};

/// Run the CLI under test with pre-quoted arguments, silencing its output.
CliResult run_cli(const std::vector<std::string>& args) {
    std::string command = FAIRIFY_CLI_PATH;
    for (const auto& arg : args) command += " '" + arg + "'";
    command += " >/dev/null 2>&1";
    const auto start = std::chrono::steady_clock::now();
    const int status = std::system(command.c_str());
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, elapsed};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json load_json(const fs::path& path) { return json::parse(slurp(path)); }

std::string str(const fs::path& path) { return path.string(); }

// ---------------------------------------------------------------------------

void criterion_1_formula_fixture(const fs::path& data) {
    const testsupport::TempDir tmp;
    const fs::path out = tmp / "example_report.json";
    const CliResult run = run_cli({
        "evaluate",
        "--corpus", str(data / "corpora" / "example_record.jsonl"),
        "--dictionary", str(data / "dictionary_biosample_human.txt"),
        "--template", str(data / "template_biosample.json"),
        "--ontology", "tissue=UBERON:" + str(data / "ontologies" / "uberon_slice.txt"),
        "--ontology", "disease=DOID:" + str(data / "ontologies" / "doid_slice.txt"),
        "--out", str(out),
    });
    bool ok = run.exit_code == 0 && run.elapsed.count() < 1000;
    double accuracy = -1.0;
    long errors = -1;
    if (ok) {
        const json doc = load_json(out);
        accuracy = doc.at("records").at(0).at("accuracy").get<double>();
        errors = doc.at("records").at(0).at("error_count").get<long>();
        ok = accuracy == 0.75 && errors == 1;
    }
    std::ostringstream line;
    line << "evaluate on the example record: accuracy " << accuracy << " (want exactly 0.75), "
         << "error_count " << errors << " (want 1), " << run.elapsed.count() << " ms (< 1000)";
    report(1, ok, line.str());
}

void criterion_2_corruption_repair(const fs::path& data) {
    const testsupport::TempDir tmp;
    const json meta = load_json(data / "corpora" / "corrupted_50.meta.json");
    const double constructed_rate = meta.at("canonical_field_instances").get<double>() /
                                    meta.at("total_field_instances").get<double>();

    const std::vector<std::string> eval_tail = {
        "--dictionary", str(data / "dictionary_biosample_human.txt"),
        "--template", str(data / "template_biosample.json"),
        "--ontology", "tissue=UBERON:" + str(data / "ontologies" / "uberon_slice.txt"),
        "--ontology", "disease=DOID:" + str(data / "ontologies" / "doid_slice.txt"),
    };

    std::vector<std::string> eval_before = {
        "evaluate", "--corpus", str(data / "corpora" / "corrupted_50.jsonl"),
        "--out", str(tmp / "before.json")};
    eval_before.insert(eval_before.end(), eval_tail.begin(), eval_tail.end());
    const CliResult before = run_cli(eval_before);

    const CliResult correct = run_cli({
        "correct",
        "--corpus", str(data / "corpora" / "corrupted_50.jsonl"),
        "--setting", "llm_cedar",
        "--backend", "surrogate_template_fill",
        "--template", str(data / "template_biosample.json"),
        "--ontology", "tissue=UBERON:" + str(data / "ontologies" / "uberon_slice.txt"),
        "--ontology", "disease=DOID:" + str(data / "ontologies" / "doid_slice.txt"),
        "--aliases", str(data / "surrogate_aliases.json"),
        "--out", str(tmp / "fixed.jsonl"),
    });

    std::vector<std::string> eval_after = {
        "evaluate", "--corpus", str(tmp / "fixed.jsonl"), "--out", str(tmp / "after.json")};
    eval_after.insert(eval_after.end(), eval_tail.begin(), eval_tail.end());
    const CliResult after = run_cli(eval_after);

    const long total_ms = before.elapsed.count() + correct.elapsed.count() + after.elapsed.count();
    bool ok = before.exit_code == 0 && correct.exit_code == 0 && after.exit_code == 0 &&
              total_ms < 5000;
    double adherence_before = -1.0, adherence_after = -1.0;
    if (ok) {
        adherence_before = load_json(tmp / "before.json").at("field_name_adherence").get<double>();
        adherence_after = load_json(tmp / "after.json").at("field_name_adherence").get<double>();
        ok = adherence_before == constructed_rate && adherence_after == 1.0;
    }
    std::ostringstream line;
    line << "corrupted-corpus repair: field_name_adherence " << adherence_before
         << " (want exactly " << constructed_rate << "), after surrogate_template_fill "
         << adherence_after << " (want exactly 1.0), " << total_ms << " ms (< 5000)";
    report(2, ok, line.str());
}

void criterion_3_ontology_probes(const fs::path& data) {
    const fairify::OntologyIndex uberon =
        fairify::load_term_list(data / "ontologies" / "uberon_slice.txt", "UBERON", true);
    const fairify::OntologyIndex doid =
        fairify::load_term_list(data / "ontologies" / "doid_slice.txt", "DOID", true);
    const bool ok = uberon.contains("lung") && !uberon.contains("lung cancer") &&
                    !doid.contains("lung") && doid.contains("lung cancer");
    report(3, ok,
           "ontology probes: UBERON(lung)=" + std::to_string(uberon.contains("lung")) +
               " UBERON(lung cancer)=" + std::to_string(uberon.contains("lung cancer")) +
               " DOID(lung)=" + std::to_string(doid.contains("lung")) +
               " DOID(lung cancer)=" + std::to_string(doid.contains("lung cancer")) +
               " (want 1/0/0/1)");
}

/// Exhaustive O(n^2) pair counting with tau-b tie corrections.
double naive_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) { ++ties_x; continue; }
            if (dy == 0.0) { ++ties_y; continue; }
            ((dx > 0) == (dy > 0)) ? ++concordant : ++discordant;
        }
    }
    long long tied_pairs_x = 0, tied_pairs_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x[i] == x[j]) ++tied_pairs_x;
            if (y[i] == y[j]) ++tied_pairs_y;
        }
    }
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const double denominator = std::sqrt((n0 - tied_pairs_x) * (n0 - tied_pairs_y));
    return (concordant - discordant) / denominator;
}

bool all_equal(const std::vector<double>& v) {
    for (const double value : v) {
        if (value != v.front()) return false;
    }
    return true;
}

void criterion_4_kendall_tau() {
    fairify::Mt19937 rng(20240817u);
    std::size_t compared = 0;
    double worst = 0.0;
    bool ok = true;
    while (compared < 1000) {
        const std::size_t n = 2 + rng.bounded(7);  // n in [2, 8]
        std::vector<double> x(n), y(n);
        for (auto& value : x) value = static_cast<double>(rng.bounded(5));
        for (auto& value : y) value = static_cast<double>(rng.bounded(5));
        if (all_equal(x) || all_equal(y)) continue;
        const double diff =
            std::fabs(fairify::kendall_tau(x, y, fairify::TauVariant::tau_b) - naive_tau_b(x, y));
        worst = std::max(worst, diff);
        if (diff >= 1e-12) ok = false;
        ++compared;
    }
    // Reverse-ranked companion: negation flips every pair orientation.
    const std::vector<double> untied = {3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0};
    std::vector<double> reverse_ranked;
    for (const double value : untied) reverse_ranked.push_back(-value);
    ok = ok && fairify::kendall_tau(untied, untied) == 1.0 &&
         fairify::kendall_tau(untied, reverse_ranked) == -1.0;
    std::ostringstream line;
    line << "kendall tau-b vs O(n^2) oracle on 1000 vectors: worst |diff| = " << worst
         << " (< 1e-12); tau(x,x)=1 and tau(x,reversed)=-1 on untied input";
    report(4, ok, line.str());
}

void criterion_5_t_test_oracle() {
    bool ok = true;
    double worst = 0.0;
    std::size_t cases = 0;
    const auto check = [&](const ttest_oracle::TestCase& c, fairify::TestKind kind) {
        const fairify::StatResult r = fairify::t_test(c.a, c.b, kind);
        const double ds = std::fabs(r.statistic - c.statistic);
        const double dp = std::fabs(r.p_value - c.p_value);
        worst = std::max({worst, ds, dp});
        if (ds >= 1e-6 || dp >= 1e-6) ok = false;
        ++cases;
    };
    for (const auto& c : ttest_oracle::welch_cases()) check(c, fairify::TestKind::welch_t);
    for (const auto& c : ttest_oracle::paired_cases()) check(c, fairify::TestKind::paired_t);

    const std::vector<double> a = {0.79, 0.75, 0.83, 0.80, 0.77};
    const fairify::StatResult self = fairify::t_test(a, a, fairify::TestKind::welch_t);
    ok = ok && self.p_value == 1.0 && cases >= 20;
    std::ostringstream line;
    line << "t-test vs precomputed oracle on " << cases << " sample pairs: worst |diff| = "
         << worst << " (< 1e-6); t(a,a) gives p = " << self.p_value << " (want exactly 1.0)";
    report(5, ok, line.str());
}

void criterion_6_mt19937(const fs::path& data) {
    bool streams_ok = true;
    for (const std::uint32_t seed : mt_oracle::kSeeds) {
        fairify::Mt19937 rng(seed);
        const auto& expected = mt_oracle::stream_for_seed(seed);
        for (std::size_t i = 0; i < mt_oracle::kDraws; ++i) {
            if (rng.next_u32() != expected[i]) {
                streams_ok = false;
                break;
            }
        }
    }

    const testsupport::TempDir tmp;
    const auto sample_to = [&](const std::string& name) {
        return run_cli({
            "sample",
            "--corpus", str(data / "corpora" / "corrupted_50.jsonl"),
            "--n", "20", "--seed", "42",
            "--out", str(tmp / name),
        });
    };
    const CliResult first = sample_to("a.jsonl");
    const CliResult second = sample_to("b.jsonl");
    const bool sample_ok = first.exit_code == 0 && second.exit_code == 0 &&
                           slurp(tmp / "a.jsonl") == slurp(tmp / "b.jsonl") &&
                           !slurp(tmp / "a.jsonl").empty();
    report(6, streams_ok && sample_ok,
           std::string("MT19937 streams for seeds 5489/0/42 match the reference oracle for ") +
               std::to_string(mt_oracle::kDraws) + " draws (" +
               (streams_ok ? "yes" : "no") + "); repeated cmd_sample is byte-identical (" +
               (sample_ok ? "yes" : "no") + ")");
}

void criterion_7_replay_determinism(const fs::path& data) {
    std::vector<std::string> corrected_cedar, corrected_llm, reports;
    bool runs_ok = true;
    for (int i = 0; i < 3; ++i) {
        const testsupport::TempDir tmp;
        const CliResult cedar = run_cli({
            "correct",
            "--corpus", str(data / "corpora" / "corrupted_50.jsonl"),
            "--setting", "llm_cedar", "--backend", "replay",
            "--template", str(data / "template_biosample.json"),
            "--cassette", str(data / "cassettes" / "corrupted_50_llm_cedar.json"),
            "--out", str(tmp / "cedar.jsonl"),
        });
        const CliResult llm = run_cli({
            "correct",
            "--corpus", str(data / "corpora" / "corrupted_50.jsonl"),
            "--setting", "llm", "--backend", "replay",
            "--cassette", str(data / "cassettes" / "corrupted_50_llm.json"),
            "--out", str(tmp / "llm.jsonl"),
        });

        const auto evaluate = [&](const fs::path& corpus, const std::string& out) {
            return run_cli({
                "evaluate", "--corpus", str(corpus), "--out", str(tmp / out),
                "--dictionary", str(data / "dictionary_biosample_human.txt"),
                "--template", str(data / "template_biosample.json"),
                "--ontology", "tissue=UBERON:" + str(data / "ontologies" / "uberon_slice.txt"),
                "--ontology", "disease=DOID:" + str(data / "ontologies" / "doid_slice.txt"),
            });
        };
        const CliResult ev_orig =
            evaluate(data / "corpora" / "corrupted_50.jsonl", "original.json");
        const CliResult ev_llm = evaluate(tmp / "llm.jsonl", "llm.json");
        const CliResult ev_cedar = evaluate(tmp / "cedar.jsonl", "cedar.json");

        const CliResult rendered = run_cli({
            "report",
            "--original", str(tmp / "original.json"),
            "--llm", str(tmp / "llm.json"),
            "--llm-cedar", str(tmp / "cedar.json"),
            "--out", str(tmp / "summary.md"),
        });

        runs_ok = runs_ok && cedar.exit_code == 0 && llm.exit_code == 0 &&
                  ev_orig.exit_code == 0 && ev_llm.exit_code == 0 && ev_cedar.exit_code == 0 &&
                  rendered.exit_code == 0;
        corrected_cedar.push_back(slurp(tmp / "cedar.jsonl"));
        corrected_llm.push_back(slurp(tmp / "llm.jsonl"));
        reports.push_back(slurp(tmp / "summary.md"));
    }
    const bool identical = corrected_cedar[0] == corrected_cedar[1] &&
                           corrected_cedar[1] == corrected_cedar[2] &&
                           corrected_llm[0] == corrected_llm[1] &&
                           corrected_llm[1] == corrected_llm[2] &&
                           reports[0] == reports[1] && reports[1] == reports[2] &&
                           !corrected_cedar[0].empty() && !reports[0].empty();
    report(7, runs_ok && identical,
           std::string("replay from the bundled cassettes, 3 consecutive runs: corrected "
                       "corpora byte-identical and cmd_report output byte-identical (") +
               (identical ? "yes" : "no") + ")");
}

void criterion_8_round_trips() {
    // Randomized records built from charsets that survive display-line parsing:
    // names carry no colon and neither side needs trimming.
    fairify::Mt19937 rng(424242u);
    const std::string name_chars = "abcdefghijklmnopqrstuvwxyz_0123456789";
    const std::string value_chars = "abcdefghijklmnopqrstuvwxyz 0123456789:-/().";
    const auto draw = [&](const std::string& alphabet, std::size_t min_len,
                          std::size_t max_len) {
        const std::size_t length = min_len + rng.bounded(max_len - min_len + 1);
        std::string out;
        for (std::size_t i = 0; i < length; ++i) out += alphabet[rng.bounded(alphabet.size())];
        // keep both ends non-space so parsing's trim is the identity
        if (out.front() == ' ') out.front() = 'x';
        if (out.back() == ' ') out.back() = 'x';
        return out;
    };

    bool save_load_ok = true;
    bool parse_serialize_ok = true;
    {
        const testsupport::TempDir tmp;
        std::vector<fairify::MetadataRecord> corpus;
        for (int i = 0; i < 100; ++i) {
            fairify::MetadataRecord record;
            record.id = "SAMN_RT_" + std::to_string(i);
            record.provenance = static_cast<fairify::Provenance>(rng.bounded(3));
            const std::size_t field_count = 1 + rng.bounded(8);
            for (std::size_t k = 0; k < field_count; ++k) {
                record.fields.push_back({draw(name_chars, 1, 12), draw(value_chars, 1, 24)});
            }
            corpus.push_back(std::move(record));
        }
        fairify::save_corpus(corpus, tmp / "roundtrip.jsonl");
        save_load_ok = fairify::load_corpus(tmp / "roundtrip.jsonl") == corpus;

        for (const auto& record : corpus) {
            const std::string text =
                fairify::serialize_record(record, fairify::SerializeStyle::biosample_lines);
            const fairify::MetadataRecord parsed = fairify::parse_record_lines(text, record.id);
            if (parsed.fields != record.fields) {
                parse_serialize_ok = false;
                break;
            }
        }
    }
    report(8, save_load_ok && parse_serialize_ok,
           std::string("round-trips on 100 randomized records: corpus save/load identity (") +
               (save_load_ok ? "yes" : "no") + "), parse(serialize) identity (" +
               (parse_serialize_ok ? "yes" : "no") + ")");
}

void criterion_9_declared_scope(const fs::path& data) {
    std::cout << "[NOTE] 9. Reference results from the original GPT-4 evaluation (79%->97% "
                 "mean accuracy, 1.64->0.85 mean errors, 40%->77% automated adherence, "
                 "70.17%/76.79% adherence rates, reviewer agreement 0.34/0.33/0.46) depend on "
                 "the original model outputs and human reviewer scores and are declared not "
                 "reproducible offline; every downstream computation is reproduced from "
                 "recorded outputs and ingested score files.\n";

    // setting_means must recover the constructed fixture means exactly.
    const fairify::ReviewerScoreSet scores =
        fairify::load_reviewer_scores(data / "reviews" / "reviewer_scores.csv");
    const fairify::SettingMeans means = fairify::setting_means(scores);
    const double original = means.overall.at(fairify::Provenance::original).mean_accuracy;
    const double cedar = means.overall.at(fairify::Provenance::llm_cedar).mean_accuracy;
    const bool means_ok = std::fabs(original - 0.79) < 1e-12 && std::fabs(cedar - 0.97) < 1e-12;

    // cmd_stats on the same row-level data: per-record accuracies (averaged
    // across reviewers) for the two settings, compared with a paired t-test.
    std::map<std::string, std::pair<double, int>> acc_original, acc_cedar;
    for (const auto& row : scores.rows) {
        if (row.setting == fairify::Provenance::original) {
            acc_original[row.record_id].first += row.accuracy;
            acc_original[row.record_id].second += 1;
        } else if (row.setting == fairify::Provenance::llm_cedar) {
            acc_cedar[row.record_id].first += row.accuracy;
            acc_cedar[row.record_id].second += 1;
        }
    }
    const auto to_report = [](const std::map<std::string, std::pair<double, int>>& acc) {
        json records = json::array();
        for (const auto& [id, sum_count] : acc) {
            records.push_back(
                {{"record_id", id}, {"accuracy", sum_count.first / sum_count.second}});
        }
        return json{{"records", records}};
    };
    const testsupport::TempDir tmp;
    std::ofstream(tmp / "a.json") << to_report(acc_original).dump(2) << '\n';
    std::ofstream(tmp / "b.json") << to_report(acc_cedar).dump(2) << '\n';
    const CliResult stats = run_cli({
        "stats",
        "--report-a", str(tmp / "a.json"),
        "--report-b", str(tmp / "b.json"),
        "--kind", "paired",
        "--out", str(tmp / "stat.json"),
    });
    double p_value = 1.0;
    bool stats_ok = stats.exit_code == 0;
    if (stats_ok) {
        p_value = load_json(tmp / "stat.json").at("p_value").get<double>();
        stats_ok = p_value < 0.01 && p_value > 0.0;
    }

    std::ostringstream line;
    line << "synthetic reviewer fixture: setting_means recovers " << original << " -> " << cedar
         << " (want 0.79 -> 0.97); cmd_stats paired p = " << p_value << " (< 0.01)";
    report(9, means_ok && stats_ok, line.str());
}

}  // namespace

int main() {
    const fs::path data = testsupport::data_dir();
    std::cout << "fairify acceptance suite (offline; CLI: " << FAIRIFY_CLI_PATH << ")\n";

    criterion_1_formula_fixture(data);
    criterion_2_corruption_repair(data);
    criterion_3_ontology_probes(data);
    criterion_4_kendall_tau();
    criterion_5_t_test_oracle();
    criterion_6_mt19937(data);
    criterion_7_replay_determinism(data);
    criterion_8_round_trips();
    criterion_9_declared_scope(data);

    if (g_failures == 0) {
        std::cout << "all 9 criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
}
