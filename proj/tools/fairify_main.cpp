#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairify/adherence.hpp"
#include "fairify/checksum.hpp"
#include "fairify/errors.hpp"
#include "fairify/llm.hpp"
#include "fairify/metadata_template.hpp"
#include "fairify/ontology.hpp"
#include "fairify/record.hpp"
#include "fairify/sampler.hpp"
#include "fairify/stats.hpp"
#include "fairify/version.hpp"

namespace fs = std::filesystem;
using fairify::Errc;
using fairify::Error;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

std::string fixed4(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4f", v);
    return buffer;
}

void require_exists(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) {
        throw Error(Errc::io, what + " '" + path.string() + "' does not exist");
    }
}

/// One FIELD=ONTOLOGY_ID:PATH specification from the command line.
struct OntologySpec {
    std::string field;
    std::string ontology_id;
    fs::path path;
};

OntologySpec parse_ontology_spec(const std::string& raw) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(Errc::usage, "--ontology expects FIELD=ONTOLOGY_ID:PATH, got '" + raw + "'");
    }
    const auto colon = raw.find(':', eq + 1);
    if (colon == std::string::npos || colon == eq + 1 || colon + 1 == raw.size()) {
        throw Error(Errc::usage, "--ontology expects FIELD=ONTOLOGY_ID:PATH, got '" + raw + "'");
    }
    return {raw.substr(0, eq), raw.substr(eq + 1, colon - eq - 1), raw.substr(colon + 1)};
}

struct LoadedOntologies {
    std::shared_ptr<fairify::OntologyMap> map = std::make_shared<fairify::OntologyMap>();
    std::vector<fairify::FieldOntologyBinding> bindings;
    std::vector<fs::path> files;
};

LoadedOntologies load_ontologies(const std::vector<std::string>& specs, bool synonyms) {
    LoadedOntologies loaded;
    for (const auto& raw : specs) {
        const OntologySpec spec = parse_ontology_spec(raw);
        require_exists(spec.path, "ontology file");
        if (!loaded.map->contains(spec.ontology_id)) {
            fairify::OntologyIndex index =
                spec.path.extension() == ".obo"
                    ? fairify::load_obo_subset(spec.path, spec.ontology_id, synonyms)
                    : fairify::load_term_list(spec.path, spec.ontology_id, synonyms);
            loaded.map->emplace(spec.ontology_id, std::move(index));
        }
        loaded.bindings.push_back(
            {fairify::NormalizedName::of(spec.field), spec.ontology_id});
        loaded.files.push_back(spec.path);
    }
    return loaded;
}

/// Every run leaves a manifest next to its primary output: the configuration,
/// checksums of all inputs, and the tool version. Timestamps live only here,
/// never in data outputs, so outputs stay byte-deterministic.
void write_manifest(const fs::path& primary_output, const std::string& command,
                    ordered_json config, const std::vector<fs::path>& inputs,
                    const std::vector<fs::path>& outputs) {
    ordered_json doc;
    doc["tool"] = "fairify";
    doc["version"] = fairify::kVersion;
    doc["command"] = command;
    doc["created_utc"] = iso8601_utc_now();
    doc["config"] = std::move(config);
    doc["inputs"] = ordered_json::object();
    for (const auto& input : inputs) {
        doc["inputs"][input.string()] = fairify::sha256_hex_file(input);
    }
    doc["outputs"] = ordered_json::array();
    for (const auto& output : outputs) doc["outputs"].push_back(output.string());

    fs::path manifest_path = primary_output;
    manifest_path.replace_extension(".manifest.json");
    std::ofstream out(manifest_path);
    if (!out) throw Error(Errc::io, "cannot write manifest '" + manifest_path.string() + "'");
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
    fs::path corpus;
    fs::path out;
    std::size_t n = 0;
    std::uint32_t seed = 42;
    std::string filter_contains;
};

int cmd_sample(const SampleArgs& args) {
    require_exists(args.corpus, "corpus");
    std::vector<fairify::MetadataRecord> corpus = fairify::load_corpus(args.corpus);

    if (!args.filter_contains.empty()) {
        const std::string needle = fairify::normalize_value(args.filter_contains);
        std::erase_if(corpus, [&](const fairify::MetadataRecord& record) {
            return std::none_of(
                record.fields.begin(), record.fields.end(), [&](const fairify::FieldEntry& f) {
                    return fairify::normalize_value(f.value).find(needle) != std::string::npos;
                });
        });
    }

    if (args.n > corpus.size()) {
        std::cerr << "warning: requested n=" << args.n << " exceeds the " << corpus.size()
                  << " available records; taking all of them\n";
    }

    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& record : corpus) ids.push_back(record.id);
    const fairify::CorpusSample sample = fairify::sample_records(ids, args.n, args.seed);

    std::map<std::string, const fairify::MetadataRecord*> by_id;
    for (const auto& record : corpus) by_id[record.id] = &record;
    std::vector<fairify::MetadataRecord> selected;
    selected.reserve(sample.selected_ids.size());
    for (const auto& id : sample.selected_ids) selected.push_back(*by_id.at(id));
    fairify::save_corpus(selected, args.out);

    ordered_json config;
    config["corpus"] = args.corpus.string();
    config["n"] = args.n;
    config["seed"] = args.seed;
    if (!args.filter_contains.empty()) config["filter_contains"] = args.filter_contains;
    config["selected_ids"] = sample.selected_ids;
    write_manifest(args.out, "sample", std::move(config), {args.corpus}, {args.out});

    std::cout << "sampled " << selected.size() << " of " << corpus.size() << " records -> "
              << args.out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// correct

struct CorrectArgs {
    fs::path corpus;
    fs::path out;
    std::string setting = "llm";
    std::string backend = "replay";
    fs::path template_path;
    fs::path cassette_path;
    fs::path aliases_path;
    std::vector<std::string> ontology_specs;
    bool no_record = false;
    bool synonyms = true;
    std::string endpoint_url;
    std::string api_path = "/v1/chat/completions";
    std::string api_key_env = "FAIRIFY_API_KEY";
    std::string model = "gpt-4";
    double temperature = 0.0;
    std::size_t max_retries = 5;
    long timeout_ms = 30000;
    long retry_base_ms = 250;
    std::size_t max_in_flight = 4;
};

int cmd_correct(const CorrectArgs& args) {
    const fairify::PromptSetting setting = fairify::prompt_setting_from_string(args.setting);

    // Validate before touching corpus or network.
    std::shared_ptr<const fairify::MetadataTemplate> tmpl;
    if (!args.template_path.empty()) {
        require_exists(args.template_path, "template");
        tmpl = std::make_shared<const fairify::MetadataTemplate>(
            fairify::load_template(args.template_path));
    }
    if (setting == fairify::PromptSetting::llm_cedar && !tmpl) {
        throw Error(Errc::missing_template, "--setting llm_cedar requires --template");
    }

    fairify::BackendConfig backend;
    backend.kind = fairify::backend_kind_from_string(args.backend);
    backend.endpoint_url = args.endpoint_url;
    backend.api_path = args.api_path;
    backend.api_key_env = args.api_key_env;
    backend.timeout = std::chrono::milliseconds(args.timeout_ms);
    backend.max_retries = args.max_retries;
    backend.retry_base = std::chrono::milliseconds(args.retry_base_ms);
    backend.max_in_flight = args.max_in_flight;
    backend.record = !args.no_record;
    if (backend.kind == fairify::BackendKind::http && backend.endpoint_url.empty()) {
        throw Error(Errc::usage, "--backend http requires --endpoint");
    }

    std::vector<fs::path> inputs{args.corpus};
    if (!args.template_path.empty()) inputs.push_back(args.template_path);

    if (backend.kind == fairify::BackendKind::surrogate_template_fill) {
        if (!tmpl) {
            throw Error(Errc::missing_template,
                        "--backend surrogate_template_fill requires --template");
        }
        backend.surrogate_template = tmpl;
        const LoadedOntologies loaded = load_ontologies(args.ontology_specs, args.synonyms);
        backend.surrogate_ontologies = loaded.map;
        for (const auto& file : loaded.files) inputs.push_back(file);
        if (!args.aliases_path.empty()) {
            require_exists(args.aliases_path, "alias map");
            backend.surrogate_aliases =
                std::make_shared<const std::map<std::string, std::string>>(
                    fairify::load_alias_map(args.aliases_path));
            inputs.push_back(args.aliases_path);
        }
    }

    std::optional<fairify::Cassette> cassette;
    if (!args.cassette_path.empty()) {
        if (fs::exists(args.cassette_path)) {
            cassette = fairify::Cassette::load(args.cassette_path);
            inputs.push_back(args.cassette_path);
        } else if (backend.kind == fairify::BackendKind::replay) {
            throw Error(Errc::io, "cassette '" + args.cassette_path.string() + "' does not exist");
        } else {
            cassette.emplace();
        }
    } else if (backend.kind == fairify::BackendKind::replay) {
        throw Error(Errc::usage, "--backend replay requires --cassette");
    }

    require_exists(args.corpus, "corpus");
    const std::vector<fairify::MetadataRecord> corpus = fairify::load_corpus(args.corpus);

    const fairify::CorrectionRun run =
        fairify::correct_corpus(corpus, setting, tmpl.get(), backend,
                                cassette ? &*cassette : nullptr, args.model, args.temperature);

    fairify::save_corpus(run.records, args.out);

    // Sidecar error file: one JSON line per failed record; truncated to empty
    // on a clean run so stale failures never linger.
    fs::path errors_path = args.out;
    errors_path.replace_extension(".errors.jsonl");
    {
        std::ofstream err_out(errors_path);
        for (const auto& failure : run.failures) {
            ordered_json entry;
            entry["index"] = failure.index;
            entry["record_id"] = failure.record_id;
            entry["error"] = fairify::errc_name(failure.code);
            entry["message"] = failure.message;
            err_out << entry.dump() << '\n';
        }
    }

    // Persist new recordings (replay never mutates its cassette).
    if (cassette && backend.kind != fairify::BackendKind::replay && backend.record) {
        cassette->save(args.cassette_path);
    }

    ordered_json config;
    config["corpus"] = args.corpus.string();
    config["setting"] = args.setting;
    config["backend"] = args.backend;
    config["model"] = args.model;
    config["temperature"] = args.temperature;
    if (!args.template_path.empty()) config["template"] = args.template_path.string();
    if (!args.cassette_path.empty()) config["cassette"] = args.cassette_path.string();
    config["record"] = backend.record;
    config["max_in_flight"] = args.max_in_flight;
    write_manifest(args.out, "correct", std::move(config), inputs, {args.out, errors_path});

    std::cout << "corrected " << run.records.size() << " of " << corpus.size() << " records -> "
              << args.out.string() << "\n";
    if (!run.failures.empty()) {
        std::cerr << run.failures.size() << " record(s) failed; see " << errors_path.string()
                  << "\n";
        return static_cast<int>(fairify::errc_class(run.failures.front().code));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    fs::path corpus;
    fs::path out;
    fs::path template_path;
    fs::path dictionary_path;
    std::vector<std::string> ontology_specs;
    bool strict_required = false;
    bool synonyms = true;
};

int cmd_evaluate(const EvaluateArgs& args) {
    require_exists(args.corpus, "corpus");
    require_exists(args.dictionary_path, "dictionary");

    std::optional<fairify::MetadataTemplate> tmpl;
    if (!args.template_path.empty()) {
        require_exists(args.template_path, "template");
        tmpl = fairify::load_template(args.template_path);
    }
    const fairify::DataDictionary dictionary =
        fairify::load_data_dictionary(args.dictionary_path);
    const LoadedOntologies loaded = load_ontologies(args.ontology_specs, args.synonyms);

    fairify::EvaluationContext ctx;
    ctx.tmpl = tmpl ? &*tmpl : nullptr;
    ctx.dictionary = &dictionary;
    ctx.bindings = loaded.bindings;
    ctx.ontologies = loaded.map.get();
    ctx.strict_required = args.strict_required;

    const std::vector<fairify::MetadataRecord> corpus = fairify::load_corpus(args.corpus);
    const fairify::CorpusAdherence result = fairify::evaluate_corpus(corpus, ctx);

    {
        std::ofstream out(args.out);
        if (!out) throw Error(Errc::io, "cannot write report '" + args.out.string() + "'");
        out << fairify::adherence_report_json(result);
    }
    fs::path csv_path = args.out;
    csv_path.replace_extension(".csv");
    fairify::save_adherence_csv(result, csv_path);

    std::vector<fs::path> inputs{args.corpus, args.dictionary_path};
    if (!args.template_path.empty()) inputs.push_back(args.template_path);
    for (const auto& file : loaded.files) inputs.push_back(file);

    ordered_json config;
    config["corpus"] = args.corpus.string();
    config["dictionary"] = args.dictionary_path.string();
    if (!args.template_path.empty()) config["template"] = args.template_path.string();
    config["ontologies"] = args.ontology_specs;
    config["strict_required"] = args.strict_required;
    config["synonyms"] = args.synonyms;
    write_manifest(args.out, "evaluate", std::move(config), inputs, {args.out, csv_path});

    std::cout << "evaluated " << corpus.size() << " record(s): mean_accuracy="
              << fixed4(result.mean_accuracy)
              << " mean_error_count=" << fixed4(result.mean_error_count)
              << " field_name_adherence=" << fixed4(result.field_name_adherence) << " -> "
              << args.out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    fs::path report_a;
    fs::path report_b;
    fs::path out;
    std::string metric = "accuracy";
    std::string kind = "welch";
};

std::map<std::string, double> per_record_metric(const fs::path& report_path,
                                                const std::string& metric) {
    std::ifstream in(report_path);
    if (!in) throw Error(Errc::io, "cannot open report '" + report_path.string() + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::format, "report '" + report_path.string() + "': " + e.what());
    }
    std::map<std::string, double> values;
    if (!doc.contains("records")) {
        throw Error(Errc::format, "report '" + report_path.string() + "' has no records array");
    }
    for (const auto& record : doc.at("records")) {
        values[record.at("record_id").get<std::string>()] =
            record.at(metric).get<double>();
    }
    if (values.empty()) {
        throw Error(Errc::empty_corpus, "report '" + report_path.string() + "' is empty");
    }
    return values;
}

int cmd_stats(const StatsArgs& args) {
    if (args.metric != "accuracy" && args.metric != "error_count") {
        throw Error(Errc::usage, "--metric must be accuracy or error_count");
    }
    const fairify::TestKind kind = [&] {
        if (args.kind == "welch") return fairify::TestKind::welch_t;
        if (args.kind == "paired") return fairify::TestKind::paired_t;
        throw Error(Errc::usage, "--kind must be welch or paired");
    }();

    const auto a = per_record_metric(args.report_a, args.metric);
    const auto b = per_record_metric(args.report_b, args.metric);

    std::vector<double> xs, ys;
    if (kind == fairify::TestKind::paired_t) {
        // Pairing is by record id; the two reports must cover the same set.
        std::vector<std::string> missing;
        for (const auto& [id, _] : a) {
            if (!b.contains(id)) missing.push_back(id);
        }
        for (const auto& [id, _] : b) {
            if (!a.contains(id)) missing.push_back(id);
        }
        if (!missing.empty()) {
            std::string detail;
            for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 5); ++i) {
                detail += (i ? ", " : "") + missing[i];
            }
            throw Error(Errc::coverage_mismatch,
                        "paired test needs matching record sets; unmatched: " + detail);
        }
        for (const auto& [id, value] : a) {
            xs.push_back(value);
            ys.push_back(b.at(id));
        }
    } else {
        for (const auto& [_, value] : a) xs.push_back(value);
        for (const auto& [_, value] : b) ys.push_back(value);
    }

    const fairify::StatResult result = fairify::t_test(xs, ys, kind);

    ordered_json doc;
    doc["test"] = fairify::to_string(result.test);
    doc["metric"] = args.metric;
    doc["statistic"] = result.statistic;
    doc["degrees_of_freedom"] = result.degrees_of_freedom;
    doc["p_value"] = result.p_value;
    doc["mean_a"] = result.mean_a;
    doc["mean_b"] = result.mean_b;
    doc["n_a"] = result.n_a;
    doc["n_b"] = result.n_b;
    {
        std::ofstream out(args.out);
        if (!out) throw Error(Errc::io, "cannot write '" + args.out.string() + "'");
        out << doc.dump(2) << '\n';
    }

    ordered_json config;
    config["report_a"] = args.report_a.string();
    config["report_b"] = args.report_b.string();
    config["metric"] = args.metric;
    config["kind"] = args.kind;
    write_manifest(args.out, "stats", std::move(config), {args.report_a, args.report_b},
                   {args.out});

    std::cout << "t=" << result.statistic << " df=" << result.degrees_of_freedom
              << " p=" << result.p_value << " -> " << args.out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// agree

struct AgreeArgs {
    fs::path scores;
    fs::path out;
    std::string measure = "error_count";
    std::string variant = "tau_b";
};

int cmd_agree(const AgreeArgs& args) {
    require_exists(args.scores, "scores file");
    const fairify::AgreementMeasure measure = [&] {
        if (args.measure == "error_count") return fairify::AgreementMeasure::error_count;
        if (args.measure == "accuracy") return fairify::AgreementMeasure::accuracy;
        throw Error(Errc::usage, "--measure must be error_count or accuracy");
    }();
    const fairify::TauVariant variant = [&] {
        if (args.variant == "tau_b") return fairify::TauVariant::tau_b;
        if (args.variant == "tau_a") return fairify::TauVariant::tau_a;
        throw Error(Errc::usage, "--variant must be tau_b or tau_a");
    }();

    const fairify::ReviewerScoreSet scores = fairify::load_reviewer_scores(args.scores);
    const fairify::AgreementTable table = fairify::agreement_table(scores, measure, variant);

    ordered_json doc;
    doc["measure"] = args.measure;
    doc["variant"] = args.variant;
    doc["reviewers"] = table.reviewers;
    doc["tau"] = ordered_json::array();
    for (const auto& row : table.tau) doc["tau"].push_back(row);
    {
        std::ofstream out(args.out);
        if (!out) throw Error(Errc::io, "cannot write '" + args.out.string() + "'");
        out << doc.dump(2) << '\n';
    }

    ordered_json config;
    config["scores"] = args.scores.string();
    config["measure"] = args.measure;
    config["variant"] = args.variant;
    write_manifest(args.out, "agree", std::move(config), {args.scores}, {args.out});

    std::cout << "agreement over " << table.reviewers.size() << " reviewers -> "
              << args.out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
    fs::path original;
    fs::path llm;
    fs::path llm_cedar;
    fs::path agreement;
    fs::path scores;
    fs::path out;
};

struct SettingSummary {
    std::string label;
    ordered_json doc;
};

int cmd_report(const ReportArgs& args) {
    std::vector<SettingSummary> settings;
    std::vector<fs::path> inputs;
    std::vector<std::string> absent;
    const auto add = [&](const fs::path& path, const std::string& label) {
        if (path.empty()) return;
        if (!fs::exists(path)) {
            absent.push_back(label + " report '" + path.string() + "'");
            return;
        }
        std::ifstream in(path);
        ordered_json doc;
        try {
            in >> doc;
        } catch (const ordered_json::exception& e) {
            throw Error(Errc::format, label + " report '" + path.string() + "': " + e.what());
        }
        settings.push_back({label, std::move(doc)});
        inputs.push_back(path);
    };
    add(args.original, "original");
    add(args.llm, "llm");
    add(args.llm_cedar, "llm_cedar");
    if (!absent.empty()) {
        std::string detail;
        for (const auto& a : absent) detail += "\n  missing: " + a;
        throw Error(Errc::usage, "report inputs not found:" + detail);
    }
    if (settings.empty()) {
        throw Error(Errc::usage,
                    "nothing to report: pass at least one of --original/--llm/--llm-cedar");
    }

    std::string md = "# Metadata curation summary\n\n## Adherence by setting\n\n";
    md += "| metric |";
    for (const auto& s : settings) md += " " + s.label + " |";
    md += "\n|---|";
    for (std::size_t i = 0; i < settings.size(); ++i) md += "---|";
    md += "\n";
    const auto metric_row = [&](const std::string& title, const std::string& key,
                                bool as_count) {
        md += "| " + title + " |";
        for (const auto& s : settings) {
            if (as_count) {
                md += " " + std::to_string(s.doc.at(key).size()) + " |";
            } else {
                md += " " + fixed4(s.doc.at(key).get<double>()) + " |";
            }
        }
        md += "\n";
    };
    metric_row("mean accuracy", "mean_accuracy", false);
    metric_row("mean error count", "mean_error_count", false);
    metric_row("field-name adherence", "field_name_adherence", false);
    metric_row("records", "records", true);

    // Union of ontology-bound fields across the settings.
    std::set<std::string> bound_fields;
    for (const auto& s : settings) {
        for (const auto& [field, _] : s.doc.at("per_binding_adherence").items()) {
            bound_fields.insert(field);
        }
    }
    if (!bound_fields.empty()) {
        md += "\n## Ontology-bound value adherence\n\n| field |";
        for (const auto& s : settings) md += " " + s.label + " |";
        md += "\n|---|";
        for (std::size_t i = 0; i < settings.size(); ++i) md += "---|";
        md += "\n";
        for (const auto& field : bound_fields) {
            md += "| " + field + " |";
            for (const auto& s : settings) {
                const auto& bindings = s.doc.at("per_binding_adherence");
                md += bindings.contains(field)
                          ? " " + fixed4(bindings.at(field).get<double>()) + " |"
                          : " n/a |";
            }
            md += "\n";
        }
    }

    if (!args.agreement.empty()) {
        require_exists(args.agreement, "agreement file");
        std::ifstream in(args.agreement);
        ordered_json doc;
        in >> doc;
        inputs.push_back(args.agreement);
        const auto reviewers = doc.at("reviewers").get<std::vector<std::string>>();
        md += "\n## Reviewer agreement (" + doc.at("variant").get<std::string>() + " on " +
              doc.at("measure").get<std::string>() + ")\n\n|  |";
        for (const auto& r : reviewers) md += " " + r + " |";
        md += "\n|---|";
        for (std::size_t i = 0; i < reviewers.size(); ++i) md += "---|";
        md += "\n";
        for (std::size_t i = 0; i < reviewers.size(); ++i) {
            md += "| " + reviewers[i] + " |";
            for (std::size_t j = 0; j < reviewers.size(); ++j) {
                md += " " + fixed4(doc.at("tau")[i][j].get<double>()) + " |";
            }
            md += "\n";
        }
    }

    if (!args.scores.empty()) {
        require_exists(args.scores, "scores file");
        const auto scores = fairify::load_reviewer_scores(args.scores);
        const auto means = fairify::setting_means(scores);
        inputs.push_back(args.scores);
        md += "\n## Reviewer-scored setting means\n\n"
              "| setting | mean accuracy | mean error count | reviewers |\n"
              "|---|---|---|---|\n";
        for (const auto& [setting, m] : means.overall) {
            md += "| " + std::string(fairify::to_string(setting)) + " | " +
                  fixed4(m.mean_accuracy) + " | " + fixed4(m.mean_error_count) + " | " +
                  std::to_string(m.records) + " |\n";
        }
    }

    {
        std::ofstream out(args.out);
        if (!out) throw Error(Errc::io, "cannot write '" + args.out.string() + "'");
        out << md;
    }

    ordered_json config;
    if (!args.original.empty()) config["original"] = args.original.string();
    if (!args.llm.empty()) config["llm"] = args.llm.string();
    if (!args.llm_cedar.empty()) config["llm_cedar"] = args.llm_cedar.string();
    if (!args.agreement.empty()) config["agreement"] = args.agreement.string();
    if (!args.scores.empty()) config["scores"] = args.scores.string();
    write_manifest(args.out, "report", std::move(config), inputs, {args.out});

    std::cout << "report -> " << args.out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus-scale biomedical metadata curation and adherence evaluation"};
    app.set_version_flag("--version", std::string("fairify ") + fairify::kVersion);
    app.set_config("--config", "", "Read defaults from a TOML configuration file");
    app.require_subcommand(1);

    SampleArgs sample;
    auto* cmd_sample_p = app.add_subcommand("sample", "Draw a reproducible record sample");
    cmd_sample_p->add_option("--corpus", sample.corpus, "Input corpus (JSON lines)")->required();
    cmd_sample_p->add_option("--out", sample.out, "Output corpus path")->required();
    cmd_sample_p->add_option("--n", sample.n, "Number of records to draw")->required();
    cmd_sample_p->add_option("--seed", sample.seed, "Sampling seed")
        ->envname("FAIRIFY_SEED")
        ->capture_default_str();
    cmd_sample_p->add_option("--filter-contains", sample.filter_contains,
                             "Keep only records whose field values contain this text");

    CorrectArgs correct;
    auto* cmd_correct_p = app.add_subcommand("correct", "Run corrections through a backend");
    cmd_correct_p->add_option("--corpus", correct.corpus, "Input corpus (JSON lines)")
        ->required();
    cmd_correct_p->add_option("--out", correct.out, "Corrected corpus path")->required();
    cmd_correct_p->add_option("--setting", correct.setting, "Prompt setting: llm or llm_cedar")
        ->required();
    cmd_correct_p->add_option("--backend", correct.backend,
                              "http, replay, surrogate_echo, or surrogate_template_fill")
        ->capture_default_str();
    cmd_correct_p->add_option("--template", correct.template_path, "Template JSON path");
    cmd_correct_p->add_option("--cassette", correct.cassette_path,
                              "Cassette file for replay or recording");
    cmd_correct_p->add_flag("--no-record", correct.no_record,
                            "Do not record completions into the cassette");
    cmd_correct_p->add_option("--ontology", correct.ontology_specs,
                              "FIELD=ONTOLOGY_ID:PATH (repeatable)");
    cmd_correct_p->add_option("--aliases", correct.aliases_path,
                              "Alias map JSON for the template-fill surrogate");
    cmd_correct_p->add_flag("--synonyms,!--no-synonyms", correct.synonyms,
                            "Index ontology synonyms")
        ->capture_default_str();
    cmd_correct_p->add_option("--endpoint", correct.endpoint_url, "HTTP endpoint base URL");
    cmd_correct_p->add_option("--api-path", correct.api_path, "Chat-completions route")
        ->capture_default_str();
    cmd_correct_p->add_option("--api-key-env", correct.api_key_env,
                              "Environment variable holding the bearer token")
        ->capture_default_str();
    cmd_correct_p->add_option("--model", correct.model, "Model name")->capture_default_str();
    cmd_correct_p->add_option("--temperature", correct.temperature, "Sampling temperature")
        ->capture_default_str();
    cmd_correct_p->add_option("--max-retries", correct.max_retries, "Retries per request")
        ->capture_default_str();
    cmd_correct_p->add_option("--timeout-ms", correct.timeout_ms, "Per-request timeout")
        ->capture_default_str();
    cmd_correct_p->add_option("--retry-base-ms", correct.retry_base_ms, "Backoff unit")
        ->capture_default_str();
    cmd_correct_p->add_option("--max-in-flight", correct.max_in_flight,
                              "Concurrent completions")
        ->capture_default_str();

    EvaluateArgs evaluate;
    auto* cmd_evaluate_p = app.add_subcommand("evaluate", "Score corpus adherence");
    cmd_evaluate_p->add_option("--corpus", evaluate.corpus, "Corpus to score")->required();
    cmd_evaluate_p->add_option("--out", evaluate.out, "JSON report path")->required();
    cmd_evaluate_p->add_option("--dictionary", evaluate.dictionary_path,
                               "Data dictionary of sanctioned field names")
        ->required();
    cmd_evaluate_p->add_option("--template", evaluate.template_path, "Template JSON path");
    cmd_evaluate_p->add_option("--ontology", evaluate.ontology_specs,
                               "FIELD=ONTOLOGY_ID:PATH (repeatable)");
    cmd_evaluate_p->add_flag("--strict-required", evaluate.strict_required,
                             "Missing token fails required fields");
    cmd_evaluate_p->add_flag("--synonyms,!--no-synonyms", evaluate.synonyms,
                             "Index ontology synonyms")
        ->capture_default_str();

    StatsArgs stats;
    auto* cmd_stats_p = app.add_subcommand("stats", "Compare two adherence reports");
    cmd_stats_p->add_option("--report-a", stats.report_a, "First adherence report")->required();
    cmd_stats_p->add_option("--report-b", stats.report_b, "Second adherence report")
        ->required();
    cmd_stats_p->add_option("--out", stats.out, "Result JSON path")->required();
    cmd_stats_p->add_option("--metric", stats.metric, "accuracy or error_count")
        ->capture_default_str();
    cmd_stats_p->add_option("--kind", stats.kind, "welch or paired")->capture_default_str();

    AgreeArgs agree;
    auto* cmd_agree_p = app.add_subcommand("agree", "Pairwise reviewer agreement");
    cmd_agree_p->add_option("--scores", agree.scores, "Reviewer score CSV")->required();
    cmd_agree_p->add_option("--out", agree.out, "Agreement JSON path")->required();
    cmd_agree_p->add_option("--measure", agree.measure, "error_count or accuracy")
        ->capture_default_str();
    cmd_agree_p->add_option("--variant", agree.variant, "tau_b or tau_a")
        ->capture_default_str();

    ReportArgs report;
    auto* cmd_report_p = app.add_subcommand("report", "Render a Markdown summary");
    cmd_report_p->add_option("--original", report.original, "Adherence report, original corpus");
    cmd_report_p->add_option("--llm", report.llm, "Adherence report, llm setting");
    cmd_report_p->add_option("--llm-cedar", report.llm_cedar,
                             "Adherence report, llm_cedar setting");
    cmd_report_p->add_option("--agreement", report.agreement, "Agreement JSON from 'agree'");
    cmd_report_p->add_option("--scores", report.scores, "Reviewer score CSV");
    cmd_report_p->add_option("--out", report.out, "Markdown output path")->required();

    try {
        app.parse(argc, argv);
        if (*cmd_sample_p) return cmd_sample(sample);
        if (*cmd_correct_p) return cmd_correct(correct);
        if (*cmd_evaluate_p) return cmd_evaluate(evaluate);
        if (*cmd_stats_p) return cmd_stats(stats);
        if (*cmd_agree_p) return cmd_agree(agree);
        if (*cmd_report_p) return cmd_report(report);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1; --help/--version exit 0
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(fairify::errc_class(e.code()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
