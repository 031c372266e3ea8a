#include "fairify/adherence.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairify/errors.hpp"

namespace fairify {

namespace {

using ordered_json = nlohmann::ordered_json;

const OntologyIndex& require_ontology(const EvaluationContext& ctx, const std::string& id,
                                      const std::string& field) {
    if (ctx.ontologies == nullptr) {
        throw Error(Errc::missing_ontology,
                    "field '" + field + "' needs ontology '" + id + "' but none are loaded");
    }
    const auto it = ctx.ontologies->find(id);
    if (it == ctx.ontologies->end()) {
        throw Error(Errc::missing_ontology,
                    "field '" + field + "' is bound to unloaded ontology '" + id + "'");
    }
    return it->second;
}

bool parse_integer(const std::string& value, long long& out) {
    const auto begin = value.find_first_not_of(" \t");
    if (begin == std::string::npos) return false;
    const auto end = value.find_last_not_of(" \t") + 1;
    const char* first = value.data() + begin;
    const char* last = value.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

/// Judge a value against one constraint. Returns ok and fills detail on
/// failure.
bool check_value(const std::string& value, const ValueConstraint& constraint,
                 const EvaluationContext& ctx, const std::string& field, std::string& detail) {
    if (std::holds_alternative<FreeText>(constraint)) return true;

    if (const auto* ont = std::get_if<OntologyRef>(&constraint)) {
        const OntologyIndex& index = require_ontology(ctx, ont->ontology_id, field);
        if (index.contains(value)) return true;
        detail = "value is not a term of " + ont->ontology_id;
        return false;
    }
    if (const auto* en = std::get_if<Enumeration>(&constraint)) {
        const std::string probe = normalize_value(value);
        for (const auto& allowed : en->values) {
            if (normalize_value(allowed) == probe) return true;
        }
        detail = "value is not one of the allowed options";
        return false;
    }
    const auto& range = std::get<IntegerRange>(constraint);
    long long parsed = 0;
    if (!parse_integer(value, parsed)) {
        detail = "value is not an integer";
        return false;
    }
    if (parsed < range.min || parsed > range.max) {
        detail = "integer outside [" + std::to_string(range.min) + ", " +
                 std::to_string(range.max) + "]";
        return false;
    }
    return true;
}

}  // namespace

double record_accuracy(std::size_t field_count, std::size_t error_count) {
    if (field_count == 0) {
        throw Error(Errc::degenerate_record, "record has no fields to score");
    }
    return 1.0 - static_cast<double>(error_count) / static_cast<double>(field_count);
}

RecordAdherence evaluate_record(const MetadataRecord& record, const EvaluationContext& ctx) {
    if (ctx.dictionary == nullptr) {
        throw Error(Errc::usage, "evaluation context has no data dictionary");
    }
    if (record.fields.empty()) {
        throw Error(Errc::degenerate_record, "record '" + record.id + "' has no fields");
    }

    RecordAdherence result;
    result.record_id = record.id;
    result.fields.reserve(record.fields.size());

    for (const auto& field : record.fields) {
        FieldVerdict verdict;
        verdict.name = field.name;
        verdict.value = field.value;
        verdict.name_ok = ctx.dictionary->contains(field.name);
        if (!verdict.name_ok) {
            verdict.detail = "field name is not in the dictionary";
            ++result.error_count;
            result.fields.push_back(std::move(verdict));
            continue;
        }

        // Resolve the constraint: an explicit binding wins over the template.
        const ValueConstraint* constraint = nullptr;
        ValueConstraint binding_constraint;
        const NormalizedName normalized = NormalizedName::of(field.name);
        for (const auto& binding : ctx.bindings) {
            if (binding.field == normalized) {
                binding_constraint = OntologyRef{binding.ontology_id};
                constraint = &binding_constraint;
                break;
            }
        }
        const TemplateField* tmpl_field =
            ctx.tmpl != nullptr ? ctx.tmpl->find(field.name) : nullptr;
        if (constraint == nullptr && tmpl_field != nullptr) {
            constraint = &tmpl_field->constraint;
        }

        if (constraint == nullptr) {
            // Name recognized, no constraint known: the value passes.
            verdict.value_ok = true;
            result.fields.push_back(std::move(verdict));
            continue;
        }

        // The missing-value token satisfies every constraint, unless strict
        // mode is on and the template marks this field required.
        const bool is_missing =
            ctx.tmpl != nullptr && ctx.tmpl->is_missing_token(field.value);
        if (is_missing) {
            const bool strict_failure = ctx.strict_required && tmpl_field != nullptr &&
                                        tmpl_field->requirement == Requirement::required;
            verdict.value_ok = !strict_failure;
            if (strict_failure) {
                verdict.detail = "required field holds the missing-value token";
                ++result.error_count;
            }
            result.fields.push_back(std::move(verdict));
            continue;
        }

        std::string detail;
        const bool ok = check_value(field.value, *constraint, ctx, field.name, detail);
        verdict.value_ok = ok;
        if (!ok) {
            verdict.detail = std::move(detail);
            ++result.error_count;
        }
        result.fields.push_back(std::move(verdict));
    }

    result.accuracy = record_accuracy(result.fields.size(), result.error_count);
    return result;
}

CorpusAdherence evaluate_corpus(const std::vector<MetadataRecord>& corpus,
                                const EvaluationContext& ctx) {
    if (corpus.empty()) throw Error(Errc::empty_corpus, "no records to evaluate");

    CorpusAdherence result;
    result.records.reserve(corpus.size());

    double accuracy_sum = 0.0;
    double error_sum = 0.0;
    for (const auto& record : corpus) {
        RecordAdherence rec = evaluate_record(record, ctx);
        accuracy_sum += rec.accuracy;
        error_sum += static_cast<double>(rec.error_count);
        result.records.push_back(std::move(rec));
    }
    result.mean_accuracy = accuracy_sum / static_cast<double>(corpus.size());
    result.mean_error_count = error_sum / static_cast<double>(corpus.size());
    result.field_name_adherence = field_name_adherence(result.records);

    // Per-binding adherence: literal ontology membership, pooled over value
    // instances of each bound field.
    struct Tally {
        std::size_t hits = 0;
        std::size_t total = 0;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& binding : ctx.bindings) {
        const OntologyIndex& index =
            require_ontology(ctx, binding.ontology_id, binding.field.str());
        Tally tally;
        for (const auto& record : corpus) {
            for (const auto& field : record.fields) {
                if (NormalizedName::of(field.name) != binding.field) continue;
                ++tally.total;
                if (index.contains(field.value)) ++tally.hits;
            }
        }
        if (tally.total > 0) tallies[binding.field.str()] = tally;
    }
    for (const auto& [field, tally] : tallies) {
        result.per_binding_adherence[field] =
            static_cast<double>(tally.hits) / static_cast<double>(tally.total);
    }
    return result;
}

double field_name_adherence(const std::vector<RecordAdherence>& records) {
    std::size_t ok = 0, total = 0;
    for (const auto& record : records) {
        for (const auto& field : record.fields) {
            ++total;
            if (field.name_ok) ++ok;
        }
    }
    if (total == 0) throw Error(Errc::empty_corpus, "no field instances to pool");
    return static_cast<double>(ok) / static_cast<double>(total);
}

std::string adherence_report_json(const CorpusAdherence& result) {
    ordered_json doc;
    doc["mean_accuracy"] = result.mean_accuracy;
    doc["mean_error_count"] = result.mean_error_count;
    doc["field_name_adherence"] = result.field_name_adherence;
    doc["per_binding_adherence"] = ordered_json::object();
    for (const auto& [field, rate] : result.per_binding_adherence) {
        doc["per_binding_adherence"][field] = rate;
    }
    doc["records"] = ordered_json::array();
    for (const auto& record : result.records) {
        ordered_json rec;
        rec["record_id"] = record.record_id;
        rec["field_count"] = record.fields.size();
        rec["error_count"] = record.error_count;
        rec["accuracy"] = record.accuracy;
        rec["fields"] = ordered_json::array();
        for (const auto& field : record.fields) {
            ordered_json f;
            f["name"] = field.name;
            f["value"] = field.value;
            f["name_ok"] = field.name_ok;
            if (field.value_ok.has_value()) {
                f["value_ok"] = *field.value_ok;
            } else {
                f["value_ok"] = nullptr;
            }
            if (!field.detail.empty()) f["detail"] = field.detail;
            rec["fields"].push_back(std::move(f));
        }
        doc["records"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

void save_adherence_csv(const CorpusAdherence& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    out << "record_id,field_count,error_count,accuracy\n";
    std::ostringstream row;
    for (const auto& record : result.records) {
        row.str("");
        row.precision(17);
        row << record.record_id << ',' << record.fields.size() << ',' << record.error_count
            << ',' << record.accuracy;
        out << row.str() << '\n';
    }
    if (!out) throw Error(Errc::io, "failed while writing '" + path.string() + "'");
}

}  // namespace fairify
