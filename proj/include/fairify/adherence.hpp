#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairify/metadata_template.hpp"
#include "fairify/ontology.hpp"
#include "fairify/record.hpp"

namespace fairify {

/// Outcome of checking a single field instance against the evaluation
/// context. When the name is not recognized the value is not judged at all,
/// so value_ok is absent in that case.
struct FieldVerdict {
    std::string name;                  ///< field name as it appears in the record
    std::string value;                 ///< field value as it appears in the record
    bool name_ok = false;              ///< normalized name found in the dictionary
    std::optional<bool> value_ok;      ///< value satisfies its constraint; absent if !name_ok
    std::string detail;                ///< human-readable reason for a failed check

    bool operator==(const FieldVerdict&) const = default;
};

struct RecordAdherence {
    std::string record_id;
    std::vector<FieldVerdict> fields;
    std::size_t error_count = 0;   ///< fields failing name or value check
    double accuracy = 0.0;         ///< 1 - error_count / fields.size()

    bool operator==(const RecordAdherence&) const = default;
};

struct CorpusAdherence {
    std::vector<RecordAdherence> records;
    double mean_accuracy = 0.0;
    double mean_error_count = 0.0;
    /// Fraction of all field instances (pooled across records) whose name is in
    /// the dictionary.
    double field_name_adherence = 0.0;
    /// For each ontology-bound template field: fraction of its value instances
    /// that are exact members of the bound ontology. Fields with zero
    /// occurrences in the corpus are absent from the map.
    std::map<std::string, double> per_binding_adherence;
};

/// Everything needed to judge a record. Bindings take precedence over the
/// template's own constraint for the same field, which lets a caller check raw
/// ontology membership (e.g. tissue -> UBERON) independent of template edits.
struct EvaluationContext {
    const MetadataTemplate* tmpl = nullptr;        ///< may be null: dictionary-only evaluation
    const DataDictionary* dictionary = nullptr;    ///< required
    std::vector<FieldOntologyBinding> bindings;    ///< field -> ontology overrides
    const OntologyMap* ontologies = nullptr;       ///< required when bindings or ontology constraints exist
    bool strict_required = false;                  ///< missing token fails required fields
};

/// Accuracy of a single already-judged record: 1 - errors / field_count.
/// Throws DegenerateRecord when the record has no fields.
double record_accuracy(std::size_t field_count, std::size_t error_count);

/// Judge every field of one record against the context.
RecordAdherence evaluate_record(const MetadataRecord& record, const EvaluationContext& ctx);

/// Judge a whole corpus and aggregate. Throws EmptyCorpus on an empty input.
CorpusAdherence evaluate_corpus(const std::vector<MetadataRecord>& corpus,
                                const EvaluationContext& ctx);

/// Pooled fraction of field instances with a recognized name.
double field_name_adherence(const std::vector<RecordAdherence>& records);

/// Serialize an evaluation to a JSON report (stable key order) or a per-record
/// CSV (record_id,field_count,error_count,accuracy).
std::string adherence_report_json(const CorpusAdherence& result);
void save_adherence_csv(const CorpusAdherence& result, const std::filesystem::path& path);

}  // namespace fairify
