#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fairify/record.hpp"

namespace fairify {

/// Normalized class-name set for one ontology. Membership is exact after
/// normalize_value; no stemming or edit distance.
struct OntologyIndex {
    std::string ontology_id;
    std::unordered_set<std::string> terms;  // all normalize_value fixed points

    std::size_t term_count() const noexcept { return terms.size(); }

    bool contains(std::string_view value) const {
        return terms.contains(normalize_value(value));
    }
};

struct FieldOntologyBinding {
    NormalizedName field;
    std::string ontology_id;
};

/// Ontology indexes keyed by ontology_id.
using OntologyMap = std::map<std::string, OntologyIndex>;

/// One primary term per non-blank, non-comment line; optional tab-separated
/// synonyms on the same line are indexed when include_synonyms is set.
OntologyIndex load_term_list(const std::filesystem::path& path, std::string_view ontology_id,
                             bool include_synonyms = true);

/// Minimal OBO flat-file ingestion: for every [Term] stanza not marked
/// is_obsolete, index the name and (optionally) every quoted synonym.
OntologyIndex load_obo_subset(const std::filesystem::path& path, std::string_view ontology_id,
                              bool include_synonyms = true);

/// Write one term per line; reloading yields identical membership answers.
void save_term_list(const OntologyIndex& index, const std::filesystem::path& path);

}  // namespace fairify
