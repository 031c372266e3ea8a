#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "fairify/record.hpp"

namespace fairify {

struct FreeText {
    friend bool operator==(const FreeText&, const FreeText&) = default;
};

struct OntologyRef {
    std::string ontology_id;
    friend bool operator==(const OntologyRef&, const OntologyRef&) = default;
};

struct Enumeration {
    std::vector<std::string> values;  // raw display forms; matching is normalized
    friend bool operator==(const Enumeration&, const Enumeration&) = default;
};

struct IntegerRange {
    std::int64_t min = 0;
    std::int64_t max = 0;
    friend bool operator==(const IntegerRange&, const IntegerRange&) = default;
};

using ValueConstraint = std::variant<FreeText, OntologyRef, Enumeration, IntegerRange>;

enum class Requirement { required, recommended, optional };

std::string_view to_string(Requirement r) noexcept;
Requirement requirement_from_string(std::string_view s);

struct TemplateField {
    NormalizedName canonical_name;
    Requirement requirement = Requirement::optional;
    ValueConstraint constraint = FreeText{};

    friend bool operator==(const TemplateField&, const TemplateField&) = default;
};

struct MetadataTemplate {
    std::string name;
    std::vector<TemplateField> fields;   // template order
    std::string missing_value = "NA";

    /// Lookup by normalize_name(probe); nullptr when absent.
    const TemplateField* find(std::string_view raw_name) const;

    /// True when the value, after normalization, equals the missing token.
    bool is_missing_token(std::string_view value) const;

    friend bool operator==(const MetadataTemplate&, const MetadataTemplate&) = default;
};

struct DataDictionary {
    std::string name;
    std::unordered_set<NormalizedName> allowed_names;

    bool contains(std::string_view raw_name) const {
        return allowed_names.contains(NormalizedName::of(raw_name));
    }
};

MetadataTemplate load_template(const std::filesystem::path& path);
void save_template(const MetadataTemplate& tmpl, const std::filesystem::path& path);

DataDictionary load_data_dictionary(const std::filesystem::path& path);

/// Deterministic, line-oriented rendering of a template for prompt use:
/// a header line, one line per field, and a final missing-token line.
/// Byte-identical for equal templates.
std::string template_to_prompt_text(const MetadataTemplate& tmpl);

}  // namespace fairify
