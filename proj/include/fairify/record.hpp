#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fairify/errors.hpp"

namespace fairify {

/// Lowercased, trimmed field name with internal whitespace runs collapsed
/// to a single underscore. Normalization is idempotent.
class NormalizedName {
public:
    NormalizedName() = default;
    static NormalizedName of(std::string_view raw);

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend bool operator==(const NormalizedName&, const NormalizedName&) = default;
    friend auto operator<=>(const NormalizedName&, const NormalizedName&) = default;

private:
    explicit NormalizedName(std::string value) : value_(std::move(value)) {}
    std::string value_;
};

std::string normalize_name(std::string_view raw);

/// Like normalize_name but whitespace runs collapse to a single space,
/// since ontology class names contain spaces.
std::string normalize_value(std::string_view raw);

enum class Provenance { original, llm, llm_cedar };

std::string_view to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view s);

struct FieldEntry {
    std::string name;   // raw, as read
    std::string value;  // raw, as read; may be empty

    friend bool operator==(const FieldEntry&, const FieldEntry&) = default;
};

struct MetadataRecord {
    std::string id;
    std::vector<FieldEntry> fields;  // order preserved; duplicate names permitted
    Provenance provenance = Provenance::original;

    friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

enum class SerializeStyle { biosample_lines, canonical };

/// Parse colon-separated display lines ("name : value") into a record.
/// Lines without a colon, or with an empty name before the colon, are
/// skipped. Throws EmptyRecord when no line parses.
MetadataRecord parse_record_lines(std::string_view text, std::string_view id);

std::string serialize_record(const MetadataRecord& record, SerializeStyle style);

/// Parse one canonical corpus line (JSON object). line_number is used in
/// FormatError messages; pass 0 when unknown.
MetadataRecord parse_corpus_line(std::string_view line, std::size_t line_number = 0);

std::vector<MetadataRecord> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::vector<MetadataRecord>& records, const std::filesystem::path& path);

}  // namespace fairify

template <>
struct std::hash<fairify::NormalizedName> {
    std::size_t operator()(const fairify::NormalizedName& n) const noexcept {
        return std::hash<std::string>{}(n.str());
    }
};
