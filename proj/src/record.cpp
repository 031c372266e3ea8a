#include "fairify/record.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairify {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_space(char c) noexcept {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string collapse(std::string_view raw, char separator) {
    std::string_view trimmed = trim(raw);
    std::string out;
    out.reserve(trimmed.size());
    bool in_run = false;
    for (char c : trimmed) {
        if (is_space(c)) {
            in_run = true;
            continue;
        }
        if (in_run) {
            out.push_back(separator);
            in_run = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

ordered_json record_to_json(const MetadataRecord& record) {
    ordered_json fields = ordered_json::array();
    for (const auto& f : record.fields) {
        fields.push_back({{"name", f.name}, {"value", f.value}});
    }
    return ordered_json{{"id", record.id},
                        {"provenance", std::string(to_string(record.provenance))},
                        {"fields", std::move(fields)}};
}

}  // namespace

NormalizedName NormalizedName::of(std::string_view raw) {
    return NormalizedName(normalize_name(raw));
}

std::string normalize_name(std::string_view raw) { return collapse(raw, '_'); }

std::string normalize_value(std::string_view raw) { return collapse(raw, ' '); }

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::llm: return "llm";
        case Provenance::llm_cedar: return "llm_cedar";
    }
    return "original";
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "original") return Provenance::original;
    if (s == "llm") return Provenance::llm;
    if (s == "llm_cedar") return Provenance::llm_cedar;
    throw Error(Errc::format, "unknown provenance '" + std::string(s) + "'");
}

MetadataRecord parse_record_lines(std::string_view text, std::string_view id) {
    MetadataRecord record;
    record.id = std::string(id);
    record.provenance = Provenance::original;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        std::string_view name = trim(line.substr(0, colon));
        if (name.empty()) continue;
        std::string_view value = trim(line.substr(colon + 1));
        record.fields.push_back({std::string(name), std::string(value)});
    }

    if (record.fields.empty()) {
        throw Error(Errc::empty_record, "no parsable 'name : value' lines in record '" +
                                            record.id + "'");
    }
    return record;
}

std::string serialize_record(const MetadataRecord& record, SerializeStyle style) {
    if (style == SerializeStyle::canonical) {
        return record_to_json(record).dump();
    }
    std::string out;
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
        if (i > 0) out.push_back('\n');
        out += record.fields[i].name;
        out += " : ";
        out += record.fields[i].value;
    }
    return out;
}

MetadataRecord parse_corpus_line(std::string_view line, std::size_t line_number) {
    const std::string where =
        line_number > 0 ? "line " + std::to_string(line_number) + ": " : "";
    ordered_json obj = ordered_json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw Error(Errc::format, where + "not a JSON object");
    }
    try {
        MetadataRecord record;
        record.id = obj.at("id").get<std::string>();
        record.provenance = provenance_from_string(obj.at("provenance").get<std::string>());
        for (const auto& f : obj.at("fields")) {
            record.fields.push_back({f.at("name").get<std::string>(),
                                     f.at("value").get<std::string>()});
        }
        if (record.id.empty()) throw Error(Errc::format, where + "empty record id");
        return record;
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::format, where + e.what());
    }
}

std::vector<MetadataRecord> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open corpus file '" + path.string() + "'");
    std::vector<MetadataRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        records.push_back(parse_corpus_line(line, line_number));
    }
    return records;
}

void save_corpus(const std::vector<MetadataRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write corpus file '" + path.string() + "'");
    for (const auto& record : records) {
        out << record_to_json(record).dump() << '\n';
    }
    if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

}  // namespace fairify
