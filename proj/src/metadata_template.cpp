#include "fairify/metadata_template.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace fairify {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kEnumRenderLimit = 40;

ValueConstraint constraint_from_json(const ordered_json& obj, const std::string& field_name) {
    const auto fail = [&](const std::string& rule) -> ValueConstraint {
        throw Error(Errc::schema, "field '" + field_name + "': " + rule);
    };
    if (!obj.is_object() || !obj.contains("kind")) {
        return fail("constraint must be an object with a 'kind' key");
    }
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "free_text") return FreeText{};
    if (kind == "ontology") {
        if (!obj.contains("ontology") || obj.at("ontology").get<std::string>().empty()) {
            return fail("ontology constraint requires a non-empty 'ontology' key");
        }
        return OntologyRef{obj.at("ontology").get<std::string>()};
    }
    if (kind == "enum") {
        if (!obj.contains("values") || !obj.at("values").is_array() || obj.at("values").empty()) {
            return fail("enum constraint requires a non-empty 'values' array");
        }
        Enumeration e;
        for (const auto& v : obj.at("values")) e.values.push_back(v.get<std::string>());
        return e;
    }
    if (kind == "integer_range") {
        if (!obj.contains("min") || !obj.contains("max")) {
            return fail("integer_range constraint requires 'min' and 'max'");
        }
        IntegerRange r{obj.at("min").get<std::int64_t>(), obj.at("max").get<std::int64_t>()};
        if (r.min > r.max) return fail("integer_range requires min <= max");
        return r;
    }
    return fail("unknown constraint kind '" + kind + "'");
}

ordered_json constraint_to_json(const ValueConstraint& c) {
    ordered_json obj;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeText>) {
                obj = {{"kind", "free_text"}};
            } else if constexpr (std::is_same_v<T, OntologyRef>) {
                obj = {{"kind", "ontology"}, {"ontology", v.ontology_id}};
            } else if constexpr (std::is_same_v<T, Enumeration>) {
                obj = {{"kind", "enum"}, {"values", v.values}};
            } else {
                obj = {{"kind", "integer_range"}, {"min", v.min}, {"max", v.max}};
            }
        },
        c);
    return obj;
}

std::string render_constraint(const ValueConstraint& c) {
    std::string out;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeText>) {
                out = "free text";
            } else if constexpr (std::is_same_v<T, OntologyRef>) {
                out = "value must be a term from " + v.ontology_id;
            } else if constexpr (std::is_same_v<T, Enumeration>) {
                out = "one of: ";
                const std::size_t shown = std::min(v.values.size(), kEnumRenderLimit);
                for (std::size_t i = 0; i < shown; ++i) {
                    if (i > 0) out += ", ";
                    out += v.values[i];
                }
                if (v.values.size() > shown) {
                    out += " (and " + std::to_string(v.values.size() - shown) + " more)";
                }
            } else {
                out = "integer between " + std::to_string(v.min) + " and " +
                      std::to_string(v.max);
            }
        },
        c);
    return out;
}

}  // namespace

std::string_view to_string(Requirement r) noexcept {
    switch (r) {
        case Requirement::required: return "required";
        case Requirement::recommended: return "recommended";
        case Requirement::optional: return "optional";
    }
    return "optional";
}

Requirement requirement_from_string(std::string_view s) {
    if (s == "required") return Requirement::required;
    if (s == "recommended") return Requirement::recommended;
    if (s == "optional") return Requirement::optional;
    throw Error(Errc::schema, "unknown requirement level '" + std::string(s) + "'");
}

const TemplateField* MetadataTemplate::find(std::string_view raw_name) const {
    const NormalizedName probe = NormalizedName::of(raw_name);
    if (probe.empty()) return nullptr;
    for (const auto& field : fields) {
        if (field.canonical_name == probe) return &field;
    }
    return nullptr;
}

bool MetadataTemplate::is_missing_token(std::string_view value) const {
    return normalize_value(value) == normalize_value(missing_value);
}

MetadataTemplate load_template(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open template file '" + path.string() + "'");
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(Errc::schema, "template file is not a JSON object: " + path.string());
    }

    MetadataTemplate tmpl;
    try {
        tmpl.name = doc.at("name").get<std::string>();
        tmpl.missing_value = doc.value("missing_value", std::string("NA"));
        if (tmpl.missing_value.empty()) {
            throw Error(Errc::schema, "missing_value token must be non-empty");
        }
        if (!doc.contains("fields") || !doc.at("fields").is_array() || doc.at("fields").empty()) {
            throw Error(Errc::schema, "template requires a non-empty 'fields' array");
        }
        std::unordered_set<NormalizedName> seen;
        for (const auto& f : doc.at("fields")) {
            TemplateField field;
            const std::string raw_name = f.at("name").get<std::string>();
            field.canonical_name = NormalizedName::of(raw_name);
            if (field.canonical_name.empty()) {
                throw Error(Errc::schema, "field name '" + raw_name + "' normalizes to empty");
            }
            if (!seen.insert(field.canonical_name).second) {
                throw Error(Errc::schema, "duplicate canonical field name '" +
                                              field.canonical_name.str() + "'");
            }
            field.requirement = requirement_from_string(f.at("requirement").get<std::string>());
            field.constraint = constraint_from_json(f.at("constraint"), field.canonical_name.str());
            tmpl.fields.push_back(std::move(field));
        }
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::schema, std::string("template: ") + e.what());
    }
    return tmpl;
}

void save_template(const MetadataTemplate& tmpl, const std::filesystem::path& path) {
    ordered_json fields = ordered_json::array();
    for (const auto& f : tmpl.fields) {
        fields.push_back({{"name", f.canonical_name.str()},
                          {"requirement", std::string(to_string(f.requirement))},
                          {"constraint", constraint_to_json(f.constraint)}});
    }
    ordered_json doc{{"name", tmpl.name},
                     {"missing_value", tmpl.missing_value},
                     {"fields", std::move(fields)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write template file '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

DataDictionary load_data_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open dictionary file '" + path.string() + "'");
    DataDictionary dict;
    dict.name = path.stem().string();
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t first = line.find_first_not_of(" \t\r\n\f\v");
        if (first == std::string::npos || line[first] == '#') continue;
        const NormalizedName name = NormalizedName::of(line);
        if (!name.empty()) dict.allowed_names.insert(name);
    }
    if (dict.allowed_names.empty()) {
        throw Error(Errc::empty_dictionary, "no field names in '" + path.string() + "'");
    }
    return dict;
}

std::string template_to_prompt_text(const MetadataTemplate& tmpl) {
    std::string out = "Template: " + tmpl.name;
    for (const auto& field : tmpl.fields) {
        out += "\n- " + field.canonical_name.str() + " (" +
               std::string(to_string(field.requirement)) + "): " +
               render_constraint(field.constraint);
    }
    out += "\nUse \"" + tmpl.missing_value + "\" when a value is unknown or missing.";
    return out;
}

}  // namespace fairify
