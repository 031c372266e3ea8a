#include "fairify/ontology.hpp"

#include <algorithm>
#include <fstream>

namespace fairify {

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

void insert_term(OntologyIndex& index, std::string_view raw) {
    std::string normalized = normalize_value(raw);
    if (!normalized.empty()) index.terms.insert(std::move(normalized));
}

}  // namespace

OntologyIndex load_term_list(const std::filesystem::path& path, std::string_view ontology_id,
                             bool include_synonyms) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open term list '" + path.string() + "'");
    OntologyIndex index;
    index.ontology_id = std::string(ontology_id);
    std::string line;
    while (std::getline(in, line)) {
        std::string_view rest = trim_view(line);
        if (rest.empty() || rest.front() == '#') continue;
        std::size_t tab = rest.find('\t');
        insert_term(index, rest.substr(0, tab));
        while (include_synonyms && tab != std::string_view::npos) {
            rest = rest.substr(tab + 1);
            tab = rest.find('\t');
            insert_term(index, rest.substr(0, tab));
        }
    }
    if (index.terms.empty()) {
        throw Error(Errc::empty_ontology, "no terms in '" + path.string() + "'");
    }
    return index;
}

OntologyIndex load_obo_subset(const std::filesystem::path& path, std::string_view ontology_id,
                              bool include_synonyms) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open OBO file '" + path.string() + "'");
    OntologyIndex index;
    index.ontology_id = std::string(ontology_id);

    bool in_term = false;
    bool obsolete = false;
    std::size_t stanza_line = 0;
    std::vector<std::string> pending;  // names/synonyms of the current stanza

    const auto flush = [&] {
        if (in_term && !obsolete) {
            for (const auto& term : pending) insert_term(index, term);
        }
        pending.clear();
        obsolete = false;
    };

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view text = trim_view(line);
        if (text.empty()) continue;
        if (text.front() == '[') {
            flush();
            in_term = (text == "[Term]");
            stanza_line = line_number;
            continue;
        }
        if (!in_term) continue;
        if (text.starts_with("name:")) {
            pending.emplace_back(trim_view(text.substr(5)));
        } else if (text.starts_with("synonym:")) {
            if (!include_synonyms) continue;
            const std::size_t open = text.find('"');
            const std::size_t close = open == std::string_view::npos
                                          ? std::string_view::npos
                                          : text.find('"', open + 1);
            if (open == std::string_view::npos || close == std::string_view::npos) {
                throw Error(Errc::parse,
                            "malformed synonym in stanza starting at line " +
                                std::to_string(stanza_line) + " (line " +
                                std::to_string(line_number) + ")");
            }
            pending.emplace_back(text.substr(open + 1, close - open - 1));
        } else if (text.starts_with("is_obsolete:")) {
            obsolete = trim_view(text.substr(12)) == "true";
        }
    }
    flush();

    if (index.terms.empty()) {
        throw Error(Errc::empty_ontology, "no usable [Term] stanzas in '" + path.string() + "'");
    }
    return index;
}

void save_term_list(const OntologyIndex& index, const std::filesystem::path& path) {
    std::vector<std::string> sorted(index.terms.begin(), index.terms.end());
    std::sort(sorted.begin(), sorted.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write term list '" + path.string() + "'");
    for (const auto& term : sorted) out << term << '\n';
}

}  // namespace fairify
