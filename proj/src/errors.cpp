#include "fairify/errors.hpp"

namespace fairify {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::empty_record: return "EmptyRecord";
        case Errc::io: return "IoError";
        case Errc::format: return "FormatError";
        case Errc::schema: return "SchemaError";
        case Errc::empty_dictionary: return "EmptyDictionary";
        case Errc::empty_ontology: return "EmptyOntology";
        case Errc::parse: return "ParseError";
        case Errc::missing_template: return "MissingTemplate";
        case Errc::network: return "NetworkError";
        case Errc::auth: return "AuthError";
        case Errc::cassette_miss: return "CassetteMiss";
        case Errc::rate_limited: return "RateLimited";
        case Errc::unparseable: return "Unparseable";
        case Errc::missing_ontology: return "MissingOntology";
        case Errc::empty_corpus: return "EmptyCorpus";
        case Errc::degenerate_record: return "DegenerateRecord";
        case Errc::degenerate_input: return "DegenerateInput";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::duplicate_row: return "DuplicateRow";
        case Errc::range: return "RangeError";
        case Errc::coverage_mismatch: return "CoverageMismatch";
        case Errc::empty_scores: return "EmptyScores";
        case Errc::duplicate_ids: return "DuplicateIds";
        case Errc::usage: return "UsageError";
    }
    return "Error";
}

ErrorClass errc_class(Errc code) noexcept {
    switch (code) {
        case Errc::usage:
        case Errc::missing_template:
            return ErrorClass::usage;
        case Errc::network:
        case Errc::auth:
        case Errc::cassette_miss:
        case Errc::rate_limited:
        case Errc::unparseable:
            return ErrorClass::backend;
        default:
            return ErrorClass::data;
    }
}

}  // namespace fairify
