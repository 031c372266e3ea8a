#pragma once

#include <stdexcept>
#include <string>

namespace fairify {

/// Error classification; drives the CLI exit-code contract
/// (0 success, 1 usage, 2 data/format, 3 backend).
enum class ErrorClass { usage = 1, data = 2, backend = 3 };

enum class Errc {
    // record / corpus
    empty_record,
    io,
    format,
    // template / dictionary
    schema,
    empty_dictionary,
    // ontology
    empty_ontology,
    parse,
    // llm client
    missing_template,
    network,
    auth,
    cassette_miss,
    rate_limited,
    unparseable,
    // adherence
    missing_ontology,
    empty_corpus,
    degenerate_record,
    // stats
    degenerate_input,
    length_mismatch,
    duplicate_row,
    range,
    coverage_mismatch,
    empty_scores,
    // sampler
    duplicate_ids,
    // cli
    usage,
};

const char* errc_name(Errc code) noexcept;
ErrorClass errc_class(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }
    ErrorClass error_class() const noexcept { return errc_class(code_); }

private:
    Errc code_;
};

}  // namespace fairify
