#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fairify/errors.hpp"
#include "fairify/metadata_template.hpp"
#include "fairify/ontology.hpp"
#include "fairify/record.hpp"

namespace fairify {

/// The two correction regimes: a bare instruction, or the instruction plus a
/// rendered template the output must adhere to.
enum class PromptSetting { llm, llm_cedar };

std::string_view to_string(PromptSetting setting) noexcept;
PromptSetting prompt_setting_from_string(std::string_view s);
Provenance provenance_for(PromptSetting setting) noexcept;

/// User-prompt instruction for the bare-LLM setting.
inline constexpr std::string_view kLlmPrompt =
    "Here is a record from BioSample describing a sample from a patient diagnosed with lung "
    "cancer. Ensure that the field names and field values make sense.";

/// User-prompt instruction for the template-constrained setting.
inline constexpr std::string_view kLlmCedarPrompt =
    "Here is a record from BioSample describing a sample from a patient diagnosed with lung "
    "cancer. Ensure that the field names and field values make sense. Following the BioSample "
    "record is a template describing the allowed field names and values. Transform the record "
    "to adhere to the template.";

/// Fixed output-format instruction, identical for both settings. Kept in the
/// system message so the user message carries only the curation instruction;
/// ablating it is a one-line change.
inline constexpr std::string_view kSystemPrompt =
    "You are a biomedical metadata curator. Respond with the corrected record only, as plain "
    "text, one field per line, each line of the form name: value. Do not add commentary, "
    "markdown, or code fences.";

struct CompletionRequest {
    std::string model;
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    std::string request_fingerprint;  ///< content hash of the four fields above

    bool operator==(const CompletionRequest&) const = default;
};

/// Shortest decimal rendering of a temperature that round-trips the double
/// (0 -> "0", 0.7 -> "0.7").
std::string format_temperature(double temperature);

/// Lowercase hex SHA-256 of "model\nsystem\nuser\ntemperature-decimal".
std::string request_fingerprint(std::string_view model, std::string_view system_text,
                                std::string_view user_text, double temperature);

/// Assemble the full request for one record. llm_cedar requires a template
/// (MissingTemplate otherwise). The instruction strings above appear verbatim
/// at the start of user_text.
CompletionRequest build_prompt(const MetadataRecord& record, PromptSetting setting,
                               const MetadataTemplate* tmpl, std::string model = "gpt-4",
                               double temperature = 0.0);

struct CassetteEntry {
    std::string user_text;
    std::string response_text;
    std::string timestamp;  ///< ISO 8601 UTC, recorded when the entry was stored

    bool operator==(const CassetteEntry&) const = default;
};

/// Persisted map from request fingerprint to completion text. Readers take a
/// shared lock and never block each other; recording takes an exclusive lock.
class Cassette {
public:
    Cassette();

    /// Stable pointer to the stored entry, or nullptr. Entries are never
    /// mutated or removed once inserted, so the pointer stays valid across
    /// concurrent inserts.
    const CassetteEntry* find(const std::string& fingerprint) const;

    /// First write wins: returns false (and keeps the old entry) when the
    /// fingerprint is already present.
    bool insert(const std::string& fingerprint, CassetteEntry entry);

    std::size_t size() const;

    /// Audit property: every stored user_text must re-hash to its key under
    /// the cassette's (model, system_text, temperature). Returns the keys
    /// that fail, empty when the cassette is sound.
    std::vector<std::string> audit(std::string_view model, std::string_view system_text,
                                   double temperature) const;

    void save(const std::filesystem::path& path) const;
    static Cassette load(const std::filesystem::path& path);

private:
    std::map<std::string, CassetteEntry> entries_;  // sorted keys => stable files
    mutable std::unique_ptr<std::shared_mutex> mutex_;
};

enum class BackendKind { http, replay, surrogate_echo, surrogate_template_fill };

std::string_view to_string(BackendKind kind) noexcept;
BackendKind backend_kind_from_string(std::string_view s);

struct BackendConfig {
    BackendKind kind = BackendKind::replay;

    // http
    std::string endpoint_url;                       ///< scheme://host[:port]
    std::string api_path = "/v1/chat/completions";  ///< chat-completions route
    std::string api_key_env = "FAIRIFY_API_KEY";    ///< env var holding the bearer token
    std::chrono::milliseconds timeout{30000};
    std::size_t max_retries = 5;                 ///< retries after the first attempt
    std::chrono::milliseconds retry_base{250};   ///< backoff unit, doubled per retry

    std::size_t max_in_flight = 4;  ///< concurrent completions in correct_corpus
    bool record = true;             ///< append non-replay completions to an attached cassette

    // surrogate_template_fill context
    std::shared_ptr<const MetadataTemplate> surrogate_template;
    std::shared_ptr<const OntologyMap> surrogate_ontologies;
    /// normalized input name -> canonical template field name
    std::shared_ptr<const std::map<std::string, std::string>> surrogate_aliases;
};

/// Run one completion against the configured backend. With a cassette
/// attached: replay looks the fingerprint up (CassetteMiss when absent); the
/// other backends append their result when backend.record is set.
std::string complete(const CompletionRequest& request, const BackendConfig& backend,
                     Cassette* cassette = nullptr);

/// Extract fields from a completion. A line contributes a field iff it is
/// "optional bullet, name, colon, value" with the name at most 64 characters
/// and free of sentence punctuation; code fences and prose lines are skipped.
/// Throws Unparseable when no line qualifies.
MetadataRecord parse_llm_record(const std::string& response_text, std::string id,
                                Provenance provenance);

struct CorrectionFailure {
    std::size_t index = 0;    ///< position in the input corpus
    std::string record_id;
    Errc code = Errc::network;
    std::string message;
};

struct CorrectionRun {
    std::vector<MetadataRecord> records;     ///< successes, in input order
    std::vector<CorrectionFailure> failures; ///< per-record failures, in input order
};

/// Correct a whole corpus with bounded concurrency (backend.max_in_flight).
/// Output order equals input order regardless of completion order. Per-record
/// failures become structured entries; only AuthError aborts the run (thrown
/// after in-flight work drains).
CorrectionRun correct_corpus(const std::vector<MetadataRecord>& records, PromptSetting setting,
                             const MetadataTemplate* tmpl, const BackendConfig& backend,
                             Cassette* cassette = nullptr, const std::string& model = "gpt-4",
                             double temperature = 0.0);

/// Load a surrogate alias table: JSON object of input-name -> canonical
/// template field name. Keys are normalized on load.
std::map<std::string, std::string> load_alias_map(const std::filesystem::path& path);

}  // namespace fairify
