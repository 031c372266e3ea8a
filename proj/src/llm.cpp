#include "fairify/llm.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "fairify/checksum.hpp"

namespace fairify {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

std::string_view trim_view(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// The record section of a built prompt sits between the first blank line and
/// the next one (or the end, for the bare-LLM setting).
std::string_view record_section(std::string_view user_text) {
    const auto start = user_text.find("\n\n");
    if (start == std::string_view::npos) return {};
    const auto body = user_text.substr(start + 2);
    const auto stop = body.find("\n\n");
    return stop == std::string_view::npos ? body : body.substr(0, stop);
}

bool value_satisfies(const std::string& value, const ValueConstraint& constraint,
                     const MetadataTemplate& tmpl, const OntologyMap* ontologies,
                     const std::string& field_name) {
    if (tmpl.is_missing_token(value)) return true;
    if (std::holds_alternative<FreeText>(constraint)) return true;

    if (const auto* ont = std::get_if<OntologyRef>(&constraint)) {
        if (ontologies == nullptr) {
            throw Error(Errc::missing_ontology, "surrogate needs ontology '" + ont->ontology_id +
                                                    "' for field '" + field_name + "'");
        }
        const auto it = ontologies->find(ont->ontology_id);
        if (it == ontologies->end()) {
            throw Error(Errc::missing_ontology, "surrogate needs ontology '" + ont->ontology_id +
                                                    "' for field '" + field_name + "'");
        }
        return it->second.contains(value);
    }
    if (const auto* en = std::get_if<Enumeration>(&constraint)) {
        const std::string probe = normalize_value(value);
        return std::any_of(en->values.begin(), en->values.end(), [&](const std::string& allowed) {
            return normalize_value(allowed) == probe;
        });
    }
    const auto& range = std::get<IntegerRange>(constraint);
    const std::string_view trimmed = trim_view(value);
    long long parsed = 0;
    const auto [ptr, ec] =
        std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), parsed);
    return ec == std::errc{} && ptr == trimmed.data() + trimmed.size() && parsed >= range.min &&
           parsed <= range.max;
}

/// Word prefixes of a value, longest first, excluding the full value
/// ("lung cancer tissue" -> "lung cancer", "lung").
std::vector<std::string> word_prefixes(const std::string& value) {
    const std::string norm = normalize_value(value);
    std::vector<std::size_t> spaces;
    for (std::size_t i = 0; i < norm.size(); ++i) {
        if (norm[i] == ' ') spaces.push_back(i);
    }
    std::vector<std::string> prefixes;
    for (auto it = spaces.rbegin(); it != spaces.rend(); ++it) {
        prefixes.push_back(norm.substr(0, *it));
    }
    return prefixes;
}

std::string surrogate_echo(std::string_view user_text) {
    return std::string(record_section(user_text));
}

std::string surrogate_template_fill(std::string_view user_text, const BackendConfig& backend) {
    if (!backend.surrogate_template) {
        throw Error(Errc::missing_template, "surrogate_template_fill backend has no template");
    }
    const MetadataTemplate& tmpl = *backend.surrogate_template;
    const OntologyMap* ontologies =
        backend.surrogate_ontologies ? backend.surrogate_ontologies.get() : nullptr;

    MetadataRecord input =
        parse_record_lines(std::string(record_section(user_text)), "surrogate_input");

    std::vector<std::optional<std::string>> slots(tmpl.fields.size());
    std::map<std::string, std::size_t> slot_by_name;
    for (std::size_t i = 0; i < tmpl.fields.size(); ++i) {
        slot_by_name[normalize_name(tmpl.fields[i].canonical_name.str())] = i;
    }

    // Assign input values to template slots: normalize, resolve aliases,
    // first write wins, unknown names are dropped.
    for (const auto& field : input.fields) {
        std::string key = normalize_name(field.name);
        if (backend.surrogate_aliases) {
            const auto alias = backend.surrogate_aliases->find(key);
            if (alias != backend.surrogate_aliases->end()) key = normalize_name(alias->second);
        }
        const auto slot = slot_by_name.find(key);
        if (slot == slot_by_name.end()) continue;
        if (slots[slot->second].has_value()) continue;
        slots[slot->second] = field.value;
    }

    // Repair constraint violations: move the value to the first open field
    // with a restrictive constraint that accepts it, then back-fill the
    // original field from the value's word prefixes.
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].has_value()) continue;
        const std::string value = *slots[i];
        if (value_satisfies(value, tmpl.fields[i].constraint, tmpl, ontologies,
                            tmpl.fields[i].canonical_name.str())) {
            continue;
        }
        for (std::size_t j = 0; j < slots.size(); ++j) {
            if (j == i || slots[j].has_value()) continue;
            if (std::holds_alternative<FreeText>(tmpl.fields[j].constraint)) continue;
            if (value_satisfies(value, tmpl.fields[j].constraint, tmpl, ontologies,
                                tmpl.fields[j].canonical_name.str())) {
                slots[j] = value;
                break;
            }
        }
        slots[i].reset();
        for (const std::string& prefix : word_prefixes(value)) {
            if (value_satisfies(prefix, tmpl.fields[i].constraint, tmpl, ontologies,
                                tmpl.fields[i].canonical_name.str())) {
                slots[i] = prefix;
                break;
            }
        }
    }

    std::string out;
    for (std::size_t i = 0; i < tmpl.fields.size(); ++i) {
        if (i > 0) out += '\n';
        out += tmpl.fields[i].canonical_name.str();
        out += ": ";
        out += slots[i].value_or(tmpl.missing_value);
    }
    return out;
}

std::string http_complete(const CompletionRequest& request, const BackendConfig& backend) {
    if (backend.endpoint_url.empty()) {
        throw Error(Errc::usage, "http backend requires an endpoint URL");
    }

    ordered_json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    body["messages"] = ordered_json::array(
        {{{"role", "system"}, {"content", request.system_text}},
         {{"role", "user"}, {"content", request.user_text}}});
    const std::string payload = body.dump();

    const char* token =
        backend.api_key_env.empty() ? nullptr : std::getenv(backend.api_key_env.c_str());

    thread_local std::mt19937 jitter_rng{std::random_device{}()};

    std::string last_failure;
    bool last_was_rate_limit = false;
    for (std::size_t attempt = 0; attempt <= backend.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto base = backend.retry_base * (1u << std::min<std::size_t>(attempt - 1, 10));
            std::uniform_int_distribution<long long> jitter(0, std::max<long long>(
                                                                   1, base.count() / 2));
            std::this_thread::sleep_for(base + std::chrono::milliseconds(jitter(jitter_rng)));
        }

        httplib::Client client(backend.endpoint_url);
        client.set_connection_timeout(backend.timeout);
        client.set_read_timeout(backend.timeout);
        client.set_write_timeout(backend.timeout);
        if (token != nullptr && *token != '\0') client.set_bearer_token_auth(token);

        auto res = client.Post(backend.api_path, payload, "application/json");
        if (!res) {
            last_failure = "connection failed: " + httplib::to_string(res.error());
            last_was_rate_limit = false;
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw Error(Errc::auth, "endpoint rejected credentials (HTTP " +
                                        std::to_string(res->status) + ")");
        }
        if (res->status == 429) {
            last_failure = "rate limited (HTTP 429)";
            last_was_rate_limit = true;
            continue;
        }
        if (res->status >= 500) {
            last_failure = "server error (HTTP " + std::to_string(res->status) + ")";
            last_was_rate_limit = false;
            continue;
        }
        if (res->status != 200) {
            // Remaining 4xx responses are request defects; retrying cannot fix them.
            throw Error(Errc::network,
                        "endpoint returned HTTP " + std::to_string(res->status));
        }
        try {
            const auto parsed = ordered_json::parse(res->body);
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const ordered_json::exception& e) {
            throw Error(Errc::network,
                        std::string("malformed completion response: ") + e.what());
        }
    }

    if (last_was_rate_limit) {
        throw Error(Errc::rate_limited,
                    "still rate limited after " + std::to_string(backend.max_retries) +
                        " retries");
    }
    throw Error(Errc::network, last_failure + " (after " + std::to_string(backend.max_retries) +
                                   " retries)");
}

}  // namespace

std::string_view to_string(PromptSetting setting) noexcept {
    return setting == PromptSetting::llm ? "llm" : "llm_cedar";
}

PromptSetting prompt_setting_from_string(std::string_view s) {
    if (s == "llm") return PromptSetting::llm;
    if (s == "llm_cedar") return PromptSetting::llm_cedar;
    throw Error(Errc::usage, "unknown prompt setting '" + std::string(s) + "'");
}

Provenance provenance_for(PromptSetting setting) noexcept {
    return setting == PromptSetting::llm ? Provenance::llm : Provenance::llm_cedar;
}

std::string format_temperature(double temperature) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, temperature);
    if (ec != std::errc{}) throw Error(Errc::usage, "unrepresentable temperature");
    return std::string(buffer, ptr);
}

std::string request_fingerprint(std::string_view model, std::string_view system_text,
                                std::string_view user_text, double temperature) {
    std::string blob;
    blob.reserve(model.size() + system_text.size() + user_text.size() + 24);
    blob.append(model);
    blob.push_back('\n');
    blob.append(system_text);
    blob.push_back('\n');
    blob.append(user_text);
    blob.push_back('\n');
    blob.append(format_temperature(temperature));
    return sha256_hex(blob);
}

CompletionRequest build_prompt(const MetadataRecord& record, PromptSetting setting,
                               const MetadataTemplate* tmpl, std::string model,
                               double temperature) {
    if (setting == PromptSetting::llm_cedar && tmpl == nullptr) {
        throw Error(Errc::missing_template, "llm_cedar prompts require a template");
    }
    if (temperature < 0.0) throw Error(Errc::usage, "temperature must be >= 0");

    CompletionRequest request;
    request.model = std::move(model);
    request.system_text = std::string(kSystemPrompt);
    request.temperature = temperature;

    std::string user;
    if (setting == PromptSetting::llm) {
        user.append(kLlmPrompt);
        user.append("\n\n");
        user.append(serialize_record(record, SerializeStyle::biosample_lines));
    } else {
        user.append(kLlmCedarPrompt);
        user.append("\n\n");
        user.append(serialize_record(record, SerializeStyle::biosample_lines));
        user.append("\n\n");
        user.append(template_to_prompt_text(*tmpl));
    }
    request.user_text = std::move(user);
    request.request_fingerprint = request_fingerprint(request.model, request.system_text,
                                                      request.user_text, request.temperature);
    return request;
}

Cassette::Cassette() : mutex_(std::make_unique<std::shared_mutex>()) {}

const CassetteEntry* Cassette::find(const std::string& fingerprint) const {
    std::shared_lock lock(*mutex_);
    const auto it = entries_.find(fingerprint);
    return it == entries_.end() ? nullptr : &it->second;
}

bool Cassette::insert(const std::string& fingerprint, CassetteEntry entry) {
    std::unique_lock lock(*mutex_);
    return entries_.emplace(fingerprint, std::move(entry)).second;
}

std::size_t Cassette::size() const {
    std::shared_lock lock(*mutex_);
    return entries_.size();
}

std::vector<std::string> Cassette::audit(std::string_view model, std::string_view system_text,
                                         double temperature) const {
    std::shared_lock lock(*mutex_);
    std::vector<std::string> bad;
    for (const auto& [key, entry] : entries_) {
        if (request_fingerprint(model, system_text, entry.user_text, temperature) != key) {
            bad.push_back(key);
        }
    }
    return bad;
}

void Cassette::save(const std::filesystem::path& path) const {
    ordered_json doc = ordered_json::object();
    {
        std::shared_lock lock(*mutex_);
        for (const auto& [key, entry] : entries_) {
            doc[key] = {{"user_text", entry.user_text},
                        {"response_text", entry.response_text},
                        {"timestamp", entry.timestamp}};
        }
    }
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write cassette '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error(Errc::io, "failed while writing cassette '" + path.string() + "'");
}

Cassette Cassette::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open cassette '" + path.string() + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::format, "cassette '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(Errc::format, "cassette '" + path.string() + "' is not a JSON object");
    }
    Cassette cassette;
    for (const auto& [key, value] : doc.items()) {
        try {
            CassetteEntry entry;
            entry.user_text = value.at("user_text").get<std::string>();
            entry.response_text = value.at("response_text").get<std::string>();
            entry.timestamp = value.value("timestamp", std::string{});
            cassette.entries_.emplace(key, std::move(entry));
        } catch (const ordered_json::exception& e) {
            throw Error(Errc::format,
                        "cassette entry '" + key + "' is malformed: " + e.what());
        }
    }
    return cassette;
}

std::string_view to_string(BackendKind kind) noexcept {
    switch (kind) {
        case BackendKind::http: return "http";
        case BackendKind::replay: return "replay";
        case BackendKind::surrogate_echo: return "surrogate_echo";
        case BackendKind::surrogate_template_fill: return "surrogate_template_fill";
    }
    return "unknown";
}

BackendKind backend_kind_from_string(std::string_view s) {
    if (s == "http") return BackendKind::http;
    if (s == "replay") return BackendKind::replay;
    if (s == "surrogate_echo") return BackendKind::surrogate_echo;
    if (s == "surrogate_template_fill") return BackendKind::surrogate_template_fill;
    throw Error(Errc::usage, "unknown backend kind '" + std::string(s) + "'");
}

std::string complete(const CompletionRequest& request, const BackendConfig& backend,
                     Cassette* cassette) {
    if (backend.kind == BackendKind::replay) {
        if (cassette == nullptr) {
            throw Error(Errc::usage, "replay backend requires a cassette");
        }
        const CassetteEntry* entry = cassette->find(request.request_fingerprint);
        if (entry == nullptr) {
            throw Error(Errc::cassette_miss,
                        "no cassette entry for fingerprint " + request.request_fingerprint);
        }
        return entry->response_text;
    }

    std::string response;
    switch (backend.kind) {
        case BackendKind::http:
            response = http_complete(request, backend);
            break;
        case BackendKind::surrogate_echo:
            response = surrogate_echo(request.user_text);
            break;
        case BackendKind::surrogate_template_fill:
            response = surrogate_template_fill(request.user_text, backend);
            break;
        case BackendKind::replay:
            break;  // handled above
    }

    if (cassette != nullptr && backend.record) {
        cassette->insert(request.request_fingerprint,
                         CassetteEntry{request.user_text, response, iso8601_utc_now()});
    }
    return response;
}

MetadataRecord parse_llm_record(const std::string& response_text, std::string id,
                                Provenance provenance) {
    MetadataRecord record;
    record.id = std::move(id);
    record.provenance = provenance;

    std::size_t pos = 0;
    while (pos <= response_text.size()) {
        const auto eol = response_text.find('\n', pos);
        std::string_view line(response_text.data() + pos,
                              (eol == std::string::npos ? response_text.size() : eol) - pos);
        pos = eol == std::string::npos ? response_text.size() + 1 : eol + 1;

        line = trim_view(line);
        if (line.empty()) continue;
        if (line.starts_with("```")) continue;
        if ((line.starts_with("- ") || line.starts_with("* ")) && line.size() > 2) {
            line = trim_view(line.substr(2));
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const std::string_view name = trim_view(line.substr(0, colon));
        if (name.empty() || name.size() > 64) continue;
        if (name.find_first_of(".!?") != std::string_view::npos) continue;

        const std::string_view value = trim_view(line.substr(colon + 1));
        record.fields.push_back({std::string(name), std::string(value)});
    }

    if (record.fields.empty()) {
        throw Error(Errc::unparseable,
                    "response for record '" + record.id + "' contains no name: value lines");
    }
    return record;
}

CorrectionRun correct_corpus(const std::vector<MetadataRecord>& records, PromptSetting setting,
                             const MetadataTemplate* tmpl, const BackendConfig& backend,
                             Cassette* cassette, const std::string& model, double temperature) {
    if (setting == PromptSetting::llm_cedar && tmpl == nullptr) {
        throw Error(Errc::missing_template, "llm_cedar corrections require a template");
    }
    CorrectionRun run;
    if (records.empty()) return run;

    std::vector<std::optional<MetadataRecord>> outputs(records.size());
    std::vector<std::optional<CorrectionFailure>> failures(records.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> aborted{false};
    std::mutex abort_mutex;
    std::optional<Error> abort_error;

    const std::size_t workers =
        std::min(std::max<std::size_t>(backend.max_in_flight, 1), records.size());

    auto work = [&] {
        while (!aborted.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= records.size()) break;
            try {
                const CompletionRequest request =
                    build_prompt(records[i], setting, tmpl, model, temperature);
                const std::string response = complete(request, backend, cassette);
                outputs[i] =
                    parse_llm_record(response, records[i].id, provenance_for(setting));
            } catch (const Error& e) {
                if (e.code() == Errc::auth) {
                    std::lock_guard lock(abort_mutex);
                    if (!abort_error) abort_error = e;
                    aborted.store(true, std::memory_order_relaxed);
                    break;
                }
                failures[i] = CorrectionFailure{i, records[i].id, e.code(), e.what()};
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();

    if (abort_error) throw *abort_error;

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (outputs[i]) run.records.push_back(std::move(*outputs[i]));
        if (failures[i]) run.failures.push_back(std::move(*failures[i]));
    }
    return run;
}

std::map<std::string, std::string> load_alias_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open alias map '" + path.string() + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::format, "alias map '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(Errc::format, "alias map '" + path.string() + "' is not a JSON object");
    }
    std::map<std::string, std::string> aliases;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_string()) {
            throw Error(Errc::format,
                        "alias map entry '" + key + "' must map to a string");
        }
        aliases[normalize_name(key)] = normalize_name(value.get<std::string>());
    }
    return aliases;
}

}  // namespace fairify
