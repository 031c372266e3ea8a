#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "fairify/adherence.hpp"
#include "fairify/errors.hpp"
#include "fairify/llm.hpp"
#include "fairify/metadata_template.hpp"
#include "fairify/ontology.hpp"
#include "fairify/record.hpp"
#include "fairify/sampler.hpp"
#include "fairify/stats.hpp"
#include "fairify/version.hpp"

namespace py = pybind11;
using namespace fairify;

namespace {

TauVariant tau_variant(const std::string& name) {
    if (name == "tau_b") return TauVariant::tau_b;
    if (name == "tau_a") return TauVariant::tau_a;
    throw Error(Errc::usage, "variant must be tau_b or tau_a, got '" + name + "'");
}

TestKind test_kind(const std::string& name) {
    if (name == "welch") return TestKind::welch_t;
    if (name == "paired") return TestKind::paired_t;
    throw Error(Errc::usage, "kind must be welch or paired, got '" + name + "'");
}

py::dict stat_result_dict(const StatResult& r) {
    py::dict d;
    d["test"] = std::string(to_string(r.test));
    d["statistic"] = r.statistic;
    d["degrees_of_freedom"] = r.degrees_of_freedom;
    d["p_value"] = r.p_value;
    d["mean_a"] = r.mean_a;
    d["mean_b"] = r.mean_b;
    d["n_a"] = r.n_a;
    d["n_b"] = r.n_b;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fairify, m) {
    m.doc() = "Biomedical metadata curation core: records, templates, ontologies, "
              "adherence metrics, rank statistics, and prompt plumbing.";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FairifyError");

    // --- records -----------------------------------------------------------
    py::class_<FieldEntry>(m, "FieldEntry")
        .def(py::init<std::string, std::string>(), py::arg("name"), py::arg("value"))
        .def_readwrite("name", &FieldEntry::name)
        .def_readwrite("value", &FieldEntry::value)
        .def("__repr__", [](const FieldEntry& f) {
            return "FieldEntry(name=" + f.name + ", value=" + f.value + ")";
        })
        .def("__eq__", [](const FieldEntry& a, const FieldEntry& b) { return a == b; });

    py::class_<MetadataRecord>(m, "MetadataRecord")
        .def(py::init([](std::string id, std::vector<FieldEntry> fields,
                         const std::string& provenance) {
                 MetadataRecord record;
                 record.id = std::move(id);
                 record.fields = std::move(fields);
                 record.provenance = provenance_from_string(provenance);
                 return record;
             }),
             py::arg("id"), py::arg("fields"), py::arg("provenance") = "original")
        .def_readwrite("id", &MetadataRecord::id)
        .def_readwrite("fields", &MetadataRecord::fields)
        .def_property(
            "provenance",
            [](const MetadataRecord& r) { return std::string(to_string(r.provenance)); },
            [](MetadataRecord& r, const std::string& s) {
                r.provenance = provenance_from_string(s);
            })
        .def("__eq__",
             [](const MetadataRecord& a, const MetadataRecord& b) { return a == b; })
        .def("__repr__", [](const MetadataRecord& r) {
            return "MetadataRecord(id=" + r.id + ", fields=" +
                   std::to_string(r.fields.size()) + ")";
        });

    m.def("normalize_name", [](const std::string& raw) { return normalize_name(raw); },
          py::arg("raw"));
    m.def("normalize_value", [](const std::string& raw) { return normalize_value(raw); },
          py::arg("raw"));
    m.def(
        "parse_record_lines",
        [](const std::string& text, const std::string& id) {
            return parse_record_lines(text, id);
        },
        py::arg("text"), py::arg("id"));
    m.def(
        "serialize_record",
        [](const MetadataRecord& record, const std::string& style) {
            if (style == "biosample_lines") {
                return serialize_record(record, SerializeStyle::biosample_lines);
            }
            if (style == "canonical") {
                return serialize_record(record, SerializeStyle::canonical);
            }
            throw Error(Errc::usage, "style must be biosample_lines or canonical");
        },
        py::arg("record"), py::arg("style") = "biosample_lines");
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("save_corpus", &save_corpus, py::arg("records"), py::arg("path"));

    // --- statistics ---------------------------------------------------------
    m.def(
        "kendall_tau",
        [](const std::vector<double>& x, const std::vector<double>& y,
           const std::string& variant) { return kendall_tau(x, y, tau_variant(variant)); },
        py::arg("x"), py::arg("y"), py::arg("variant") = "tau_b");
    m.def(
        "t_test",
        [](const std::vector<double>& a, const std::vector<double>& b,
           const std::string& kind) { return stat_result_dict(t_test(a, b, test_kind(kind))); },
        py::arg("a"), py::arg("b"), py::arg("kind") = "welch");
    m.def("student_t_p_two_sided", &student_t_p_two_sided, py::arg("t"), py::arg("df"));

    // --- sampling -----------------------------------------------------------
    py::class_<Mt19937>(m, "Mt19937")
        .def(py::init<std::uint32_t>(), py::arg("seed"))
        .def("next_u32", &Mt19937::next_u32)
        .def("bounded", &Mt19937::bounded, py::arg("k"))
        .def("reseed", &Mt19937::reseed, py::arg("seed"));
    m.def(
        "sample_record_ids",
        [](const std::vector<std::string>& ids, std::size_t n, std::uint32_t seed) {
            return sample_records(ids, n, seed).selected_ids;
        },
        py::arg("ids"), py::arg("n"), py::arg("seed"));

    // --- prompts and responses ----------------------------------------------
    m.def(
        "build_prompt",
        [](const MetadataRecord& record, const std::string& setting,
           const std::optional<std::string>& template_path, const std::string& model,
           double temperature) {
            std::optional<MetadataTemplate> tmpl;
            if (template_path) tmpl = load_template(*template_path);
            const CompletionRequest request =
                build_prompt(record, prompt_setting_from_string(setting),
                             tmpl ? &*tmpl : nullptr, model, temperature);
            py::dict d;
            d["model"] = request.model;
            d["system_text"] = request.system_text;
            d["user_text"] = request.user_text;
            d["temperature"] = request.temperature;
            d["fingerprint"] = request.request_fingerprint;
            return d;
        },
        py::arg("record"), py::arg("setting"), py::arg("template_path") = std::nullopt,
        py::arg("model") = "gpt-4", py::arg("temperature") = 0.0);
    m.def(
        "parse_llm_record",
        [](const std::string& text, const std::string& id, const std::string& provenance) {
            return parse_llm_record(text, id, provenance_from_string(provenance));
        },
        py::arg("text"), py::arg("id"), py::arg("provenance") = "llm");

    // --- adherence ------------------------------------------------------------
    m.def(
        "evaluate_corpus_file",
        [](const std::string& corpus_path, const std::string& dictionary_path,
           const std::optional<std::string>& template_path,
           const std::vector<std::tuple<std::string, std::string, std::string>>& ontologies,
           bool strict_required, bool synonyms) {
            const std::vector<MetadataRecord> corpus = load_corpus(corpus_path);
            const DataDictionary dictionary = load_data_dictionary(dictionary_path);
            std::optional<MetadataTemplate> tmpl;
            if (template_path) tmpl = load_template(*template_path);

            OntologyMap map;
            std::vector<FieldOntologyBinding> bindings;
            for (const auto& [field, ontology_id, path] : ontologies) {
                if (!map.contains(ontology_id)) {
                    OntologyIndex index =
                        std::filesystem::path(path).extension() == ".obo"
                            ? load_obo_subset(path, ontology_id, synonyms)
                            : load_term_list(path, ontology_id, synonyms);
                    map.emplace(ontology_id, std::move(index));
                }
                bindings.push_back({NormalizedName::of(field), ontology_id});
            }

            EvaluationContext ctx;
            ctx.tmpl = tmpl ? &*tmpl : nullptr;
            ctx.dictionary = &dictionary;
            ctx.bindings = std::move(bindings);
            ctx.ontologies = &map;
            ctx.strict_required = strict_required;
            const CorpusAdherence result = evaluate_corpus(corpus, ctx);

            py::dict d;
            d["mean_accuracy"] = result.mean_accuracy;
            d["mean_error_count"] = result.mean_error_count;
            d["field_name_adherence"] = result.field_name_adherence;
            py::dict bindings_out;
            for (const auto& [field, fraction] : result.per_binding_adherence) {
                bindings_out[py::str(field)] = fraction;
            }
            d["per_binding_adherence"] = bindings_out;
            py::list records;
            for (const auto& record : result.records) {
                py::dict r;
                r["record_id"] = record.record_id;
                r["field_count"] = record.fields.size();
                r["error_count"] = record.error_count;
                r["accuracy"] = record.accuracy;
                records.append(r);
            }
            d["records"] = records;
            return d;
        },
        py::arg("corpus_path"), py::arg("dictionary_path"),
        py::arg("template_path") = std::nullopt,
        py::arg("ontologies") = std::vector<std::tuple<std::string, std::string, std::string>>{},
        py::arg("strict_required") = false, py::arg("synonyms") = true);
}
