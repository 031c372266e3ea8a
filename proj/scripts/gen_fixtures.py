#!/usr/bin/env python3
"""Generate the data/ fixtures: template, dictionary, ontology slices,
corpora, and synthetic reviewer scores.

Deterministic (fixed seeds); the generated files are committed, so this
script only needs to be re-run when fixture content changes.

    python3 scripts/gen_fixtures.py
"""

import json
import os
import random

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")

TEMPLATE = {
    "name": "BioSample Human",
    "missing_value": "NA",
    "fields": [
        {"name": "biosample_accession", "requirement": "optional", "constraint": {"kind": "free_text"}},
        {"name": "sample_name", "requirement": "required", "constraint": {"kind": "free_text"}},
        {"name": "bioproject_accession", "requirement": "optional", "constraint": {"kind": "free_text"}},
        {"name": "organism", "requirement": "required", "constraint": {"kind": "enum", "values": ["Homo sapiens"]}},
        {"name": "isolate", "requirement": "recommended", "constraint": {"kind": "free_text"}},
        {"name": "age", "requirement": "recommended", "constraint": {"kind": "integer_range", "min": 0, "max": 120}},
        {"name": "sex", "requirement": "recommended", "constraint": {"kind": "enum", "values": ["female", "male", "intersex", "not determined"]}},
        {"name": "tissue", "requirement": "required", "constraint": {"kind": "ontology", "ontology": "UBERON"}},
        {"name": "disease", "requirement": "recommended", "constraint": {"kind": "ontology", "ontology": "DOID"}},
        {"name": "health_state", "requirement": "optional", "constraint": {"kind": "enum", "values": ["Diseased", "Healthy"]}},
        {"name": "treatment", "requirement": "optional", "constraint": {"kind": "free_text"}},
        {"name": "ethnicity", "requirement": "optional", "constraint": {"kind": "free_text"}},
    ],
}

DICTIONARY = [
    "biosample_accession", "sample_name", "sample_title", "bioproject_accession",
    "organism", "isolate", "age", "sex", "tissue", "disease", "health_state",
    "treatment", "ethnicity", "cell_type", "cell_line", "dev_stage", "phenotype",
    "biomaterial_provider", "collection_date", "geo_loc_name", "strain", "genotype",
    "host", "sample_type", "source_type", "specimen_voucher", "store_cond", "tissue_lib",
]

UBERON_TERMS = [
    ("lung", ["pulmo"]),
    ("heart", []),
    ("liver", []),
    ("brain", []),
    ("kidney", []),
    ("blood", []),
    ("lung lobe", []),
    ("upper lobe of left lung", []),
    ("lower lobe of right lung", []),
    ("trachea", ["windpipe"]),
    ("esophagus", []),
    ("stomach", []),
    ("colon", []),
    ("skin of body", ["skin"]),
    ("lymph node", []),
    ("bone marrow", []),
    ("breast", []),
    ("prostate gland", ["prostate"]),
    ("pancreas", []),
    ("spleen", []),
    ("thymus", []),
    ("bronchus", []),
    ("pleura", []),
    ("alveolus of lung", ["lung alveolus"]),
]

DOID_TERMS = [
    ("lung cancer", ["cancer of lung"]),
    ("lung adenocarcinoma", []),
    ("lung squamous cell carcinoma", []),
    ("non-small cell lung carcinoma", ["NSCLC"]),
    ("small cell lung carcinoma", ["SCLC"]),
    ("lung carcinoma", []),
    ("cancer", []),
    ("adenocarcinoma", []),
    ("breast cancer", []),
    ("colorectal cancer", []),
    ("prostate cancer", []),
    ("chronic obstructive pulmonary disease", ["COPD"]),
    ("asthma", []),
    ("pneumonia", []),
    ("pulmonary fibrosis", []),
    ("emphysema", []),
    ("mesothelioma", []),
    ("tuberculosis", ["TB"]),
]

CL_TERMS = [
    ("epithelial cell", []),
    ("T cell", ["T lymphocyte"]),
    ("B cell", ["B lymphocyte"]),
    ("natural killer cell", ["NK cell"]),
    ("macrophage", []),
    ("alveolar macrophage", []),
    ("monocyte", []),
    ("neutrophil", []),
    ("fibroblast", []),
    ("type II pneumocyte", ["type 2 pneumocyte"]),
    ("club cell", []),
    ("basal cell", []),
    ("endothelial cell", []),
    ("dendritic cell", []),
    ("erythrocyte", ["red blood cell"]),
]

OBO_MINI = """format-version: 1.2
ontology: uberon-mini

[Term]
id: UBERON:0002048
name: lung
synonym: "pulmo" EXACT []

[Term]
id: UBERON:0002185
name: bronchus
synonym: "main bronchus" RELATED []
synonym: "principal bronchus" EXACT []

[Term]
id: UBERON:0000170
name: pair of lungs
is_obsolete: true

[Typedef]
id: part_of
name: part of
"""

# Non-dictionary surface forms used when corrupting field names.
NAME_VARIANTS = {
    "tissue": "Sampled Tissue",
    "age": "Age of Donor",
    "sex": "Sex of Donor",
    "disease": "Disease State",
    "treatment": "Treatment Protocol",
    "isolate": "Sample Isolate Identifier",
    "health_state": "Health Status",
    "sample_name": "Sample Label",
}

ALIASES = {
    "sampled_tissue": "tissue",
    "age_of_donor": "age",
    "donor_age": "age",
    "sex_of_donor": "sex",
    "patient_sex": "sex",
    "disease_state": "disease",
    "treatment_protocol": "treatment",
    "sample_isolate_identifier": "isolate",
    "health_status": "health_state",
    "sample_label": "sample_name",
}

SEXES = ["female", "male"]
TISSUES = ["lung", "heart", "liver", "lung lobe", "trachea", "bronchus", "blood"]
DISEASES = ["lung cancer", "lung adenocarcinoma", "asthma", "pneumonia", "emphysema"]


def record_line(rid, provenance, fields):
    obj = {"id": rid, "provenance": provenance,
           "fields": [{"name": n, "value": v} for n, v in fields]}
    return json.dumps(obj, separators=(", ", ": "), ensure_ascii=False)


def write(path, text):
    full = os.path.join(DATA, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8") as fh:
        fh.write(text)
    print("wrote", os.path.relpath(full, ROOT))


def term_list_text(terms, title):
    lines = [f"# {title}", "# one primary term per line; tab-separated synonyms"]
    for name, syns in terms:
        lines.append("\t".join([name] + syns))
    return "\n".join(lines) + "\n"


def gen_fixture_corpus():
    rng = random.Random(20240901)
    lines = []
    for i in range(1000):
        rid = f"rec_{i:04d}"
        fields = [("isolate", f"ISO_{i:04d}")]
        fields.append(("age", str(rng.randint(18, 90))))
        fields.append(("sex", rng.choice(SEXES)))
        fields.append(("tissue", rng.choice(TISSUES)))
        if rng.random() < 0.45:
            fields.append(("disease", rng.choice(DISEASES)))
        if rng.random() < 0.2:
            fields.append(("health_state", rng.choice(["Diseased", "Healthy"])))
        if rng.random() < 0.15:
            fields.append(("Age of Donor", str(rng.randint(18, 90))))
        lines.append(record_line(rid, "original", fields))
    write("corpora/fixture_corpus.jsonl", "\n".join(lines) + "\n")


def gen_corrupted_corpus():
    rng = random.Random(777)
    base_fields = ["isolate", "age", "sex", "tissue", "disease",
                   "health_state", "treatment", "sample_name"]
    lines = []
    total = 0
    canonical = 0
    for i in range(50):
        rid = f"rec_c{i:02d}"
        values = {
            "isolate": f"TN_{i:02d}",
            "age": str(rng.randint(20, 85)),
            "sex": rng.choice(SEXES),
            "tissue": rng.choice(TISSUES),
            "disease": rng.choice(DISEASES),
            "health_state": rng.choice(["Diseased", "Healthy"]),
            "treatment": rng.choice(["none", "chemotherapy", "radiation"]),
            "sample_name": f"sample {i:02d}",
        }
        if i % 4 == 0:
            values["tissue"] = "lung cancer"  # value error, name kept canonical
        n_corrupt = i % 3
        corrupt_at = set(rng.sample(range(len(base_fields)), n_corrupt))
        fields = []
        for j, name in enumerate(base_fields):
            total += 1
            if j in corrupt_at:
                fields.append((NAME_VARIANTS[name], values[name]))
            else:
                canonical += 1
                fields.append((name, values[name]))
        lines.append(record_line(rid, "original", fields))
    write("corpora/corrupted_50.jsonl", "\n".join(lines) + "\n")
    meta = {"records": 50,
            "total_field_instances": total,
            "canonical_field_instances": canonical}
    write("corpora/corrupted_50.meta.json", json.dumps(meta, indent=2) + "\n")


def gen_reviewer_scores():
    # Three reviewers, 200 records, three settings. Constructed so that the
    # per-setting means are exact by decimal arithmetic:
    #   original:  accuracy mean 0.79, error mean 1.64
    #   llm:       accuracy mean 0.80, error mean 1.55
    #   llm_cedar: accuracy mean 0.97, error mean 0.85
    rows = ["reviewer_id,record_id,setting,accuracy,error_count"]
    for ridx, reviewer in enumerate(["R1", "R2", "R3"]):
        for i in range(200):
            rank = (i + 7 * ridx) % 200
            rid = f"rec_s{i:03d}"
            acc_o = "0.75" if rank < 100 else "0.83"
            err_o = 1 if rank < 72 else 2
            acc_l = "0.76" if rank < 100 else "0.84"
            err_l = 1 if rank < 90 else 2
            acc_c = "0.95" if rank < 100 else "0.99"
            err_c = 0 if rank < 30 else 1
            rows.append(f"{reviewer},{rid},original,{acc_o},{err_o}")
            rows.append(f"{reviewer},{rid},llm,{acc_l},{err_l}")
            rows.append(f"{reviewer},{rid},llm_cedar,{acc_c},{err_c}")
    write("reviews/reviewer_scores.csv", "\n".join(rows) + "\n")


def main():
    write("template_biosample.json", json.dumps(TEMPLATE, indent=2) + "\n")
    write("dictionary_biosample_human.txt",
          "# BioSample human package field names (one per line)\n" +
          "\n".join(DICTIONARY) + "\n")
    write("ontologies/uberon_slice.txt", term_list_text(UBERON_TERMS, "UBERON anatomy slice"))
    write("ontologies/doid_slice.txt", term_list_text(DOID_TERMS, "Disease Ontology slice"))
    write("ontologies/cl_slice.txt", term_list_text(CL_TERMS, "Cell Ontology slice"))
    write("ontologies/uberon_mini.obo", OBO_MINI)
    write("surrogate_aliases.json", json.dumps(ALIASES, indent=2, sort_keys=True) + "\n")
    write("corpora/example_record.jsonl",
          record_line("SAMN_EX_0001", "original",
                      [("isolate", "TN_32"), ("age", "67"),
                       ("sex", "female"), ("tissue", "lung cancer")]) + "\n")
    gen_fixture_corpus()
    gen_corrupted_corpus()
    gen_reviewer_scores()


if __name__ == "__main__":
    main()
