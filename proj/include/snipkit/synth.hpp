#pragma once

// Seeded synthetic corpus generation and scenario builders for the
// consistency-criterion experiments.
//
// Randomness comes from SplitMix64 streams keyed by (seed, journal, year,
// document index), so every document draws from its own stream: adding a
// field or journal to the config never perturbs the draws of the others.
// No std::random distribution is used anywhere, which keeps generated
// corpora identical across platforms and standard libraries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "snipkit/corpus.hpp"
#include "snipkit/errors.hpp"
#include "snipkit/universes.hpp"

namespace snipkit {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
    return s.next();
}

// Knuth's product-of-uniforms sampler; adequate for the configured means.
inline int sample_poisson(SplitMix64& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.next_unit();
    } while (p > limit);
    return k - 1;
}

enum class RefCountModel { poisson, constant };

inline std::string to_string(RefCountModel m) {
    return m == RefCountModel::poisson ? "poisson" : "constant";
}

inline RefCountModel ref_count_model_from_string(const std::string& s) {
    if (s == "poisson") return RefCountModel::poisson;
    if (s == "constant") return RefCountModel::constant;
    throw ConfigError("unknown ref_count_model: " + s);
}

struct FieldSpec {
    std::string field_id;
    int n_journals = 0;
    int pubs_per_journal_per_year = 0;
    double mean_refs_per_doc = 0.0;
    std::vector<double> ref_age_weights;  // weight of lag 1, lag 2, ...
    double within_field_citation_share = 1.0;
    double resolved_share = 1.0;
};

struct SynthConfig {
    std::uint64_t seed = 0;
    YearRange years{};
    RefCountModel ref_count_model = RefCountModel::poisson;
    std::vector<FieldSpec> fields;

    void validate() const {
        if (years.last < years.first) throw ConfigError("synth: empty year range");
        int max_lag = 0;
        for (const auto& f : fields) {
            if (f.field_id.empty()) throw ConfigError("synth: field_id must not be empty");
            if (f.n_journals < 0 || f.pubs_per_journal_per_year < 0)
                throw ConfigError("synth: negative counts in field " + f.field_id);
            if (f.mean_refs_per_doc < 0)
                throw ConfigError("synth: negative mean_refs_per_doc in field " + f.field_id);
            if (f.within_field_citation_share < 0 || f.within_field_citation_share > 1 ||
                f.resolved_share < 0 || f.resolved_share > 1)
                throw ConfigError("synth: shares must lie in [0,1] in field " + f.field_id);
            if (f.mean_refs_per_doc > 0) {
                if (f.ref_age_weights.empty())
                    throw ConfigError("synth: field " + f.field_id + " needs ref_age_weights");
                double sum = 0;
                for (double w : f.ref_age_weights) {
                    if (w < 0) throw ConfigError("synth: negative age weight in " + f.field_id);
                    sum += w;
                }
                if (!(sum > 0))
                    throw ConfigError("synth: zero age weight sum in field " + f.field_id);
                max_lag = std::max(max_lag, static_cast<int>(f.ref_age_weights.size()));
            }
        }
        if (max_lag > 0 && years.last - years.first + 1 < max_lag + 1)
            throw ConfigError("synth: year range shorter than the configured reference lags");
    }
};

namespace synth_detail {

inline std::string journal_id_for(const FieldSpec& field, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", index);
    return "J_" + field.field_id + "_" + buf;
}

inline std::string doc_id_for(const std::string& journal_id, int year, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", index);
    return "D_" + journal_id + "_" + std::to_string(year) + "_" + buf;
}

// Uniform pick from the formulaic document population of (field, year).
inline std::string pick_target(SplitMix64& rng, const FieldSpec& field, int year) {
    std::uint64_t pool = static_cast<std::uint64_t>(field.n_journals) *
                         static_cast<std::uint64_t>(field.pubs_per_journal_per_year);
    std::uint64_t pick = rng.next_below(pool);
    int journal = static_cast<int>(pick / field.pubs_per_journal_per_year);
    int doc = static_cast<int>(pick % field.pubs_per_journal_per_year);
    return doc_id_for(journal_id_for(field, journal), year, doc);
}

inline int sample_lag(SplitMix64& rng, const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = rng.next_unit() * total;
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(weights.size());
}

}  // namespace synth_detail

inline Corpus generate_corpus(const SynthConfig& config) {
    config.validate();

    std::vector<JournalRecord> journals;
    std::vector<DocumentRecord> docs;

    for (const auto& field : config.fields) {
        for (int j = 0; j < field.n_journals; ++j) {
            JournalRecord journal;
            journal.journal_id = synth_detail::journal_id_for(field, j);
            journal.title = "Synthetic Journal " + journal.journal_id;
            journal.kind = JournalKind::peer_reviewed;
            journal.field_ids = {field.field_id};
            journal.active = true;
            journals.push_back(std::move(journal));
        }
    }

    for (std::size_t fi = 0; fi < config.fields.size(); ++fi) {
        const FieldSpec& field = config.fields[fi];
        for (int j = 0; j < field.n_journals; ++j) {
            std::string journal_id = synth_detail::journal_id_for(field, j);
            std::uint64_t journal_seed = mix_seed(config.seed, fnv1a64(journal_id));
            for (int year = config.years.first; year <= config.years.last; ++year) {
                for (int d = 0; d < field.pubs_per_journal_per_year; ++d) {
                    SplitMix64 rng(mix_seed(journal_seed,
                                            (static_cast<std::uint64_t>(year) << 20) +
                                                static_cast<std::uint64_t>(d)));
                    DocumentRecord doc;
                    doc.doc_id = synth_detail::doc_id_for(journal_id, year, d);
                    doc.journal_id = journal_id;
                    doc.pub_year = year;
                    doc.doc_type = DocType::article;

                    int n_refs = config.ref_count_model == RefCountModel::poisson
                                     ? sample_poisson(rng, field.mean_refs_per_doc)
                                     : static_cast<int>(std::lround(field.mean_refs_per_doc));
                    for (int r = 0; r < n_refs; ++r) {
                        int lag = synth_detail::sample_lag(rng, field.ref_age_weights);
                        int cited_year = year - lag;
                        bool resolved = rng.next_unit() < field.resolved_share;
                        const FieldSpec* target_field = &field;
                        if (config.fields.size() > 1 &&
                            rng.next_unit() >= field.within_field_citation_share) {
                            std::uint64_t other =
                                rng.next_below(config.fields.size() - 1);
                            if (other >= fi) ++other;
                            target_field = &config.fields[other];
                        }
                        Reference ref;
                        ref.cited_year = cited_year;
                        if (resolved && cited_year >= config.years.first &&
                            target_field->n_journals > 0 &&
                            target_field->pubs_per_journal_per_year > 0) {
                            ref.target =
                                synth_detail::pick_target(rng, *target_field, cited_year);
                        }
                        doc.references.push_back(std::move(ref));
                    }
                    docs.push_back(std::move(doc));
                }
            }
        }
    }
    return Corpus::build(std::move(journals), std::move(docs));
}

// ---------------------------------------------------------------------------
// Scenario builders

// All documents of j2 move into j1; references are untouched; j2 vanishes.
// j1 keeps its journal_kind and field_ids.
inline Corpus merge_journals(const Corpus& corpus, const std::string& j1,
                             const std::string& j2) {
    if (j1 == j2) throw DataError("merge_journals: identical journal ids");
    corpus.journal_checked(j1);
    corpus.journal_checked(j2);
    std::vector<JournalRecord> journals;
    for (auto& j : corpus.journal_records())
        if (j.journal_id != j2) journals.push_back(std::move(j));
    auto docs = corpus.document_records();
    for (auto& d : docs)
        if (d.journal_id == j2) d.journal_id = j1;
    return Corpus::build(std::move(journals), std::move(docs));
}

// One new year-Y citing document in `citing_journal` carrying one reference
// to `target` plus (active_refs - 1) filler references to in-window
// peer-reviewed documents outside both the citing and the target journal.
inline Corpus add_citation(const Corpus& corpus, const std::string& citing_journal,
                           int active_refs, const std::string& target,
                           const UniverseSpec& spec) {
    if (active_refs < 1) throw ConfigError("add_citation: active_refs must be >= 1");
    corpus.journal_checked(citing_journal);
    const DocumentRecord* target_doc = corpus.find_document(target);
    if (!target_doc) throw DataError("add_citation: unknown target doc_id: " + target);

    // filler pool: must count as active under both variants
    UniverseSpec as_modified = spec;
    as_modified.variant = Variant::modified;
    std::vector<std::string> pool;
    for (const auto& [id, doc] : corpus.documents()) {
        if (doc.pub_year < spec.target_from() || doc.pub_year > spec.target_to()) continue;
        if (!is_peer_reviewed(doc)) continue;
        if (doc.journal_id == citing_journal || doc.journal_id == target_doc->journal_id)
            continue;
        if (excluded_as_target(corpus, corpus.journal_checked(doc.journal_id), as_modified))
            continue;
        pool.push_back(id);
    }
    if (active_refs > 1 && pool.empty())
        throw DataError("add_citation: no filler target documents available");

    DocumentRecord doc;
    int serial = 0;
    while (corpus.find_document("added_citation_" + std::to_string(serial))) ++serial;
    doc.doc_id = "added_citation_" + std::to_string(serial);
    doc.journal_id = citing_journal;
    doc.pub_year = spec.citing_year;
    doc.doc_type = DocType::article;
    Reference primary;
    primary.target = target;
    primary.cited_year = target_doc->pub_year;
    doc.references.push_back(std::move(primary));
    for (int i = 0; i < active_refs - 1; ++i) {
        const std::string& filler = pool[static_cast<std::size_t>(i) % pool.size()];
        Reference ref;
        ref.target = filler;
        ref.cited_year = corpus.find_document(filler)->pub_year;
        doc.references.push_back(std::move(ref));
    }

    auto journals = corpus.journal_records();
    auto docs = corpus.document_records();
    docs.push_back(std::move(doc));
    return Corpus::build(std::move(journals), std::move(docs));
}

// Merge-anomaly fixture: journals A and B with equal SNIP-relevant ratios
// (rip/cp = 0.2) built from citing journals with a factor-2 spread in
// reference intensity. Merging A and B drops the original-variant ratio to
// 0.18 = 0.9 * 0.2 while the modified variant stays at 0.2.
struct MergeFixture {
    Corpus corpus;
    std::string journal_a = "A";
    std::string journal_b = "B";
    UniverseSpec spec;  // citing year 2010, defaults otherwise
    double expected_constituent_ratio = 0.2;
    double expected_merged_ratio = 0.18;
};

inline MergeFixture build_merge_fixture() {
    std::vector<JournalRecord> journals;
    for (const char* id : {"A", "B", "CA", "CB", "F"}) {
        JournalRecord j;
        j.journal_id = id;
        j.title = std::string("Fixture Journal ") + id;
        journals.push_back(std::move(j));
    }

    std::vector<DocumentRecord> docs;
    auto pad2 = [](int v) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%02d", v);
        return std::string(buf);
    };
    auto plain_doc = [&](const std::string& journal, int year, const std::string& id) {
        DocumentRecord d;
        d.doc_id = id;
        d.journal_id = journal;
        d.pub_year = year;
        d.doc_type = DocType::article;
        d.references = {Reference{std::nullopt, 2000}};
        docs.push_back(std::move(d));
    };

    // filler pool: 20 docs per year 2007-2009, plus corpus-edge years so the
    // original variant's eight-year field window fits
    std::vector<std::string> filler_pool;
    for (int year = 2002; year <= 2010; ++year) {
        int count = (year >= 2007 && year <= 2009) ? 20 : 1;
        for (int i = 0; i < count; ++i) {
            std::string id = "F_" + std::to_string(year) + "_" + pad2(i);
            plain_doc("F", year, id);
            if (year >= 2007 && year <= 2009) filler_pool.push_back(id);
        }
    }

    // target journals: 20 target docs each over 2007-2009 + one 2010 doc
    using Target = std::pair<std::string, int>;  // doc id, pub year
    std::vector<Target> targets_a, targets_b;
    for (const std::string jid : {std::string("A"), std::string("B")}) {
        int made = 0;
        for (int year : {2007, 2008, 2009}) {
            int count = (year == 2009) ? 6 : 7;
            for (int i = 0; i < count; ++i, ++made) {
                std::string id = jid + "_t" + pad2(made);
                DocumentRecord d;
                d.doc_id = id;
                d.journal_id = jid;
                d.pub_year = year;
                d.doc_type = DocType::article;
                d.references = {Reference{std::nullopt, 2000}};
                docs.push_back(std::move(d));
                (jid == "A" ? targets_a : targets_b).emplace_back(id, year);
            }
        }
        plain_doc(jid, 2010, jid + "_2010");
    }

    // CA: 80 citers in 2010, each citing one A target (4 per target) plus 19
    // filler references -> 20 active references per citer
    // CB: 40 citers, one B target each (2 per target) plus 9 fillers -> 10
    std::size_t filler_cursor = 0;
    auto make_citers = [&](const std::string& journal, int n, const std::vector<Target>& targets,
                           int fillers) {
        for (int i = 0; i < n; ++i) {
            DocumentRecord d;
            d.doc_id = journal + "_c" + pad2(i);
            d.journal_id = journal;
            d.pub_year = 2010;
            d.doc_type = DocType::article;
            const Target& t = targets[static_cast<std::size_t>(i) % targets.size()];
            d.references.push_back(Reference{t.first, t.second});
            for (int f = 0; f < fillers; ++f) {
                const std::string& filler = filler_pool[filler_cursor++ % filler_pool.size()];
                int fy = std::stoi(filler.substr(2, 4));
                d.references.push_back(Reference{filler, fy});
            }
            docs.push_back(std::move(d));
        }
        for (int year : {2007, 2008, 2009})
            plain_doc(journal, year, journal + "_" + std::to_string(year));
    };
    make_citers("CA", 80, targets_a, 19);
    make_citers("CB", 40, targets_b, 9);

    MergeFixture fixture;
    fixture.corpus = Corpus::build(std::move(journals), std::move(docs));
    fixture.spec.citing_year = 2010;
    return fixture;
}

// Criterion-1 fixture: target journal T with rip 1 and citation potential 5;
// one added citation carrying far more active references than the field mean
// drags the original SNIP down while the modified SNIP must rise.
struct AddCitationFixture {
    Corpus corpus;
    std::string target_journal = "T";
    std::string citing_journal = "Q";
    std::string target_doc = "T_t00";
    int added_active_refs = 100;
    UniverseSpec spec;
};

inline AddCitationFixture build_criterion1_fixture() {
    std::vector<JournalRecord> journals;
    for (const char* id : {"T", "Q", "F"}) {
        JournalRecord j;
        j.journal_id = id;
        j.title = std::string("Fixture Journal ") + id;
        journals.push_back(std::move(j));
    }

    std::vector<DocumentRecord> docs;
    auto pad2 = [](int v) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%02d", v);
        return std::string(buf);
    };
    auto plain_doc = [&](const std::string& journal, int year, const std::string& id) {
        DocumentRecord d;
        d.doc_id = id;
        d.journal_id = journal;
        d.pub_year = year;
        d.doc_type = DocType::article;
        d.references = {Reference{std::nullopt, 2000}};
        docs.push_back(std::move(d));
    };

    std::vector<std::string> filler_pool;
    for (int year = 2002; year <= 2010; ++year) {
        int count = (year >= 2007 && year <= 2009) ? 40 : 1;
        for (int i = 0; i < count; ++i) {
            std::string id = "F_" + std::to_string(year) + "_" + pad2(i);
            plain_doc("F", year, id);
            if (year >= 2007 && year <= 2009) filler_pool.push_back(id);
        }
    }

    // T: four targets, one per year pattern 2007/2008/2008/2009
    const int target_years[4] = {2007, 2008, 2008, 2009};
    std::vector<std::string> targets;
    for (int i = 0; i < 4; ++i) {
        std::string id = "T_t" + pad2(i);
        DocumentRecord d;
        d.doc_id = id;
        d.journal_id = "T";
        d.pub_year = target_years[i];
        d.doc_type = DocType::article;
        d.references = {Reference{std::nullopt, 2000}};
        docs.push_back(std::move(d));
        targets.push_back(id);
    }
    plain_doc("T", 2010, "T_2010");

    // Q: four citers, each citing one T target plus four fillers (five
    // active references each)
    std::size_t filler_cursor = 0;
    for (int i = 0; i < 4; ++i) {
        DocumentRecord d;
        d.doc_id = "Q_c" + pad2(i);
        d.journal_id = "Q";
        d.pub_year = 2010;
        d.doc_type = DocType::article;
        d.references.push_back(Reference{targets[i], target_years[i]});
        for (int f = 0; f < 4; ++f) {
            const std::string& filler = filler_pool[filler_cursor++ % filler_pool.size()];
            int fy = std::stoi(filler.substr(2, 4));
            d.references.push_back(Reference{filler, fy});
        }
        docs.push_back(std::move(d));
    }
    for (int year : {2007, 2008, 2009}) plain_doc("Q", year, "Q_" + std::to_string(year));

    AddCitationFixture fixture;
    fixture.corpus = Corpus::build(std::move(journals), std::move(docs));
    fixture.spec.citing_year = 2010;
    return fixture;
}

// ---------------------------------------------------------------------------
// Config file

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig config;
    config.seed = j.at("seed").get<std::uint64_t>();
    config.years.first = j.at("years").at("first").get<int>();
    config.years.last = j.at("years").at("last").get<int>();
    config.ref_count_model = ref_count_model_from_string(
        j.value("ref_count_model", std::string("poisson")));
    for (const auto& f : j.at("fields")) {
        FieldSpec field;
        field.field_id = f.at("field_id").get<std::string>();
        field.n_journals = f.at("n_journals").get<int>();
        field.pubs_per_journal_per_year = f.at("pubs_per_journal_per_year").get<int>();
        field.mean_refs_per_doc = f.at("mean_refs_per_doc").get<double>();
        if (f.contains("ref_age_weights"))
            field.ref_age_weights = f.at("ref_age_weights").get<std::vector<double>>();
        field.within_field_citation_share = f.value("within_field_citation_share", 1.0);
        field.resolved_share = f.value("resolved_share", 1.0);
        config.fields.push_back(std::move(field));
    }
    config.validate();
    return config;
}

inline nlohmann::json synth_config_to_json(const SynthConfig& config) {
    nlohmann::json fields = nlohmann::json::array();
    for (const auto& f : config.fields) {
        fields.push_back(nlohmann::json{
            {"field_id", f.field_id},
            {"n_journals", f.n_journals},
            {"pubs_per_journal_per_year", f.pubs_per_journal_per_year},
            {"mean_refs_per_doc", f.mean_refs_per_doc},
            {"ref_age_weights", f.ref_age_weights},
            {"within_field_citation_share", f.within_field_citation_share},
            {"resolved_share", f.resolved_share},
        });
    }
    return nlohmann::json{
        {"seed", config.seed},
        {"years", {{"first", config.years.first}, {"last", config.years.last}}},
        {"ref_count_model", to_string(config.ref_count_model)},
        {"fields", std::move(fields)},
    };
}

}  // namespace snipkit
