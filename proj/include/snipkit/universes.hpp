#pragma once

// Target and citing universes per indicator variant.
//
// The original variant counts citations from the whole database. The
// modified variant excludes three sets of citing journals, applied in
// order:
//   a. trade journals
//   b. journals without a publication in every year of the continuity
//      window [Y - continuity_span + 1, Y]
//   c. journals whose year-Y peer-reviewed publications have an
//      active-reference share below min_active_ref_share
// Sets a and b also disqualify a journal as a *target*; set c applies to
// citing journals only. The modified variant additionally deletes target
// documents with zero cited references of any kind.

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "snipkit/corpus.hpp"
#include "snipkit/errors.hpp"

namespace snipkit {

enum class Variant { original, modified };

enum class Normalization { weighted_mean_cp, exact_mean_one };

inline std::string to_string(Variant v) {
    return v == Variant::original ? "original" : "modified";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "original") return Variant::original;
    if (s == "modified") return Variant::modified;
    throw ConfigError("unknown variant: " + s);
}

inline std::string to_string(Normalization n) {
    return n == Normalization::weighted_mean_cp ? "weighted_mean_cp" : "exact_mean_one";
}

inline Normalization normalization_from_string(const std::string& s) {
    if (s == "weighted_mean_cp" || s == "weighted-mean-cp") return Normalization::weighted_mean_cp;
    if (s == "exact_mean_one" || s == "exact-mean-one") return Normalization::exact_mean_one;
    throw ConfigError("unknown normalization: " + s);
}

struct UniverseSpec {
    int citing_year = 0;                  // Y
    int target_window = 3;                // k: targets published in [Y-k, Y-1]
    int field_window = 8;                 // w: original subject-field window [Y-w, Y-1]
    Variant variant = Variant::original;
    double min_active_ref_share = 0.20;   // set c threshold (share >= threshold is retained)
    int continuity_span = 4;              // set b window length, anchored at Y
    bool exclude_trade = true;            // set a toggle (modified only)
    Normalization normalization = Normalization::weighted_mean_cp;  // modified only

    int target_from() const { return citing_year - target_window; }
    int target_to() const { return citing_year - 1; }
    int field_from() const { return citing_year - field_window; }

    void validate(const Corpus& corpus) const {
        if (target_window < 1) throw ConfigError("target_window must be >= 1");
        if (target_window > field_window)
            throw ConfigError("target_window must not exceed field_window");
        if (continuity_span < 1) throw ConfigError("continuity_span must be >= 1");
        if (min_active_ref_share < 0.0 || min_active_ref_share > 1.0)
            throw ConfigError("min_active_ref_share must lie in [0,1]");
        if (variant == Variant::original && normalization == Normalization::exact_mean_one)
            throw ConfigError("exact_mean_one applies to the modified variant only");
        // The original variant refuses truncated field windows rather than
        // silently biasing the citation potential.
        if (variant == Variant::original && corpus.year_range() &&
            field_from() < corpus.year_range()->first)
            throw ConfigError("field window [" + std::to_string(field_from()) + "," +
                              std::to_string(target_to()) + "] starts before corpus coverage (" +
                              std::to_string(corpus.year_range()->first) + ")");
    }
};

struct UniverseReport {
    Variant variant = Variant::original;
    int citing_year = 0;
    std::size_t journals_total = 0;                // all journals in the corpus
    std::size_t journals_publishing_in_year = 0;   // share denominator
    std::size_t excluded_trade = 0;                // set a
    std::size_t excluded_continuity = 0;           // set b
    std::size_t excluded_low_active_share = 0;     // set c
    std::size_t retained_citing_journals = 0;
    std::size_t deleted_zero_reference_targets = 0;

    double share_pct(std::size_t count) const {
        if (journals_publishing_in_year == 0) return 0.0;
        return 100.0 * static_cast<double>(count) /
               static_cast<double>(journals_publishing_in_year);
    }
};

inline constexpr bool is_peer_reviewed(DocType t) {
    return t == DocType::article || t == DocType::review || t == DocType::conference_paper;
}

inline bool is_peer_reviewed(const DocumentRecord& doc) { return is_peer_reviewed(doc.doc_type); }

// Set b: at least one publication (of any type) in every year of the window.
inline bool publishes_continuously(const Corpus& corpus, const std::string& journal_id,
                                   const UniverseSpec& spec) {
    for (int y = spec.citing_year - spec.continuity_span + 1; y <= spec.citing_year; ++y)
        if (!corpus.publishes_in_year(journal_id, y)) return false;
    return true;
}

// Under the modified variant, sets a and b disqualify a journal as a target.
inline bool excluded_as_target(const Corpus& corpus, const JournalRecord& journal,
                               const UniverseSpec& spec) {
    if (spec.variant != Variant::modified) return false;
    if (spec.exclude_trade && journal.kind == JournalKind::trade) return true;
    return !publishes_continuously(corpus, journal.journal_id, spec);
}

// Count of references that are resolved, cite a peer-reviewed document
// published in [Y-k, Y-1], and whose target journal is not excluded as a
// target under the spec's variant.
inline int active_reference_count(const DocumentRecord& doc, const Corpus& corpus,
                                  const UniverseSpec& spec) {
    int count = 0;
    for (const auto& ref : doc.references) {
        if (!ref.target) continue;
        const DocumentRecord* target = corpus.find_document(*ref.target);
        if (!target) continue;
        if (target->pub_year < spec.target_from() || target->pub_year > spec.target_to())
            continue;
        if (!is_peer_reviewed(*target)) continue;
        if (excluded_as_target(corpus, corpus.journal_checked(target->journal_id), spec))
            continue;
        ++count;
    }
    return count;
}

// Peer-reviewed documents of the journal published in [Y-k, Y-1], sorted.
// Modified variant: drops documents with zero references of any kind, and
// returns nothing when the journal itself is excluded as a target.
inline std::vector<std::string> target_documents(const Corpus& corpus,
                                                 const std::string& journal_id,
                                                 const UniverseSpec& spec) {
    const JournalRecord& journal = corpus.journal_checked(journal_id);
    std::vector<std::string> out;
    if (excluded_as_target(corpus, journal, spec)) return out;
    for (int y = spec.target_from(); y <= spec.target_to(); ++y) {
        for (const auto& doc_id : corpus.journal_documents(journal_id, y)) {
            const DocumentRecord& doc = *corpus.find_document(doc_id);
            if (!is_peer_reviewed(doc)) continue;
            if (spec.variant == Variant::modified && doc.references.empty()) continue;
            out.push_back(doc_id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct CitingUniverse {
    std::set<std::string> journals;
    UniverseReport report;
};

// Share of a journal's year-Y peer-reviewed publications that carry at
// least one active reference.
inline double active_reference_share(const Corpus& corpus, const std::string& journal_id,
                                     const UniverseSpec& spec) {
    long total = 0, with_active = 0;
    for (const auto& doc_id : corpus.journal_documents(journal_id, spec.citing_year)) {
        const DocumentRecord& doc = *corpus.find_document(doc_id);
        if (!is_peer_reviewed(doc)) continue;
        ++total;
        if (active_reference_count(doc, corpus, spec) >= 1) ++with_active;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(with_active) / static_cast<double>(total);
}

inline CitingUniverse citing_universe(const Corpus& corpus, const UniverseSpec& spec) {
    CitingUniverse result;
    UniverseReport& report = result.report;
    report.variant = spec.variant;
    report.citing_year = spec.citing_year;
    report.journals_total = corpus.journals().size();
    for (const auto& [id, journal] : corpus.journals())
        if (corpus.publishes_in_year(id, spec.citing_year)) ++report.journals_publishing_in_year;

    if (spec.variant == Variant::original) {
        for (const auto& [id, journal] : corpus.journals()) result.journals.insert(id);
        report.retained_citing_journals = result.journals.size();
        return result;
    }

    // sequential application: a, then b, then c
    for (const auto& [id, journal] : corpus.journals()) {
        if (!corpus.publishes_in_year(id, spec.citing_year)) continue;
        if (spec.exclude_trade && journal.kind == JournalKind::trade) {
            ++report.excluded_trade;
            continue;
        }
        if (!publishes_continuously(corpus, id, spec)) {
            ++report.excluded_continuity;
            continue;
        }
        if (active_reference_share(corpus, id, spec) < spec.min_active_ref_share) {
            ++report.excluded_low_active_share;
            continue;
        }
        result.journals.insert(id);
    }
    report.retained_citing_journals = result.journals.size();

    for (const auto& [id, journal] : corpus.journals()) {
        if (excluded_as_target(corpus, journal, spec)) continue;
        for (int y = spec.target_from(); y <= spec.target_to(); ++y)
            for (const auto& doc_id : corpus.journal_documents(id, y)) {
                const DocumentRecord& doc = *corpus.find_document(doc_id);
                if (is_peer_reviewed(doc) && doc.references.empty())
                    ++report.deleted_zero_reference_targets;
            }
    }
    return result;
}

// The journal's subject field: peer-reviewed year-Y documents from citing
// universe journals with at least one resolved reference to an eligible
// document of the journal. The original variant looks back field_window
// years without target deletions; the modified variant uses exactly the
// target document set.
inline std::vector<std::string> subject_field(const Corpus& corpus,
                                              const std::string& journal_id,
                                              const UniverseSpec& spec,
                                              const std::set<std::string>& universe_journals) {
    corpus.journal_checked(journal_id);
    std::set<std::string> cited_docs;
    if (spec.variant == Variant::modified) {
        auto targets = target_documents(corpus, journal_id, spec);
        cited_docs.insert(targets.begin(), targets.end());
    } else {
        for (int y = spec.field_from(); y <= spec.target_to(); ++y)
            for (const auto& doc_id : corpus.journal_documents(journal_id, y))
                if (is_peer_reviewed(*corpus.find_document(doc_id))) cited_docs.insert(doc_id);
    }

    std::set<std::string> citers;
    for (const auto& target : cited_docs) {
        for (const auto& citer_id : corpus.citations_to(target, spec.citing_year)) {
            const DocumentRecord& citer = *corpus.find_document(citer_id);
            if (!is_peer_reviewed(citer)) continue;
            if (!universe_journals.count(citer.journal_id)) continue;
            citers.insert(citer_id);
        }
    }
    return {citers.begin(), citers.end()};
}

inline std::vector<std::string> subject_field(const Corpus& corpus,
                                              const std::string& journal_id,
                                              const UniverseSpec& spec) {
    return subject_field(corpus, journal_id, spec, citing_universe(corpus, spec).journals);
}

inline nlohmann::json universe_report_to_json(const UniverseReport& r) {
    return nlohmann::json{
        {"variant", to_string(r.variant)},
        {"citing_year", r.citing_year},
        {"journals_total", r.journals_total},
        {"journals_publishing_in_year", r.journals_publishing_in_year},
        {"excluded_trade",
         {{"count", r.excluded_trade}, {"share_pct", r.share_pct(r.excluded_trade)}}},
        {"excluded_continuity",
         {{"count", r.excluded_continuity}, {"share_pct", r.share_pct(r.excluded_continuity)}}},
        {"excluded_low_active_share",
         {{"count", r.excluded_low_active_share},
          {"share_pct", r.share_pct(r.excluded_low_active_share)}}},
        {"retained_citing_journals", r.retained_citing_journals},
        {"deleted_zero_reference_targets", r.deleted_zero_reference_targets},
    };
}

inline UniverseReport universe_report_from_json(const nlohmann::json& j) {
    UniverseReport r;
    r.variant = variant_from_string(j.at("variant").get<std::string>());
    r.citing_year = j.at("citing_year").get<int>();
    r.journals_total = j.at("journals_total").get<std::size_t>();
    r.journals_publishing_in_year = j.at("journals_publishing_in_year").get<std::size_t>();
    r.excluded_trade = j.at("excluded_trade").at("count").get<std::size_t>();
    r.excluded_continuity = j.at("excluded_continuity").at("count").get<std::size_t>();
    r.excluded_low_active_share =
        j.at("excluded_low_active_share").at("count").get<std::size_t>();
    r.retained_citing_journals = j.at("retained_citing_journals").get<std::size_t>();
    r.deleted_zero_reference_targets = j.at("deleted_zero_reference_targets").get<std::size_t>();
    return r;
}

inline std::string universe_report_to_markdown(const UniverseReport& r) {
    char buf[64];
    auto pct = [&](std::size_t count) {
        std::snprintf(buf, sizeof(buf), "%.1f%%", r.share_pct(count));
        return std::string(buf);
    };
    std::string md;
    md += "| exclusion set | journals | share |\n";
    md += "|---|---|---|\n";
    md += "| a. trade journals | " + std::to_string(r.excluded_trade) + " | " +
          pct(r.excluded_trade) + " |\n";
    md += "| b. non-continuous publishing | " + std::to_string(r.excluded_continuity) + " | " +
          pct(r.excluded_continuity) + " |\n";
    md += "| c. low active-reference share | " + std::to_string(r.excluded_low_active_share) +
          " | " + pct(r.excluded_low_active_share) + " |\n";
    md += "| retained citing journals | " + std::to_string(r.retained_citing_journals) +
          " | " + pct(r.retained_citing_journals) + " |\n";
    md += "\nJournals publishing in " + std::to_string(r.citing_year) + ": " +
          std::to_string(r.journals_publishing_in_year) + " of " +
          std::to_string(r.journals_total) + " total. Zero-reference target documents deleted: " +
          std::to_string(r.deleted_zero_reference_targets) + ".\n";
    return md;
}

}  // namespace snipkit
