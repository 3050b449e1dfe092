#pragma once

// Corpus data model: journals, documents, references, and the derived
// citation indices. A Corpus is immutable after build() and safe to share
// across threads.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snipkit/errors.hpp"

namespace snipkit {

enum class JournalKind { peer_reviewed, trade };

enum class DocType { article, review, conference_paper, editorial, letter, other };

inline std::string to_string(JournalKind k) {
    return k == JournalKind::trade ? "trade" : "peer_reviewed";
}

inline JournalKind journal_kind_from_string(const std::string& s) {
    if (s == "peer_reviewed") return JournalKind::peer_reviewed;
    if (s == "trade") return JournalKind::trade;
    throw DataError("unknown journal_kind: " + s);
}

inline std::string to_string(DocType t) {
    switch (t) {
        case DocType::article: return "article";
        case DocType::review: return "review";
        case DocType::conference_paper: return "conference_paper";
        case DocType::editorial: return "editorial";
        case DocType::letter: return "letter";
        case DocType::other: return "other";
    }
    return "other";
}

inline DocType doc_type_from_string(const std::string& s) {
    if (s == "article") return DocType::article;
    if (s == "review") return DocType::review;
    if (s == "conference_paper") return DocType::conference_paper;
    if (s == "editorial") return DocType::editorial;
    if (s == "letter") return DocType::letter;
    if (s == "other") return DocType::other;
    throw DataError("unknown doc_type: " + s);
}

// A cited reference. `target` names the cited document when the reference
// is matched to the database; a target that does not resolve is kept (for
// validation reporting) but behaves as unresolved everywhere else.
struct Reference {
    std::optional<std::string> target;
    std::optional<int> cited_year;
};

struct JournalRecord {
    std::string journal_id;
    std::string title;
    JournalKind kind = JournalKind::peer_reviewed;
    std::set<std::string> field_ids;
    bool active = true;
};

struct DocumentRecord {
    std::string doc_id;
    std::string journal_id;
    int pub_year = 0;
    DocType doc_type = DocType::article;
    std::vector<Reference> references;
};

struct YearRange {
    int first = 0;
    int last = 0;
};

struct BuildOptions {
    // strict: a reference whose target is not in the corpus is an error.
    // lenient (default): it is kept and treated as unresolved.
    bool strict = false;
};

class Corpus {
public:
    Corpus() = default;

    static Corpus build(std::vector<JournalRecord> journals,
                        std::vector<DocumentRecord> documents,
                        BuildOptions options = {}) {
        Corpus c;
        for (auto& j : journals) {
            auto key = j.journal_id;
            if (!c.journals_.emplace(key, std::move(j)).second)
                throw DataError("duplicate journal_id: " + key);
        }
        for (auto& d : documents) {
            auto key = d.doc_id;
            if (!c.journals_.count(d.journal_id))
                throw DataError("document " + key + " names unknown journal_id: " + d.journal_id);
            if (!c.documents_.emplace(key, std::move(d)).second)
                throw DataError("duplicate doc_id: " + key);
        }

        for (auto& [doc_id, doc] : c.documents_) {
            if (!c.year_range_) {
                c.year_range_ = YearRange{doc.pub_year, doc.pub_year};
            } else {
                c.year_range_->first = std::min(c.year_range_->first, doc.pub_year);
                c.year_range_->last = std::max(c.year_range_->last, doc.pub_year);
            }
            c.journal_year_docs_[doc.journal_id][doc.pub_year].push_back(doc_id);
        }

        // Citation index: one instance per resolved reference. Iterating
        // documents_ in key order keeps every instance list sorted by
        // citing doc_id without an extra sort.
        for (auto& [doc_id, doc] : c.documents_) {
            for (auto& ref : doc.references) {
                ++c.total_refs_;
                if (!ref.target) continue;
                auto it = c.documents_.find(*ref.target);
                if (it == c.documents_.end()) {
                    if (options.strict)
                        throw DataError("document " + doc_id +
                                        " references unknown doc_id: " + *ref.target);
                    continue;  // demoted to unresolved
                }
                if (!ref.cited_year)
                    throw DataError("document " + doc_id + " reference to " + *ref.target +
                                    " lacks cited_year");
                if (*ref.cited_year != it->second.pub_year)
                    throw DataError("document " + doc_id + " reference to " + *ref.target +
                                    " has cited_year " + std::to_string(*ref.cited_year) +
                                    " but target pub_year is " +
                                    std::to_string(it->second.pub_year));
                ++c.resolved_refs_;
                c.citations_[*ref.target][doc.pub_year].push_back(doc_id);
            }
        }
        return c;
    }

    const std::map<std::string, JournalRecord>& journals() const { return journals_; }
    const std::map<std::string, DocumentRecord>& documents() const { return documents_; }
    std::optional<YearRange> year_range() const { return year_range_; }

    const JournalRecord* find_journal(const std::string& id) const {
        auto it = journals_.find(id);
        return it == journals_.end() ? nullptr : &it->second;
    }

    const DocumentRecord* find_document(const std::string& id) const {
        auto it = documents_.find(id);
        return it == documents_.end() ? nullptr : &it->second;
    }

    const JournalRecord& journal_checked(const std::string& id) const {
        const JournalRecord* j = find_journal(id);
        if (!j) throw DataError("unknown journal_id: " + id);
        return *j;
    }

    bool is_resolved(const Reference& ref) const {
        return ref.target && documents_.count(*ref.target) > 0;
    }

    // Citing doc ids, sorted, one entry per resolved reference (so a
    // document citing the target twice appears twice).
    const std::vector<std::string>& citations_to(const std::string& doc_id,
                                                 int citing_year) const {
        if (!documents_.count(doc_id)) throw DataError("unknown doc_id: " + doc_id);
        static const std::vector<std::string> empty;
        auto it = citations_.find(doc_id);
        if (it == citations_.end()) return empty;
        auto yt = it->second.find(citing_year);
        return yt == it->second.end() ? empty : yt->second;
    }

    // doc ids of a journal in one year, sorted; empty when none.
    const std::vector<std::string>& journal_documents(const std::string& journal_id,
                                                      int year) const {
        static const std::vector<std::string> empty;
        auto it = journal_year_docs_.find(journal_id);
        if (it == journal_year_docs_.end()) return empty;
        auto yt = it->second.find(year);
        return yt == it->second.end() ? empty : yt->second;
    }

    long publications_in_year(const std::string& journal_id, int year) const {
        return static_cast<long>(journal_documents(journal_id, year).size());
    }

    bool publishes_in_year(const std::string& journal_id, int year) const {
        return publications_in_year(journal_id, year) > 0;
    }

    std::size_t total_references() const { return total_refs_; }
    std::size_t resolved_references() const { return resolved_refs_; }

    std::size_t citation_instance_count() const {
        std::size_t n = 0;
        for (const auto& [doc, by_year] : citations_)
            for (const auto& [year, citers] : by_year) n += citers.size();
        return n;
    }

    // Record copies for corpus transformations (merge, add-citation, save).
    std::vector<JournalRecord> journal_records() const {
        std::vector<JournalRecord> out;
        out.reserve(journals_.size());
        for (const auto& [id, j] : journals_) out.push_back(j);
        return out;
    }

    std::vector<DocumentRecord> document_records() const {
        std::vector<DocumentRecord> out;
        out.reserve(documents_.size());
        for (const auto& [id, d] : documents_) out.push_back(d);
        return out;
    }

private:
    std::map<std::string, JournalRecord> journals_;
    std::map<std::string, DocumentRecord> documents_;
    // target doc -> citing year -> citing doc ids
    std::map<std::string, std::map<int, std::vector<std::string>>> citations_;
    // journal -> year -> doc ids
    std::map<std::string, std::map<int, std::vector<std::string>>> journal_year_docs_;
    std::optional<YearRange> year_range_;
    std::size_t total_refs_ = 0;
    std::size_t resolved_refs_ = 0;
};

enum class Severity { fatal, warning };

struct Finding {
    Severity severity;
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    std::size_t n_journals = 0;
    std::size_t n_documents = 0;
    std::size_t n_references = 0;
    std::size_t n_resolved = 0;

    std::size_t fatal_count() const {
        std::size_t n = 0;
        for (const auto& f : findings)
            if (f.severity == Severity::fatal) ++n;
        return n;
    }
    std::size_t warning_count() const { return findings.size() - fatal_count(); }
};

inline ValidationReport validate_corpus(const Corpus& corpus) {
    ValidationReport report;
    report.n_journals = corpus.journals().size();
    report.n_documents = corpus.documents().size();
    report.n_references = corpus.total_references();
    report.n_resolved = corpus.resolved_references();

    std::size_t unresolved = 0;
    std::size_t other_typed = 0;
    for (const auto& [doc_id, doc] : corpus.documents()) {
        if (!corpus.find_journal(doc.journal_id))
            report.findings.push_back({Severity::fatal, "dangling_journal",
                                       "document " + doc_id + " names unknown journal_id " +
                                           doc.journal_id});
        if (doc.doc_type == DocType::other) ++other_typed;
        for (const auto& ref : doc.references) {
            if (!corpus.is_resolved(ref)) {
                ++unresolved;
                if (ref.target)
                    report.findings.push_back(
                        {Severity::fatal, "dangling_reference",
                         "document " + doc_id + " references missing doc_id " + *ref.target});
            } else if (ref.cited_year &&
                       *ref.cited_year != corpus.find_document(*ref.target)->pub_year) {
                report.findings.push_back(
                    {Severity::fatal, "cited_year_mismatch",
                     "document " + doc_id + " reference to " + *ref.target +
                         " disagrees with the target's pub_year"});
            }
        }
    }

    // index consistency: every citation instance is one resolved reference
    if (corpus.citation_instance_count() != corpus.resolved_references())
        report.findings.push_back({Severity::fatal, "index_mismatch",
                                   "citation index disagrees with resolved reference count"});

    if (unresolved > 0) {
        double share = 100.0 * static_cast<double>(unresolved) /
                       static_cast<double>(report.n_references);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.1f", share);
        report.findings.push_back({Severity::warning, "unresolved_references",
                                   std::string(buf) + "% of references are unresolved (" +
                                       std::to_string(unresolved) + " of " +
                                       std::to_string(report.n_references) + ")"});
    }
    if (other_typed > 0)
        report.findings.push_back({Severity::warning, "other_typed_documents",
                                   std::to_string(other_typed) +
                                       " documents have doc_type 'other'"});
    return report;
}

}  // namespace snipkit
