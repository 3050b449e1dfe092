#pragma once

// Consistency-criterion experiments.
//
// The criteria compare indicator values before and after a corpus edit
// while the citing universe, the target sets, the citing-journal reference
// intensities and the normalization constant stay frozen at their
// pre-edit values. Only the citation instances move.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snipkit/corpus.hpp"
#include "snipkit/indicators.hpp"
#include "snipkit/synth.hpp"
#include "snipkit/universes.hpp"

namespace snipkit {

struct FrozenModifiedContext {
    UniverseSpec spec;
    std::set<std::string> universe;
    std::map<std::string, std::vector<std::string>> targets;
    std::map<std::string, double> mean_active;  // r_q per citing journal
    std::optional<double> constant;             // weighted mean cp
};

inline FrozenModifiedContext freeze_modified_context(const Corpus& corpus,
                                                     const UniverseSpec& base) {
    FrozenModifiedContext ctx;
    ctx.spec = base;
    ctx.spec.variant = Variant::modified;
    ctx.universe = citing_universe(corpus, ctx.spec).journals;
    for (const auto& [id, journal] : corpus.journals())
        ctx.targets[id] = target_documents(corpus, id, ctx.spec);
    for (const auto& id : ctx.universe)
        if (auto r = journal_mean_active_refs(corpus, id, ctx.spec))
            ctx.mean_active.emplace(id, *r);
    IndicatorTable table = snip_modified(corpus, ctx.spec);
    ctx.constant = table.normalization_constant;
    return ctx;
}

// Modified snip of one journal against a frozen context. The corpus may
// contain new citing documents; their journals must already carry a frozen
// mean-active value.
inline std::optional<double> frozen_modified_snip(const Corpus& corpus,
                                                  const std::string& journal_id,
                                                  const FrozenModifiedContext& ctx) {
    auto it = ctx.targets.find(journal_id);
    if (it == ctx.targets.end() || it->second.empty() || !ctx.constant) return std::nullopt;
    auto instances =
        citation_instances(corpus, it->second, ctx.spec.citing_year, ctx.universe);
    if (instances.empty()) return std::nullopt;
    stats::CompensatedSum inv;
    for (const auto& citer_id : instances) {
        const DocumentRecord& citer = *corpus.find_document(citer_id);
        auto r = ctx.mean_active.find(citer.journal_id);
        if (r == ctx.mean_active.end())
            throw DataError("frozen context lacks r_q for citing journal " + citer.journal_id);
        inv.add(1.0 / r->second);
    }
    double pubs = static_cast<double>(it->second.size());
    double rip = static_cast<double>(instances.size()) / pubs;
    double cp = static_cast<double>(instances.size()) / inv.value();
    double rcp = cp / *ctx.constant;
    return rip / rcp;
}

struct FrozenOriginalContext {
    UniverseSpec spec;
    std::set<std::string> universe;
    std::map<std::string, std::vector<std::string>> targets;
    std::optional<double> median_cp;
};

inline FrozenOriginalContext freeze_original_context(const Corpus& corpus,
                                                     const UniverseSpec& base) {
    FrozenOriginalContext ctx;
    ctx.spec = base;
    ctx.spec.variant = Variant::original;
    ctx.spec.normalization = Normalization::weighted_mean_cp;
    ctx.universe = citing_universe(corpus, ctx.spec).journals;
    for (const auto& [id, journal] : corpus.journals())
        ctx.targets[id] = target_documents(corpus, id, ctx.spec);
    IndicatorTable table = snip_original(corpus, ctx.spec);
    ctx.median_cp = table.normalization_constant;
    return ctx;
}

// Original snip with the median frozen. The subject field and its mean
// active references are recomputed from the corpus at hand: an arriving
// citation changes the evidence about the field.
inline std::optional<double> frozen_original_snip(const Corpus& corpus,
                                                  const std::string& journal_id,
                                                  const FrozenOriginalContext& ctx) {
    auto it = ctx.targets.find(journal_id);
    if (it == ctx.targets.end() || it->second.empty() || !ctx.median_cp ||
        !(*ctx.median_cp > 0.0))
        return std::nullopt;
    auto instances =
        citation_instances(corpus, it->second, ctx.spec.citing_year, ctx.universe);
    double rip = static_cast<double>(instances.size()) /
                 static_cast<double>(it->second.size());
    auto field = subject_field(corpus, journal_id, ctx.spec, ctx.universe);
    if (field.empty()) return std::nullopt;
    stats::CompensatedSum sum;
    for (const auto& doc_id : field)
        sum.add(active_reference_count(*corpus.find_document(doc_id), corpus, ctx.spec));
    double cp = sum.value() / static_cast<double>(field.size());
    if (!(cp > 0.0)) return std::nullopt;
    double rcp = cp / *ctx.median_cp;
    return rip / rcp;
}

// ---------------------------------------------------------------------------

struct AddCitationExperiment {
    bool applicable = false;
    std::string target_journal;
    std::string citing_journal;
    std::string target_doc;
    int added_active_refs = 0;
    std::optional<double> original_before, original_after;
    std::optional<double> modified_before, modified_after;

    std::optional<double> original_delta() const {
        if (!original_before || !original_after) return std::nullopt;
        return *original_after - *original_before;
    }
    std::optional<double> modified_delta() const {
        if (!modified_before || !modified_after) return std::nullopt;
        return *modified_after - *modified_before;
    }
    // criterion 1: an additional citation must increase the indicator
    bool modified_criterion_holds() const {
        auto d = modified_delta();
        return d && *d > 0.0;
    }
    bool original_criterion_violated() const {
        auto d = original_delta();
        return d && *d < 0.0;
    }
};

inline AddCitationExperiment run_add_citation_experiment(const Corpus& corpus,
                                                         const UniverseSpec& base,
                                                         const std::string& citing_journal,
                                                         int active_refs,
                                                         const std::string& target_doc) {
    AddCitationExperiment exp;
    exp.citing_journal = citing_journal;
    exp.target_doc = target_doc;
    exp.added_active_refs = active_refs;
    const DocumentRecord* target = corpus.find_document(target_doc);
    if (!target) throw DataError("unknown target doc_id: " + target_doc);
    exp.target_journal = target->journal_id;

    auto original_ctx = freeze_original_context(corpus, base);
    auto modified_ctx = freeze_modified_context(corpus, base);
    exp.original_before = frozen_original_snip(corpus, exp.target_journal, original_ctx);
    exp.modified_before = frozen_modified_snip(corpus, exp.target_journal, modified_ctx);
    if (!exp.original_before && !exp.modified_before) return exp;  // not applicable

    Corpus edited = add_citation(corpus, citing_journal, active_refs, target_doc, base);
    exp.original_after = frozen_original_snip(edited, exp.target_journal, original_ctx);
    exp.modified_after = frozen_modified_snip(edited, exp.target_journal, modified_ctx);
    exp.applicable = true;
    return exp;
}

// Built-in criterion-1 fixture run.
inline AddCitationExperiment run_add_citation_experiment() {
    AddCitationFixture fixture = build_criterion1_fixture();
    return run_add_citation_experiment(fixture.corpus, fixture.spec, fixture.citing_journal,
                                       fixture.added_active_refs, fixture.target_doc);
}

struct MergeExperiment {
    bool applicable = false;
    std::string journal_a;
    std::string journal_b;
    // original variant, unnormalized rip/cp ratios
    std::optional<double> original_ratio_a, original_ratio_b, original_ratio_merged;
    // modified variant snip under the frozen pre-merge constant
    std::optional<double> modified_snip_a, modified_snip_b, modified_snip_merged;

    std::optional<double> original_merged_over_constituent() const {
        if (!original_ratio_a || !original_ratio_b || !original_ratio_merged)
            return std::nullopt;
        double mean = (*original_ratio_a + *original_ratio_b) / 2.0;
        if (mean == 0.0) return std::nullopt;
        return *original_ratio_merged / mean;
    }
    // criterion 2: the merged journal's value must lie between the
    // constituents' values
    bool modified_criterion_holds(double tolerance = 1e-9) const {
        if (!modified_snip_a || !modified_snip_b || !modified_snip_merged) return false;
        double lo = std::min(*modified_snip_a, *modified_snip_b);
        double hi = std::max(*modified_snip_a, *modified_snip_b);
        return *modified_snip_merged >= lo - tolerance &&
               *modified_snip_merged <= hi + tolerance;
    }
    bool original_criterion_violated(double tolerance = 1e-9) const {
        if (!original_ratio_a || !original_ratio_b || !original_ratio_merged) return false;
        double lo = std::min(*original_ratio_a, *original_ratio_b);
        double hi = std::max(*original_ratio_a, *original_ratio_b);
        return *original_ratio_merged < lo - tolerance ||
               *original_ratio_merged > hi + tolerance;
    }
};

inline std::optional<double> unnormalized_original_ratio(const Corpus& corpus,
                                                         const std::string& journal_id,
                                                         const UniverseSpec& base) {
    UniverseSpec spec = base;
    spec.variant = Variant::original;
    spec.normalization = Normalization::weighted_mean_cp;
    auto rip = compute_rip(corpus, journal_id, spec);
    auto cp = citation_potential_original(corpus, journal_id, spec);
    if (!rip || !cp || !(*cp > 0.0)) return std::nullopt;
    return *rip / *cp;
}

inline MergeExperiment run_merge_experiment(const Corpus& corpus, const std::string& j1,
                                            const std::string& j2, const UniverseSpec& base) {
    MergeExperiment exp;
    exp.journal_a = j1;
    exp.journal_b = j2;

    exp.original_ratio_a = unnormalized_original_ratio(corpus, j1, base);
    exp.original_ratio_b = unnormalized_original_ratio(corpus, j2, base);

    auto modified_ctx = freeze_modified_context(corpus, base);
    exp.modified_snip_a = frozen_modified_snip(corpus, j1, modified_ctx);
    exp.modified_snip_b = frozen_modified_snip(corpus, j2, modified_ctx);

    if (!exp.original_ratio_a && !exp.modified_snip_a) return exp;

    Corpus merged = merge_journals(corpus, j1, j2);
    exp.original_ratio_merged = unnormalized_original_ratio(merged, j1, base);

    // merged target set under the frozen context: union of the parts
    FrozenModifiedContext merged_ctx = modified_ctx;
    auto& union_targets = merged_ctx.targets[j1];
    const auto& b_targets = modified_ctx.targets.at(j2);
    union_targets.insert(union_targets.end(), b_targets.begin(), b_targets.end());
    std::sort(union_targets.begin(), union_targets.end());
    exp.modified_snip_merged = frozen_modified_snip(merged, j1, merged_ctx);

    exp.applicable = true;
    return exp;
}

// Built-in merge-anomaly fixture run.
inline MergeExperiment run_merge_experiment() {
    MergeFixture fixture = build_merge_fixture();
    return run_merge_experiment(fixture.corpus, fixture.journal_a, fixture.journal_b,
                                fixture.spec);
}

}  // namespace snipkit
