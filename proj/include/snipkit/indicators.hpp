#pragma once

// RIP, original SNIP and modified SNIP.
//
// Everything runs in three phases: per-journal metrics (parallelizable),
// a global reduction for the normalization constant, and per-journal
// finalization of rcp and snip. Results are independent of scheduling.
//
// Undefined metrics (no targets, empty citing set) are absent values,
// never zeros, and stay out of medians, means and correlations.

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "snipkit/corpus.hpp"
#include "snipkit/csv.hpp"
#include "snipkit/errors.hpp"
#include "snipkit/stats.hpp"
#include "snipkit/universes.hpp"

namespace snipkit {

struct JournalMetrics {
    std::string journal_id;
    int citing_year = 0;
    Variant variant = Variant::original;
    long pub_count = 0;       // P: target documents
    long citation_count = 0;  // C: citation instances received in year Y
    double rip = 0.0;         // C/P
    std::optional<double> cp;
    std::optional<double> rcp;
    std::optional<double> snip;
};

struct IndicatorTable {
    UniverseSpec spec;
    std::map<std::string, JournalMetrics> rows;  // one row per journal with P >= 1
    std::optional<double> normalization_constant;
    std::string note;
};

// Citation instances received by `targets` in the citing year: citing doc
// ids with multiplicity, restricted to peer-reviewed documents of universe
// journals. Deterministic order (targets, then citing doc id).
inline std::vector<std::string> citation_instances(const Corpus& corpus,
                                                   std::span<const std::string> targets,
                                                   int citing_year,
                                                   const std::set<std::string>& universe) {
    std::vector<std::string> out;
    for (const auto& target : targets) {
        for (const auto& citer_id : corpus.citations_to(target, citing_year)) {
            const DocumentRecord& citer = *corpus.find_document(citer_id);
            if (!is_peer_reviewed(citer)) continue;
            if (!universe.count(citer.journal_id)) continue;
            out.push_back(citer_id);
        }
    }
    return out;
}

// Mean active references over the journal's peer-reviewed year-Y
// publications that have at least one active reference (r_q). Absent when
// no publication qualifies.
inline std::optional<double> journal_mean_active_refs(const Corpus& corpus,
                                                      const std::string& journal_id,
                                                      const UniverseSpec& spec) {
    corpus.journal_checked(journal_id);
    stats::CompensatedSum sum;
    long n = 0;
    for (const auto& doc_id : corpus.journal_documents(journal_id, spec.citing_year)) {
        const DocumentRecord& doc = *corpus.find_document(doc_id);
        if (!is_peer_reviewed(doc)) continue;
        int active = active_reference_count(doc, corpus, spec);
        if (active >= 1) {
            sum.add(active);
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum.value() / static_cast<double>(n);
}

inline std::optional<double> compute_rip(const Corpus& corpus, const std::string& journal_id,
                                         const UniverseSpec& spec) {
    auto targets = target_documents(corpus, journal_id, spec);
    if (targets.empty()) return std::nullopt;
    auto universe = citing_universe(corpus, spec).journals;
    auto instances = citation_instances(corpus, targets, spec.citing_year, universe);
    return static_cast<double>(instances.size()) / static_cast<double>(targets.size());
}

// Arithmetic mean of active references over the subject field, counting a
// citing document's active references to anywhere in the database.
inline std::optional<double> citation_potential_original(const Corpus& corpus,
                                                         const std::string& journal_id,
                                                         const UniverseSpec& spec) {
    auto field = subject_field(corpus, journal_id, spec);
    if (field.empty()) return std::nullopt;
    stats::CompensatedSum sum;
    for (const auto& doc_id : field)
        sum.add(active_reference_count(*corpus.find_document(doc_id), corpus, spec));
    return sum.value() / static_cast<double>(field.size());
}

// Harmonic mean of r_q over the citation instances:
// cp = C / sum_i 1/r_{q(i)}.
inline std::optional<double> citation_potential_modified(const Corpus& corpus,
                                                         const std::string& journal_id,
                                                         const UniverseSpec& spec) {
    auto targets = target_documents(corpus, journal_id, spec);
    auto universe = citing_universe(corpus, spec).journals;
    auto instances = citation_instances(corpus, targets, spec.citing_year, universe);
    if (instances.empty()) return std::nullopt;
    stats::CompensatedSum inv;
    for (const auto& citer_id : instances) {
        const DocumentRecord& citer = *corpus.find_document(citer_id);
        auto r = journal_mean_active_refs(corpus, citer.journal_id, spec);
        if (!r || !(*r > 0.0))
            throw DataError("citing journal " + citer.journal_id +
                            " has no defined mean active reference count");
        inv.add(1.0 / *r);
    }
    return static_cast<double>(instances.size()) / inv.value();
}

namespace detail {

struct RowInputs {
    long pub_count = 0;
    long citation_count = 0;
    double inv_r_sum = 0.0;             // modified
    std::optional<double> field_mean;   // original
};

template <typename Fn>
void parallel_over(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(t);
    workers.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        std::size_t begin = n * w / t;
        std::size_t end = n * (w + 1) / t;
        workers.emplace_back([begin, end, w, &fn, &errors] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline IndicatorTable snip_original(const Corpus& corpus, const UniverseSpec& spec,
                                    int threads = 1) {
    if (spec.variant != Variant::original)
        throw ConfigError("snip_original requires variant=original");
    spec.validate(corpus);

    IndicatorTable table;
    table.spec = spec;
    auto universe = citing_universe(corpus, spec);

    std::vector<std::string> ids;
    for (const auto& [id, j] : corpus.journals()) ids.push_back(id);
    std::vector<detail::RowInputs> inputs(ids.size());

    detail::parallel_over(ids.size(), threads, [&](std::size_t i) {
        auto targets = target_documents(corpus, ids[i], spec);
        inputs[i].pub_count = static_cast<long>(targets.size());
        if (targets.empty()) return;
        auto instances =
            citation_instances(corpus, targets, spec.citing_year, universe.journals);
        inputs[i].citation_count = static_cast<long>(instances.size());
        auto field = subject_field(corpus, ids[i], spec, universe.journals);
        if (!field.empty()) {
            stats::CompensatedSum sum;
            for (const auto& doc_id : field)
                sum.add(active_reference_count(*corpus.find_document(doc_id), corpus, spec));
            inputs[i].field_mean = sum.value() / static_cast<double>(field.size());
        }
    });

    std::vector<double> cps;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (inputs[i].pub_count == 0) continue;
        JournalMetrics row;
        row.journal_id = ids[i];
        row.citing_year = spec.citing_year;
        row.variant = spec.variant;
        row.pub_count = inputs[i].pub_count;
        row.citation_count = inputs[i].citation_count;
        row.rip = static_cast<double>(row.citation_count) / static_cast<double>(row.pub_count);
        row.cp = inputs[i].field_mean;
        if (row.cp) cps.push_back(*row.cp);
        table.rows.emplace(row.journal_id, std::move(row));
    }

    if (cps.empty()) {
        table.rows.clear();
        table.note = "no journal has a defined citation potential";
        return table;
    }
    double med = stats::median(cps);
    table.normalization_constant = med;
    for (auto& [id, row] : table.rows) {
        if (!row.cp || !(med > 0.0)) continue;
        row.rcp = *row.cp / med;
        if (*row.rcp > 0.0) row.snip = row.rip / *row.rcp;
    }
    return table;
}

inline IndicatorTable snip_modified(const Corpus& corpus, const UniverseSpec& spec,
                                    int threads = 1) {
    if (spec.variant != Variant::modified)
        throw ConfigError("snip_modified requires variant=modified");
    spec.validate(corpus);

    IndicatorTable table;
    table.spec = spec;
    auto universe = citing_universe(corpus, spec);

    // r_q for every citing-universe journal, computed once
    std::map<std::string, double> mean_active;
    for (const auto& id : universe.journals)
        if (auto r = journal_mean_active_refs(corpus, id, spec)) mean_active.emplace(id, *r);

    std::vector<std::string> ids;
    for (const auto& [id, j] : corpus.journals()) ids.push_back(id);
    std::vector<detail::RowInputs> inputs(ids.size());

    detail::parallel_over(ids.size(), threads, [&](std::size_t i) {
        auto targets = target_documents(corpus, ids[i], spec);
        inputs[i].pub_count = static_cast<long>(targets.size());
        if (targets.empty()) return;
        auto instances =
            citation_instances(corpus, targets, spec.citing_year, universe.journals);
        inputs[i].citation_count = static_cast<long>(instances.size());
        stats::CompensatedSum inv;
        for (const auto& citer_id : instances) {
            const auto& citer = *corpus.find_document(citer_id);
            auto it = mean_active.find(citer.journal_id);
            if (it == mean_active.end())
                throw DataError("citing journal " + citer.journal_id +
                                " has no defined mean active reference count");
            inv.add(1.0 / it->second);
        }
        inputs[i].inv_r_sum = inv.value();
    });

    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (inputs[i].pub_count == 0) continue;
        JournalMetrics row;
        row.journal_id = ids[i];
        row.citing_year = spec.citing_year;
        row.variant = spec.variant;
        row.pub_count = inputs[i].pub_count;
        row.citation_count = inputs[i].citation_count;
        row.rip = static_cast<double>(row.citation_count) / static_cast<double>(row.pub_count);
        if (row.citation_count > 0)
            row.cp = static_cast<double>(row.citation_count) / inputs[i].inv_r_sum;
        table.rows.emplace(row.journal_id, std::move(row));
    }

    stats::CompensatedSum weight_sum;
    stats::CompensatedSum weighted;
    for (const auto& [id, row] : table.rows) {
        if (!row.cp) continue;
        double w = static_cast<double>(row.pub_count);
        weight_sum.add(w);
        if (spec.normalization == Normalization::weighted_mean_cp)
            weighted.add(w * *row.cp);
        else
            weighted.add(w * (row.rip / *row.cp));
    }
    if (!(weight_sum.value() > 0.0)) {
        table.rows.clear();
        table.note = "no journal has a defined citation potential";
        return table;
    }
    double constant = weighted.value() / weight_sum.value();
    table.normalization_constant = constant;

    for (auto& [id, row] : table.rows) {
        if (!row.cp || !(constant > 0.0)) continue;
        if (spec.normalization == Normalization::weighted_mean_cp)
            row.rcp = *row.cp / constant;  // constant is the weighted mean cp
        else
            row.rcp = *row.cp * constant;  // constant is the weighted mean rip/cp
        if (*row.rcp > 0.0) row.snip = row.rip / *row.rcp;
    }
    return table;
}

inline IndicatorTable compute_indicator_table(const Corpus& corpus, const UniverseSpec& spec,
                                              int threads = 1) {
    return spec.variant == Variant::original ? snip_original(corpus, spec, threads)
                                             : snip_modified(corpus, spec, threads);
}

// ---------------------------------------------------------------------------
// Serialization

// Shortest round-trip decimal representation, locale independent.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& file, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(file, line, "bad number: '" + s + "'");
    return v;
}

inline void write_indicator_csv(std::ostream& out, const IndicatorTable& table) {
    csv::write_record(out, std::vector<std::string>{"journal_id", "year", "variant", "pubs",
                                                    "citations", "rip", "cp", "rcp", "snip"});
    auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string{};
    };
    for (const auto& [id, row] : table.rows) {
        csv::write_record(out, std::vector<std::string>{
                                   row.journal_id, std::to_string(row.citing_year),
                                   to_string(row.variant), std::to_string(row.pub_count),
                                   std::to_string(row.citation_count), format_double(row.rip),
                                   opt(row.cp), opt(row.rcp), opt(row.snip)});
    }
}

inline void expect_table_header(const std::vector<std::string>& got, const std::string& file) {
    static const std::vector<std::string> want{"journal_id", "year",      "variant",
                                               "pubs",       "citations", "rip",
                                               "cp",         "rcp",       "snip"};
    if (got != want) throw ParseError(file, 1, "bad indicator table header");
}

inline IndicatorTable read_indicator_csv(std::istream& in, const std::string& file) {
    csv::Reader reader(in, file);
    IndicatorTable table;
    auto header = reader.next();
    if (!header) return table;
    expect_table_header(*header, file);
    bool first = true;
    while (auto rec = reader.next()) {
        std::size_t line = reader.record_line();
        if (rec->size() != 9)
            throw ParseError(file, line, "expected 9 fields, got " + std::to_string(rec->size()));
        JournalMetrics row;
        row.journal_id = (*rec)[0];
        row.citing_year = static_cast<int>(parse_double((*rec)[1], file, line));
        row.variant = variant_from_string((*rec)[2]);
        row.pub_count = static_cast<long>(parse_double((*rec)[3], file, line));
        row.citation_count = static_cast<long>(parse_double((*rec)[4], file, line));
        row.rip = parse_double((*rec)[5], file, line);
        if (!(*rec)[6].empty()) row.cp = parse_double((*rec)[6], file, line);
        if (!(*rec)[7].empty()) row.rcp = parse_double((*rec)[7], file, line);
        if (!(*rec)[8].empty()) row.snip = parse_double((*rec)[8], file, line);
        if (first) {
            table.spec.citing_year = row.citing_year;
            table.spec.variant = row.variant;
            first = false;
        }
        if (!table.rows.emplace(row.journal_id, std::move(row)).second)
            throw ParseError(file, line, "duplicate journal_id: " + (*rec)[0]);
    }
    return table;
}

inline nlohmann::json spec_to_json(const UniverseSpec& spec) {
    return nlohmann::json{
        {"citing_year", spec.citing_year},
        {"target_window", spec.target_window},
        {"field_window", spec.field_window},
        {"variant", to_string(spec.variant)},
        {"min_active_ref_share", spec.min_active_ref_share},
        {"continuity_span", spec.continuity_span},
        {"exclude_trade", spec.exclude_trade},
        {"normalization", to_string(spec.normalization)},
    };
}

inline UniverseSpec spec_from_json(const nlohmann::json& j) {
    UniverseSpec spec;
    spec.citing_year = j.at("citing_year").get<int>();
    spec.target_window = j.value("target_window", 3);
    spec.field_window = j.value("field_window", 8);
    spec.variant = variant_from_string(j.at("variant").get<std::string>());
    spec.min_active_ref_share = j.value("min_active_ref_share", 0.20);
    spec.continuity_span = j.value("continuity_span", 4);
    spec.exclude_trade = j.value("exclude_trade", true);
    spec.normalization =
        normalization_from_string(j.value("normalization", std::string("weighted_mean_cp")));
    return spec;
}

inline nlohmann::json indicator_table_to_json(const IndicatorTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [id, row] : table.rows) {
        nlohmann::json r{
            {"journal_id", row.journal_id}, {"year", row.citing_year},
            {"variant", to_string(row.variant)}, {"pubs", row.pub_count},
            {"citations", row.citation_count}, {"rip", row.rip},
            {"cp", row.cp ? nlohmann::json(*row.cp) : nlohmann::json()},
            {"rcp", row.rcp ? nlohmann::json(*row.rcp) : nlohmann::json()},
            {"snip", row.snip ? nlohmann::json(*row.snip) : nlohmann::json()},
        };
        rows.push_back(std::move(r));
    }
    return nlohmann::json{
        {"spec", spec_to_json(table.spec)},
        {"normalization_constant", table.normalization_constant
                                       ? nlohmann::json(*table.normalization_constant)
                                       : nlohmann::json()},
        {"note", table.note},
        {"rows", std::move(rows)},
    };
}

inline IndicatorTable indicator_table_from_json(const nlohmann::json& j) {
    IndicatorTable table;
    table.spec = spec_from_json(j.at("spec"));
    if (!j.at("normalization_constant").is_null())
        table.normalization_constant = j.at("normalization_constant").get<double>();
    table.note = j.value("note", std::string{});
    for (const auto& r : j.at("rows")) {
        JournalMetrics row;
        row.journal_id = r.at("journal_id").get<std::string>();
        row.citing_year = r.at("year").get<int>();
        row.variant = variant_from_string(r.at("variant").get<std::string>());
        row.pub_count = r.at("pubs").get<long>();
        row.citation_count = r.at("citations").get<long>();
        row.rip = r.at("rip").get<double>();
        if (!r.at("cp").is_null()) row.cp = r.at("cp").get<double>();
        if (!r.at("rcp").is_null()) row.rcp = r.at("rcp").get<double>();
        if (!r.at("snip").is_null()) row.snip = r.at("snip").get<double>();
        table.rows.emplace(row.journal_id, std::move(row));
    }
    return table;
}

}  // namespace snipkit
