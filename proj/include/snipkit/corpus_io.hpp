#pragma once

// Corpus file formats.
//
// CSV:
//   journals:  journal_id,title,journal_kind,field_ids,active
//              field_ids is a '|'-separated list.
//   documents: doc_id,journal_id,pub_year,doc_type,references
//              references is a '|'-separated list of entries:
//                target_doc_id@year   resolved reference
//                @year                unresolved, year known
//                ?                    fully unresolved
//
// JSONL mirrors carry the same keys, with references as an array of
// {"target": ..., "cited_year": ...} objects (either key may be absent).
//
// Identifiers must not contain '@', '|', ',' or whitespace.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snipkit/corpus.hpp"
#include "snipkit/csv.hpp"
#include "snipkit/errors.hpp"

namespace snipkit {

enum class CorpusFormat { csv, jsonl };

inline std::string to_string(CorpusFormat f) {
    return f == CorpusFormat::csv ? "csv" : "jsonl";
}

inline CorpusFormat corpus_format_from_string(const std::string& s) {
    if (s == "csv") return CorpusFormat::csv;
    if (s == "jsonl") return CorpusFormat::jsonl;
    throw ConfigError("unknown corpus format: " + s);
}

namespace detail {

inline int parse_year(const std::string& s, const std::string& file, std::size_t line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(file, line, "bad year: '" + s + "'");
    return value;
}

inline bool parse_bool(const std::string& s, const std::string& file, std::size_t line) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError(file, line, "bad boolean: '" + s + "'");
}

inline void check_id(const std::string& s, const std::string& file, std::size_t line) {
    if (s.empty()) throw ParseError(file, line, "empty identifier");
    if (s.find_first_of("@|, \t\n\r") != std::string::npos)
        throw ParseError(file, line, "identifier contains a reserved character: '" + s + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline Reference parse_reference_entry(const std::string& entry, const std::string& file,
                                       std::size_t line) {
    if (entry == "?") return Reference{};
    std::size_t at = entry.rfind('@');
    if (at == std::string::npos)
        throw ParseError(file, line, "bad reference entry: '" + entry + "'");
    Reference ref;
    ref.cited_year = parse_year(entry.substr(at + 1), file, line);
    std::string target = entry.substr(0, at);
    if (!target.empty()) {
        check_id(target, file, line);
        ref.target = target;
    }
    return ref;
}

inline std::string reference_to_entry(const Reference& ref) {
    if (ref.target) {
        if (!ref.cited_year)
            throw DataError("resolved reference to " + *ref.target + " lacks cited_year");
        return *ref.target + "@" + std::to_string(*ref.cited_year);
    }
    if (ref.cited_year) return "@" + std::to_string(*ref.cited_year);
    return "?";
}

inline void expect_header(const std::vector<std::string>& got,
                          const std::vector<std::string>& want, const std::string& file) {
    if (got != want) {
        std::string msg = "bad header, expected ";
        for (std::size_t i = 0; i < want.size(); ++i)
            msg += (i ? "," : "") + want[i];
        throw ParseError(file, 1, msg);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV

inline std::vector<JournalRecord> read_journals_csv(std::istream& in, const std::string& file) {
    csv::Reader reader(in, file);
    std::vector<JournalRecord> out;
    auto header = reader.next();
    if (!header) return out;  // empty file: zero records
    detail::expect_header(*header, {"journal_id", "title", "journal_kind", "field_ids", "active"},
                          file);
    while (auto rec = reader.next()) {
        std::size_t line = reader.record_line();
        if (rec->size() != 5)
            throw ParseError(file, line, "expected 5 fields, got " + std::to_string(rec->size()));
        JournalRecord j;
        detail::check_id((*rec)[0], file, line);
        j.journal_id = (*rec)[0];
        j.title = (*rec)[1];
        try {
            j.kind = journal_kind_from_string((*rec)[2]);
        } catch (const DataError& e) {
            throw ParseError(file, line, e.what());
        }
        if (!(*rec)[3].empty())
            for (const auto& f : detail::split((*rec)[3], '|')) {
                detail::check_id(f, file, line);
                j.field_ids.insert(f);
            }
        j.active = detail::parse_bool((*rec)[4], file, line);
        out.push_back(std::move(j));
    }
    return out;
}

inline std::vector<DocumentRecord> read_documents_csv(std::istream& in, const std::string& file) {
    csv::Reader reader(in, file);
    std::vector<DocumentRecord> out;
    auto header = reader.next();
    if (!header) return out;
    detail::expect_header(*header, {"doc_id", "journal_id", "pub_year", "doc_type", "references"},
                          file);
    while (auto rec = reader.next()) {
        std::size_t line = reader.record_line();
        if (rec->size() != 5)
            throw ParseError(file, line, "expected 5 fields, got " + std::to_string(rec->size()));
        DocumentRecord d;
        detail::check_id((*rec)[0], file, line);
        d.doc_id = (*rec)[0];
        detail::check_id((*rec)[1], file, line);
        d.journal_id = (*rec)[1];
        d.pub_year = detail::parse_year((*rec)[2], file, line);
        try {
            d.doc_type = doc_type_from_string((*rec)[3]);
        } catch (const DataError& e) {
            throw ParseError(file, line, e.what());
        }
        if (!(*rec)[4].empty())
            for (const auto& entry : detail::split((*rec)[4], '|'))
                d.references.push_back(detail::parse_reference_entry(entry, file, line));
        out.push_back(std::move(d));
    }
    return out;
}

inline void write_journals_csv(std::ostream& out, const std::vector<JournalRecord>& journals) {
    csv::write_record(out, std::vector<std::string>{"journal_id", "title", "journal_kind",
                                                    "field_ids", "active"});
    for (const auto& j : journals) {
        std::string fields;
        for (const auto& f : j.field_ids) fields += (fields.empty() ? "" : "|") + f;
        csv::write_record(out, std::vector<std::string>{j.journal_id, j.title, to_string(j.kind),
                                                        fields, j.active ? "true" : "false"});
    }
}

inline void write_documents_csv(std::ostream& out, const std::vector<DocumentRecord>& docs) {
    csv::write_record(out, std::vector<std::string>{"doc_id", "journal_id", "pub_year",
                                                    "doc_type", "references"});
    for (const auto& d : docs) {
        std::string refs;
        for (const auto& r : d.references)
            refs += (refs.empty() ? "" : "|") + detail::reference_to_entry(r);
        csv::write_record(out,
                          std::vector<std::string>{d.doc_id, d.journal_id,
                                                   std::to_string(d.pub_year),
                                                   to_string(d.doc_type), refs});
    }
}

// ---------------------------------------------------------------------------
// JSONL

inline std::vector<JournalRecord> read_journals_jsonl(std::istream& in, const std::string& file) {
    std::vector<JournalRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(file, lineno, e.what());
        }
        try {
            JournalRecord j;
            j.journal_id = obj.at("journal_id").get<std::string>();
            detail::check_id(j.journal_id, file, lineno);
            j.title = obj.value("title", std::string{});
            j.kind = journal_kind_from_string(obj.at("journal_kind").get<std::string>());
            if (obj.contains("field_ids"))
                for (const auto& f : obj.at("field_ids"))
                    j.field_ids.insert(f.get<std::string>());
            j.active = obj.value("active", true);
            out.push_back(std::move(j));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(file, lineno, e.what());
        } catch (const DataError& e) {
            throw ParseError(file, lineno, e.what());
        }
    }
    return out;
}

inline std::vector<DocumentRecord> read_documents_jsonl(std::istream& in,
                                                        const std::string& file) {
    std::vector<DocumentRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(file, lineno, e.what());
        }
        try {
            DocumentRecord d;
            d.doc_id = obj.at("doc_id").get<std::string>();
            detail::check_id(d.doc_id, file, lineno);
            d.journal_id = obj.at("journal_id").get<std::string>();
            d.pub_year = obj.at("pub_year").get<int>();
            d.doc_type = doc_type_from_string(obj.at("doc_type").get<std::string>());
            if (obj.contains("references"))
                for (const auto& r : obj.at("references")) {
                    Reference ref;
                    if (r.contains("target") && !r.at("target").is_null())
                        ref.target = r.at("target").get<std::string>();
                    if (r.contains("cited_year") && !r.at("cited_year").is_null())
                        ref.cited_year = r.at("cited_year").get<int>();
                    d.references.push_back(std::move(ref));
                }
            out.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(file, lineno, e.what());
        } catch (const DataError& e) {
            throw ParseError(file, lineno, e.what());
        }
    }
    return out;
}

inline void write_journals_jsonl(std::ostream& out, const std::vector<JournalRecord>& journals) {
    for (const auto& j : journals) {
        nlohmann::json obj;
        obj["journal_id"] = j.journal_id;
        obj["title"] = j.title;
        obj["journal_kind"] = to_string(j.kind);
        obj["field_ids"] = j.field_ids;
        obj["active"] = j.active;
        out << obj.dump() << '\n';
    }
}

inline void write_documents_jsonl(std::ostream& out, const std::vector<DocumentRecord>& docs) {
    for (const auto& d : docs) {
        nlohmann::json obj;
        obj["doc_id"] = d.doc_id;
        obj["journal_id"] = d.journal_id;
        obj["pub_year"] = d.pub_year;
        obj["doc_type"] = to_string(d.doc_type);
        auto refs = nlohmann::json::array();
        for (const auto& r : d.references) {
            nlohmann::json ref = nlohmann::json::object();
            if (r.target) ref["target"] = *r.target;
            if (r.cited_year) ref["cited_year"] = *r.cited_year;
            refs.push_back(std::move(ref));
        }
        obj["references"] = std::move(refs);
        out << obj.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    return out;
}

inline Corpus load_corpus(const std::filesystem::path& journal_path,
                          const std::filesystem::path& document_path, CorpusFormat format,
                          BuildOptions options = {}) {
    auto jin = open_input(journal_path);
    auto din = open_input(document_path);
    std::vector<JournalRecord> journals;
    std::vector<DocumentRecord> documents;
    if (format == CorpusFormat::csv) {
        journals = read_journals_csv(jin, journal_path.string());
        documents = read_documents_csv(din, document_path.string());
    } else {
        journals = read_journals_jsonl(jin, journal_path.string());
        documents = read_documents_jsonl(din, document_path.string());
    }
    return Corpus::build(std::move(journals), std::move(documents), options);
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& journal_path,
                        const std::filesystem::path& document_path, CorpusFormat format) {
    auto jout = open_output(journal_path);
    auto dout = open_output(document_path);
    if (format == CorpusFormat::csv) {
        write_journals_csv(jout, corpus.journal_records());
        write_documents_csv(dout, corpus.document_records());
    } else {
        write_journals_jsonl(jout, corpus.journal_records());
        write_documents_jsonl(dout, corpus.document_records());
    }
}

}  // namespace snipkit
