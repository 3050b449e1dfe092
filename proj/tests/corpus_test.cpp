#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include <snipkit/corpus.hpp>
#include <snipkit/corpus_io.hpp>

#include "helpers.hpp"

using namespace snipkit;
using namespace testutil;

namespace {

const char* kJournalsCsv =
    "journal_id,title,journal_kind,field_ids,active\n"
    "j1,\"Annals of Tests, Series A\",peer_reviewed,F1|F2,true\n"
    "j2,Trade Weekly,trade,,true\n"
    "j3,Quiet Review,peer_reviewed,F2,false\n";

// 10 documents, 12 resolved references in total.
const char* kDocumentsCsv =
    "doc_id,journal_id,pub_year,doc_type,references\n"
    "d01,j1,2007,article,\n"
    "d02,j1,2008,article,d01@2007\n"
    "d03,j1,2009,review,d01@2007|d02@2008\n"
    "d04,j2,2008,article,d01@2007|@2003|?\n"
    "d05,j2,2009,editorial,d03@2009\n"
    "d06,j3,2009,conference_paper,d02@2008|d02@2008\n"
    "d07,j3,2010,article,d03@2009|d06@2009|d05@2009\n"
    "d08,j1,2010,article,d06@2009|@2001\n"
    "d09,j3,2010,letter,d03@2009\n"
    "d10,j3,2010,other,\n";

Corpus load_fixture(const TempDir& dir) {
    write_file(dir / "journals.csv", kJournalsCsv);
    write_file(dir / "documents.csv", kDocumentsCsv);
    return load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv);
}

}  // namespace

TEST_CASE("empty corpus files") {
    TempDir dir("corpus_empty");
    write_file(dir / "journals.csv", "");
    write_file(dir / "documents.csv", "");
    Corpus c = load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv);
    CHECK(c.journals().empty());
    CHECK(c.documents().empty());
    CHECK(!c.year_range());

    // header-only files count as empty too
    write_file(dir / "journals.csv", "journal_id,title,journal_kind,field_ids,active\n");
    write_file(dir / "documents.csv", "doc_id,journal_id,pub_year,doc_type,references\n");
    c = load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv);
    CHECK(c.journals().empty());
    CHECK(c.documents().empty());
}

TEST_CASE("single journal, single document, no references") {
    Corpus c = Corpus::build({journal("j1")}, {document("d1", "j1", 2009)});
    CHECK(c.publications_in_year("j1", 2009) == 1);
    CHECK(c.citation_instance_count() == 0);
    CHECK(c.year_range()->first == 2009);
    CHECK(c.year_range()->last == 2009);
}

TEST_CASE("citation index totals match a raw re-count") {
    TempDir dir("corpus_fixture");
    Corpus c = load_fixture(dir);
    CHECK(c.journals().size() == 3);
    CHECK(c.documents().size() == 10);

    // independent oracle: count resolved entries straight off the raw text
    std::size_t raw_resolved = 0;
    std::istringstream raw(kDocumentsCsv);
    std::string line;
    std::getline(raw, line);  // header
    while (std::getline(raw, line)) {
        std::size_t refs_col = line.rfind(',');
        std::string refs = line.substr(refs_col + 1);
        if (refs.empty()) continue;
        std::istringstream entries(refs);
        std::string entry;
        while (std::getline(entries, entry, '|'))
            if (entry != "?" && entry[0] != '@') ++raw_resolved;
    }
    CHECK(raw_resolved == 12);
    CHECK(c.resolved_references() == raw_resolved);
    CHECK(c.citation_instance_count() == raw_resolved);
}

TEST_CASE("citations_to") {
    TempDir dir("corpus_citations");
    Corpus c = load_fixture(dir);

    CHECK(c.citations_to("d10", 2010).empty());

    // two references from the same citing document count twice
    auto instances = c.citations_to("d02", 2009);
    REQUIRE(instances.size() == 3);
    CHECK(instances == std::vector<std::string>{"d03", "d06", "d06"});
    CHECK(std::count(instances.begin(), instances.end(), "d06") == 2);

    // full-scan oracle for d03's citations per year
    for (int year : {2008, 2009, 2010, 2011}) {
        std::vector<std::string> expected;
        for (const auto& [id, doc] : c.documents()) {
            if (doc.pub_year != year) continue;
            for (const auto& ref : doc.references)
                if (ref.target && *ref.target == "d03") expected.push_back(id);
        }
        std::sort(expected.begin(), expected.end());
        CHECK(c.citations_to("d03", year) == expected);
    }
    CHECK(c.citations_to("d03", 2010).size() == 2);

    CHECK_THROWS_AS(c.citations_to("nope", 2010), DataError);
}

TEST_CASE("loading is order independent") {
    std::vector<JournalRecord> journals{journal("j1"), journal("j2"), journal("j3")};
    std::vector<DocumentRecord> docs{
        document("d1", "j1", 2008),
        document("d2", "j2", 2009, {resolved_ref("d1", 2008)}),
        document("d3", "j3", 2009, {resolved_ref("d1", 2008), unresolved_ref(2005)}),
    };
    Corpus a = Corpus::build(journals, docs);
    std::mt19937 rng(99);
    std::shuffle(journals.begin(), journals.end(), rng);
    std::shuffle(docs.begin(), docs.end(), rng);
    Corpus b = Corpus::build(journals, docs);

    std::ostringstream ja, jb, da, db;
    write_journals_csv(ja, a.journal_records());
    write_journals_csv(jb, b.journal_records());
    write_documents_csv(da, a.document_records());
    write_documents_csv(db, b.document_records());
    CHECK(ja.str() == jb.str());
    CHECK(da.str() == db.str());
    CHECK(a.citations_to("d1", 2009) == b.citations_to("d1", 2009));
}

TEST_CASE("build errors") {
    CHECK_THROWS_AS(Corpus::build({journal("j1"), journal("j1")}, {}), DataError);
    CHECK_THROWS_AS(Corpus::build({journal("j1")},
                                  {document("d1", "j1", 2009), document("d1", "j1", 2009)}),
                    DataError);
    CHECK_THROWS_AS(Corpus::build({journal("j1")}, {document("d1", "jX", 2009)}), DataError);

    // resolved reference must carry the target's pub_year
    CHECK_THROWS_AS(Corpus::build({journal("j1")},
                                  {document("d1", "j1", 2007),
                                   document("d2", "j1", 2009, {resolved_ref("d1", 2006)})}),
                    DataError);
}

TEST_CASE("strict versus lenient dangling references") {
    std::vector<JournalRecord> journals{journal("j1")};
    std::vector<DocumentRecord> docs{
        document("d1", "j1", 2007),
        document("d2", "j1", 2009, {resolved_ref("ghost", 2007)}),
    };
    CHECK_THROWS_AS(Corpus::build(journals, docs, {.strict = true}), DataError);

    Corpus c = Corpus::build(journals, docs);  // lenient: demoted to unresolved
    CHECK(c.resolved_references() == 0);
    CHECK(c.total_references() == 1);

    ValidationReport report = validate_corpus(c);
    REQUIRE(report.fatal_count() == 1);
    auto fatal = std::find_if(report.findings.begin(), report.findings.end(),
                              [](const Finding& f) { return f.severity == Severity::fatal; });
    CHECK(fatal->code == "dangling_reference");
    CHECK(fatal->message.find("ghost") != std::string::npos);
}

TEST_CASE("validation report") {
    SECTION("well-formed fixture has no findings") {
        Corpus c = Corpus::build({journal("j1")},
                                 {document("d1", "j1", 2007),
                                  document("d2", "j1", 2009, {resolved_ref("d1", 2007)})});
        ValidationReport report = validate_corpus(c);
        CHECK(report.fatal_count() == 0);
        CHECK(report.warning_count() == 0);
    }

    SECTION("unresolved share is reported") {
        // 20 references, 5 unresolved
        std::vector<DocumentRecord> docs{document("target", "j1", 2007)};
        std::vector<Reference> refs;
        for (int i = 0; i < 15; ++i) refs.push_back(resolved_ref("target", 2007));
        for (int i = 0; i < 5; ++i) refs.push_back(unresolved_ref(2006));
        docs.push_back(document("citer", "j1", 2009, refs));
        ValidationReport report = validate_corpus(Corpus::build({journal("j1")}, docs));
        CHECK(report.fatal_count() == 0);
        REQUIRE(report.warning_count() == 1);
        CHECK(report.findings[0].message.find("25.0%") != std::string::npos);
    }

    SECTION("documents typed other are flagged") {
        Corpus c = Corpus::build({journal("j1")},
                                 {document("d1", "j1", 2009, {}, DocType::other)});
        ValidationReport report = validate_corpus(c);
        REQUIRE(report.warning_count() == 1);
        CHECK(report.findings[0].code == "other_typed_documents");
    }
}

TEST_CASE("csv round trip reproduces identical bytes") {
    TempDir dir("corpus_roundtrip");
    Corpus a = load_fixture(dir);
    save_corpus(a, dir / "j2.csv", dir / "d2.csv", CorpusFormat::csv);
    Corpus b = load_corpus(dir / "j2.csv", dir / "d2.csv", CorpusFormat::csv);
    save_corpus(b, dir / "j3.csv", dir / "d3.csv", CorpusFormat::csv);
    CHECK(read_file(dir / "j2.csv") == read_file(dir / "j3.csv"));
    CHECK(read_file(dir / "d2.csv") == read_file(dir / "d3.csv"));
    CHECK(a.citation_instance_count() == b.citation_instance_count());
}

TEST_CASE("jsonl mirrors csv") {
    TempDir dir("corpus_jsonl");
    Corpus a = load_fixture(dir);
    save_corpus(a, dir / "j.jsonl", dir / "d.jsonl", CorpusFormat::jsonl);
    Corpus b = load_corpus(dir / "j.jsonl", dir / "d.jsonl", CorpusFormat::jsonl);

    std::ostringstream ca, cb;
    write_documents_csv(ca, a.document_records());
    write_documents_csv(cb, b.document_records());
    CHECK(ca.str() == cb.str());
    CHECK(a.journals().size() == b.journals().size());

    // quoted title with comma survives the csv round trip
    CHECK(b.journal_checked("j1").title == "Annals of Tests, Series A");
}

TEST_CASE("parse errors carry line numbers") {
    TempDir dir("corpus_parse");
    write_file(dir / "journals.csv",
               "journal_id,title,journal_kind,field_ids,active\n"
               "j1,Ok,peer_reviewed,,true\n"
               "j2,Bad,glossy,,true\n");
    write_file(dir / "documents.csv", "doc_id,journal_id,pub_year,doc_type,references\n");
    try {
        load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
    }

    write_file(dir / "journals.csv", "journal_id,title,journal_kind,field_ids,active\n");
    write_file(dir / "documents.csv",
               "doc_id,journal_id,pub_year,doc_type,references\n"
               "d1,j1,twenty,article,\n");
    CHECK_THROWS_AS(load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv),
                    ParseError);

    write_file(dir / "journals.csv", "journal_id,oops\n");
    CHECK_THROWS_AS(load_corpus(dir / "journals.csv", dir / "documents.csv", CorpusFormat::csv),
                    ParseError);
}

TEST_CASE("total citation instances equal resolved references") {
    TempDir dir("corpus_invariant");
    Corpus c = load_fixture(dir);
    std::size_t total = 0;
    for (const auto& [id, doc] : c.documents())
        for (int year = c.year_range()->first; year <= c.year_range()->last; ++year)
            total += c.citations_to(id, year).size();
    CHECK(total == c.resolved_references());
}
