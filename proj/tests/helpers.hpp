#pragma once

// Shared test utilities: scratch directories, file helpers, fixture builders.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <snipkit/corpus.hpp>

namespace testutil {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("snipkit_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline snipkit::JournalRecord journal(std::string id,
                                      snipkit::JournalKind kind = snipkit::JournalKind::peer_reviewed,
                                      std::set<std::string> fields = {}) {
    snipkit::JournalRecord j;
    j.journal_id = std::move(id);
    j.title = "Journal " + j.journal_id;
    j.kind = kind;
    j.field_ids = std::move(fields);
    j.active = true;
    return j;
}

inline snipkit::Reference resolved_ref(std::string target, int year) {
    snipkit::Reference r;
    r.target = std::move(target);
    r.cited_year = year;
    return r;
}

inline snipkit::Reference unresolved_ref(std::optional<int> year = std::nullopt) {
    snipkit::Reference r;
    r.cited_year = year;
    return r;
}

inline snipkit::DocumentRecord document(std::string id, std::string journal, int year,
                                        std::vector<snipkit::Reference> refs = {},
                                        snipkit::DocType type = snipkit::DocType::article) {
    snipkit::DocumentRecord d;
    d.doc_id = std::move(id);
    d.journal_id = std::move(journal);
    d.pub_year = year;
    d.doc_type = type;
    d.references = std::move(refs);
    return d;
}

#ifdef SNIP_CLI_PATH
struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

inline CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(SNIP_CLI_PATH) + " " + args + " 2>&1";
    CliResult result;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}
#endif

}  // namespace testutil
