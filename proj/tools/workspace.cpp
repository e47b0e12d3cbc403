#include "workspace.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace tdms::cli {

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::vector<std::string> out;
    for (auto& line : text::split(io::read_file(path), '\n')) {
        auto t = text::trim(line);
        if (!t.empty() && t.front() != '#') out.push_back(std::move(t));
    }
    return out;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::vector<fs::path> source_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InvalidArgument("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".xml" || ext == ".tdms" || ext == ".txt") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RawDocument> load_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InvalidArgument("'" + dir.string() + "' is not a directory");
    std::vector<RawDocument> docs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (!ends_with(name, ".json") || ends_with(name, ".tables.json") || ends_with(name, ".manifest.json") ||
            name == "manifest.json")
            continue;
        auto doc = from_canonical_json(io::read_file(entry.path()));
        const auto tables = dir / (doc.doc_id + ".tables.json");
        if (fs::exists(tables)) doc.tables = tables_from_json(io::read_file(tables));
        docs.push_back(std::move(doc));
    }
    if (docs.empty())
        for (const auto& path : source_files(dir)) docs.push_back(load_document(path));
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
    for (std::size_t i = 1; i < docs.size(); ++i)
        if (docs[i].doc_id == docs[i - 1].doc_id) throw FormatError("duplicate document id '" + docs[i].doc_id + "'");
    return docs;
}

void write_document(const fs::path& out_dir, const RawDocument& doc) {
    io::write_file_atomic(out_dir / (doc.doc_id + ".json"), to_canonical_json(doc));
    io::write_file_atomic(out_dir / (doc.doc_id + ".tables.json"), tables_to_json(doc.doc_id, doc.tables));
}

void write_split(const fs::path& dir, const CorpusSplit& split) {
    auto ids = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& id : s) out += id + '\n';
        return out;
    };
    std::string space;
    for (const auto& t : split.label_space) space += t.task + '\t' + t.dataset + '\t' + t.metric + '\n';
    io::write_file_atomic(dir / "train.txt", ids(split.train));
    io::write_file_atomic(dir / "test.txt", ids(split.test));
    io::write_file_atomic(dir / "label_space.tsv", space);
}

CorpusSplit read_split(const fs::path& dir) {
    CorpusSplit split;
    for (auto& id : read_lines(dir / "train.txt")) split.train.insert(std::move(id));
    for (auto& id : read_lines(dir / "test.txt")) split.test.insert(std::move(id));
    for (const auto& line : read_lines(dir / "label_space.tsv")) {
        auto cols = text::split(line, '\t');
        if (cols.size() != 3) throw FormatError("label_space.tsv: expected 3 columns in '" + line + "'");
        TdmTriple t{cols[0], cols[1], cols[2]};
        validate(t);
        split.label_space.insert(std::move(t));
    }
    return split;
}

std::vector<GoldAnnotation> read_annotations(const fs::path& path) { return parse_annotations_tsv(io::read_file(path)); }

std::vector<GoldAnnotation> restrict_to(const std::vector<GoldAnnotation>& annotations, const std::set<std::string>& ids) {
    std::vector<GoldAnnotation> out;
    for (const auto& a : annotations)
        if (ids.count(a.doc_id)) out.push_back(a);
    return out;
}

RunManifest::RunManifest(std::string command) {
    doc_["command"] = std::move(command);
    doc_["version"] = "0.1.0";
    doc_["started_at"] = utc_now();
    doc_["inputs"] = nlohmann::ordered_json::object();
    doc_["outputs"] = nlohmann::ordered_json::object();
    doc_["params"] = nlohmann::ordered_json::object();
}

void RunManifest::input(const std::string& name, const std::string& value) { doc_["inputs"][name] = value; }
void RunManifest::output(const std::string& name, const std::string& value) { doc_["outputs"][name] = value; }
void RunManifest::param(const std::string& name, nlohmann::ordered_json value) { doc_["params"][name] = std::move(value); }

void RunManifest::write_next_to(const fs::path& target) {
    doc_["finished_at"] = utc_now();
    const auto path = fs::is_directory(target) ? target / "manifest.json" : fs::path(target.string() + ".manifest.json");
    io::write_file_atomic(path, doc_.dump(2) + "\n");
}

}  // namespace tdms::cli
