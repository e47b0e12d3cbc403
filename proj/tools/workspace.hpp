#pragma once

// File layout shared by the subcommands: corpus directories, split
// directories and run manifests.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdms/tdms.hpp"

namespace tdms::cli {

namespace fs = std::filesystem;

/// Reads every document in `dir`: `<id>.json` (+ `<id>.tables.json`) written
/// by `ingest`, or raw `.xml` / `.tdms` sources. Sorted by doc_id.
std::vector<RawDocument> load_corpus(const fs::path& dir);

/// Raw sources (`.xml`, `.tdms`, `.txt`) in `dir`, sorted by name.
std::vector<fs::path> source_files(const fs::path& dir);

void write_document(const fs::path& out_dir, const RawDocument& doc);

/// train.txt, test.txt and label_space.tsv.
void write_split(const fs::path& dir, const CorpusSplit& split);
CorpusSplit read_split(const fs::path& dir);

std::vector<GoldAnnotation> read_annotations(const fs::path& path);

/// Keeps only annotations whose doc_id is in `ids`.
std::vector<GoldAnnotation> restrict_to(const std::vector<GoldAnnotation>& annotations,
                                        const std::set<std::string>& ids);

/// Accumulates the run description and writes it next to the outputs.
class RunManifest {
public:
    explicit RunManifest(std::string command);

    void input(const std::string& name, const std::string& value);
    void output(const std::string& name, const std::string& value);
    void param(const std::string& name, nlohmann::ordered_json value);

    /// Writes `<target>.manifest.json`, or `<target>/manifest.json` for a directory.
    void write_next_to(const fs::path& target);

private:
    nlohmann::ordered_json doc_;
};

}  // namespace tdms::cli
