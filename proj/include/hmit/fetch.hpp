#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hmit {

struct ManifestEntry {
    std::string name;
    std::string url;
    std::string sha256;  // empty = accept anything, report the digest
};

// Manifest file: one JSON object {"name": {"url": ..., "sha256": ...}, ...}.
// Entries come back sorted by name so runs are reproducible.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

// Downloads each entry into cache_dir/<name> unless a file with the right
// digest is already there. A checksum mismatch removes the bad file and
// throws IntegrityError; transport failures throw FetchError naming the
// dataset. Returns the cached paths in entry order.
std::vector<std::filesystem::path> fetch_benchmarks(const std::vector<ManifestEntry>& entries,
                                                    const std::filesystem::path& cache_dir);

}  // namespace hmit
