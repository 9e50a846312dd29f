#include "hmit/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>

#include <httplib.h>
#include <json.hpp>

#include "hmit/errors.hpp"
#include "hmit/sha256.hpp"

namespace hmit {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port], what httplib::Client wants
    std::string path;
};

SplitUrl split_url(const std::string& url, const std::string& name) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw FetchError(name + ": malformed url '" + url + "'");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

void download(const ManifestEntry& e, const std::filesystem::path& dest) {
    SplitUrl u = split_url(e.url, e.name);
    httplib::Client client(u.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(15);
    client.set_read_timeout(60);
    auto res = client.Get(u.path);
    if (!res)
        throw FetchError(e.name + ": " + httplib::to_string(res.error()) + " (" + e.url + ")");
    if (res->status != 200)
        throw FetchError(e.name + ": HTTP " + std::to_string(res->status) + " (" + e.url + ")");
    std::ofstream out(dest, std::ios::binary);
    if (!out) throw IoError("cannot write " + dest.string());
    out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
    if (!out) throw IoError("write failed for " + dest.string());
}

}  // namespace

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    if (!j.is_object()) throw ParseError(path.string() + ": expected a JSON object");
    std::vector<ManifestEntry> entries;
    for (const auto& [name, val] : j.items()) {
        ManifestEntry e;
        e.name = name;
        e.url = val.at("url").get<std::string>();
        e.sha256 = lower(val.value("sha256", ""));
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });
    return entries;
}

std::vector<std::filesystem::path> fetch_benchmarks(const std::vector<ManifestEntry>& entries,
                                                    const std::filesystem::path& cache_dir) {
    std::filesystem::create_directories(cache_dir);
    std::vector<std::filesystem::path> paths;
    for (const ManifestEntry& e : entries) {
        std::filesystem::path dest = cache_dir / e.name;
        if (std::filesystem::exists(dest)) {
            std::string digest = sha256_hex_file(dest);
            if (e.sha256.empty() || digest == e.sha256) {
                paths.push_back(dest);
                continue;
            }
            std::cerr << "[fetch] stale cache entry for " << e.name << ", re-downloading\n";
        }
        download(e, dest);
        std::string digest = sha256_hex_file(dest);
        if (!e.sha256.empty() && digest != e.sha256) {
            std::filesystem::remove(dest);
            throw IntegrityError(e.name + ": sha256 mismatch, expected " + e.sha256 + ", got " +
                                 digest);
        }
        if (e.sha256.empty())
            std::cerr << "[fetch] " << e.name << ": no pinned digest, downloaded sha256=" << digest
                      << "\n";
        paths.push_back(dest);
    }
    return paths;
}

}  // namespace hmit
