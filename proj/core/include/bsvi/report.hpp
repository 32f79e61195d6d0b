#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bsvi {

// FNV-1a 64-bit over raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

struct ArtifactEntry {
    std::string path;  // relative to the manifest directory
    std::string hash;
};
struct CheckEntry {
    std::string name;
    bool pass = false;
};
struct TimingEntry {
    std::string name;
    double seconds = 0.0;
};

// One manifest per run directory. Every output file is listed with a content
// hash; rerunning with the same config and seed reproduces the hashes.
struct ReportManifest {
    std::string run_id;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<ArtifactEntry> artifacts;
    std::vector<CheckEntry> checks;
    std::vector<TimingEntry> timings;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

// Hashes the listed artifact files (paths relative to out_dir) and writes
// manifest.json. Refuses to clobber an existing manifest unless force is set.
ReportManifest emit_report(ReportManifest manifest, const std::filesystem::path& out_dir,
                           bool force = false);

}  // namespace bsvi
