#include "bsvi/report.hpp"

#include <fstream>
#include <sstream>

#include "bsvi/errors.hpp"

namespace bsvi {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("file_hash: cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return fnv1a_hex(ss.str());
}

bool ReportManifest::all_pass() const {
    for (const CheckEntry& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json ReportManifest::to_json() const {
    nlohmann::json arts = nlohmann::json::array();
    for (const ArtifactEntry& a : artifacts) arts.push_back({{"path", a.path}, {"hash", a.hash}});
    nlohmann::json chks = nlohmann::json::array();
    for (const CheckEntry& c : checks) chks.push_back({{"name", c.name}, {"pass", c.pass}});
    nlohmann::json tms = nlohmann::json::array();
    for (const TimingEntry& t : timings) tms.push_back({{"name", t.name}, {"seconds", t.seconds}});
    return {{"run_id", run_id},     {"config_hash", config_hash}, {"seed", seed},
            {"artifacts", arts},    {"checks", chks},             {"timings", tms},
            {"pass", all_pass()}};
}

ReportManifest emit_report(ReportManifest manifest, const std::filesystem::path& out_dir,
                           bool force) {
    if (manifest.artifacts.empty() && manifest.checks.empty())
        throw Error("emit_report: nothing to report (no artifacts, no checks)");
    const std::filesystem::path mpath = out_dir / "manifest.json";
    if (std::filesystem::exists(mpath) && !force)
        throw Error("emit_report: " + mpath.string() +
                    " already exists; pass --force to overwrite");
    for (ArtifactEntry& a : manifest.artifacts)
        if (a.hash.empty()) a.hash = file_hash(out_dir / a.path);
    std::ofstream os(mpath);
    if (!os) throw Error("emit_report: cannot open " + mpath.string());
    os << manifest.to_json().dump(2) << '\n';
    return manifest;
}

}  // namespace bsvi
