#pragma once

// Deterministic run output: every file lands via temp-file + rename, every
// byte is hashed into a JSON manifest, and a failed run removes whatever it
// had already written. Reruns with the same config produce byte-identical
// data files; only the recorded wall time differs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "common.hpp"

namespace latscat::io {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot read file: " + path.string());
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

/// Writes content to path atomically: a sibling temp file is flushed first and
/// renamed over the target, so a crash never leaves a half-written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw config_error("cannot open for writing: " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw config_error("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Rounds a value through the 12-significant-digit text form used everywhere
/// in the output files, so JSON numbers match the CSV formatting contract.
inline double round12(double v) { return std::strtod(format_g12(v).c_str(), nullptr); }

/// Collects output files for one run and finalizes them with a manifest that
/// hashes every artifact. On failure, discard() removes everything written.
struct RunWriter {
    std::filesystem::path dir;
    struct Entry {
        std::string name;
        std::size_t bytes;
        std::uint64_t hash;
    };
    std::vector<Entry> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit RunWriter(const std::filesystem::path& out_dir) : dir(out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw config_error("cannot create out_dir: " + dir.string());
    }

    void emit(const std::string& name, const std::string& content) {
        atomic_write(dir / name, content);
        outputs.push_back({name, content.size(), fnv1a64(content)});
    }

    void discard() noexcept {
        for (const auto& e : outputs) {
            std::error_code ec;
            std::filesystem::remove(dir / e.name, ec);
        }
        outputs.clear();
    }

    /// Writes manifest.json listing every output with its content hash. The
    /// caveat string is included where the module's results carry one.
    void finalize(const std::string& module, const std::string& config_dump, std::uint64_t seed,
                  int jobs, const std::string& caveat = "") {
        const auto wall =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0);
        nlohmann::ordered_json m;
        m["tool"] = "latscat";
        m["version"] = "0.1.0";
        m["module"] = module;
        m["config_hash"] = hex64(fnv1a64(config_dump));
        m["seed"] = seed;
        m["jobs"] = jobs;
        m["versions"] = {{"compiler", std::string(__VERSION__)},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)},
                         {"cpp", static_cast<long>(__cplusplus)}};
        m["wall_ms"] = wall.count();
        if (!caveat.empty()) m["caveat"] = caveat;
        m["outputs"] = nlohmann::ordered_json::array();
        for (const auto& e : outputs)
            m["outputs"].push_back(
                {{"file", e.name}, {"bytes", e.bytes}, {"fnv1a64", hex64(e.hash)}});
        atomic_write(dir / "manifest.json", m.dump(2) + "\n");
    }
};

}  // namespace latscat::io
