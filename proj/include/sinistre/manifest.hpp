#pragma once

// Run manifest: fingerprints of every input and produced artifact plus the
// effective config, written next to the artifacts. Deliberately free of
// timestamps so reruns with identical inputs produce identical bytes.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "json.hpp"

#include "sinistre/hashing.hpp"

namespace sinistre {

struct RunManifest {
    std::map<std::string, std::string> inputs;    // path -> fnv1a64 hex
    std::map<std::string, std::string> artifacts; // path -> fnv1a64 hex
    nlohmann::json config;

    void add_input(const std::filesystem::path& path) {
        inputs[path.filename().string()] = hash_hex(fnv1a64_file(path));
    }
    void add_artifact(const std::filesystem::path& path) {
        artifacts[path.filename().string()] = hash_hex(fnv1a64_file(path));
    }

    nlohmann::json to_json() const {
        return nlohmann::json{
            {"format", "sinistre-manifest"},
            {"version", 1},
            {"inputs", inputs},
            {"artifacts", artifacts},
            {"config", config}};
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write manifest '" + path.string() + "'");
        }
        out << to_json().dump(2) << '\n';
    }

    static RunManifest read(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open manifest '" + path.string() + "'");
        }
        nlohmann::json j;
        in >> j;
        RunManifest m;
        m.inputs = j.value("inputs", std::map<std::string, std::string>{});
        m.artifacts = j.value("artifacts", std::map<std::string, std::string>{});
        m.config = j.value("config", nlohmann::json::object());
        return m;
    }
};

} // namespace sinistre
