#include "lqg/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lqg {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string s = ss.str();
    return fnv1a64(s.data(), s.size());
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void Manifest::add_artifact(const std::string& path) {
    artifacts_.push_back({path, hash_hex(hash_file(path))});
}

void Manifest::add_result(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    results_.push_back({key, buf});
}

void Manifest::add_result_text(const std::string& key, const std::string& value) {
    results_.push_back({key, value});
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_json_);
    nlohmann::json arts = nlohmann::json::object();
    for (const auto& [path, hash] : artifacts_) arts[path] = hash;
    j["hashes"] = arts;
    nlohmann::json res = nlohmann::json::object();
    for (const auto& [k, v] : results_) res[k] = v;
    j["results"] = res;
    j["timings"] = {{"wall_seconds", wall_seconds_}};
    return j.dump(2);
}

void Manifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Manifest::write: cannot open " + path);
    out << to_json() << "\n";
}

}  // namespace lqg
