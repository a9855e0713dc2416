#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lqg {

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t hash_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

// Run manifest: config echo, content hash per artifact, wall time,
// free-form results. Serialized as manifest.json next to the artifacts.
class Manifest {
  public:
    explicit Manifest(std::string config_json) : config_json_(std::move(config_json)) {}

    void add_artifact(const std::string& path);
    void add_result(const std::string& key, double value);
    void add_result_text(const std::string& key, const std::string& value);
    void set_wall_seconds(double s) { wall_seconds_ = s; }

    std::string to_json() const;
    void write(const std::string& path) const;

  private:
    std::string config_json_;
    std::vector<std::pair<std::string, std::string>> artifacts_;  // path, hash
    std::vector<std::pair<std::string, std::string>> results_;
    double wall_seconds_ = 0.0;
};

}  // namespace lqg
