#include "lqg/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lqg {

namespace {

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T* out) {
    if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    maybe(j, "gamma", &c.gamma);
    maybe(j, "seed", &c.seed);
    maybe(j, "n_samples", &c.n_samples);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        maybe(g, "n_x", &c.n_x);
        maybe(g, "n_theta", &c.n_theta);
        maybe(g, "n_modes", &c.n_modes);
        maybe(g, "n_steps", &c.n_steps);
    }
    maybe(j, "threads", &c.threads);
    maybe(j, "output_dir", &c.output_dir);
    if (j.contains("truncations")) {
        const json& t = j.at("truncations");
        maybe(t, "bessel_min_max", &c.bessel_min_max);
        maybe(t, "bessel_t_lo", &c.bessel_t_lo);
        maybe(t, "bessel_t_hi", &c.bessel_t_hi);
        maybe(t, "stable_min_height", &c.stable_min_height);
        maybe(t, "stable_t_lo", &c.stable_t_lo);
        maybe(t, "stable_t_hi", &c.stable_t_hi);
        maybe(t, "stable_threshold_mult", &c.stable_threshold_mult);
        maybe(t, "stable_jump_c0", &c.stable_jump_c0);
        maybe(t, "loop_relaxation_delta", &c.loop_relaxation_delta);
        maybe(t, "sphere_area_lo", &c.sphere_area_lo);
        maybe(t, "sphere_area_hi", &c.sphere_area_hi);
        maybe(t, "bottleneck_r", &c.bottleneck_r);
        maybe(t, "bottleneck_epsilon", &c.bottleneck_epsilon);
    }
    if (c.n_samples < 1 || c.n_x < 2 || c.n_theta < 2 || c.n_modes < 1 ||
        c.n_steps < 2 || c.threads < 1)
        throw std::invalid_argument("RunConfig: all counts must be >= 1");
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RunConfig: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j;
    j["gamma"] = gamma;
    j["seed"] = seed;
    j["n_samples"] = n_samples;
    j["grid"] = {{"n_x", n_x},
                 {"n_theta", n_theta},
                 {"n_modes", n_modes},
                 {"n_steps", n_steps}};
    j["threads"] = threads;
    j["output_dir"] = output_dir;
    j["truncations"] = {{"bessel_min_max", bessel_min_max},
                        {"bessel_t_lo", bessel_t_lo},
                        {"bessel_t_hi", bessel_t_hi},
                        {"stable_min_height", stable_min_height},
                        {"stable_t_lo", stable_t_lo},
                        {"stable_t_hi", stable_t_hi},
                        {"stable_threshold_mult", stable_threshold_mult},
                        {"stable_jump_c0", stable_jump_c0},
                        {"loop_relaxation_delta", loop_relaxation_delta},
                        {"sphere_area_lo", sphere_area_lo},
                        {"sphere_area_hi", sphere_area_hi},
                        {"bottleneck_r", bottleneck_r},
                        {"bottleneck_epsilon", bottleneck_epsilon}};
    return j.dump(2);
}

void RunConfig::apply_env_defaults() {
    if (const char* dir = std::getenv("LQG_OUTPUT_DIR")) {
        if (*dir) output_dir = dir;
    }
}

}  // namespace lqg
