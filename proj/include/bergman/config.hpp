#pragma once

#include "bergman/continuation.hpp"
#include "bergman/moments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bergman {

// 64-bit LCG; uniform() takes the top 53 bits.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next()
    {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct ExperimentConfig {
    std::string domain = "disk";
    unsigned precision_bits = 0;
    int degree_max = 32;
    QuadratureScheme quadrature;
    AnnulusConfig annulus;
    std::vector<Complex> interior_points;
    std::vector<Complex> exterior_points;
    int random_interior = 0;
    int n_min = 8;
    int table_J = 0;
    std::vector<int> h_rows;
    RasterSpec raster;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool verify_full = false;
};

// Throws Error(ConfigError) on anything malformed. Defaults are filled and random samples drawn.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Resolved config as JSON text, reals as decimal strings.
std::string config_to_json(const ExperimentConfig& cfg);

} // namespace bergman
