#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "heliocast/dataset.hpp"
#include "heliocast/geo.hpp"

namespace helio {

// Synthetic stand-in for the measurement/forecast feeds: deterministic
// solar geometry plus a seeded, spatially smoothed AR(1) cloud process.
struct SynthConfig {
    int grid_rows = 12;
    int grid_cols = 24;
    double origin_lat = 29.25;   // grid south-west corner
    double origin_lon = -98.75;
    double spacing_km = 3.0;     // each node covers a 3x3 km cell
    Timestamp start = 0;         // inclusive
    Timestamp end = 0;           // exclusive
    int step_minutes = 30;
    // indexed by Season: winter, spring, summer, fall
    std::array<double, 4> cloud_volatility = {0.30, 0.18, 0.10, 0.18};
    double forecast_noise_per_hour = 0.02;
    std::vector<int> horizons = {3, 6, 9};
    std::uint64_t seed = 1;
    // solar-time reference; unset = grid-centre longitude (clock noon =
    // solar noon). Set 0.0 for UTC-style timestamps as real feeds carry.
    std::optional<double> reference_meridian_override;

    void validate() const;  // ConfigInvalid
    int location_count() const { return grid_rows * grid_cols; }
    std::int64_t step_count() const;
    double reference_meridian() const;
};

struct SynthOutput {
    std::vector<Location> locations;
    std::vector<WeatherRecord> measurements;                 // sorted (location, time)
    std::map<int, std::vector<WeatherRecord>> forecasts;     // per horizon, no ghi
};

SynthOutput generate(const SynthConfig& cfg, int threads = 1);

}  // namespace helio
