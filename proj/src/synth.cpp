#include "heliocast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "heliocast/errors.hpp"
#include "heliocast/rng.hpp"
#include "heliocast/solar.hpp"

namespace helio {

namespace {

constexpr double kKmPerDegreeLat = 111.1949;  // pi * 6371 / 180
constexpr double kCloudPersistence30m = 0.95;
constexpr double kCloudDimming = 0.75;  // GHI multiplier is 1 - 0.75 * cloud

constexpr std::uint64_t kCloudStream = 0xc1;
constexpr std::uint64_t kWeatherStream = 0xc2;
constexpr std::uint64_t kForecastStream = 0xf0;

// Forecast noise per field: sd = forecast_noise_per_hour * horizon * scale.
struct FieldScale {
    double dew_point = 3.0;
    double solar_zenith_angle = 4.0;
    double wind_speed = 1.2;
    double precipitable_water = 0.4;
    double wind_direction = 30.0;
    double relative_humidity = 8.0;
    double temperature = 3.0;
    double pressure = 2.0;
};

double season_base_temp(Season s) {
    switch (s) {
        case Season::winter: return 9.0;
        case Season::spring: return 18.0;
        case Season::summer: return 28.0;
        case Season::fall: return 19.0;
    }
    return 18.0;
}

template <typename Fn>
void parallel_locations(int n_loc, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (int loc = 0; loc < n_loc; ++loc) fn(loc);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n_loc + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = std::min(n_loc, t * chunk);
        const int end = std::min(n_loc, begin + chunk);
        if (begin < end)
            pool.emplace_back([&fn, begin, end] {
                for (int loc = begin; loc < end; ++loc) fn(loc);
            });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

void SynthConfig::validate() const {
    if (grid_rows < 1 || grid_cols < 1) throw ConfigInvalid("grid must be at least 1x1");
    if (!(spacing_km > 0.0)) throw ConfigInvalid("spacing_km must be positive");
    if (step_minutes < 1 || 60 % step_minutes != 0)
        throw ConfigInvalid("step_minutes must divide 60");
    if (step_minutes % 30 != 0)
        throw ConfigInvalid("step_minutes must keep the 30-minute record lattice");
    if (end <= start) throw ConfigInvalid("end must be after start");
    for (double v : cloud_volatility)
        if (v < 0.0) throw ConfigInvalid("cloud volatility must be >= 0");
    if (forecast_noise_per_hour < 0.0) throw ConfigInvalid("forecast noise must be >= 0");
    for (int h : horizons)
        if (h != 3 && h != 6 && h != 9 && h != 12)
            throw ConfigInvalid("horizons must be in {3, 6, 9, 12}");
    if (!(origin_lat >= -89.0 && origin_lat <= 89.0))
        throw ConfigInvalid("origin_lat must be in [-89, 89]");
}

std::int64_t SynthConfig::step_count() const {
    return (end - start + step_minutes - 1) / step_minutes;
}

double SynthConfig::reference_meridian() const {
    if (reference_meridian_override) return *reference_meridian_override;
    const double dlon =
        spacing_km / (kKmPerDegreeLat * std::cos(origin_lat * std::numbers::pi / 180.0));
    return origin_lon + 0.5 * (grid_cols - 1) * dlon;
}

SynthOutput generate(const SynthConfig& cfg, int threads) {
    cfg.validate();
    const int n_loc = cfg.location_count();
    const std::int64_t n_steps = cfg.step_count();
    const double dlat = cfg.spacing_km / kKmPerDegreeLat;
    const double dlon = cfg.spacing_km / (kKmPerDegreeLat *
                                          std::cos(cfg.origin_lat * std::numbers::pi / 180.0));
    const double ref_meridian = cfg.reference_meridian();

    SynthOutput out;
    out.locations.reserve(n_loc);
    for (int r = 0; r < cfg.grid_rows; ++r)
        for (int c = 0; c < cfg.grid_cols; ++c)
            out.locations.push_back(
                {r * cfg.grid_cols + c, cfg.origin_lat + r * dlat, cfg.origin_lon + c * dlon});

    std::vector<Timestamp> times(n_steps);
    std::vector<Season> seasons(n_steps);
    std::vector<double> volatility(n_steps);
    for (std::int64_t k = 0; k < n_steps; ++k) {
        times[k] = cfg.start + k * cfg.step_minutes;
        seasons[k] = season_of(times[k]);
        volatility[k] = cfg.cloud_volatility[static_cast<int>(seasons[k])];
    }

    // Latent cloud state, AR(1) per location. The 0.95 persistence is per
    // 30-minute step, so coarser steps decay accordingly.
    const double phi = std::pow(kCloudPersistence30m, cfg.step_minutes / 30.0);
    const double stationary =
        std::sqrt(1.0 - kCloudPersistence30m * kCloudPersistence30m);
    std::vector<double> latent(static_cast<std::size_t>(n_loc) * n_steps);
    parallel_locations(n_loc, threads, [&](int loc) {
        Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(loc), kCloudStream);
        double z = volatility[0] * gauss01(rng) / stationary;
        latent[static_cast<std::size_t>(loc) * n_steps] = z;
        for (std::int64_t k = 1; k < n_steps; ++k) {
            z = phi * z + volatility[k] * gauss01(rng);
            latent[static_cast<std::size_t>(loc) * n_steps + k] = z;
        }
    });

    // Smooth over the 8-neighbourhood so nearby cells share weather.
    std::vector<double> cloud(latent.size());
    parallel_locations(n_loc, threads, [&](int loc) {
        const int r = loc / cfg.grid_cols;
        const int c = loc % cfg.grid_cols;
        std::vector<int> hood;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                const int rr = r + dr, cc = c + dc;
                if (rr >= 0 && rr < cfg.grid_rows && cc >= 0 && cc < cfg.grid_cols)
                    hood.push_back(rr * cfg.grid_cols + cc);
            }
        for (std::int64_t k = 0; k < n_steps; ++k) {
            double sum = 0.0;
            for (int nb : hood) sum += latent[static_cast<std::size_t>(nb) * n_steps + k];
            cloud[static_cast<std::size_t>(loc) * n_steps + k] =
                std::clamp(sum / hood.size(), 0.0, 1.0);
        }
    });

    out.measurements.resize(latent.size());
    parallel_locations(n_loc, threads, [&](int loc) {
        Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(loc), kWeatherStream);
        const Location& site = out.locations[loc];
        double wind_dir = 360.0 * canonical(rng);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            const std::size_t slot = static_cast<std::size_t>(loc) * n_steps + k;
            const double cl = cloud[slot];
            const double sza = solar_zenith_deg(site.latitude, site.longitude, times[k],
                                                ref_meridian);
            const double cos_elev =
                std::max(0.0, std::cos(sza * std::numbers::pi / 180.0));
            const double e_temp = gauss01(rng);
            const double e_rh = gauss01(rng);
            const double e_dew = gauss01(rng);
            const double e_ws = gauss01(rng);
            const double e_pw = gauss01(rng);
            const double e_wd = gauss01(rng);
            const double e_pr = gauss01(rng);

            WeatherRecord r;
            r.location_id = site.id;
            r.timestamp = times[k];
            r.solar_zenith_angle = sza;
            r.temperature = season_base_temp(seasons[k]) + 11.0 * cos_elev * (1.0 - 0.5 * cl) +
                            1.6 * e_temp;
            r.relative_humidity =
                std::clamp(24.0 + 56.0 * cl + 0.07 * sza + 5.0 * e_rh, 0.0, 100.0);
            r.dew_point = r.temperature - (100.0 - r.relative_humidity) / 5.0 + 0.8 * e_dew;
            r.wind_speed = std::max(0.0, 2.6 + 1.8 * cos_elev * (1.0 - 0.4 * cl) + 0.9 * e_ws);
            r.precipitable_water = std::max(0.05, 1.1 + 1.7 * cl + 0.22 * e_pw);
            wind_dir += 25.0 * e_wd;
            wind_dir -= 360.0 * std::floor(wind_dir / 360.0);
            r.wind_direction = wind_dir;
            r.pressure = 1013.5 - 5.5 * cl + 1.1 * e_pr;
            r.ghi = clear_sky_ghi(sza) * (1.0 - kCloudDimming * cl);
            r.issued_lead_hours = 0;
            out.measurements[slot] = r;
        }
    });

    const FieldScale scale;
    for (int h : cfg.horizons) {
        auto& rows = out.forecasts[h];
        rows.resize(out.measurements.size());
        parallel_locations(n_loc, threads, [&](int loc) {
            Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(loc),
                               kForecastStream + static_cast<std::uint64_t>(h));
            const double sd = cfg.forecast_noise_per_hour * h;
            for (std::int64_t k = 0; k < n_steps; ++k) {
                const std::size_t slot = static_cast<std::size_t>(loc) * n_steps + k;
                WeatherRecord f = out.measurements[slot];
                f.dew_point += sd * scale.dew_point * gauss01(rng);
                f.solar_zenith_angle = std::clamp(
                    f.solar_zenith_angle + sd * scale.solar_zenith_angle * gauss01(rng), 0.0,
                    180.0);
                f.wind_speed =
                    std::max(0.0, f.wind_speed + sd * scale.wind_speed * gauss01(rng));
                f.precipitable_water = std::max(
                    0.01, f.precipitable_water + sd * scale.precipitable_water * gauss01(rng));
                f.wind_direction += sd * scale.wind_direction * gauss01(rng);
                f.wind_direction -= 360.0 * std::floor(f.wind_direction / 360.0);
                f.relative_humidity = std::clamp(
                    f.relative_humidity + sd * scale.relative_humidity * gauss01(rng), 0.0,
                    100.0);
                f.temperature += sd * scale.temperature * gauss01(rng);
                f.pressure = *f.pressure + sd * scale.pressure * gauss01(rng);
                f.ghi = std::nan("");  // targets never appear in forecast files
                f.issued_lead_hours = h;
                rows[slot] = f;
            }
        });
    }
    return out;
}

}  // namespace helio
