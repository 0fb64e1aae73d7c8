#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heliocast/temporal.hpp"
#include "heliocast/timeutil.hpp"

namespace helio {

// One weather reading (or forecast) for one location and timestamp.
// `ghi` is NaN in forecast rows, whose files carry no target column.
struct WeatherRecord {
    int location_id = 0;
    Timestamp timestamp = 0;
    double dew_point = 0.0;           // degC
    double solar_zenith_angle = 0.0;  // degrees, [0, 180]
    double wind_speed = 0.0;          // m/s
    double precipitable_water = 0.0;  // cm
    double wind_direction = 0.0;      // degrees
    double relative_humidity = 0.0;   // %, [0, 100]
    double temperature = 0.0;         // degC
    std::optional<double> pressure;   // mbar, column optional
    double ghi = 0.0;                 // W/m^2, the target
    int issued_lead_hours = 0;        // 0 for measurements

    bool is_forecast() const { return issued_lead_hours > 0; }
};

// The seven weather features the models train on by default; "pressure"
// may be added via configuration when the files carry it.
inline constexpr std::array<std::string_view, 7> kDefaultWeatherFeatures = {
    "dew_point",        "solar_zenith_angle", "wind_speed", "precipitable_water",
    "wind_direction",   "relative_humidity",  "temperature"};

std::vector<std::string> default_weather_features();

// Feature access by column name; SchemaMismatch for unknown names or for
// "pressure" on a record without one.
double feature_value(const WeatherRecord& r, std::string_view name);

struct IngestResult {
    std::vector<WeatherRecord> records;
    std::size_t total_rows = 0;
    std::size_t dropped_missing = 0;
    bool has_pressure = false;
    bool has_ghi = true;
    bool has_issued_lead = false;

    double drop_fraction() const {
        return total_rows == 0 ? 0.0 : static_cast<double>(dropped_missing) / total_rows;
    }
};

// Weather CSV: header
//   location_id,timestamp,dew_point,solar_zenith_angle,wind_speed,
//   precipitable_water,wind_direction,relative_humidity,temperature
//   [,pressure][,ghi][,issued_lead]
// Timestamps are ISO-8601 YYYY-MM-DDTHH:MM; missing values are empty
// fields and drop the whole row (counted). Forecast files omit ghi and
// must carry issued_lead. Out-of-bounds values raise UnparseableRow with
// the line number.
IngestResult ingest_weather_csv(const std::filesystem::path& path);

// Canonical writer; ingest(write(ingest(f))) is a fixed point.
void write_weather_csv(const std::filesystem::path& path, std::span<const WeatherRecord> records,
                       bool with_pressure, bool with_ghi, bool with_issued_lead);

enum class SplitKind { winter, summer, global, custom };

struct SplitSpec {
    SplitKind kind = SplitKind::summer;
    std::string name = "summer";
    std::vector<int> train_months;  // 1..12
    std::vector<int> test_months;

    static SplitSpec winter();  // train {Oct, Nov}, test {Dec}
    static SplitSpec summer();  // train {Jun, Jul}, test {Aug}
    static SplitSpec global();  // test {Aug, Dec}, train the other months
    static SplitSpec custom(std::string name, std::vector<int> train_months,
                            std::vector<int> test_months);
    static SplitSpec by_name(const std::string& name);
};

struct SplitResult {
    std::vector<WeatherRecord> train;
    std::vector<WeatherRecord> test;
};

// Membership by calendar month; EmptySplit when a requested month has no
// rows.
SplitResult split_by_month(std::span<const WeatherRecord> records, const SplitSpec& spec);

struct AblationSpec {
    enum class Kind { random_rows, drop_locations, drop_season, downsample };
    Kind kind = Kind::random_rows;
    double fraction = 0.0;     // random_rows: drop probability per row
    int location_count = 0;    // drop_locations
    Season season = Season::spring;  // drop_season
    int resolution_hours = 1;  // downsample
    std::uint64_t seed = 1;

    std::string label() const;  // e.g. "random_rows:0.5"
};

// Training-set ablations; test data is never modified.
std::vector<WeatherRecord> ablate(std::span<const WeatherRecord> train,
                                  const AblationSpec& spec);

struct AlignResult {
    std::vector<WeatherRecord> rows;  // forecast features with measured ghi
    std::size_t excluded = 0;         // targets lacking a matching forecast
};

// Pairs each target GHI at time t with the forecast issued `horizon_hours`
// ahead and valid at t for the same location.
AlignResult horizon_align(std::span<const WeatherRecord> measurements,
                          std::span<const WeatherRecord> forecasts, int horizon_hours);

// P = GHI * area * efficiency.
double irradiance_to_power(double ghi_w_m2, double area_m2, double efficiency);

struct CorrelationEntry {
    std::string feature;
    double r = 0.0;  // NaN when the feature is constant
};

// Pearson correlation of each feature against GHI.
std::vector<CorrelationEntry> correlation_table(std::span<const WeatherRecord> records,
                                                std::span<const std::string> features);

}  // namespace helio
