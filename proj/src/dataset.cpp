#include "heliocast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/rng.hpp"

namespace helio {

namespace {

constexpr std::string_view kBaseHeader =
    "location_id,timestamp,dew_point,solar_zenith_angle,wind_speed,precipitable_water,"
    "wind_direction,relative_humidity,temperature";

double parse_feature(std::string_view field, std::size_t line_no, bool& missing) {
    if (field.empty()) {
        missing = true;
        return 0.0;
    }
    return parse_double_field(field, line_no);
}

void check_bounds(const WeatherRecord& r, std::size_t line_no) {
    const auto fail = [line_no](const std::string& what) {
        throw UnparseableRow("line " + std::to_string(line_no) + ": " + what);
    };
    if (r.solar_zenith_angle < 0.0 || r.solar_zenith_angle > 180.0)
        fail("solar_zenith_angle outside [0, 180]");
    if (r.relative_humidity < 0.0 || r.relative_humidity > 100.0)
        fail("relative_humidity outside [0, 100]");
    if (!std::isnan(r.ghi) && r.ghi < 0.0) fail("negative ghi");
    if (r.issued_lead_hours < 0) fail("negative issued_lead");
    if (minute_of(r.timestamp) % 30 != 0) fail("timestamp off the 30-minute lattice");
}

std::uint64_t loc_time_key(int location_id, Timestamp t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(location_id)) << 32) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(t));
}

}  // namespace

std::vector<std::string> default_weather_features() {
    return std::vector<std::string>(kDefaultWeatherFeatures.begin(),
                                    kDefaultWeatherFeatures.end());
}

double feature_value(const WeatherRecord& r, std::string_view name) {
    if (name == "dew_point") return r.dew_point;
    if (name == "solar_zenith_angle") return r.solar_zenith_angle;
    if (name == "wind_speed") return r.wind_speed;
    if (name == "precipitable_water") return r.precipitable_water;
    if (name == "wind_direction") return r.wind_direction;
    if (name == "relative_humidity") return r.relative_humidity;
    if (name == "temperature") return r.temperature;
    if (name == "ghi") return r.ghi;
    if (name == "pressure") {
        if (!r.pressure) throw SchemaMismatch("record has no pressure value");
        return *r.pressure;
    }
    throw SchemaMismatch("unknown feature '" + std::string(name) + "'");
}

IngestResult ingest_weather_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);

    IngestResult result;
    {
        const std::string& header = lines[0];
        std::string_view rest(header);
        if (rest.substr(0, kBaseHeader.size()) != kBaseHeader)
            throw MalformedHeader(path.string() + ": unexpected column set");
        rest.remove_prefix(kBaseHeader.size());
        if (rest.substr(0, 9) == ",pressure") {
            result.has_pressure = true;
            rest.remove_prefix(9);
        }
        if (rest.substr(0, 4) == ",ghi") {
            result.has_ghi = true;
            rest.remove_prefix(4);
        } else {
            result.has_ghi = false;
        }
        if (rest.substr(0, 12) == ",issued_lead") {
            result.has_issued_lead = true;
            rest.remove_prefix(12);
        }
        if (!rest.empty()) throw MalformedHeader(path.string() + ": unexpected column set");
        // a file without targets must at least be a forecast file
        if (!result.has_ghi && !result.has_issued_lead)
            throw MalformedHeader(path.string() + ": neither ghi nor issued_lead present");
    }

    const std::size_t expected_fields = 9 + (result.has_pressure ? 1 : 0) +
                                        (result.has_ghi ? 1 : 0) +
                                        (result.has_issued_lead ? 1 : 0);
    result.records.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != expected_fields)
            throw UnparseableRow("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected_fields) + " fields, got " +
                                 std::to_string(fields.size()));
        ++result.total_rows;

        bool missing = false;
        for (const auto& f : fields)
            if (f.empty()) missing = true;
        if (missing && !result.has_ghi) {
            // forecast files: every present column is a feature
            ++result.dropped_missing;
            continue;
        }

        WeatherRecord r;
        std::size_t col = 0;
        if (fields[0].empty() || fields[1].empty()) {
            ++result.dropped_missing;
            continue;
        }
        r.location_id = static_cast<int>(parse_int_field(fields[col++], line_no));
        try {
            r.timestamp = parse_timestamp(fields[col++]);
        } catch (const InvalidTimestamp& e) {
            throw UnparseableRow("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.dew_point = parse_feature(fields[col++], line_no, missing);
        r.solar_zenith_angle = parse_feature(fields[col++], line_no, missing);
        r.wind_speed = parse_feature(fields[col++], line_no, missing);
        r.precipitable_water = parse_feature(fields[col++], line_no, missing);
        r.wind_direction = parse_feature(fields[col++], line_no, missing);
        r.relative_humidity = parse_feature(fields[col++], line_no, missing);
        r.temperature = parse_feature(fields[col++], line_no, missing);
        if (result.has_pressure) {
            bool pressure_missing = false;
            const double p = parse_feature(fields[col++], line_no, pressure_missing);
            if (pressure_missing)
                missing = true;
            else
                r.pressure = p;
        }
        if (result.has_ghi) {
            bool ghi_missing = false;
            r.ghi = parse_feature(fields[col++], line_no, ghi_missing);
            if (ghi_missing) missing = true;
        } else {
            r.ghi = std::nan("");
        }
        if (result.has_issued_lead)
            r.issued_lead_hours = static_cast<int>(parse_int_field(fields[col++], line_no));

        if (missing) {
            ++result.dropped_missing;
            continue;
        }
        check_bounds(r, line_no);
        result.records.push_back(r);
    }
    return result;
}

void write_weather_csv(const std::filesystem::path& path, std::span<const WeatherRecord> records,
                       bool with_pressure, bool with_ghi, bool with_issued_lead) {
    std::string out(kBaseHeader);
    if (with_pressure) out += ",pressure";
    if (with_ghi) out += ",ghi";
    if (with_issued_lead) out += ",issued_lead";
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.location_id);
        out += ',';
        out += format_timestamp(r.timestamp);
        for (double v : {r.dew_point, r.solar_zenith_angle, r.wind_speed, r.precipitable_water,
                         r.wind_direction, r.relative_humidity, r.temperature}) {
            out += ',';
            out += format_double(v);
        }
        if (with_pressure) {
            out += ',';
            if (r.pressure) out += format_double(*r.pressure);
        }
        if (with_ghi) {
            out += ',';
            if (!std::isnan(r.ghi)) out += format_double(r.ghi);
        }
        if (with_issued_lead) {
            out += ',';
            out += std::to_string(r.issued_lead_hours);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

SplitSpec SplitSpec::winter() {
    return SplitSpec{SplitKind::winter, "winter", {10, 11}, {12}};
}

SplitSpec SplitSpec::summer() {
    return SplitSpec{SplitKind::summer, "summer", {6, 7}, {8}};
}

SplitSpec SplitSpec::global() {
    return SplitSpec{SplitKind::global, "global", {1, 2, 3, 4, 5, 6, 7, 9, 10, 11}, {8, 12}};
}

SplitSpec SplitSpec::custom(std::string name, std::vector<int> train_months,
                            std::vector<int> test_months) {
    for (int m : train_months)
        for (int t : test_months)
            if (m == t)
                throw ParameterOutOfRange("train and test months overlap on " +
                                          std::to_string(m));
    for (int m : train_months)
        if (m < 1 || m > 12) throw ParameterOutOfRange("month " + std::to_string(m));
    for (int m : test_months)
        if (m < 1 || m > 12) throw ParameterOutOfRange("month " + std::to_string(m));
    if (train_months.empty() || test_months.empty())
        throw ParameterOutOfRange("custom split needs train and test months");
    return SplitSpec{SplitKind::custom, std::move(name), std::move(train_months),
                     std::move(test_months)};
}

SplitSpec SplitSpec::by_name(const std::string& name) {
    if (name == "winter") return winter();
    if (name == "summer") return summer();
    if (name == "global") return global();
    throw ParameterOutOfRange("unknown split '" + name + "'");
}

SplitResult split_by_month(std::span<const WeatherRecord> records, const SplitSpec& spec) {
    std::array<bool, 13> in_train{}, in_test{}, present{};
    for (int m : spec.train_months) in_train[m] = true;
    for (int m : spec.test_months) in_test[m] = true;

    SplitResult result;
    for (const auto& r : records) {
        const int m = month_of(r.timestamp);
        present[m] = true;
        if (in_train[m])
            result.train.push_back(r);
        else if (in_test[m])
            result.test.push_back(r);
    }
    for (int m = 1; m <= 12; ++m)
        if ((in_train[m] || in_test[m]) && !present[m])
            throw EmptySplit("split '" + spec.name + "' needs month " + std::to_string(m) +
                             " but the data has none");
    return result;
}

std::string AblationSpec::label() const {
    switch (kind) {
        case Kind::random_rows: return "random_rows:" + format_double(fraction);
        case Kind::drop_locations: return "drop_locations:" + std::to_string(location_count);
        case Kind::drop_season: return std::string("drop_season:") + season_name(season);
        case Kind::downsample: return "downsample:" + std::to_string(resolution_hours) + "h";
    }
    return "?";
}

std::vector<WeatherRecord> ablate(std::span<const WeatherRecord> train,
                                  const AblationSpec& spec) {
    std::vector<WeatherRecord> out;
    switch (spec.kind) {
        case AblationSpec::Kind::random_rows: {
            if (!(spec.fraction >= 0.0 && spec.fraction < 1.0))
                throw ParameterOutOfRange("random_rows fraction must be in [0, 1)");
            Rng rng = make_rng(spec.seed, 0xab1);
            out.reserve(train.size());
            for (const auto& r : train)
                if (canonical(rng) >= spec.fraction) out.push_back(r);
            break;
        }
        case AblationSpec::Kind::drop_locations: {
            std::vector<int> ids;
            for (const auto& r : train) ids.push_back(r.location_id);
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            if (spec.location_count < 0 || spec.location_count > static_cast<int>(ids.size()))
                throw ParameterOutOfRange("drop_locations count " +
                                          std::to_string(spec.location_count) + " of " +
                                          std::to_string(ids.size()));
            Rng rng = make_rng(spec.seed, 0xab2);
            // partial Fisher-Yates: the first location_count entries are the drops
            for (int i = 0; i < spec.location_count; ++i) {
                const std::size_t j = i + uniform_below(rng, ids.size() - i);
                std::swap(ids[i], ids[j]);
            }
            std::vector<bool> dropped_id;
            for (int i = 0; i < spec.location_count; ++i) {
                if (ids[i] >= static_cast<int>(dropped_id.size()))
                    dropped_id.resize(ids[i] + 1, false);
                dropped_id[ids[i]] = true;
            }
            for (const auto& r : train)
                if (r.location_id >= static_cast<int>(dropped_id.size()) ||
                    !dropped_id[r.location_id])
                    out.push_back(r);
            break;
        }
        case AblationSpec::Kind::drop_season: {
            for (const auto& r : train)
                if (season_of(r.timestamp) != spec.season) out.push_back(r);
            break;
        }
        case AblationSpec::Kind::downsample: {
            if (spec.resolution_hours < 1 || spec.resolution_hours > 24)
                throw ParameterOutOfRange("downsample resolution must be 1..24 hours");
            for (const auto& r : train) {
                if (minute_of(r.timestamp) == 0 &&
                    hour_of(r.timestamp) % spec.resolution_hours == 0)
                    out.push_back(r);
            }
            break;
        }
    }
    return out;
}

AlignResult horizon_align(std::span<const WeatherRecord> measurements,
                          std::span<const WeatherRecord> forecasts, int horizon_hours) {
    if (horizon_hours != 3 && horizon_hours != 6 && horizon_hours != 9 && horizon_hours != 12)
        throw ParameterOutOfRange("horizon must be one of 3, 6, 9, 12 hours");

    std::unordered_map<std::uint64_t, const WeatherRecord*> by_valid_time;
    by_valid_time.reserve(forecasts.size());
    for (const auto& f : forecasts)
        if (f.issued_lead_hours == horizon_hours)
            by_valid_time.emplace(loc_time_key(f.location_id, f.timestamp), &f);
    if (by_valid_time.empty())
        throw NoForecastData("no forecast rows with issued_lead = " +
                             std::to_string(horizon_hours));

    AlignResult result;
    result.rows.reserve(measurements.size());
    for (const auto& m : measurements) {
        auto it = by_valid_time.find(loc_time_key(m.location_id, m.timestamp));
        if (it == by_valid_time.end()) {
            ++result.excluded;
            continue;
        }
        WeatherRecord row = *it->second;  // forecast features, valid at t
        row.ghi = m.ghi;                  // measured target
        result.rows.push_back(row);
    }
    return result;
}

double irradiance_to_power(double ghi_w_m2, double area_m2, double efficiency) {
    if (ghi_w_m2 < 0.0 || area_m2 < 0.0 || efficiency < 0.0)
        throw NegativeInput("irradiance_to_power inputs must be >= 0");
    if (efficiency > 1.0) throw EfficiencyAboveOne(format_double(efficiency));
    return ghi_w_m2 * area_m2 * efficiency;
}

std::vector<CorrelationEntry> correlation_table(std::span<const WeatherRecord> records,
                                                std::span<const std::string> features) {
    if (records.size() < 2)
        throw ParameterOutOfRange("correlation needs at least 2 records");

    const double n = static_cast<double>(records.size());
    double ghi_mean = 0.0;
    for (const auto& r : records) ghi_mean += r.ghi;
    ghi_mean /= n;
    double ghi_ss = 0.0;
    for (const auto& r : records) ghi_ss += (r.ghi - ghi_mean) * (r.ghi - ghi_mean);

    std::vector<CorrelationEntry> table;
    table.reserve(features.size());
    for (const auto& name : features) {
        double mean = 0.0;
        for (const auto& r : records) mean += feature_value(r, name);
        mean /= n;
        double ss = 0.0, cross = 0.0;
        for (const auto& r : records) {
            const double dx = feature_value(r, name) - mean;
            ss += dx * dx;
            cross += dx * (r.ghi - ghi_mean);
        }
        const double denom = std::sqrt(ss * ghi_ss);
        // constant feature (or constant ghi): undefined, reported as NaN
        table.push_back({name, denom == 0.0 ? std::nan("") : cross / denom});
    }
    return table;
}

}  // namespace helio
