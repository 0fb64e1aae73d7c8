#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "heliocast/csv.hpp"
#include "heliocast/dataset.hpp"
#include "heliocast/errors.hpp"
#include "oracles.hpp"

using namespace helio;

namespace {

const char* kHeader =
    "location_id,timestamp,dew_point,solar_zenith_angle,wind_speed,precipitable_water,"
    "wind_direction,relative_humidity,temperature,ghi";

std::string row(int loc, const std::string& ts, const std::string& dew = "10") {
    return std::to_string(loc) + "," + ts + "," + dew + ",45,3,1.5,180,50,25,100";
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content) {
    const auto path = dir / name;
    write_text_file(path, content);
    return path;
}

WeatherRecord make_record(int loc, const std::string& iso, double ghi) {
    WeatherRecord r;
    r.location_id = loc;
    r.timestamp = parse_timestamp(iso);
    r.dew_point = 10.0;
    r.solar_zenith_angle = 45.0;
    r.wind_speed = 3.0;
    r.precipitable_water = 1.5;
    r.wind_direction = 180.0;
    r.relative_humidity = 50.0;
    r.temperature = 25.0;
    r.ghi = ghi;
    return r;
}

}  // namespace

TEST_CASE("ingest drops rows with missing values and counts them") {
    const auto dir = oracles::fresh_temp_dir("ingest");
    std::string content = std::string(kHeader) + "\n";
    for (int i = 0; i < 99; ++i) content += row(i % 4, "2017-06-01T12:00") + "\n";
    content += row(3, "2017-06-01T12:30", "") + "\n";  // missing dew_point
    const auto path = write_file(dir, "w.csv", content);

    const IngestResult result = ingest_weather_csv(path);
    CHECK(result.total_rows == 100);
    CHECK(result.records.size() == 99);
    CHECK(result.dropped_missing == 1);
    CHECK(result.drop_fraction() == doctest::Approx(0.01));
    CHECK(result.has_ghi);
    CHECK_FALSE(result.has_pressure);
    std::filesystem::remove_all(dir);
}

TEST_CASE("complete files have drop fraction zero") {
    const auto dir = oracles::fresh_temp_dir("ingest0");
    std::string content = std::string(kHeader) + "\n";
    for (int i = 0; i < 50; ++i) content += row(i, "2017-06-01T00:00") + "\n";
    const IngestResult result = ingest_weather_csv(write_file(dir, "w.csv", content));
    CHECK(result.drop_fraction() == 0.0);
    CHECK(result.records.size() == 50);
    std::filesystem::remove_all(dir);
}

TEST_CASE("invariant violations are unparseable rows with a line number") {
    const auto dir = oracles::fresh_temp_dir("ingest_bad");
    const std::string rh150 = std::string(kHeader) + "\n" + "0,2017-06-01T12:00,10,45,3,1.5,180,150,25,100\n";
    CHECK_THROWS_WITH_AS(ingest_weather_csv(write_file(dir, "a.csv", rh150)),
                         doctest::Contains("line 2"), UnparseableRow);

    const std::string off_lattice =
        std::string(kHeader) + "\n" + "0,2017-06-01T12:07,10,45,3,1.5,180,50,25,100\n";
    CHECK_THROWS_AS(ingest_weather_csv(write_file(dir, "b.csv", off_lattice)), UnparseableRow);

    const std::string bad_number =
        std::string(kHeader) + "\n" + "0,2017-06-01T12:00,ten,45,3,1.5,180,50,25,100\n";
    CHECK_THROWS_AS(ingest_weather_csv(write_file(dir, "c.csv", bad_number)), UnparseableRow);

    const std::string negative_ghi =
        std::string(kHeader) + "\n" + "0,2017-06-01T12:00,10,45,3,1.5,180,50,25,-5\n";
    CHECK_THROWS_AS(ingest_weather_csv(write_file(dir, "d.csv", negative_ghi)), UnparseableRow);
    std::filesystem::remove_all(dir);
}

TEST_CASE("header and file errors") {
    const auto dir = oracles::fresh_temp_dir("ingest_hdr");
    CHECK_THROWS_AS(ingest_weather_csv(write_file(dir, "a.csv", "location_id,time\n1,2\n")),
                    MalformedHeader);
    CHECK_THROWS_AS(ingest_weather_csv(write_file(dir, "b.csv", "")), EmptyFile);
    // a file with neither ghi nor issued_lead is neither measurements nor forecasts
    const std::string headless = std::string(kHeader);
    CHECK_THROWS_AS(
        ingest_weather_csv(write_file(
            dir, "c.csv", headless.substr(0, headless.size() - 4) + "\n" + "0,2017-06-01T12:00,10,45,3,1.5,180,50,25\n")),
        MalformedHeader);
    std::filesystem::remove_all(dir);
}

TEST_CASE("forecast files carry issued_lead and no ghi column") {
    const auto dir = oracles::fresh_temp_dir("ingest_fc");
    std::string content =
        "location_id,timestamp,dew_point,solar_zenith_angle,wind_speed,precipitable_water,"
        "wind_direction,relative_humidity,temperature,issued_lead\n";
    content += "0,2017-06-01T12:00,10,45,3,1.5,180,50,25,3\n";
    const IngestResult result = ingest_weather_csv(write_file(dir, "f.csv", content));
    REQUIRE(result.records.size() == 1);
    CHECK_FALSE(result.has_ghi);
    CHECK(result.has_issued_lead);
    CHECK(result.records[0].is_forecast());
    CHECK(result.records[0].issued_lead_hours == 3);
    CHECK(std::isnan(result.records[0].ghi));
    std::filesystem::remove_all(dir);
}

TEST_CASE("ingest then serialize then ingest is a fixed point") {
    const auto dir = oracles::fresh_temp_dir("roundtrip");
    std::string content = std::string(kHeader) + "\n";
    content += "0,2017-06-01T12:00,10.25,45.5,3.125,1.5,180,50,25.75,100.5\n";
    content += "1,2017-06-01T12:30,-3.5,90,0,0.25,359.5,100,40,0\n";
    const IngestResult first = ingest_weather_csv(write_file(dir, "a.csv", content));
    write_weather_csv(dir / "b.csv", first.records, first.has_pressure, first.has_ghi,
                      first.has_issued_lead);
    const IngestResult second = ingest_weather_csv(dir / "b.csv");
    REQUIRE(second.records.size() == first.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i) {
        CHECK(second.records[i].timestamp == first.records[i].timestamp);
        CHECK(second.records[i].dew_point == first.records[i].dew_point);
        CHECK(second.records[i].ghi == first.records[i].ghi);
    }
    // and the second serialization is byte-identical
    write_weather_csv(dir / "c.csv", second.records, second.has_pressure, second.has_ghi,
                      second.has_issued_lead);
    std::ifstream b(dir / "b.csv"), c(dir / "c.csv");
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    const std::string sc((std::istreambuf_iterator<char>(c)), std::istreambuf_iterator<char>());
    CHECK(sb == sc);
    std::filesystem::remove_all(dir);
}

TEST_CASE("splits follow the seasonal month recipes") {
    std::vector<WeatherRecord> records;
    for (int month = 1; month <= 12; ++month) {
        char iso[20];
        std::snprintf(iso, sizeof(iso), "2017-%02d-15T12:00", month);
        records.push_back(make_record(0, iso, 100.0));
    }

    const SplitResult summer = split_by_month(records, SplitSpec::summer());
    CHECK(summer.train.size() == 2);
    CHECK(summer.test.size() == 1);
    for (const auto& r : summer.train) CHECK(month_of(r.timestamp) != 8);
    CHECK(month_of(summer.test[0].timestamp) == 8);

    const SplitResult winter = split_by_month(records, SplitSpec::winter());
    std::set<int> winter_train;
    for (const auto& r : winter.train) winter_train.insert(month_of(r.timestamp));
    CHECK(winter_train == std::set<int>{10, 11});
    CHECK(month_of(winter.test[0].timestamp) == 12);

    const SplitResult global = split_by_month(records, SplitSpec::global());
    std::set<int> global_train;
    for (const auto& r : global.train) global_train.insert(month_of(r.timestamp));
    CHECK(global_train == std::set<int>{1, 2, 3, 4, 5, 6, 7, 9, 10, 11});
    std::set<int> global_test;
    for (const auto& r : global.test) global_test.insert(month_of(r.timestamp));
    CHECK(global_test == std::set<int>{8, 12});
}

TEST_CASE("split partitions rows: train + test + excluded = all") {
    std::vector<WeatherRecord> records;
    for (int month = 1; month <= 12; ++month)
        for (int day = 1; day <= 3; ++day) {
            char iso[20];
            std::snprintf(iso, sizeof(iso), "2017-%02d-%02dT06:00", month, day);
            records.push_back(make_record(0, iso, 50.0));
        }
    const SplitResult parts = split_by_month(records, SplitSpec::summer());
    CHECK(parts.train.size() + parts.test.size() <= records.size());
    CHECK(parts.train.size() == 6);
    CHECK(parts.test.size() == 3);
}

TEST_CASE("split errors") {
    std::vector<WeatherRecord> only_june = {make_record(0, "2017-06-15T12:00", 10.0)};
    CHECK_THROWS_AS(split_by_month(only_june, SplitSpec::summer()), EmptySplit);
    CHECK_THROWS_AS(SplitSpec::custom("x", {6, 7}, {7}), ParameterOutOfRange);
}

TEST_CASE("random_rows ablation: zero fraction is the identity") {
    std::vector<WeatherRecord> records;
    for (int i = 0; i < 200; ++i) records.push_back(make_record(i % 7, "2017-06-01T12:00", i));
    AblationSpec spec;
    spec.kind = AblationSpec::Kind::random_rows;
    spec.fraction = 0.0;
    CHECK(ablate(records, spec).size() == records.size());
    spec.fraction = 0.5;
    const auto half = ablate(records, spec);
    CHECK(half.size() < records.size());
    CHECK(half.size() > 0);
    // deterministic per seed
    CHECK(ablate(records, spec).size() == half.size());
    spec.fraction = 1.5;
    CHECK_THROWS_AS(ablate(records, spec), ParameterOutOfRange);
}

TEST_CASE("drop_locations removes whole locations, keeps the rest") {
    std::vector<WeatherRecord> records;
    for (int loc = 0; loc < 288; ++loc)
        for (int k = 0; k < 2; ++k)
            records.push_back(make_record(loc, k == 0 ? "2017-06-01T12:00" : "2017-06-01T12:30",
                                          100.0));
    AblationSpec spec;
    spec.kind = AblationSpec::Kind::drop_locations;
    spec.location_count = 10;
    spec.seed = 9;
    const auto remaining = ablate(records, spec);
    std::set<int> ids;
    for (const auto& r : remaining) ids.insert(r.location_id);
    CHECK(ids.size() == 278);
    CHECK(remaining.size() == 278 * 2);
    spec.location_count = 500;
    CHECK_THROWS_AS(ablate(records, spec), ParameterOutOfRange);
}

TEST_CASE("drop_season removes exactly the matching rows") {
    std::vector<WeatherRecord> records;
    for (int month = 1; month <= 12; ++month) {
        char iso[20];
        std::snprintf(iso, sizeof(iso), "2017-%02d-15T00:00", month);
        records.push_back(make_record(0, iso, 10.0));
    }
    AblationSpec spec;
    spec.kind = AblationSpec::Kind::drop_season;
    spec.season = Season::spring;
    const auto out = ablate(records, spec);
    for (const auto& r : out) CHECK(season_of(r.timestamp) != Season::spring);
    CHECK(out.size() == 9);  // Apr, May and mid-March removed
}

TEST_CASE("downsample keeps on-the-hour rows at the requested resolution") {
    std::vector<WeatherRecord> records;
    for (int k = 0; k < 96; ++k) {  // two days at 30 minutes
        WeatherRecord r = make_record(0, "2017-06-01T00:00", 10.0);
        r.timestamp += k * 30;
        records.push_back(r);
    }
    AblationSpec spec;
    spec.kind = AblationSpec::Kind::downsample;
    spec.resolution_hours = 1;
    CHECK(ablate(records, spec).size() == 48);  // halves 30-minute data
    spec.resolution_hours = 8;
    const auto coarse = ablate(records, spec);
    CHECK(coarse.size() == 6);
    for (const auto& r : coarse) {
        CHECK(minute_of(r.timestamp) == 0);
        CHECK(hour_of(r.timestamp) % 8 == 0);
    }
    spec.resolution_hours = 0;
    CHECK_THROWS_AS(ablate(records, spec), ParameterOutOfRange);
}

TEST_CASE("ablation never grows the training set") {
    std::vector<WeatherRecord> records;
    for (int i = 0; i < 100; ++i) {
        WeatherRecord r = make_record(i % 5, "2017-06-01T00:00", 10.0);
        r.timestamp += (i / 5) * 30;
        records.push_back(r);
    }
    for (const AblationSpec& spec :
         {AblationSpec{AblationSpec::Kind::random_rows, 0.3, 0, Season::spring, 1, 1},
          AblationSpec{AblationSpec::Kind::drop_locations, 0, 2, Season::spring, 1, 1},
          AblationSpec{AblationSpec::Kind::drop_season, 0, 0, Season::summer, 1, 1},
          AblationSpec{AblationSpec::Kind::downsample, 0, 0, Season::spring, 2, 1}}) {
        CHECK(ablate(records, spec).size() <= records.size());
    }
}

TEST_CASE("horizon alignment joins targets with lead-matched forecasts") {
    std::vector<WeatherRecord> measurements, forecasts;
    for (int k = 0; k < 10; ++k) {
        WeatherRecord m = make_record(0, "2017-08-01T00:00", 100.0 + k);
        m.timestamp += k * 30;
        measurements.push_back(m);
        WeatherRecord f = m;
        f.ghi = std::nan("");
        f.issued_lead_hours = 3;
        f.dew_point = 11.5;  // forecast features differ from measured ones
        forecasts.push_back(f);
    }

    const AlignResult full = horizon_align(measurements, forecasts, 3);
    CHECK(full.rows.size() == measurements.size());
    CHECK(full.excluded == 0);
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
        CHECK(full.rows[i].ghi == measurements[i].ghi);       // target from the measurement
        CHECK(full.rows[i].dew_point == 11.5);                // features from the forecast
        CHECK(full.rows[i].timestamp == measurements[i].timestamp);  // valid-time aligned
    }

    forecasts.resize(5);
    const AlignResult half = horizon_align(measurements, forecasts, 3);
    CHECK(half.rows.size() == 5);
    CHECK(half.excluded == 5);

    CHECK_THROWS_AS(horizon_align(measurements, forecasts, 6), NoForecastData);
    CHECK_THROWS_AS(horizon_align(measurements, forecasts, 5), ParameterOutOfRange);
}

TEST_CASE("irradiance to power is the plain product") {
    CHECK(irradiance_to_power(0.0, 10.0, 0.2) == 0.0);
    CHECK(irradiance_to_power(1000.0, 1.0, 1.0) == 1000.0);
    CHECK(irradiance_to_power(850.0, 2.5, 0.18) == doctest::Approx(382.5));
    CHECK_THROWS_AS(irradiance_to_power(-1.0, 1.0, 0.5), NegativeInput);
    CHECK_THROWS_AS(irradiance_to_power(1.0, -1.0, 0.5), NegativeInput);
    CHECK_THROWS_AS(irradiance_to_power(1.0, 1.0, 1.5), EfficiencyAboveOne);
}

TEST_CASE("correlation table signs and degenerate cases") {
    std::vector<WeatherRecord> records;
    for (int i = 0; i < 50; ++i) {
        WeatherRecord r = make_record(0, "2017-06-01T00:00", 10.0 * i);
        r.timestamp += i * 30;
        r.dew_point = -r.ghi;       // perfect anti-correlation
        r.temperature = 42.0;       // constant -> undefined
        records.push_back(r);
    }
    const std::vector<std::string> features = {"ghi", "dew_point", "temperature"};
    const auto table = correlation_table(records, features);
    REQUIRE(table.size() == 3);
    CHECK(table[0].r == doctest::Approx(1.0));
    CHECK(table[1].r == doctest::Approx(-1.0));
    CHECK(std::isnan(table[2].r));
    CHECK_THROWS_AS(correlation_table(std::vector<WeatherRecord>{records[0]}, features),
                    ParameterOutOfRange);
}
