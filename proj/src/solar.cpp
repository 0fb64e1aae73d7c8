#include "heliocast/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace helio {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

double solar_declination_deg(int day_of_year) {
    return -23.44 * std::cos(kDegToRad * 360.0 / 365.0 * (day_of_year + 10));
}

double solar_zenith_deg(double lat_deg, double lon_deg, Timestamp t,
                        double reference_meridian_deg) {
    const double decl = solar_declination_deg(day_of_year(t)) * kDegToRad;
    const double lat = lat_deg * kDegToRad;
    const double clock_hours = hour_of(t) + minute_of(t) / 60.0;
    const double solar_hours = clock_hours + (lon_deg - reference_meridian_deg) / 15.0;
    const double hour_angle = 15.0 * (solar_hours - 12.0) * kDegToRad;
    const double cos_z = std::sin(lat) * std::sin(decl) +
                         std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
    return std::acos(std::clamp(cos_z, -1.0, 1.0)) * kRadToDeg;
}

double clear_sky_ghi(double sza_deg) {
    if (sza_deg >= 90.0) return 0.0;
    const double cos_z = std::cos(sza_deg * kDegToRad);
    return 1098.0 * cos_z * std::exp(-0.057 / cos_z);
}

}  // namespace helio
