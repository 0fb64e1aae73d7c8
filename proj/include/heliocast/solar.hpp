#pragma once

#include "heliocast/timeutil.hpp"

namespace helio {

// Cooper declination, degrees: -23.44 * cos(360/365 * (d + 10)).
double solar_declination_deg(int day_of_year);

// Solar zenith angle in degrees from
//   cos(SZA) = sin(lat) sin(decl) + cos(lat) cos(decl) cos(hour angle),
// with solar time offset by the longitude difference from the reference
// meridian (15 degrees per hour). No equation-of-time correction. Result
// in [0, 180].
double solar_zenith_deg(double lat_deg, double lon_deg, Timestamp t,
                        double reference_meridian_deg);

// Haurwitz-form clear-sky GHI: 1098 cos(z) exp(-0.057 / cos(z)), zero at
// and below the horizon.
double clear_sky_ghi(double sza_deg);

}  // namespace helio
