#pragma once

#include <Eigen/Core>
#include <string>

#include "heliocast/timeutil.hpp"

namespace helio {

// One-hot block order is the enum order.
enum class Season { winter = 0, spring = 1, summer = 2, fall = 3 };

const char* season_name(Season s);
Season parse_season(const std::string& name);  // ParameterOutOfRange

// Astronomical boundaries on fixed dates: spring [Mar 20, Jun 21),
// summer [Jun 21, Sep 22), fall [Sep 22, Dec 21), winter otherwise.
// Works off true calendar dates, so leap days fall where they should.
Season season_of(Timestamp t);

struct TemporalEmbedding {
    int hour = 0;  // 0..23, local clock hour as stored in the data
    Season season = Season::winter;
};

TemporalEmbedding temporal_embed(Timestamp t);

inline constexpr int kHourOneHot = 24;
inline constexpr int kSeasonOneHot = 4;
inline constexpr int kTemporalOneHot = kHourOneHot + kSeasonOneHot;

// 24 hour bits then 4 season bits (winter, spring, summer, fall).
Eigen::RowVectorXd one_hot(const TemporalEmbedding& t);

}  // namespace helio
