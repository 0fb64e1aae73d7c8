#include "heliocast/temporal.hpp"

#include "heliocast/errors.hpp"

namespace helio {

const char* season_name(Season s) {
    switch (s) {
        case Season::winter: return "winter";
        case Season::spring: return "spring";
        case Season::summer: return "summer";
        case Season::fall: return "fall";
    }
    return "winter";
}

Season parse_season(const std::string& name) {
    if (name == "winter") return Season::winter;
    if (name == "spring") return Season::spring;
    if (name == "summer") return Season::summer;
    if (name == "fall" || name == "autumn") return Season::fall;
    throw ParameterOutOfRange("unknown season '" + name + "'");
}

Season season_of(Timestamp t) {
    const CivilTime c = to_civil(t);
    const int md = c.month * 100 + c.day;
    if (md >= 320 && md < 621) return Season::spring;
    if (md >= 621 && md < 922) return Season::summer;
    if (md >= 922 && md < 1221) return Season::fall;
    return Season::winter;
}

TemporalEmbedding temporal_embed(Timestamp t) {
    return TemporalEmbedding{hour_of(t), season_of(t)};
}

Eigen::RowVectorXd one_hot(const TemporalEmbedding& t) {
    Eigen::RowVectorXd bits = Eigen::RowVectorXd::Zero(kTemporalOneHot);
    bits(t.hour) = 1.0;
    bits(kHourOneHot + static_cast<int>(t.season)) = 1.0;
    return bits;
}

}  // namespace helio
