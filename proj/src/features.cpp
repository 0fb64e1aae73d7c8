#include "heliocast/features.hpp"

#include <string>

#include "heliocast/errors.hpp"

namespace helio {

std::vector<std::string> feature_column_names(int spatial_dims,
                                              std::span<const std::string> weather_features) {
    std::vector<std::string> names;
    names.reserve(spatial_dims + weather_features.size() + kTemporalOneHot);
    for (int d = 0; d < spatial_dims; ++d) names.push_back("e" + std::to_string(d));
    for (const auto& w : weather_features) names.push_back(w);
    for (int h = 0; h < kHourOneHot; ++h) names.push_back("hour_" + std::to_string(h));
    for (int s = 0; s < kSeasonOneHot; ++s)
        names.push_back(std::string("season_") + season_name(static_cast<Season>(s)));
    return names;
}

AssembledData assemble(const EmbeddingMatrix& spatial, std::span<const WeatherRecord> records,
                       std::span<const std::string> weather_features) {
    if (spatial.rows() == 0 || spatial.cols() == 0)
        throw MissingEmbedding("assemble needs a non-empty spatial embedding");

    const Eigen::Index dims = spatial.cols();
    const Eigen::Index n_weather = static_cast<Eigen::Index>(weather_features.size());
    const Eigen::Index n_cols = dims + n_weather + kTemporalOneHot;

    AssembledData out;
    out.features.columns = feature_column_names(static_cast<int>(dims), weather_features);
    out.features.values.resize(static_cast<Eigen::Index>(records.size()), n_cols);
    out.features.location_ids.reserve(records.size());
    out.features.timestamps.reserve(records.size());
    out.target.resize(static_cast<Eigen::Index>(records.size()));

    for (std::size_t i = 0; i < records.size(); ++i) {
        const WeatherRecord& r = records[i];
        if (r.location_id < 0 || r.location_id >= spatial.rows())
            throw UnknownLocation("location " + std::to_string(r.location_id) +
                                  " has no embedding row (n = " +
                                  std::to_string(spatial.rows()) + ")");
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        out.features.values.block(row, 0, 1, dims) = spatial.row(r.location_id);
        for (Eigen::Index w = 0; w < n_weather; ++w)
            out.features.values(row, dims + w) = feature_value(r, weather_features[w]);
        out.features.values.block(row, dims + n_weather, 1, kTemporalOneHot) =
            one_hot(temporal_embed(r.timestamp));
        out.features.location_ids.push_back(r.location_id);
        out.features.timestamps.push_back(r.timestamp);
        out.target(row) = r.ghi;
    }
    return out;
}

}  // namespace helio
