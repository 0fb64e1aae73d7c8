#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "heliocast/dataset.hpp"
#include "heliocast/embedding.hpp"

namespace helio {

// Assembled model input: one row per record, columns in the fixed order
// [spatial e0..e{D-1}, weather features, hour one-hot 24, season one-hot 4].
// Location id and timestamp ride along as metadata and are never features.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> columns;
    std::vector<int> location_ids;
    std::vector<Timestamp> timestamps;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

struct AssembledData {
    FeatureMatrix features;
    Eigen::VectorXd target;  // GHI, W/m^2
};

std::vector<std::string> feature_column_names(int spatial_dims,
                                              std::span<const std::string> weather_features);

// UnknownLocation when a record's id has no embedding row; MissingEmbedding
// when the embedding is empty.
AssembledData assemble(const EmbeddingMatrix& spatial, std::span<const WeatherRecord> records,
                       std::span<const std::string> weather_features);

}  // namespace helio
