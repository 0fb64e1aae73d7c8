#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace helio {

// Per-column min-max parameters fitted on training rows only.
struct ScalerParams {
    Eigen::VectorXd min;
    Eigen::VectorXd max;
    std::int64_t fitted_rows = 0;

    bool fitted() const { return fitted_rows > 0; }
};

ScalerParams scaler_fit(const Eigen::MatrixXd& train);  // EmptyTrainingSet

// x -> (x - min) / (max - min); a constant training column maps to 0.
// Values outside the fitted range are not clipped. SchemaMismatch when the
// column count differs from the fit.
Eigen::MatrixXd scaler_apply(const ScalerParams& params, const Eigen::MatrixXd& m);
void scaler_apply_inplace(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> m);

}  // namespace helio
