#include "heliocast/scaler.hpp"

#include <string>

#include "heliocast/errors.hpp"

namespace helio {

ScalerParams scaler_fit(const Eigen::MatrixXd& train) {
    if (train.rows() < 1) throw EmptyTrainingSet("scaler needs at least one row");
    ScalerParams params;
    params.min = train.colwise().minCoeff();
    params.max = train.colwise().maxCoeff();
    params.fitted_rows = train.rows();
    return params;
}

void scaler_apply_inplace(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> m) {
    if (m.cols() != params.min.size())
        throw SchemaMismatch("scaler fitted on " + std::to_string(params.min.size()) +
                             " columns, applied to " + std::to_string(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double range = params.max(c) - params.min(c);
        if (range == 0.0)
            m.col(c).setZero();
        else
            m.col(c) = (m.col(c).array() - params.min(c)) / range;
    }
}

Eigen::MatrixXd scaler_apply(const ScalerParams& params, const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m;
    scaler_apply_inplace(params, out);
    return out;
}

}  // namespace helio
