#pragma once

#include <Eigen/Core>

namespace helio {

struct LinearModel {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double ridge_lambda = 0.0;
};

// Least squares / ridge by normal equations on centered data; the
// intercept is never penalized. SingularSystem when lambda = 0 and the
// design is rank-deficient (or has fewer rows than columns).
LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double ridge_lambda = 0.0);

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& X);

}  // namespace helio
