#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "heliocast/errors.hpp"

namespace helio {

namespace detail {
template <typename A, typename B>
void check_lengths(const Eigen::MatrixBase<A>& y_true, const Eigen::MatrixBase<B>& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.size() == 0)
        throw LengthMismatch(std::to_string(y_true.size()) + " vs " +
                             std::to_string(y_pred.size()));
}
}  // namespace detail

template <typename A, typename B>
double mae(const Eigen::MatrixBase<A>& y_true, const Eigen::MatrixBase<B>& y_pred) {
    detail::check_lengths(y_true, y_pred);
    return (y_true - y_pred).cwiseAbs().mean();
}

template <typename A, typename B>
double rmse(const Eigen::MatrixBase<A>& y_true, const Eigen::MatrixBase<B>& y_pred) {
    detail::check_lengths(y_true, y_pred);
    return std::sqrt((y_true - y_pred).array().square().mean());
}

// 1 - SS_res / SS_tot with the test-set mean in the denominator. Returns
// NaN for a constant truth vector (undefined, reported rather than thrown).
template <typename A, typename B>
double r2(const Eigen::MatrixBase<A>& y_true, const Eigen::MatrixBase<B>& y_pred) {
    detail::check_lengths(y_true, y_pred);
    if (y_true.size() < 2) throw LengthMismatch("r2 needs at least 2 values");
    const double mean = y_true.mean();
    const double ss_tot = (y_true.array() - mean).square().sum();
    if (ss_tot == 0.0) return std::nan("");
    const double ss_res = (y_true - y_pred).array().square().sum();
    return 1.0 - ss_res / ss_tot;
}

}  // namespace helio
