#include "heliocast/linear.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <string>

#include "heliocast/errors.hpp"

namespace helio {

LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double ridge_lambda) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n < 1) throw EmptyTrainingSet("linear fit needs at least one row");
    if (y.size() != n) throw LengthMismatch("X rows != y length");
    if (ridge_lambda < 0.0) throw ParameterOutOfRange("ridge lambda must be >= 0");

    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;

    Eigen::VectorXd beta;
    if (ridge_lambda == 0.0) {
        if (n < p + 1)
            throw SingularSystem("need rows >= columns + 1 for unpenalized least squares");
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xc);
        if (qr.rank() < p)
            throw SingularSystem("rank " + std::to_string(qr.rank()) + " < " +
                                 std::to_string(p) + " columns");
        beta = qr.solve(yc);
    } else {
        Eigen::MatrixXd gram = Xc.transpose() * Xc;
        gram.diagonal().array() += ridge_lambda;
        beta = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(Xc.transpose() * yc);
    }
    if (!beta.allFinite()) throw SingularSystem("non-finite coefficients");

    LinearModel model;
    model.coefficients = beta;
    model.intercept = y_mean - x_mean.dot(beta);
    model.ridge_lambda = ridge_lambda;
    return model;
}

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& X) {
    if (model.coefficients.size() == 0) throw UnfittedModel("linear model has no coefficients");
    if (X.cols() != model.coefficients.size())
        throw SchemaMismatch("predict expects " + std::to_string(model.coefficients.size()) +
                             " columns, got " + std::to_string(X.cols()));
    return (X * model.coefficients).array() + model.intercept;
}

}  // namespace helio
