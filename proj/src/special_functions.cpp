#include "gfamix/special_functions.hpp"

#include <cmath>
#include <limits>

#include "gfamix/error.hpp"

namespace gfamix {

double digamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        return std::numeric_limits<double>::quiet_NaN();

    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic expansion in 1/x^2 with Bernoulli-number coefficients.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv2 * (1.0 / 12 -
        inv2 * (1.0 / 120 -
        inv2 * (1.0 / 252 -
        inv2 * (1.0 / 240 -
        inv2 * (1.0 / 132 -
        inv2 * (691.0 / 32760 -
        inv2 * (1.0 / 12)))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

double log_gamma(double x)
{
    return std::lgamma(x);
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v)
{
    const double hi = v.maxCoeff();
    if (!std::isfinite(hi))
        return hi;
    return hi + std::log((v.array() - hi).exp().sum());
}

double log_det_spd(const Eigen::Ref<const Eigen::MatrixXd>& A)
{
    if (A.rows() == 0)
        return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericalError("log_det_spd: matrix is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::MatrixXd inverse_spd(const Eigen::Ref<const Eigen::MatrixXd>& A, const char* what)
{
    if (A.rows() == 0)
        return Eigen::MatrixXd(0, 0);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericalError(std::string("non-positive-definite precision for ") + what);
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
    return 0.5 * (inv + inv.transpose());
}

} // namespace gfamix
