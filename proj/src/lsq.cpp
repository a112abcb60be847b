#include "fatigue/lsq.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace fatigue {

double FitResult::operator()(double x) const { return coeffs.dot(basis(x)); }

Eigen::VectorXd FitResult::basis(double x) const {
    Eigen::VectorXd g(degree + 1);
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
        g(j) = p;
        p *= x;
    }
    return g;
}

FitResult fit_polynomial(std::span<const WeightedPoint> points, int degree) {
    if (degree < 0) throw FitError("polynomial degree must be >= 0");
    const int n = static_cast<int>(points.size());
    const int m = degree + 1;
    if (n < m) throw FitError(fmt::format("degree {} fit needs at least {} points, got {}", degree, m, n));

    std::set<double> distinct;
    for (const auto& p : points) {
        if (!(p.sigma_y > 0) || !std::isfinite(p.sigma_y))
            throw FitError(fmt::format("point x={} has non-positive sigma_y", p.x));
        distinct.insert(p.x);
    }
    if (static_cast<int>(distinct.size()) < m)
        throw FitError(fmt::format("singular design: degree {} needs {} distinct x values, got {}", degree, m,
                                   distinct.size()));

    Eigen::MatrixXd A(n, m);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        double xp = 1.0;
        for (int j = 0; j < m; ++j) {
            A(i, j) = xp / p.sigma_y;
            xp *= p.x;
        }
        b(i) = p.y / p.sigma_y;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < m)
        throw FitError(fmt::format("singular design: rank {} < {} parameters", qr.rank(), m));

    FitResult fit;
    fit.degree = degree;
    fit.coeffs = qr.solve(b);

    // (A^T A)^-1 = P R^-1 R^-T P^T
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
    const Eigen::MatrixXd cov_perm = Rinv * Rinv.transpose();
    const auto& P = qr.colsPermutation();
    fit.covariance = P * cov_perm * P.transpose();
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();

    fit.chi2 = (A * fit.coeffs - b).squaredNorm();
    fit.dof = n - m;
    fit.p_value = fit.dof > 0 ? chi2_pvalue(fit.chi2, fit.dof) : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

double chi2_pvalue(double chi2, int dof) {
    if (dof < 1) throw std::invalid_argument("chi-square p-value needs dof >= 1");
    if (!(chi2 >= 0)) throw std::invalid_argument("chi-square must be >= 0");
    if (chi2 == 0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
}

CurvePoint predict_with_ci(const FitResult& fit, double x) {
    CurvePoint c;
    c.x = x;
    const Eigen::VectorXd g = fit.basis(x);
    c.y = fit.coeffs.dot(g);
    c.sigma = std::sqrt(std::max(0.0, g.dot(fit.covariance * g)));
    c.ci_low = c.y - 2.0 * c.sigma;
    c.ci_high = c.y + 2.0 * c.sigma;
    return c;
}

double curve_covariance(const FitResult& fit, double x1, double x2) {
    return fit.basis(x1).dot(fit.covariance * fit.basis(x2));
}

Measured propagate_ratio(Measured num, Measured den, double covariance) {
    if (den.value == 0) throw std::domain_error("ratio with zero denominator");
    const double r = num.value / den.value;
    const double d_num = 1.0 / den.value;
    const double d_den = -num.value / (den.value * den.value);
    const double var = d_num * d_num * num.sigma * num.sigma + d_den * d_den * den.sigma * den.sigma +
                       2.0 * d_num * d_den * covariance;
    return {r, std::sqrt(std::max(0.0, var))};
}

nlohmann::ordered_json to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["degree"] = fit.degree;
    j["coeffs"] = std::vector<double>(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
    nlohmann::json cov = nlohmann::json::array();
    for (int r = 0; r < fit.covariance.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(fit.covariance.cols()));
        for (int c = 0; c < fit.covariance.cols(); ++c) row[static_cast<std::size_t>(c)] = fit.covariance(r, c);
        cov.push_back(row);
    }
    j["cov"] = cov;
    j["chi2"] = fit.chi2;
    j["dof"] = fit.dof;
    if (std::isnan(fit.p_value))
        j["p"] = nullptr;
    else
        j["p"] = fit.p_value;
    return j;
}

FitResult fit_from_json(const nlohmann::json& j) {
    FitResult fit;
    fit.degree = j.at("degree").get<int>();
    const auto coeffs = j.at("coeffs").get<std::vector<double>>();
    const int m = fit.degree + 1;
    if (static_cast<int>(coeffs.size()) != m) throw std::runtime_error("fit JSON: coeffs length != degree + 1");
    fit.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), m);
    const auto& cov = j.at("cov");
    if (static_cast<int>(cov.size()) != m) throw std::runtime_error("fit JSON: cov must be square");
    fit.covariance.resize(m, m);
    for (int r = 0; r < m; ++r) {
        const auto row = cov.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != m) throw std::runtime_error("fit JSON: cov must be square");
        for (int c = 0; c < m; ++c) fit.covariance(r, c) = row[static_cast<std::size_t>(c)];
    }
    fit.chi2 = j.value("chi2", 0.0);
    fit.dof = j.value("dof", 0);
    const auto& p = j.contains("p") ? j.at("p") : nlohmann::json(nullptr);
    fit.p_value = p.is_null() ? std::numeric_limits<double>::quiet_NaN() : p.get<double>();
    return fit;
}

}  // namespace fatigue
