#pragma once

// Weighted linear least squares for polynomials, with the full parameter
// covariance carried through to confidence bands and derived ratios.

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace fatigue {

struct WeightedPoint {
    double x = 0;
    double y = 0;
    double sigma_y = 1;
};

struct FitResult {
    int degree = 0;
    Eigen::VectorXd coeffs;      // constant term first
    Eigen::MatrixXd covariance;  // of coeffs
    double chi2 = 0;
    int dof = 0;
    double p_value = 1;          // NaN when dof == 0

    double operator()(double x) const;
    // (1, x, x^2, ...)
    Eigen::VectorXd basis(double x) const;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimises sum(((f(x_i) - y_i) / sigma_i)^2) through a column-pivoted QR of
// the weighted design matrix. Throws FitError on a rank-deficient problem.
FitResult fit_polynomial(std::span<const WeightedPoint> points, int degree);

// Upper-tail chi-square probability Q(dof/2, chi2/2).
double chi2_pvalue(double chi2, int dof);

struct CurvePoint {
    double x = 0;
    double y = 0;
    double sigma = 0;
    double ci_low = 0;
    double ci_high = 0;
};

// 95% band taken as y -/+ 2 sigma_f.
CurvePoint predict_with_ci(const FitResult& fit, double x);

// cov(f(x1), f(x2)) through the shared parameters.
double curve_covariance(const FitResult& fit, double x1, double x2);

struct Measured {
    double value = 0;
    double sigma = 0;
};

// First-order propagation of num/den including their covariance.
Measured propagate_ratio(Measured num, Measured den, double covariance = 0.0);

nlohmann::ordered_json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

}  // namespace fatigue
