#pragma once

// Two-sided rank tests and paired-comparison descriptives.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace fatigue {

enum class TestMethod { ExactEnumeration, NormalApproxTieCorrected };

std::string to_string(TestMethod m);

struct TestReport {
    double statistic = 0;
    double p_value = 1;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    TestMethod method = TestMethod::ExactEnumeration;
    // Set when every value (or every difference) is identical and p = 1 by
    // convention.
    bool degenerate = false;
};

nlohmann::ordered_json to_json(const TestReport& r);

struct RankTestOptions {
    std::size_t exact_cutoff = 12;   // combined n for Mann-Whitney, nonzero pairs for Wilcoxon
    double continuity = 0.5;         // normal approximation only
};

// 1-based ranks with ties sharing their mean rank.
std::vector<double> midranks(std::span<const double> values);

// statistic = min(U_a, U_b). The exact path enumerates every split of the
// pooled midranks and counts those at least as far from n_a*n_b/2.
TestReport mann_whitney_u(std::span<const double> a, std::span<const double> b, const RankTestOptions& opt = {});

// statistic = W+ over nonzero differences (b - a is not assumed; pass d = x - y).
TestReport wilcoxon_signed_rank(std::span<const double> diffs, const RankTestOptions& opt = {});
TestReport wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, const RankTestOptions& opt = {});

// Throw std::domain_error on n < 2 or zero variance.
double pearson_rho(std::span<const double> xs, std::span<const double> ys);
double cohens_dz(std::span<const double> diffs);

double mean(std::span<const double> v);
// Sample standard deviation (n - 1).
double stdev(std::span<const double> v);

}  // namespace fatigue
