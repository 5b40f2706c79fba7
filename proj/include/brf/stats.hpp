#pragma once

#include <optional>
#include <span>
#include <string>

namespace brf {

struct TestResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::string method;       // "exact" or the approximation used
    bool degenerate = false;  // zero-variance or otherwise ill-posed input
};

enum class Alternative { Less, Greater, TwoSided };

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// absolute error <= 1e-10 on [0, 1].
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// One-sided paired t-test on d = a - b. alternative=Less tests whether
// mean(a) < mean(b). Zero-variance differences set the degenerate flag:
// p = 0.5 when mean(d) = 0, else p = 0 or 1 by sign.
TestResult paired_t_one_sided(std::span<const double> a, std::span<const double> b,
                              Alternative alternative = Alternative::Less);

// Mann-Whitney U with midrank ties. Exact enumeration when
// len(a) + len(b) <= 12 and there are no ties; otherwise the normal
// approximation with tie and continuity corrections.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          Alternative alternative = Alternative::TwoSided);

// (mean(a) - mean(b)) / pooled sd; empty optional when the pooled sd is 0.
std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b);

// Spearman rank correlation (midranks) with a t-approximation p-value.
TestResult spearman(std::span<const double> x, std::span<const double> y);

}  // namespace brf
