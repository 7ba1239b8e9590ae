#pragma once

#include <span>
#include <string>
#include <vector>

#include "lumitact/types.hpp"

namespace lumitact {

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double reg_inc_beta(double x, double a, double b);

/// Two-tailed Student t probability P(|T| >= |t|) with `df` degrees of freedom.
double t_two_tailed_p(double t, double df);

/// Upper tail P(F' >= F) of the F(df1, df2) distribution.
double f_sf(double f, double df1, double df2);

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p = 1.0;
};

/// Paired t-test on a - b. Throws DegenerateError when the differences have
/// zero variance.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct Observation {
    int subject = 0;
    int a = 0;
    int b = 0;
    double value = 0.0;
};

/// Balanced within-subject design: every subject has the same number of
/// observations in every (a, b) cell. Replicates are averaged per cell.
class RMDataset {
public:
    RMDataset(std::span<const Observation> observations);

    int subjects() const { return subjects_; }
    int a_levels() const { return a_levels_; }
    int b_levels() const { return b_levels_; }
    int replicates() const { return replicates_; }
    /// Cell mean for (subject, a, b), all zero-based.
    double cell(int subject, int a, int b) const
    {
        return means_[(static_cast<std::size_t>(subject) * a_levels_ + a) * b_levels_ + b];
    }

private:
    int subjects_ = 0;
    int a_levels_ = 0;
    int b_levels_ = 0;
    int replicates_ = 0;
    std::vector<double> means_;
};

struct AnovaEffect {
    std::string name;
    double sum_of_squares = 0.0;
    int df = 0;
    double mean_square = 0.0;
    double f = 0.0;
    double p = 1.0;
    double error_sum_of_squares = 0.0;
    int error_df = 0;
    bool degenerate = false;  // zero error term; F and p follow the 0/0 convention
};

struct AnovaTable {
    std::vector<AnovaEffect> effects;
    double subject_sum_of_squares = 0.0;
    int subject_df = 0;
    double alpha = 0.05;

    const AnovaEffect& effect(const std::string& name) const;
    bool significant(const AnovaEffect& e) const { return e.p < alpha; }
};

/// Two-way repeated-measures ANOVA; each effect is tested against its own
/// effect-by-subject interaction. Effects are named "A", "B" and "AxB".
AnovaTable rm_anova_two_way(const RMDataset& data, double alpha = 0.05);

/// One-way repeated-measures ANOVA over `values[subject][level]`; the effect
/// is named "condition".
AnovaTable rm_anova_one_way(const std::vector<std::vector<double>>& values, double alpha = 0.05);

}  // namespace lumitact
