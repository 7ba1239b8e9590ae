#include "lumitact/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace lumitact {

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b)
{
    constexpr int kMaxIterations = 10000;
    constexpr double kEpsilon = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon)
            return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

// SS values this small relative to the data are rounding residue.
double snap_to_zero(double ss, double threshold)
{
    return ss <= threshold ? 0.0 : ss;
}

AnovaEffect make_effect(std::string name, double ss, int df, double error_ss, int error_df)
{
    AnovaEffect e;
    e.name = std::move(name);
    e.sum_of_squares = ss;
    e.df = df;
    e.mean_square = ss / df;
    e.error_sum_of_squares = error_ss;
    e.error_df = error_df;
    const double ms_error = error_ss / error_df;
    if (ms_error == 0.0) {
        e.degenerate = true;
        if (e.mean_square == 0.0) {
            e.f = 0.0;
            e.p = 1.0;
        } else {
            e.f = std::numeric_limits<double>::infinity();
            e.p = 0.0;
        }
        return e;
    }
    e.f = e.mean_square / ms_error;
    e.p = f_sf(e.f, df, error_df);
    return e;
}

}  // namespace

double reg_inc_beta(double x, double a, double b)
{
    if (!(a > 0) || !(b > 0) || !(x >= 0 && x <= 1))
        throw DomainError("reg_inc_beta requires 0 <= x <= 1, a > 0, b > 0");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x)
        + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(x, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double t_two_tailed_p(double t, double df)
{
    if (!(df >= 1))
        throw DomainError("t distribution requires df >= 1");
    if (std::isnan(t))
        throw DomainError("t statistic is NaN");
    if (std::isinf(t))
        return 0.0;
    return reg_inc_beta(df / (df + t * t), 0.5 * df, 0.5);
}

double f_sf(double f, double df1, double df2)
{
    if (!(f >= 0) || !(df1 >= 1) || !(df2 >= 1))
        throw DomainError("F tail requires F >= 0 and degrees of freedom >= 1");
    if (std::isinf(f))
        return 0.0;
    return reg_inc_beta(df2 / (df2 + df1 * f), 0.5 * df2, 0.5 * df1);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw DomainError("paired t-test needs series of equal length");
    if (a.size() < 2)
        throw DomainError("paired t-test needs at least two pairs");
    const auto n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dev = (a[i] - b[i]) - mean;
        ss += dev * dev;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) {
        const char* sign = mean > 0 ? "positive" : (mean < 0 ? "negative" : "zero");
        throw DegenerateError(std::string("paired differences have zero variance (mean difference ")
                              + sign + ")");
    }
    TTestResult r;
    r.t = mean / (sd / std::sqrt(n));
    r.df = static_cast<int>(a.size()) - 1;
    r.p = t_two_tailed_p(r.t, r.df);
    return r;
}

RMDataset::RMDataset(std::span<const Observation> observations)
{
    if (observations.empty())
        throw DomainError("empty repeated-measures dataset");
    std::set<int> subjects;
    std::set<int> as;
    std::set<int> bs;
    std::map<std::tuple<int, int, int>, std::pair<double, int>> cells;
    for (const Observation& o : observations) {
        if (!std::isfinite(o.value))
            throw DomainError("repeated-measures observation is not finite");
        subjects.insert(o.subject);
        as.insert(o.a);
        bs.insert(o.b);
        auto& cell = cells[{o.subject, o.a, o.b}];
        cell.first += o.value;
        cell.second += 1;
    }
    subjects_ = static_cast<int>(subjects.size());
    a_levels_ = static_cast<int>(as.size());
    b_levels_ = static_cast<int>(bs.size());
    if (cells.size() != static_cast<std::size_t>(subjects_ * a_levels_ * b_levels_))
        throw DomainError("unbalanced repeated-measures dataset: missing cells");
    replicates_ = cells.begin()->second.second;

    // Map labels to dense indices in sorted order.
    auto index_of = [](const std::set<int>& levels, int v) {
        return static_cast<int>(std::distance(levels.begin(), levels.find(v)));
    };
    means_.assign(cells.size(), 0.0);
    for (const auto& [key, cell] : cells) {
        if (cell.second != replicates_)
            throw DomainError("unbalanced repeated-measures dataset: unequal replicates");
        const auto [s, a, b] = key;
        const auto idx = (static_cast<std::size_t>(index_of(subjects, s)) * a_levels_ + index_of(as, a))
                * b_levels_
            + index_of(bs, b);
        means_[idx] = cell.first / cell.second;
    }
}

const AnovaEffect& AnovaTable::effect(const std::string& name) const
{
    for (const AnovaEffect& e : effects) {
        if (e.name == name)
            return e;
    }
    throw DomainError("no ANOVA effect named '" + name + "'");
}

AnovaTable rm_anova_two_way(const RMDataset& data, double alpha)
{
    const int S = data.subjects();
    const int A = data.a_levels();
    const int B = data.b_levels();
    if (S < 2 || A < 2 || B < 2)
        throw DomainError("two-way RM ANOVA needs >= 2 subjects and >= 2 levels per factor");

    const auto Sd = static_cast<double>(S);
    const auto Ad = static_cast<double>(A);
    const auto Bd = static_cast<double>(B);

    double grand = 0.0;
    double scale = 0.0;
    std::vector<double> m_s(S, 0.0), m_a(A, 0.0), m_b(B, 0.0);
    std::vector<double> m_ab(A * B, 0.0), m_as(A * S, 0.0), m_bs(B * S, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            for (int b = 0; b < B; ++b) {
                const double y = data.cell(s, a, b);
                grand += y;
                scale = std::max(scale, std::abs(y));
                m_s[s] += y;
                m_a[a] += y;
                m_b[b] += y;
                m_ab[a * B + b] += y;
                m_as[a * S + s] += y;
                m_bs[b * S + s] += y;
            }
        }
    }
    grand /= Sd * Ad * Bd;
    for (auto& v : m_s) v /= Ad * Bd;
    for (auto& v : m_a) v /= Sd * Bd;
    for (auto& v : m_b) v /= Sd * Ad;
    for (auto& v : m_ab) v /= Sd;
    for (auto& v : m_as) v /= Bd;
    for (auto& v : m_bs) v /= Ad;

    double ss_s = 0, ss_a = 0, ss_b = 0, ss_ab = 0, ss_as = 0, ss_bs = 0, ss_abs = 0;
    for (int s = 0; s < S; ++s) {
        const double d = m_s[s] - grand;
        ss_s += Ad * Bd * d * d;
    }
    for (int a = 0; a < A; ++a) {
        const double d = m_a[a] - grand;
        ss_a += Sd * Bd * d * d;
    }
    for (int b = 0; b < B; ++b) {
        const double d = m_b[b] - grand;
        ss_b += Sd * Ad * d * d;
    }
    for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
            const double d = m_ab[a * B + b] - m_a[a] - m_b[b] + grand;
            ss_ab += Sd * d * d;
        }
    }
    for (int a = 0; a < A; ++a) {
        for (int s = 0; s < S; ++s) {
            const double d = m_as[a * S + s] - m_a[a] - m_s[s] + grand;
            ss_as += Bd * d * d;
        }
    }
    for (int b = 0; b < B; ++b) {
        for (int s = 0; s < S; ++s) {
            const double d = m_bs[b * S + s] - m_b[b] - m_s[s] + grand;
            ss_bs += Ad * d * d;
        }
    }
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            for (int b = 0; b < B; ++b) {
                const double d = data.cell(s, a, b) - m_ab[a * B + b] - m_as[a * S + s] - m_bs[b * S + s]
                    + m_a[a] + m_b[b] + m_s[s] - grand;
                ss_abs += d * d;
            }
        }
    }

    const double eps = 1e-12 * scale;
    const double threshold = eps * eps * Sd * Ad * Bd;
    ss_a = snap_to_zero(ss_a, threshold);
    ss_b = snap_to_zero(ss_b, threshold);
    ss_ab = snap_to_zero(ss_ab, threshold);
    ss_as = snap_to_zero(ss_as, threshold);
    ss_bs = snap_to_zero(ss_bs, threshold);
    ss_abs = snap_to_zero(ss_abs, threshold);

    AnovaTable table;
    table.alpha = alpha;
    table.subject_sum_of_squares = snap_to_zero(ss_s, threshold);
    table.subject_df = S - 1;
    table.effects.push_back(make_effect("A", ss_a, A - 1, ss_as, (A - 1) * (S - 1)));
    table.effects.push_back(make_effect("B", ss_b, B - 1, ss_bs, (B - 1) * (S - 1)));
    table.effects.push_back(make_effect("AxB", ss_ab, (A - 1) * (B - 1), ss_abs, (A - 1) * (B - 1) * (S - 1)));
    return table;
}

AnovaTable rm_anova_one_way(const std::vector<std::vector<double>>& values, double alpha)
{
    const auto S = static_cast<int>(values.size());
    if (S < 2)
        throw DomainError("one-way RM ANOVA needs >= 2 subjects");
    const auto K = static_cast<int>(values.front().size());
    if (K < 2)
        throw DomainError("one-way RM ANOVA needs >= 2 levels");
    for (const auto& row : values) {
        if (static_cast<int>(row.size()) != K)
            throw DomainError("unbalanced repeated-measures dataset");
    }
    double grand = 0.0;
    double scale = 0.0;
    std::vector<double> m_s(S, 0.0), m_k(K, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int k = 0; k < K; ++k) {
            const double y = values[s][k];
            if (!std::isfinite(y))
                throw DomainError("repeated-measures observation is not finite");
            grand += y;
            scale = std::max(scale, std::abs(y));
            m_s[s] += y / K;
            m_k[k] += y / S;
        }
    }
    grand /= static_cast<double>(S) * K;
    double ss_s = 0, ss_k = 0, ss_err = 0;
    for (int s = 0; s < S; ++s)
        ss_s += K * (m_s[s] - grand) * (m_s[s] - grand);
    for (int k = 0; k < K; ++k)
        ss_k += S * (m_k[k] - grand) * (m_k[k] - grand);
    for (int s = 0; s < S; ++s) {
        for (int k = 0; k < K; ++k) {
            const double d = values[s][k] - m_s[s] - m_k[k] + grand;
            ss_err += d * d;
        }
    }
    const double eps = 1e-12 * scale;
    const double threshold = eps * eps * S * K;
    AnovaTable table;
    table.alpha = alpha;
    table.subject_sum_of_squares = snap_to_zero(ss_s, threshold);
    table.subject_df = S - 1;
    table.effects.push_back(make_effect("condition", snap_to_zero(ss_k, threshold), K - 1,
                                        snap_to_zero(ss_err, threshold), (K - 1) * (S - 1)));
    return table;
}

}  // namespace lumitact
