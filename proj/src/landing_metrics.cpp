#include "lumitact/landing_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lumitact {

std::vector<Vec2> displacements(std::span<const LandingRecord> records)
{
    std::vector<Vec2> out;
    out.reserve(records.size());
    for (const LandingRecord& r : records) {
        if (!r.displacement.allFinite())
            throw DomainError("landing displacement must be finite");
        out.push_back(r.displacement);
    }
    return out;
}

DisplacementStats group_stats(std::span<const Vec2> disp)
{
    if (disp.empty())
        throw DomainError("displacement statistics of an empty group");
    DisplacementStats s;
    s.n = disp.size();
    double sum = 0.0;
    for (const Vec2& d : disp) {
        const double mm = d.norm() * 1000.0;
        sum += mm;
        s.maximum = std::max(s.maximum, mm);
    }
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (const Vec2& d : disp) {
            const double dev = d.norm() * 1000.0 - s.mean;
            ss += dev * dev;
        }
        s.std_deviation = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

DisplacementStats group_stats(std::span<const LandingRecord> records)
{
    const auto disp = displacements(records);
    return group_stats(std::span<const Vec2>(disp));
}

double containment_diameter(std::span<const Vec2> disp, double quantile, CenterMode center)
{
    if (disp.empty())
        throw DomainError("containment diameter of an empty group");
    if (!(quantile > 0.0 && quantile <= 1.0))
        throw DomainError("containment quantile must lie in (0, 1]");

    Vec2 origin = Vec2::Zero();
    if (center == CenterMode::MeanLandingPoint) {
        for (const Vec2& d : disp)
            origin += d;
        origin /= static_cast<double>(disp.size());
    }
    std::vector<double> radii;
    radii.reserve(disp.size());
    for (const Vec2& d : disp)
        radii.push_back((d - origin).norm());
    std::sort(radii.begin(), radii.end());

    const auto n = static_cast<double>(radii.size());
    // Guard the ceiling against q*n landing a hair above an integer.
    auto rank = static_cast<std::size_t>(std::ceil(quantile * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, radii.size());
    return 2.0 * radii[rank - 1];
}

AxisFit landing_axis_regression(std::span<const Vec2> disp)
{
    if (disp.size() < 2)
        throw DomainError("regression needs at least two landings");
    const auto n = static_cast<double>(disp.size());
    double mx = 0.0;
    double my = 0.0;
    for (const Vec2& d : disp) {
        mx += d.x();
        my += d.y();
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const Vec2& d : disp) {
        const double dx = d.x() - mx;
        const double dy = d.y() - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw DegenerateError("all landings share one x coordinate; the axis is vertical");

    AxisFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // A horizontal cloud with no y spread is fitted exactly.
    const bool flat = std::all_of(disp.begin(), disp.end(), [&](const Vec2& d) { return d.y() == disp.front().y(); });
    fit.r_squared = flat ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace lumitact
