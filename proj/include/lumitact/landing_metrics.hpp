#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lumitact/types.hpp"

namespace lumitact {

struct LandingRecord {
    ConditionSpec condition;
    int pad = 0;
    Vec2 displacement = Vec2::Zero();  // m, pad frame
};

/// Displacement magnitude statistics in millimetres.
struct DisplacementStats {
    double mean = 0.0;
    std::optional<double> std_deviation;  // sample std; absent when n < 2
    double maximum = 0.0;
    std::size_t n = 0;
};

enum class CenterMode { PlateCenter, MeanLandingPoint };

struct AxisFit {
    double intercept = 0.0;  // m
    double slope = 0.0;
    double r_squared = 0.0;
};

std::vector<Vec2> displacements(std::span<const LandingRecord> records);

DisplacementStats group_stats(std::span<const Vec2> displacements);
DisplacementStats group_stats(std::span<const LandingRecord> records);

/// Nearest-rank q-quantile radius about the chosen center, doubled (m).
double containment_diameter(std::span<const Vec2> displacements, double quantile = 0.9,
                            CenterMode center = CenterMode::PlateCenter);

/// Ordinary least squares of landing y on landing x in the pad frame.
/// Throws DegenerateError when every x is equal.
AxisFit landing_axis_regression(std::span<const Vec2> displacements);

}  // namespace lumitact
