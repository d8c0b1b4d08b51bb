#pragma once

#include <vector>

#include <Eigen/Dense>

#include "phasespace/phase_space.hpp"

namespace phasespace {

struct Polyline {
    std::vector<Eigen::Vector2d> points;
    bool closed = false;
};

/// Level-set polylines of a sampled field by marching squares. Crossings are
/// linearly interpolated along cell edges; saddle cells are disambiguated by
/// the cell-centre average.
std::vector<Polyline> marching_squares(const WignerField& field, double level);

/// e^{-1/2} times the field's largest sample.
double relative_contour_level(const WignerField& field);

/// Largest distance from `center` at which the ray at `angle` meets any
/// segment of `contour`. Returns 0 if the ray misses every segment.
double max_radial_extent(const std::vector<Polyline>& contour, const Eigen::Vector2d& center, double angle);

}  // namespace phasespace

namespace phasespace {

struct ContainmentReport {
    /// Smallest r_reference - r_inner over the sampled angles.
    double worst_margin = 0.0;
    double worst_angle = 0.0;
    /// Angles where r_reference - r_inner <= margin.
    int failures = 0;
    int samples = 0;

    bool strictly_inside() const { return failures == 0; }
};

/// Compares max_radial_extent of `inner` and `reference` along `angles`. An
/// angle counts as contained only when the reference extends beyond the inner
/// contour by more than `margin`.
ContainmentReport contour_containment(const std::vector<Polyline>& inner, const std::vector<Polyline>& reference,
                                      const Eigen::Vector2d& center, const std::vector<double>& angles,
                                      double margin);

}  // namespace phasespace
