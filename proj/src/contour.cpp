#include "phasespace/contour.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace phasespace {

namespace {

// Edge ids: horizontal edge (i, j)-(i+1, j) -> 2 * (i * np + j); vertical (i, j)-(i, j+1) -> +1.
struct Segment {
    std::int64_t a;
    std::int64_t b;
};

}  // namespace

double relative_contour_level(const WignerField& field)
{
    return std::exp(-0.5) * field.max_value();
}

std::vector<Polyline> marching_squares(const WignerField& field, double level)
{
    const PhaseGrid& g = field.grid;
    const int nq = g.n_q();
    const int np = g.n_p();
    const auto& v = field.values;

    auto q_edge = [&](int i, int j) { return std::int64_t(2) * (std::int64_t(i) * np + j); };
    auto p_edge = [&](int i, int j) { return std::int64_t(2) * (std::int64_t(i) * np + j) + 1; };

    std::unordered_map<std::int64_t, Eigen::Vector2d> crossing;
    auto cross_point = [&](std::int64_t id) -> const Eigen::Vector2d& {
        auto it = crossing.find(id);
        if (it != crossing.end()) return it->second;
        const std::int64_t cell = id / 2;
        const int i = static_cast<int>(cell / np);
        const int j = static_cast<int>(cell % np);
        const int i2 = (id % 2 == 0) ? i + 1 : i;
        const int j2 = (id % 2 == 0) ? j : j + 1;
        const double f0 = v(i, j) - level;
        const double f1 = v(i2, j2) - level;
        const double t = f0 / (f0 - f1);
        Eigen::Vector2d pt(g.q(i) + t * (g.q(i2) - g.q(i)), g.p(j) + t * (g.p(j2) - g.p(j)));
        return crossing.emplace(id, pt).first->second;
    };

    std::vector<Segment> segments;
    for (int i = 0; i + 1 < nq; ++i) {
        for (int j = 0; j + 1 < np; ++j) {
            // corners: 0 (i,j), 1 (i+1,j), 2 (i+1,j+1), 3 (i,j+1)
            const bool c0 = v(i, j) > level;
            const bool c1 = v(i + 1, j) > level;
            const bool c2 = v(i + 1, j + 1) > level;
            const bool c3 = v(i, j + 1) > level;
            const int code = c0 | (c1 << 1) | (c2 << 2) | (c3 << 3);
            if (code == 0 || code == 15) continue;
            // edges: bottom (0-1), right (1-2), top (3-2), left (0-3)
            const std::int64_t bottom = q_edge(i, j);
            const std::int64_t right = p_edge(i + 1, j);
            const std::int64_t top = q_edge(i, j + 1);
            const std::int64_t left = p_edge(i, j);
            const double centre = 0.25 * (v(i, j) + v(i + 1, j) + v(i + 1, j + 1) + v(i, j + 1));
            switch (code) {
            case 1: case 14: segments.push_back({left, bottom}); break;
            case 2: case 13: segments.push_back({bottom, right}); break;
            case 3: case 12: segments.push_back({left, right}); break;
            case 4: case 11: segments.push_back({right, top}); break;
            case 6: case 9: segments.push_back({bottom, top}); break;
            case 7: case 8: segments.push_back({left, top}); break;
            case 5:
                if (centre > level) {
                    segments.push_back({left, top});
                    segments.push_back({bottom, right});
                } else {
                    segments.push_back({left, bottom});
                    segments.push_back({right, top});
                }
                break;
            case 10:
                if (centre > level) {
                    segments.push_back({left, bottom});
                    segments.push_back({right, top});
                } else {
                    segments.push_back({left, top});
                    segments.push_back({bottom, right});
                }
                break;
            default: break;
            }
        }
    }

    // Chain segments through shared edge crossings; every crossing touches at most two segments.
    std::unordered_map<std::int64_t, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].a].push_back(s);
        incident[segments[s].b].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> out;

    auto walk = [&](std::size_t start, std::int64_t from) {
        Polyline line;
        std::int64_t node = from;
        std::size_t seg = start;
        line.points.push_back(cross_point(node));
        while (true) {
            used[seg] = true;
            node = segments[seg].a == node ? segments[seg].b : segments[seg].a;
            line.points.push_back(cross_point(node));
            std::size_t next = segments.size();
            for (std::size_t cand : incident[node]) {
                if (!used[cand]) next = cand;
            }
            if (next == segments.size()) break;
            seg = next;
        }
        line.closed = node == from && line.points.size() > 2;
        return line;
    };

    // Open chains start at crossings on the grid boundary (one incident segment).
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        for (std::int64_t end : {segments[s].a, segments[s].b}) {
            if (!used[s] && incident[end].size() == 1) out.push_back(walk(s, end));
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) out.push_back(walk(s, segments[s].a));
    }
    return out;
}

double max_radial_extent(const std::vector<Polyline>& contour, const Eigen::Vector2d& center, double angle)
{
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    double best = 0.0;
    for (const auto& line : contour) {
        for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
            const Eigen::Vector2d a = line.points[k] - center;
            const Eigen::Vector2d b = line.points[k + 1] - center;
            const Eigen::Vector2d e = b - a;
            // Solve t dir = a + s e.
            const double det = dir(0) * (-e(1)) - dir(1) * (-e(0));
            if (std::abs(det) < 1e-300) continue;
            const double t = (a(0) * (-e(1)) - a(1) * (-e(0))) / det;
            const double s = (dir(0) * a(1) - dir(1) * a(0)) / det;
            if (t > 0.0 && s >= 0.0 && s <= 1.0) best = std::max(best, t);
        }
    }
    return best;
}

}  // namespace phasespace

namespace phasespace {

ContainmentReport contour_containment(const std::vector<Polyline>& inner, const std::vector<Polyline>& reference,
                                      const Eigen::Vector2d& center, const std::vector<double>& angles, double margin)
{
    ContainmentReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (double a : angles) {
        const double gap = max_radial_extent(reference, center, a) - max_radial_extent(inner, center, a);
        if (gap < report.worst_margin) {
            report.worst_margin = gap;
            report.worst_angle = a;
        }
        if (!(gap > margin)) ++report.failures;
        ++report.samples;
    }
    return report;
}

}  // namespace phasespace
