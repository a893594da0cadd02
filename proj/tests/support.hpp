#pragma once

#include "sdlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace sdlab::test {

inline constexpr double kPi = std::numbers::pi;

inline Polygond unit_square() { return Polygond({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
inline Polygond rect(double a, double b) { return Polygond({{0, 0}, {a, 0}, {a, b}, {0, b}}); }
inline Polygond equilateral() { return Polygond({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}}); }

// Convex n-gon: sorted random angles on an ellipse, rotated and shifted.
inline Polygond random_convex(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        std::vector<double> th(n);
        for (auto& t : th)
            t = 2.0 * kPi * U(rng);
        std::sort(th.begin(), th.end());
        bool spread = true;
        for (int i = 0; i < n; ++i) {
            const double gap = i + 1 < n ? th[i + 1] - th[i] : th[0] + 2.0 * kPi - th[i];
            spread = spread && gap > 0.15 && gap < kPi - 0.15;
        }
        if (!spread)
            continue;
        const double a = 0.5 + U(rng), b = 0.5 + U(rng), rot = 2.0 * kPi * U(rng);
        const Point2d shift(4.0 * U(rng) - 2.0, 4.0 * U(rng) - 2.0);
        std::vector<Point2d> v;
        for (double t : th) {
            const Point2d q(a * std::cos(t), b * std::sin(t));
            v.push_back(Point2d(std::cos(rot) * q.x() - std::sin(rot) * q.y(),
                                std::sin(rot) * q.x() + std::cos(rot) * q.y()) +
                        shift);
        }
        return Polygond(v);
    }
}

inline Polygond transformed(const Polygond& p, double scale, double rot, Point2d shift)
{
    std::vector<Point2d> v;
    for (const auto& q : p.vertices())
        v.push_back(scale * Point2d(std::cos(rot) * q.x() - std::sin(rot) * q.y(),
                                    std::sin(rot) * q.x() + std::cos(rot) * q.y()) +
                    shift);
    return Polygond(v);
}

} // namespace sdlab::test
