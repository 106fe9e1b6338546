#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qcsym/error.hpp"

namespace qcsym {

/**
 * Uniform grid over the plane for tolerance lookups. Cell size is four times
 * the matching tolerance, so a query only visits the 3×3 block around it.
 */
class PointIndex {
public:
    explicit PointIndex(double tolerance) : tol_(tolerance), cell_(4.0 * tolerance) {
        if (!(tolerance > 0.0)) throw Error("point index tolerance must be positive");
    }

    PointIndex(std::span<const std::complex<double>> pts, double tolerance) : PointIndex(tolerance) {
        for (const auto& p : pts) insert(p);
    }

    double tolerance() const { return tol_; }
    std::size_t size() const { return pts_.size(); }
    const std::vector<std::complex<double>>& points() const { return pts_; }

    /// Index of some stored point within tolerance of z.
    std::optional<std::size_t> find(std::complex<double> z) const {
        const auto [cx, cy] = cell_of(z);
        std::optional<std::size_t> best;
        double best_d = tol_;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (auto i : it->second) {
                    const double d = std::abs(pts_[i] - z);
                    if (d <= best_d) {
                        best_d = d;
                        best = i;
                    }
                }
            }
        }
        return best;
    }

    bool contains(std::complex<double> z) const { return find(z).has_value(); }

    std::size_t insert(std::complex<double> z) {
        const auto [cx, cy] = cell_of(z);
        pts_.push_back(z);
        cells_[key(cx, cy)].push_back(pts_.size() - 1);
        return pts_.size() - 1;
    }

    /// Inserts z unless a point within tolerance exists; returns true if inserted.
    bool insert_unique(std::complex<double> z) {
        if (contains(z)) return false;
        insert(z);
        return true;
    }

private:
    double tol_;
    double cell_;
    std::vector<std::complex<double>> pts_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;

    std::pair<std::int64_t, std::int64_t> cell_of(std::complex<double> z) const {
        return {static_cast<std::int64_t>(std::floor(z.real() / cell_)),
                static_cast<std::int64_t>(std::floor(z.imag() / cell_))};
    }

    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        const auto ux = static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull;
        return ux ^ (static_cast<std::uint64_t>(y) + 0x632BE59BD9B4E019ull + (ux << 6) + (ux >> 2));
    }
};

} // namespace qcsym
