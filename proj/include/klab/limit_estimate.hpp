#pragma once

#include <limits>
#include <string>
#include <vector>

#include "proj_core.hpp"
#include "spatial_index.hpp"

namespace klab {

// Deduplicating collection of projective points (or lines, via their dual vectors).
// Each element keeps the smallest "cost" (word length of its witness) seen for it.
template <class T>
class ProjSet {
public:
    explicit ProjSet(double tol = tol::cluster) : tol_(tol), index_(cell_for(tol)) {}

    struct Inserted {
        std::size_t id;
        bool fresh;
        bool lowered;  // an existing element got a smaller cost
    };

    // Returns the index of the element (existing or new) and whether it was new.
    Inserted insert(const T& x, int cost = 0) {
        auto f = projector_features(x.v);
        std::size_t hit = npos;
        index_.visit(f, radius(), [&](std::size_t id) {
            if (fs_distance(items_[id], x) < tol_) {
                hit = id;
                return false;
            }
            return true;
        });
        if (hit != npos) {
            bool lowered = cost < costs_[hit];
            if (lowered) costs_[hit] = cost;
            return {hit, false, lowered};
        }
        items_.push_back(x);
        costs_.push_back(cost);
        index_.insert(f, items_.size() - 1);
        return {items_.size() - 1, true, false};
    }

    // Nearest element within r; npos if none.  Radii beyond the grid cell fall back
    // to a linear scan.
    std::size_t nearest_within(const T& x, double r) const {
        std::size_t best = npos;
        double bd = r;
        auto consider = [&](std::size_t id) {
            double d = fs_distance(items_[id], x);
            if (d <= bd) bd = d, best = id;
            return true;
        };
        double fr = std::sqrt(2.0) * std::sin(std::min(r, 1.5));
        if (fr >= cell_for(tol_)) {
            for (std::size_t id = 0; id < items_.size(); ++id) consider(id);
        } else {
            index_.visit(projector_features(x.v), fr, consider);
        }
        return best;
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::vector<T>& items() const { return items_; }
    const std::vector<int>& costs() const { return costs_; }
    const T& operator[](std::size_t i) const { return items_[i]; }
    double tolerance() const { return tol_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    // Dense clouds put many items in a cell, so cells are kept small.
    static double cell_for(double tol) { return std::max(1e-12, 8.0 * tol); }
    double radius() const { return std::sqrt(2.0) * std::sin(tol_) * 1.01 + 1e-15; }

    double tol_;
    GridIndex<9> index_;
    std::vector<T> items_;
    std::vector<int> costs_;
};

using LineSet = ProjSet<ProjLine>;
using PointSet = ProjSet<ProjPoint>;

struct Pencil {
    ProjPoint point;
    std::size_t count = 0;
    bool space_filling = false;
};

// Finite approximation of a limit-type subset of CP^2: lines, isolated points,
// and points through which many of the lines pass.
struct LimitEstimate {
    std::vector<ProjLine> lines;
    std::vector<int> line_cost;
    std::vector<ProjPoint> points;
    std::vector<int> point_cost;
    std::vector<Pencil> pencils;
    std::string provenance;
    bool truncated = false;

    bool empty() const { return lines.empty() && points.empty(); }

    void add_line(const ProjLine& l, int cost = 0) {
        lines.push_back(l);
        line_cost.push_back(cost);
    }
    void add_point(const ProjPoint& p, int cost = 0) {
        points.push_back(p);
        point_cost.push_back(cost);
    }

    // Sub-estimate of the elements whose witness cost is at most c.
    LimitEstimate up_to_cost(int c) const {
        LimitEstimate r;
        r.provenance = provenance;
        r.truncated = truncated;
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (line_cost[i] <= c) r.add_line(lines[i], line_cost[i]);
        for (std::size_t i = 0; i < points.size(); ++i)
            if (point_cost[i] <= c) r.add_point(points[i], point_cost[i]);
        return r;
    }
};

inline LimitEstimate to_estimate(const LineSet& ls, const PointSet& ps, std::string provenance) {
    LimitEstimate e;
    e.provenance = std::move(provenance);
    for (std::size_t i = 0; i < ls.size(); ++i) e.add_line(ls[i], ls.costs()[i]);
    for (std::size_t i = 0; i < ps.size(); ++i) e.add_point(ps[i], ps.costs()[i]);
    return e;
}

// Points farther than tol (incidence residual) from every line.
inline std::vector<std::size_t> isolated_points(const LimitEstimate& e, double tol = 1e-6) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        bool on = false;
        for (const auto& l : e.lines)
            if (incidence_residual(e.points[i], l) < tol) {
                on = true;
                break;
            }
        if (!on) out.push_back(i);
    }
    return out;
}

// Directed Hausdorff distance sup_a inf_b d(a, b).  Values at or above `cap` are
// reported as `cap` (the search radius of the index); empty B gives +inf unless A is empty.
template <class T>
double directed_hausdorff(const std::vector<T>& a, const std::vector<T>& b, double cap = 1e-3) {
    if (a.empty()) return 0.0;
    if (b.empty()) return std::numeric_limits<double>::infinity();
    if (a.size() * b.size() <= 4'000'000) {
        double h = 0;
        for (const auto& x : a) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& y : b) m = std::min(m, fs_distance(x, y));
            h = std::max(h, m);
        }
        return h;
    }
    // Plain grid over B (no deduplication, which would shift the distances).
    double fr = std::sqrt(2.0) * std::sin(std::min(cap, 1.5)) * 1.01;
    GridIndex<9> idx(2.0 * fr);
    for (std::size_t i = 0; i < b.size(); ++i) idx.insert(projector_features(b[i].v), i);
    double h = 0;
    for (const auto& x : a) {
        double m = cap;
        idx.visit(projector_features(x.v), fr, [&](std::size_t i) {
            m = std::min(m, fs_distance(x, b[i]));
            return true;
        });
        h = std::max(h, m);
        if (h >= cap) return cap;
    }
    return h;
}

template <class T>
double hausdorff(const std::vector<T>& a, const std::vector<T>& b, double cap = 1e-3) {
    return std::max(directed_hausdorff(a, b, cap), directed_hausdorff(b, a, cap));
}

}  // namespace klab
