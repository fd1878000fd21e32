#pragma once

#include <algorithm>
#include <vector>

#include "eigen.hpp"
#include "limit_estimate.hpp"

namespace klab {

inline std::size_t count_through(const ProjPoint& p, const std::vector<ProjLine>& lines, double tol) {
    std::size_t c = 0;
    for (const auto& l : lines)
        if (incidence_residual(p, l) < tol) ++c;
    return c;
}

// Points through which at least `threshold` of the lines pass.  Candidates are the
// meets of pairs drawn from a deterministic sample (the first lines, which carry the
// shortest witnesses, plus an even stride through the family) and any extra points
// supplied by the caller.
inline std::vector<Pencil> find_pencils(const std::vector<ProjLine>& lines, std::size_t threshold,
                                        double tol = tol::concurrency,
                                        const std::vector<ProjPoint>& extra = {}) {
    std::vector<Pencil> out;
    if (lines.size() < threshold || threshold < 3) return out;
    std::vector<std::size_t> sample;
    const std::size_t head = std::min<std::size_t>(32, lines.size());
    for (std::size_t i = 0; i < head; ++i) sample.push_back(i);
    if (lines.size() > head) {
        std::size_t stride = std::max<std::size_t>(1, (lines.size() - head) / 32);
        for (std::size_t i = head; i < lines.size() && sample.size() < 64; i += stride) sample.push_back(i);
    }
    PointSet found(1e-7);
    for (const auto& p : extra) {
        std::size_t c = count_through(p, lines, tol);
        if (c >= threshold && found.insert(p).fresh) out.push_back({p, c, false});
    }
    PointSet cand(1e-7);
    for (std::size_t a = 0; a < sample.size(); ++a)
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            const auto& la = lines[sample[a]];
            const auto& lb = lines[sample[b]];
            if (fs_distance(la, lb) < tol::distinct) continue;
            cand.insert(point_new(cross(la.v, lb.v)));
        }
    std::vector<ProjLine> sample_lines;
    for (auto i : sample) sample_lines.push_back(lines[i]);
    std::size_t quick = std::min<std::size_t>(3, threshold);
    for (const auto& p : cand.items()) {
        if (count_through(p, sample_lines, tol) < quick) continue;
        if (found.nearest_within(p, 1e-7) != PointSet::npos) continue;
        std::size_t c = count_through(p, lines, tol);
        if (c >= threshold && found.insert(p).fresh) out.push_back({p, c, false});
    }
    std::sort(out.begin(), out.end(), [](const Pencil& a, const Pencil& b) { return a.count > b.count; });
    return out;
}

// Parameter of each line through p on the pencil's P^1, as a point of the unit
// sphere after a Moebius normalization (centre at the median, unit median spread).
inline std::vector<std::array<double, 3>> pencil_sphere_params(const ProjPoint& p, const std::vector<ProjLine>& lines,
                                                               double tol) {
    auto basis = line_basis(ProjLine{p.v});
    std::vector<cplx> finite;
    std::size_t infinite = 0;
    for (const auto& l : lines) {
        if (incidence_residual(p, l) >= tol) continue;
        cplx t0 = hdot(basis[0], l.v), t1 = hdot(basis[1], l.v);
        if (std::abs(t0) <= 1e-12 * std::abs(t1)) ++infinite;
        else finite.push_back(t1 / t0);
    }
    std::vector<std::array<double, 3>> out;
    if (finite.empty()) return out;
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    std::vector<double> re, im;
    for (auto t : finite) re.push_back(t.real()), im.push_back(t.imag());
    cplx c(median(re), median(im));
    std::vector<double> rad;
    for (auto t : finite) rad.push_back(std::abs(t - c));
    double s = median(rad);
    if (!(s > 0)) s = 1.0;
    for (auto t : finite) {
        cplx u = (t - c) / s;
        double n = std::norm(u);
        out.push_back({2 * u.real() / (n + 1), 2 * u.imag() / (n + 1), (n - 1) / (n + 1)});
    }
    for (std::size_t i = 0; i < infinite; ++i) out.push_back({0, 0, 1});
    return out;
}

// A pencil whose line parameters do not lie on a circle of P^1 spreads over an
// open region of the pencil: its lines sweep out a set with interior.  The score is
// the smallest/middle eigenvalue ratio of the covariance of the sphere points (zero
// for points on a common plane section, i.e. a circle).
inline double pencil_spread_score(const ProjPoint& p, const std::vector<ProjLine>& lines, double tol) {
    auto pts = pencil_sphere_params(p, lines, tol);
    if (pts.size() < 4) return 0.0;
    std::array<double, 3> mean{};
    for (const auto& x : pts)
        for (int i = 0; i < 3; ++i) mean[i] += x[i] / double(pts.size());
    std::array<std::array<double, 3>, 3> cov{};
    for (const auto& x : pts)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += (x[i] - mean[i]) * (x[j] - mean[j]) / double(pts.size());
    auto ev = sym_eigenvalues(cov);
    if (!(ev[1] > 1e-300)) return 0.0;
    return std::max(0.0, ev[0]) / ev[1];
}

inline constexpr double space_filling_threshold = 1e-6;

inline void mark_space_filling(std::vector<Pencil>& pencils, const std::vector<ProjLine>& lines, double tol) {
    for (auto& pc : pencils) pc.space_filling = pencil_spread_score(pc.point, lines, tol) > space_filling_threshold;
}

}  // namespace klab
