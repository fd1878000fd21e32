#pragma once

#include <algorithm>
#include <limits>
#include <numbers>
#include <vector>

#include "proj_core.hpp"

namespace klab {

// Roots of x^3 + a x^2 + b x + c by Cardano's formula, polished with Newton steps.
inline std::array<cplx, 3> cubic_roots(cplx a, cplx b, cplx c) {
    const cplx shift = a / 3.0;
    const cplx p = b - a * a / 3.0;
    const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    std::array<cplx, 3> y{};
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        y = {0.0, 0.0, 0.0};
    } else {
        cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        cplx s1 = -q / 2.0 + disc, s2 = -q / 2.0 - disc;
        cplx s = std::abs(s1) >= std::abs(s2) ? s1 : s2;
        cplx u = std::pow(s, 1.0 / 3.0);
        for (int k = 0; k < 3; ++k) {
            cplx uk = u * std::pow(w, k);
            cplx vk = std::abs(uk) > 0 ? -p / (3.0 * uk) : cplx(0.0);
            y[k] = uk + vk;
        }
    }
    std::array<cplx, 3> r{};
    for (int k = 0; k < 3; ++k) {
        cplx x = y[k] - shift;
        for (int it = 0; it < 2; ++it) {
            cplx f = ((x + a) * x + b) * x + c;
            cplx d = (3.0 * x + 2.0 * a) * x + b;
            if (std::abs(d) < 1e-14 * (1.0 + std::abs(x) * std::abs(x))) break;
            cplx xn = x - f / d;
            cplx fn = ((xn + a) * xn + b) * xn + c;
            if (!(std::abs(fn) < std::abs(f))) break;
            x = xn;
        }
        r[k] = x;
    }
    return r;
}

// Eigenvalues (ascending) of a 3x3 Hermitian matrix given through the invariants
// of its characteristic polynomial t^3 - s1 t^2 + s2 t - s3.
inline std::array<double, 3> real_cubic_sym_roots(double s1, double s2, double s3) {
    double m = s1 / 3.0;
    double p = s2 - s1 * s1 / 3.0;  // depressed: y^3 + p y + q
    double q = -2.0 * m * m * m + m * s2 - s3;
    // Solve y^3 + p y + q = 0 with three real roots (p <= 0).
    std::array<double, 3> y{};
    if (p >= 0) {
        y = {0, 0, 0};
    } else {
        double r = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * r);
        arg = std::clamp(arg, -1.0, 1.0);
        double th = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) y[k] = r * std::cos(th - 2.0 * std::numbers::pi * k / 3.0);
    }
    std::array<double, 3> t{};
    for (int k = 0; k < 3; ++k) {
        double x = y[k] + m;
        for (int it = 0; it < 2; ++it) {
            double f = ((x - s1) * x + s2) * x - s3;
            double d = (3.0 * x - 2.0 * s1) * x + s2;
            if (std::abs(d) < 1e-300) break;
            double xn = x - f / d;
            double fn = ((xn - s1) * xn + s2) * xn - s3;
            if (!(std::abs(fn) < std::abs(f))) break;
            x = xn;
        }
        t[k] = x;
    }
    std::sort(t.begin(), t.end());
    return t;
}

// Eigenvalues (ascending) of a real symmetric 3x3 matrix.
inline std::array<double, 3> sym_eigenvalues(const std::array<std::array<double, 3>, 3>& s) {
    double s1 = s[0][0] + s[1][1] + s[2][2];
    double s2 = s[0][0] * s[1][1] - s[0][1] * s[1][0] + s[0][0] * s[2][2] - s[0][2] * s[2][0] +
                s[1][1] * s[2][2] - s[1][2] * s[2][1];
    double s3 = s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) -
                s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
                s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
    return real_cubic_sym_roots(s1, s2, s3);
}

// Singular values, descending.  The invariants of M^H M are formed directly from M
// (Frobenius norms of M and of its adjugate, |det M|^2) so small singular values keep
// their relative accuracy.
inline std::array<double, 3> singular_values(const Mat3& m) {
    double scale = max_abs(m);
    if (scale == 0) return {0, 0, 0};
    Mat3 n = m * cplx(1.0 / scale);
    double s1 = frob2(n), s2 = frob2(adjugate(n)), s3 = std::norm(det(n));
    double t1 = real_cubic_sym_roots(s1, s2, s3)[2];
    double P = t1 > 0 ? s3 / t1 : 0;
    double S = t1 > 0 ? std::max(0.0, (s2 - P) / t1) : 0;
    // With rounding noise in det (absolute ~eps) the pair (S, P) can be inconsistent
    // for nearly rank-one matrices; then both small values are of size S/2.
    double disc = S * S - 4 * P;
    double t2 = S / 2.0, t3 = S / 2.0;
    if (disc > 0) {
        t2 = (S + std::sqrt(disc)) / 2.0;
        t3 = t2 > 0 ? std::min(t2, P / t2) : 0;
    }
    return {std::sqrt(t1) * scale, std::sqrt(std::max(0.0, t2)) * scale, std::sqrt(std::max(0.0, t3)) * scale};
}

// Best-conditioned cross product of two rows (or columns) of a rank-deficient matrix.
inline Vec3 null_vector_from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Vec3 c[3] = {cross(r0, r1), cross(r1, r2), cross(r2, r0)};
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (norm2(c[i]) > norm2(c[k])) k = i;
    return c[k];
}

inline Vec3 largest_row(const Mat3& m) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (norm2(m.row(i)) > norm2(m.row(k))) k = i;
    return m.row(k);
}

inline Vec3 largest_col(const Mat3& m) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (norm2(m.col(i)) > norm2(m.col(k))) k = i;
    return m.col(k);
}

struct EigenGroup {
    cplx value;
    int algebraic = 1;
    int geometric = 1;
    std::vector<int> members;  // indices into EigenData::values
};

struct EigenData {
    std::array<cplx, 3> values{};     // ascending modulus, ties by argument
    std::array<Vec3, 3> vectors{};    // unit right eigenvectors (repeated for defective groups)
    std::array<Vec3, 3> left{};       // unit left eigenvectors (y^T M = lambda y^T)
    std::vector<EigenGroup> groups;
    bool diagonalizable = true;
    double condition = 1.0;
    bool ill_conditioned = false;
};

inline cplx char_poly(const Mat3& m, cplx x) { return det(m - Mat3::identity() * x) * -1.0; }

inline EigenData eigen3(const Mat3& m_in) {
    double mscale = max_abs(m_in);
    if (mscale == 0) throw Error(ErrorKind::ZeroMatrix, "eigen3 of the zero matrix");
    Mat3 m = m_in * cplx(1.0 / mscale);

    cplx tr = m(0, 0) + m(1, 1) + m(2, 2);
    cplx c2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
              m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    cplx dt = det(m);
    auto r = cubic_roots(-tr, c2, -dt);
    auto poly = [&](cplx x) { return ((x - tr) * x + c2) * x - dt; };

    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        double a = std::abs(r[i]), b = std::abs(r[j]);
        if (std::abs(a - b) > 1e-12 * std::max(a, b)) return a < b;
        return std::arg(r[i]) < std::arg(r[j]);
    });
    std::array<cplx, 3> vals{r[idx[0]], r[idx[1]], r[idx[2]]};

    // Union-find style grouping: close roots (relative 1e-7) always merge; roots split
    // by rounding around a genuine multiple root merge when the polynomial vanishes at
    // their mean to working accuracy.  Both tests are relative to the size of the
    // roots involved, so that small eigenvalues of a matrix with a wide spread of
    // moduli are not lumped together.
    std::array<int, 3> gid{0, 1, 2};
    auto find = [&](int i) {
        while (gid[i] != i) i = gid[i];
        return i;
    };
    auto join = [&](int i, int j) { gid[find(i)] = find(j); };
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(vals[i] - vals[j]) <= tol::modulus * std::max(std::abs(vals[i]), std::abs(vals[j])))
                join(i, j);
    auto try_cluster = [&](std::vector<int> mem) {
        cplx mu = 0;
        double rad = 0, loc = 1e-300;
        for (int i : mem) mu += vals[i], loc = std::max(loc, std::abs(vals[i]));
        mu /= double(mem.size());
        for (int i : mem) rad = std::max(rad, std::abs(vals[i] - mu));
        // p(mu) = prod over members (mu - v_i) times the factor of the other root.
        double other = 1.0;
        for (int i = 0; i < 3; ++i)
            if (std::find(mem.begin(), mem.end(), i) == mem.end()) other = std::max(std::abs(mu - vals[i]), loc);
        double bound = 1e-13 * std::pow(loc, double(mem.size())) * (mem.size() == 3 ? 1.0 : other);
        if (rad <= 1e-4 * loc && std::abs(poly(mu)) <= bound) {
            for (std::size_t k = 1; k < mem.size(); ++k) join(mem[0], mem[k]);
            return true;
        }
        return false;
    };
    if (!try_cluster({0, 1, 2})) {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (find(i) != find(j)) try_cluster({i, j});
    }

    EigenData e;
    std::vector<int> roots;
    for (int i = 0; i < 3; ++i)
        if (std::find(roots.begin(), roots.end(), find(i)) == roots.end()) roots.push_back(find(i));
    for (int root : roots) {
        EigenGroup g;
        cplx mu = 0;
        for (int i = 0; i < 3; ++i)
            if (find(i) == root) g.members.push_back(i), mu += vals[i];
        g.algebraic = int(g.members.size());
        mu /= double(g.algebraic);
        // A multiple root is ill-conditioned as a polynomial root (error ~ eps^(1/k)),
        // but the trace pins it down once the simple roots are known.
        if (g.algebraic > 1) {
            cplx rest = 0;
            for (int i = 0; i < 3; ++i)
                if (find(i) != root) rest += vals[i];
            // Only when the multiple root dominates; otherwise the subtraction cancels.
            if (roots.size() == 1 || std::abs(mu) >= std::abs(rest)) {
                mu = (tr - rest) / double(g.algebraic);
            } else if (g.algebraic == 2) {
                // Small double root next to a large simple one: mu^2 = det / rest.
                cplx s = std::sqrt(dt / rest);
                mu = std::abs(s - mu) <= std::abs(s + mu) ? s : -s;
            }
        }
        for (int i : g.members) vals[i] = mu;
        g.value = mu;
        e.groups.push_back(g);
    }

    for (auto& g : e.groups) {
        Mat3 n = m - Mat3::identity() * g.value;
        auto sv = singular_values(n);
        int rank = 0;
        for (double s : sv)
            if (s > tol::modulus) ++rank;
        g.geometric = std::clamp(3 - rank, 1, g.algebraic);
        if (g.geometric == 3) {
            for (int k = 0; k < 3; ++k) {
                e.vectors[g.members[k]] = point_e(k).v;
                e.left[g.members[k]] = point_e(k).v;
            }
        } else if (g.geometric == 2) {
            auto rb = line_basis(line_new(largest_row(n)));
            auto lb = line_basis(line_new(largest_col(n)));
            for (std::size_t k = 0; k < g.members.size(); ++k) {
                e.vectors[g.members[k]] = rb[std::min<std::size_t>(k, 1)];
                e.left[g.members[k]] = lb[std::min<std::size_t>(k, 1)];
            }
        } else {
            Vec3 v = null_vector_from_rows(n.row(0), n.row(1), n.row(2));
            Vec3 y = null_vector_from_rows(n.col(0), n.col(1), n.col(2));
            if (norm(v) == 0) v = point_e(0).v;
            if (norm(y) == 0) y = point_e(0).v;
            v = scale(v, 1.0 / norm(v));
            y = scale(y, 1.0 / norm(y));
            for (int i : g.members) e.vectors[i] = v, e.left[i] = y;
            if (g.algebraic == 1) {
                double den = std::abs(bdot(y, v));
                double kappa = den > 0 ? 1.0 / den : std::numeric_limits<double>::infinity();
                e.condition = std::max(e.condition, kappa);
            }
        }
        if (g.geometric < g.algebraic) e.diagonalizable = false;
    }
    for (int i = 0; i < 3; ++i) e.values[i] = vals[i] * mscale;
    for (auto& g : e.groups) g.value *= mscale;
    e.ill_conditioned = e.condition > tol::condition;
    return e;
}

}  // namespace klab
