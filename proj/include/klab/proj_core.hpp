#pragma once

#include <vector>

#include "core.hpp"

namespace klab {

namespace detail {
inline Vec3 canonical_unit(const Vec3& v) {
    double n = norm(v);
    if (!(n > 1e-300) || !std::isfinite(n)) throw Error(ErrorKind::ZeroVector, "homogeneous vector has zero norm");
    Vec3 u = scale(v, 1.0 / n);
    std::size_t k = dominant_index(u);
    cplx ph = std::abs(u[k]) > 0 ? std::conj(u[k]) / std::abs(u[k]) : cplx(1.0);
    u = scale(u, ph);
    u[k] = std::abs(u[k]);
    return u;
}
}  // namespace detail

// A point of CP^2 stored as a unit vector whose largest coordinate is real >= 0.
struct ProjPoint {
    Vec3 v{};
    const cplx& operator[](int i) const { return v[i]; }
};

// A line of CP^2 stored by its dual vector, canonicalized like a point.
// A point p lies on the line l iff sum l_i p_i = 0 (no conjugation).
struct ProjLine {
    Vec3 v{};
    const cplx& operator[](int i) const { return v[i]; }
};

inline ProjPoint point_new(const Vec3& v) { return {detail::canonical_unit(v)}; }
inline ProjLine line_new(const Vec3& v) { return {detail::canonical_unit(v)}; }

inline ProjPoint point_e(int i) {
    Vec3 v{};
    v[i] = 1.0;
    return {v};
}

inline double fs_distance(const ProjPoint& p, const ProjPoint& q) { return fs_distance_unit(p.v, q.v); }
inline double fs_distance(const ProjLine& p, const ProjLine& q) { return fs_distance_unit(p.v, q.v); }

// |<l, p>| for unit representatives; zero iff p lies on l.
inline double incidence_residual(const ProjPoint& p, const ProjLine& l) { return std::abs(bdot(p.v, l.v)); }

inline bool incident(const ProjPoint& p, const ProjLine& l, double tol = tol::incidence) {
    return incidence_residual(p, l) < tol;
}

inline ProjLine line_through(const ProjPoint& p, const ProjPoint& q, double tol = tol::distinct) {
    if (fs_distance(p, q) < tol) throw Error(ErrorKind::CoincidentPoints, "line_through needs two distinct points");
    return line_new(cross(p.v, q.v));
}

inline ProjPoint meet(const ProjLine& l, const ProjLine& m, double tol = tol::distinct) {
    if (fs_distance(l, m) < tol) throw Error(ErrorKind::CoincidentLines, "meet needs two distinct lines");
    return point_new(cross(l.v, m.v));
}

// Points transform by g, lines by the inverse transpose (adjugate transpose up to scale).
inline ProjPoint act(const Mat3& g, const ProjPoint& p) { return point_new(g * p.v); }
inline ProjLine act(const Mat3& g, const ProjLine& l) { return line_new(transpose(adjugate(g)) * l.v); }

// Three lines are concurrent iff their dual vectors are linearly dependent.
inline double concurrency_residual(const ProjLine& a, const ProjLine& b, const ProjLine& c) {
    return std::abs(det3(a.v, b.v, c.v));
}

// Pairwise distinct and no three concurrent.
inline bool general_position(const std::vector<ProjLine>& lines, double tol = tol::concurrency) {
    std::size_t n = lines.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (fs_distance(lines[i], lines[j]) < tol::distinct) return false;
            for (std::size_t k = j + 1; k < n; ++k)
                if (concurrency_residual(lines[i], lines[j], lines[k]) < tol) return false;
        }
    return true;
}

// Two orthonormal (Hermitian) vectors spanning the set {x : sum l_i x_i = 0},
// i.e. two points spanning the line.
inline std::array<Vec3, 2> line_basis(const ProjLine& l) {
    Vec3 c = conj(l.v);  // Hermitian normal of the line's point set
    std::size_t k = 0;
    double best = 2;
    for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(c[i]) < best) best = std::abs(c[i]), k = i;
    Vec3 e{};
    e[k] = 1.0;
    // Gram-Schmidt e against c, then complete with the conjugated cross product.
    Vec3 a = sub(e, scale(c, hdot(c, e)));
    a = scale(a, 1.0 / norm(a));
    Vec3 b = conj(cross(c, a));
    b = scale(b, 1.0 / norm(b));
    return {a, b};
}

// Phase-invariant real embedding of a projective point: the entries of v v^H.
// Euclidean distance between features equals sqrt(2) sin(d_FS).
inline std::array<double, 9> projector_features(const Vec3& v) {
    const double r2 = std::sqrt(2.0);
    cplx a = v[0] * std::conj(v[1]), b = v[0] * std::conj(v[2]), c = v[1] * std::conj(v[2]);
    return {std::norm(v[0]), std::norm(v[1]), std::norm(v[2]), r2 * a.real(), r2 * a.imag(),
            r2 * b.real(), r2 * b.imag(), r2 * c.real(), r2 * c.imag()};
}

}  // namespace klab
