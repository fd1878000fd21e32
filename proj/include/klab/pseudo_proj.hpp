#pragma once

#include <optional>

#include "group_elements.hpp"

namespace klab {

// A point of P(M(3,C)): a nonzero 3x3 matrix up to scale, normalized so that its
// largest entry is 1.  Rank-deficient maps act on CP^2 minus their kernel.
struct PseudoProjMap {
    Mat3 m;
    int rank = 3;
    bool borderline = false;
    std::array<double, 3> sigma{};  // singular values relative to the largest
    std::optional<ProjLine> kernel_line;    // rank 1
    std::optional<ProjPoint> kernel_point;  // rank 2
    std::optional<ProjPoint> image_point;   // rank 1
    std::optional<ProjLine> image_line;     // rank 2
};

inline PseudoProjMap psp_new(const Mat3& in, double rank_tol = tol::rank) {
    double s = max_abs(in);
    if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorKind::ZeroMatrix, "pseudo-projective map of the zero matrix");
    PseudoProjMap p;
    p.m = canonical_form(in);
    auto sv = singular_values(p.m);
    p.rank = 0;
    for (int i = 0; i < 3; ++i) {
        p.sigma[i] = sv[i] / sv[0];
        if (p.sigma[i] >= rank_tol) ++p.rank;
        if (i > 0 && p.sigma[i] >= tol::borderline_lo && p.sigma[i] <= tol::borderline_hi) p.borderline = true;
    }
    if (p.rank == 1) {
        p.kernel_line = line_new(largest_row(p.m));
        p.image_point = point_new(largest_col(p.m));
    } else if (p.rank == 2) {
        p.kernel_point = point_new(null_vector_from_rows(p.m.row(0), p.m.row(1), p.m.row(2)));
        p.image_line = line_new(null_vector_from_rows(p.m.col(0), p.m.col(1), p.m.col(2)));
    }
    return p;
}

inline bool in_kernel(const PseudoProjMap& L, const ProjPoint& p, double tol = tol::incidence) {
    Vec3 w = L.m * p.v;
    return norm(w) < tol * std::sqrt(frob2(L.m));
}

inline ProjPoint psp_act(const PseudoProjMap& L, const ProjPoint& p) {
    if (in_kernel(L, p)) throw Error(ErrorKind::InKernel, "point lies in the kernel of the map");
    return point_new(L.m * p.v);
}

inline double psp_distance(const PseudoProjMap& a, const PseudoProjMap& b) {
    auto u = a.m.a, v = b.m.a;
    double nu = std::sqrt(frob2(a.m)), nv = std::sqrt(frob2(b.m));
    for (auto& x : u) x /= nu;
    for (auto& x : v) x /= nv;
    return fs_distance_unit(u, v);
}

namespace detail {
// When an eigenvalue of maximal modulus sits in a Jordan block, g^n grows
// polynomially along a nilpotent direction and the normalized powers tend to a
// polynomial in g.  Squaring converges only like 2^-k there and rounding noise is
// amplified near the nilpotent limit, so the closed form is used instead.
inline std::optional<Mat3> jordan_power_limit(const Mat3& g) {
    EigenData e = eigen3(g);
    if (e.diagonalizable || e.ill_conditioned) return std::nullopt;
    double top = 0;
    for (const auto& gr : e.groups) top = std::max(top, std::abs(gr.value));
    const EigenGroup* jb = nullptr;
    for (const auto& gr : e.groups)
        if (gr.algebraic > gr.geometric && std::abs(gr.value) >= top * (1 - tol::modulus)) jb = &gr;
    if (!jb) return std::nullopt;
    const Mat3 id = Mat3::identity();
    const Mat3 n = g - id * jb->value;
    if (jb->algebraic == 3) return jb->geometric == 2 ? n : n * n;
    for (const auto& gr : e.groups)
        if (&gr != jb) return n * (g - id * gr.value);
    return std::nullopt;
}
}  // namespace detail

// Limit point of g^n as n -> infinity, computed by repeated squaring with
// renormalization (g^(2^k)).  For two dominant eigenvalues of equal modulus the map
// keeps rotating, but its rank and kernel settle.
inline PseudoProjMap power_limit(const Mat3& g, int steps = 40) {
    if (auto j = detail::jordan_power_limit(g)) return psp_new(*j);
    Mat3 a = canonical_form(g);
    for (int k = 0; k < steps; ++k) {
        a = a * a;
        double s = max_abs(a);
        if (!(s > 0) || !std::isfinite(s)) break;
        a = a * cplx(1.0 / s);
    }
    return psp_new(a);
}

}  // namespace klab
