#pragma once

#include <optional>
#include <string>

#include "eigen.hpp"
#include "limit_estimate.hpp"

namespace klab {

// An element of PSL(3,C): a determinant-one lift plus a scale-free canonical form
// (largest entry equal to 1) used for equality and hashing.
struct GroupElement {
    Mat3 lift;
    Mat3 canon;
};

inline Mat3 canonical_form(const Mat3& m) {
    std::size_t k = dominant_index(m.a);
    return m * (1.0 / m.a[k]);
}

inline GroupElement element_new(const Mat3& m) {
    double s = max_abs(m);
    if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorKind::SingularMatrix, "matrix is zero or not finite");
    cplx d = det(m);
    if (std::abs(d) <= 1e-14 * s * s * s) throw Error(ErrorKind::SingularMatrix, "determinant vanishes");
    GroupElement g;
    // Already unimodular lifts are kept verbatim so that serialization round-trips exactly.
    g.lift = std::abs(d - 1.0) <= 1e-12 ? m : m * (1.0 / std::pow(d, 1.0 / 3.0));
    g.canon = canonical_form(g.lift);
    return g;
}

inline GroupElement identity_element() { return element_new(Mat3::identity()); }

namespace detail {
// Products and adjugates of unimodular lifts are unimodular up to rounding, so the
// singularity test of element_new (meaningless for long words with huge entries)
// is skipped; the determinant is only renormalized.
inline GroupElement from_unimodular(const Mat3& m) {
    cplx d = det(m);
    GroupElement g;
    g.lift = std::abs(d - 1.0) <= 1e-15 || !(std::abs(d) > 0) ? m : m * (1.0 / std::pow(d, 1.0 / 3.0));
    g.canon = canonical_form(g.lift);
    return g;
}
}  // namespace detail

inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
    return detail::from_unimodular(a.lift * b.lift);
}

inline GroupElement inverse(const GroupElement& a) { return detail::from_unimodular(adjugate(a.lift)); }

inline double element_distance(const GroupElement& a, const GroupElement& b) {
    auto u = a.canon.a, v = b.canon.a;
    double nu = std::sqrt(frob2(a.canon)), nv = std::sqrt(frob2(b.canon));
    for (auto& x : u) x /= nu;
    for (auto& x : v) x /= nv;
    return fs_distance_unit(u, v);
}

inline bool element_eq(const GroupElement& a, const GroupElement& b, double tol = tol::distinct) {
    return element_distance(a, b) < tol;
}

inline bool is_identity(const GroupElement& g, double tol = tol::distinct) {
    return element_eq(g, identity_element(), tol);
}

enum class ElementClass { Elliptic, Parabolic, Loxodromic };

inline const char* class_name(ElementClass c) {
    switch (c) {
        case ElementClass::Elliptic: return "elliptic";
        case ElementClass::Parabolic: return "parabolic";
        case ElementClass::Loxodromic: return "loxodromic";
    }
    return "?";
}

inline bool moduli_all_equal(const EigenData& e, double rel = tol::modulus) {
    double mx = std::max({std::abs(e.values[0]), std::abs(e.values[1]), std::abs(e.values[2])});
    double mn = std::min({std::abs(e.values[0]), std::abs(e.values[1]), std::abs(e.values[2])});
    return mx - mn <= rel * mx;
}

inline ElementClass classify(const GroupElement& g) {
    if (is_identity(g)) throw Error(ErrorKind::IdentityElement, "the identity has no dynamical type");
    auto e = eigen3(g.lift);
    if (!moduli_all_equal(e)) return ElementClass::Loxodromic;
    return e.diagonalizable ? ElementClass::Elliptic : ElementClass::Parabolic;
}

// Pointwise fixed set: isolated fixed points plus, for an eigenvalue with a
// two-dimensional eigenspace, the whole line it spans.
struct FixedSet {
    std::vector<ProjPoint> points;
    std::vector<ProjLine> lines;
};

inline FixedSet fixed_points(const GroupElement& g) {
    if (is_identity(g)) throw Error(ErrorKind::IdentityElement, "every point is fixed by the identity");
    auto e = eigen3(g.lift);
    FixedSet f;
    for (const auto& grp : e.groups) {
        if (grp.geometric == 2) {
            f.lines.push_back(line_new(cross(e.vectors[grp.members[0]], e.vectors[grp.members[1]])));
        } else {
            f.points.push_back(point_new(e.vectors[grp.members[0]]));
        }
    }
    return f;
}

// Invariant lines are the fixed points of the dual action (left eigenvectors).  A
// two-dimensional left eigenspace gives a whole pencil of invariant lines, reported
// by the pencil's base point.
struct InvariantLines {
    std::vector<ProjLine> lines;
    std::vector<ProjPoint> pencils;
};

inline InvariantLines invariant_lines(const GroupElement& g) {
    if (is_identity(g)) throw Error(ErrorKind::IdentityElement, "every line is invariant under the identity");
    auto e = eigen3(g.lift);
    InvariantLines r;
    for (const auto& grp : e.groups) {
        if (grp.geometric == 2) {
            r.pencils.push_back(point_new(cross(e.left[grp.members[0]], e.left[grp.members[1]])));
        } else {
            r.lines.push_back(line_new(e.left[grp.members[0]]));
        }
    }
    return r;
}

// Order of g in PSL(3,C); nullopt means infinite (or larger than k_max).
inline std::optional<int> order_of(const GroupElement& g, int k_max = 120, double tol = tol::order) {
    if (is_identity(g, tol)) return 1;
    auto e = eigen3(g.lift);
    for (const auto& v : e.values)
        if (std::abs(std::abs(v) - 1.0) > tol::modulus) return std::nullopt;
    if (!e.diagonalizable) return std::nullopt;
    Mat3 p = g.lift;
    GroupElement id = identity_element();
    for (int k = 2; k <= k_max; ++k) {
        p = p * g.lift;
        GroupElement pk{p, canonical_form(p)};
        if (element_eq(pk, id, tol)) return k;
    }
    return std::nullopt;
}

namespace detail {
// Dual vector of the kernel line of a rank-one matrix.
inline ProjLine kernel_line_rank1(const Mat3& m) { return line_new(largest_row(m)); }
inline ProjPoint image_point_rank1(const Mat3& m) { return point_new(largest_col(m)); }
}  // namespace detail

// Closed form of Lambda(<g>) from the Jordan structure of g.  With eigenvalues
// ordered by modulus, every line below is the kernel of a rank-one polynomial in g.
inline LimitEstimate cyclic_limit_set(const GroupElement& g) {
    if (is_identity(g)) throw Error(ErrorKind::IdentityElement, "cyclic limit set of the identity");
    auto e = eigen3(g.lift);
    if (e.ill_conditioned) throw Error(ErrorKind::IllConditioned, "eigenbasis condition estimate above 1e12");
    const Mat3& m = g.lift;
    const Mat3 I = Mat3::identity();
    auto shifted = [&](cplx lam) { return m - I * lam; };
    bool equal_moduli = moduli_all_equal(e);
    if (equal_moduli && e.diagonalizable)
        throw Error(ErrorKind::EllipticUnsupported, "elliptic elements have no cyclic limit set here");

    LimitEstimate out;
    out.provenance = "cyclic";
    auto rel_eq = [](cplx a, cplx b) {
        double x = std::abs(a), y = std::abs(b);
        return std::abs(x - y) <= tol::modulus * std::max(x, y);
    };

    if (e.groups.size() == 3) {
        cplx l1 = e.values[0], l2 = e.values[1], l3 = e.values[2];
        bool eq12 = rel_eq(l1, l2), eq23 = rel_eq(l2, l3);
        if (!eq12 && !eq23) {
            // <v1,v2> and <v2,v3>
            out.add_line(detail::kernel_line_rank1(shifted(l1) * shifted(l2)));
            out.add_line(detail::kernel_line_rank1(shifted(l2) * shifted(l3)));
        } else if (eq12) {
            // <v1,v2> together with the isolated point v3
            Mat3 p = shifted(l1) * shifted(l2);
            out.add_line(detail::kernel_line_rank1(p));
            out.add_point(detail::image_point_rank1(p));
        } else {
            Mat3 p = shifted(l2) * shifted(l3);
            out.add_line(detail::kernel_line_rank1(p));
            out.add_point(detail::image_point_rank1(p));
        }
        return out;
    }

    if (e.groups.size() == 2) {
        const EigenGroup& dbl = e.groups[0].algebraic == 2 ? e.groups[0] : e.groups[1];
        const EigenGroup& sgl = e.groups[0].algebraic == 2 ? e.groups[1] : e.groups[0];
        cplx mu = dbl.value, nu = sgl.value;
        if (dbl.geometric == 2) {
            // Diagonalizable with a repeated eigenvalue: the eigenplane line plus the
            // other eigenvector (here the moduli must differ).
            Mat3 p = shifted(mu);  // rank one: kernel = eigenplane, image = other eigenvector
            out.add_line(detail::kernel_line_rank1(p));
            out.add_point(detail::image_point_rank1(p));
            return out;
        }
        // Jordan block for mu: the line through its eigenvector and the other
        // eigenvector, plus the Jordan plane when the moduli differ.
        out.add_line(detail::kernel_line_rank1(shifted(mu) * shifted(nu)));
        if (!rel_eq(mu, nu)) out.add_line(detail::kernel_line_rank1(shifted(mu) * shifted(mu)));
        return out;
    }

    // Triple eigenvalue, not diagonalizable.
    const EigenGroup& t = e.groups[0];
    Mat3 n = shifted(t.value);
    if (t.geometric == 2) {
        out.add_line(detail::kernel_line_rank1(n));  // pointwise fixed line
    } else {
        out.add_line(detail::kernel_line_rank1(n * n));
    }
    return out;
}

}  // namespace klab
