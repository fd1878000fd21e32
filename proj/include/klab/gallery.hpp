#pragma once

#include <string>
#include <vector>

#include "dynamics.hpp"
#include "line_census.hpp"

namespace klab {

struct GalleryEntry {
    std::string id;
    GroupSpec spec;
    int expected_li = 0;  // bucket values, kInfinite for "infinitely many"
    int expected_lig = 0;
    int default_radius = 10;
};

namespace gallery {

// Affine map (w, z) -> A (w, z) + t acting on [w : z : 1].
inline Mat3 affine(cplx a11, cplx a12, cplx a21, cplx a22, cplx t1, cplx t2) {
    return Mat3::rows({a11, a12, t1}, {a21, a22, t2}, {0.0, 0.0, 1.0});
}

inline Mat3 translation(cplx t1, cplx t2) { return affine(1.0, 0.0, 0.0, 1.0, t1, t2); }

inline GroupSpec make_spec(std::string name, const std::vector<Mat3>& gens) {
    if (gens.empty()) throw Error(ErrorKind::BadParameters, "a group needs at least one generator");
    GroupSpec s;
    s.name = std::move(name);
    for (const auto& m : gens) {
        auto g = element_new(m);
        if (is_identity(g)) throw Error(ErrorKind::BadParameters, "generator equals the identity");
        s.generators.push_back(g);
    }
    return s;
}

inline GalleryEntry coordinate_triangle(cplx a = 2.0) {
    if (std::abs(a) <= 0 || std::abs(std::abs(a) - 1.0) < 1e-6)
        throw Error(ErrorKind::BadParameters, "coordinate_triangle needs |a| != 0, 1");
    Mat3 b = Mat3::rows({0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
    GalleryEntry e{"coordinate_triangle", make_spec("coordinate_triangle", {Mat3::diag(a, a, 1.0 / (a * a)), b}), 3, 3,
                   10};
    e.spec.metadata["construction"] = "M_a = diag(a, a, a^-2) and the cyclic coordinate permutation";
    e.spec.metadata["a"] = std::to_string(a.real()) + (a.imag() != 0 ? "+" + std::to_string(a.imag()) + "i" : "");
    return e;
}

inline GalleryEntry translations() {
    GalleryEntry e{"translations",
                   make_spec("translations", {translation(1.0, 0.0), translation(cplx(0, 1), 0.0),
                                              translation(0.0, 1.0), translation(0.0, cplx(0, 1))}),
                   1, 1, 10};
    e.spec.metadata["construction"] = "translations of C^2 by (1,0), (i,0), (0,1), (0,i)";
    return e;
}

inline GalleryEntry triangular_lox(cplx a = 0.5, cplx b = 1.0, cplx c = 2.0) {
    if (!(std::abs(a) < std::abs(b) && std::abs(b) < std::abs(c)))
        throw Error(ErrorKind::BadParameters, "triangular_lox needs |a| < |b| < |c|");
    // Rescale so that abc = 1.
    cplx s = std::pow(a * b * c, -1.0 / 3.0);
    Mat3 g = Mat3::rows({a * s, 0.0, 0.0}, {s, b * s, 0.0}, {0.0, 0.0, c * s});
    GalleryEntry e{"triangular_lox", make_spec("triangular_lox", {g}), 2, 2, 10};
    e.spec.metadata["construction"] = "single lower-triangular generator [[a,0,0],[1,b,0],[0,0,c]], |a|<|b|<|c|, abc=1";
    return e;
}

// Hyperbolic toral automorphism M, its eigenvalues alpha+ > 1 > alpha- and the
// eigenvector ratio r with v+ = (1, r), v- = (r, 1).  The swap (w,z) -> (z,w)
// normalizes the translation lattice only when S M S = M^-1 (S the swap), i.e.
// M = [[a, b], [-b, d]] with ad + b^2 = 1.
inline GalleryEntry suspension4(int a = 3, int b = 1, int d = 0) {
    if (a * d + b * b != 1 || std::abs(a + d) <= 2)
        throw Error(ErrorKind::BadParameters, "suspension4 needs M = [[a,b],[-b,d]] with ad+b^2 = 1 and |a+d| > 2");
    double tr = a + d;
    double ap = (tr + std::copysign(std::sqrt(tr * tr - 4), tr)) / 2, am = 1 / ap;
    double r = (ap - a) / b;  // (a - ap) + b r = 0
    Mat3 g0 = Mat3::diag(ap, am, 1.0);
    Mat3 swap = Mat3::rows({0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}) * cplx(-1.0);  // det 1 lift
    GalleryEntry e{"suspension4",
                   make_spec("suspension4", {g0, translation(1.0, r), translation(r, 1.0), swap}), kInfinite, 4, 10};
    e.spec.metadata["construction"] =
        "gamma0 = (alpha+ w, alpha- z), translations by the eigenvector coordinates (1,r) and (r,1), and the swap";
    e.spec.metadata["seed_matrix"] = "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(-b) +
                                     "," + std::to_string(d) + "]]";
    e.spec.metadata["substitution"] =
        "seed matrix [[3,1],[-1,0]] replaces the printed [[3,5],[-5,8]] (determinant 49, complex eigenvalues). "
        "The symmetric [[2,1],[1,1]] is not used: the swap does not normalize its eigenvector lattice and the "
        "generated group is not discrete.";
    return e;
}

// Rank-two Schottky group in SL(2,R): each generator has multiplier 9 and
// isometric circles of radius 0.6 c centred at -c and +c (c = 2 and c = 10), so
// the four disks are pairwise disjoint.  Suspended by G = <2> in C*.
inline Mat3 schottky_generator(double centre, double multiplier) {
    double l = std::sqrt(multiplier);
    double tr = l + 1 / l;
    double c = tr / (2 * centre);
    double aa = centre * c, dd = centre * c;
    double bb = (aa * dd - 1) / c;
    return Mat3::rows({aa, bb, 0.0}, {c, dd, 0.0}, {0.0, 0.0, 1.0});
}

inline GalleryEntry schottky_susp(double c1 = 2.0, double c2 = 10.0, double multiplier = 9.0, cplx g = 2.0) {
    double l = std::sqrt(multiplier);
    double r1 = 2 * c1 / (l + 1 / l), r2 = 2 * c2 / (l + 1 / l);
    if (!(multiplier > 1) || !(c1 > r1) || !(c2 - r2 > c1 + r1) || std::abs(std::abs(g) - 1.0) < 1e-6)
        throw Error(ErrorKind::BadParameters, "schottky_susp parameters do not give disjoint isometric disks");
    Mat3 scal = Mat3::diag(g, g, 1.0 / (g * g));
    GalleryEntry e{"schottky_susp",
                   make_spec("schottky_susp", {schottky_generator(c1, multiplier), schottky_generator(c2, multiplier),
                                               scal}),
                   kInfinite, 3, 10};
    e.spec.metadata["construction"] =
        "block suspension diag(g h, g^-2) of a real Schottky group with isometric circles centred at +-" +
        std::to_string(c1) + " and +-" + std::to_string(c2) + ", multiplier " + std::to_string(multiplier) +
        ", G = <2>";
    e.spec.metadata["substitution"] =
        "second generator centred at +-10 so that all isometric disks lie on the real axis and are disjoint";
    return e;
}

// Torus bundle group for M in SL(3,Z) with one real eigenvalue alpha > 1 and a
// complex pair beta, conj(beta): gamma0 = (alpha w, beta z) and the translations by
// the coordinates of the eigenvectors.  Default M is the companion matrix of x^3 - x - 1.
inline GalleryEntry torus_bundle() {
    Mat3 m = Mat3::rows({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    auto ed = eigen3(m);
    cplx alpha = ed.values[2], beta = ed.values[0];
    if (std::abs(alpha.imag()) > 1e-12 || beta.imag() == 0)
        throw Error(ErrorKind::BadParameters, "torus_bundle needs one real and two complex eigenvalues");
    if (beta.imag() < 0) beta = std::conj(beta);
    alpha = alpha.real();
    // Eigenvector of the companion matrix for x: (1/x, x, 1).
    Vec3 va{1.0 / alpha, alpha, 1.0}, vb{1.0 / beta, beta, 1.0};
    std::vector<Mat3> gens = {Mat3::diag(alpha, beta, 1.0)};
    for (int i = 0; i < 3; ++i) gens.push_back(translation(va[i], vb[i]));
    GalleryEntry e{"torus_bundle", make_spec("torus_bundle", gens), kInfinite, 2, 12};
    e.spec.metadata["construction"] =
        "gamma0 = (alpha w, beta z) and translations by eigenvector coordinates; M = companion of x^3 - x - 1";
    e.spec.metadata["alpha"] = std::to_string(alpha.real());
    e.spec.metadata["abs_beta"] = std::to_string(std::abs(beta));
    return e;
}

inline std::vector<std::string> ids() {
    return {"suspension4", "schottky_susp", "coordinate_triangle", "torus_bundle", "triangular_lox", "translations"};
}

inline GalleryEntry build(const std::string& id) {
    if (id == "suspension4") return suspension4();
    if (id == "schottky_susp") return schottky_susp();
    if (id == "coordinate_triangle") return coordinate_triangle();
    if (id == "torus_bundle") return torus_bundle();
    if (id == "triangular_lox") return triangular_lox();
    if (id == "translations") return translations();
    throw Error(ErrorKind::BadParameters, "unknown gallery id '" + id + "'");
}

}  // namespace gallery
}  // namespace klab
