#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "pencils.hpp"
#include "pseudo_proj.hpp"

namespace klab {

struct GroupSpec {
    std::string name;
    std::vector<GroupElement> generators;
    std::map<std::string, std::string> metadata;
};

struct BallEnumeration {
    std::vector<GroupElement> elements;  // BFS order; elements[0] is the identity
    std::vector<int> length;             // word length
    std::vector<int> parent;             // index of the prefix word, -1 for the identity
    std::vector<int> letter;             // last letter (index into letters)
    std::vector<GroupElement> letters;   // generators and their inverses, deduplicated
    int radius = 0;
    bool truncated = false;
    bool discreteness_warning = false;

    std::vector<int> word(std::size_t i) const {
        std::vector<int> w;
        for (int k = int(i); parent[k] >= 0; k = parent[k]) w.push_back(letter[k]);
        return {w.rbegin(), w.rend()};
    }
    int max_length() const { return length.empty() ? 0 : length.back(); }
    // The enumeration ran out of new elements before the radius: the group is finite.
    bool exhausted() const { return !truncated && max_length() < radius; }
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(std::shared_ptr<BallEnumeration> partial)
        : Error(ErrorKind::CapExceeded, "word ball exceeded the element cap"), partial_(std::move(partial)) {}
    const BallEnumeration& partial() const { return *partial_; }

private:
    std::shared_ptr<BallEnumeration> partial_;
};

namespace detail {
inline std::array<double, 18> element_features(const GroupElement& g) {
    std::array<double, 18> f{};
    for (int k = 0; k < 9; ++k) f[2 * k] = g.canon.a[k].real(), f[2 * k + 1] = g.canon.a[k].imag();
    return f;
}
}  // namespace detail

inline std::vector<GroupElement> word_letters(const GroupSpec& spec) {
    std::vector<GroupElement> out;
    auto push = [&](const GroupElement& g) {
        if (is_identity(g)) return;
        for (const auto& h : out)
            if (element_eq(g, h)) return;
        out.push_back(g);
    };
    for (const auto& g : spec.generators) {
        push(g);
        push(inverse(g));
    }
    return out;
}

// Breadth-first enumeration of the distinct elements of word length <= radius.
// Duplicates are detected on a 1e-7 grid of canonical entries and confirmed by
// distance.  When more than `cap` elements appear the enumeration stops and the
// partial ball is returned with truncated = true.
inline BallEnumeration enumerate_ball_partial(const GroupSpec& spec, int radius, std::size_t cap = 200000) {
    if (radius < 0) throw Error(ErrorKind::BadParameters, "radius must be non-negative");
    if (cap == 0) throw Error(ErrorKind::BadParameters, "cap must be positive");
    BallEnumeration b;
    b.letters = word_letters(spec);
    GridIndex<18> dedup(tol::dedup_grid);
    GridIndex<18> near(1e-5);
    auto add = [&](const GroupElement& g, int len, int parent, int letter) -> bool {
        auto f = detail::element_features(g);
        bool dup = false;
        dedup.visit(f, 1e-9, [&](std::size_t id) {
            if (element_distance(b.elements[id], g) < tol::distinct) {
                dup = true;
                return false;
            }
            return true;
        });
        if (dup) return false;
        if (!b.discreteness_warning) {
            near.visit(f, 2e-6, [&](std::size_t id) {
                double d = element_distance(b.elements[id], g);
                // Nearby canonical forms alone are not evidence (elements far out in
                // the group look alike); the quotient must be close to the identity.
                if (d >= tol::distinct && d < 1e-6 &&
                    element_distance(compose(inverse(b.elements[id]), g), identity_element()) < 1e-6) {
                    b.discreteness_warning = true;
                    return false;
                }
                return true;
            });
        }
        std::size_t id = b.elements.size();
        b.elements.push_back(g);
        b.length.push_back(len);
        b.parent.push_back(parent);
        b.letter.push_back(letter);
        dedup.insert(f, id);
        near.insert(f, id);
        return true;
    };
    add(identity_element(), 0, -1, -1);
    std::size_t lo = 0, hi = 1;
    for (int len = 1; len <= radius; ++len) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t k = 0; k < b.letters.size(); ++k) {
                if (b.elements.size() >= cap) {
                    b.truncated = true;
                    b.radius = len - 1;
                    return b;
                }
                add(compose(b.elements[i], b.letters[k]), len, int(i), int(k));
            }
        }
        lo = hi;
        hi = b.elements.size();
        if (lo == hi) break;  // finite group exhausted
    }
    b.radius = radius;
    return b;
}

inline BallEnumeration enumerate_ball(const GroupSpec& spec, int radius, std::size_t cap = 200000) {
    auto b = enumerate_ball_partial(spec, radius, cap);
    if (b.truncated) throw CapExceeded(std::make_shared<BallEnumeration>(std::move(b)));
    return b;
}

struct LimitPoint {
    PseudoProjMap map;
    int cost = 0;  // word length of the element whose powers produced it
};

// Rank-deficient limits of escaping sequences, one per cluster of radius eps.
// Every loxodromic or parabolic element of the ball contributes the limits of its
// forward and backward powers; elliptic elements (finite order or not) contribute
// nothing, and invertible limits are never returned.
// `observe`, when given, sees every rank-deficient limit before clustering.
inline std::vector<LimitPoint> accumulate(const BallEnumeration& ball, double eps_cluster = 1e-3,
                                          const std::function<void(const PseudoProjMap&, int)>& observe = {}) {
    if (!(eps_cluster > 0)) throw Error(ErrorKind::BadParameters, "eps_cluster must be positive");
    std::vector<LimitPoint> out;
    GridIndex<18> idx(8 * eps_cluster);
    auto consider = [&](const PseudoProjMap& L, int cost) {
        if (L.rank >= 3) return;
        if (observe) observe(L, cost);
        std::array<double, 18> f{};
        for (int k = 0; k < 9; ++k) f[2 * k] = L.m.a[k].real(), f[2 * k + 1] = L.m.a[k].imag();
        bool hit = false;
        idx.visit(f, 2 * eps_cluster, [&](std::size_t id) {
            if (psp_distance(out[id].map, L) < eps_cluster) {
                hit = true;
                return false;
            }
            return true;
        });
        if (hit) return;
        idx.insert(f, out.size());
        out.push_back({L, cost});
    };
    for (std::size_t i = 1; i < ball.elements.size(); ++i) {
        const auto& g = ball.elements[i];
        auto e = eigen3(g.lift);
        if (moduli_all_equal(e) && e.diagonalizable) continue;
        consider(power_limit(g.lift), ball.length[i]);
        consider(power_limit(adjugate(g.lift)), ball.length[i]);
    }
    return out;
}

struct DynamicsConfig {
    int radius = 10;
    std::size_t cap = 200000;
    double eps_cluster = 1e-3;
    double tol = tol::distinct;
    double tol_cluster = tol::cluster;
    std::uint64_t seed = 0x6b6c6162ull;
    std::size_t line_cap = 20000;
    std::size_t point_cap = 4096;  // L0 points kept for the Kulkarni estimate
    std::size_t pencil_probe_points = 64;
    std::size_t pencil_threshold = 10;
    std::size_t seed_count = 64;
    std::size_t long_words_l1 = 4096;
    std::size_t long_words_l2 = 1024;
};

// Low-discrepancy seeds on CP^2: a Halton sequence in bases 2,3,5,7 with a
// seed-dependent Cranley-Patterson shift, mapped to the Fubini-Study measure
// (uniform moduli-squared on the simplex, uniform phases).
inline std::vector<ProjPoint> seed_points(std::size_t n, std::uint64_t seed) {
    auto halton = [](std::size_t i, int base) {
        double f = 1, r = 0;
        while (i > 0) {
            f /= base;
            r += f * double(i % base);
            i /= base;
        }
        return r;
    };
    auto splitmix = [](std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    std::uint64_t st = seed;
    std::array<double, 4> shift{};
    for (auto& s : shift) s = double(splitmix(st) >> 11) * 0x1.0p-53;
    const int bases[4] = {2, 3, 5, 7};
    std::vector<ProjPoint> out;
    for (std::size_t i = 1; i <= n; ++i) {
        std::array<double, 4> u{};
        for (int k = 0; k < 4; ++k) {
            u[k] = halton(i, bases[k]) + shift[k];
            u[k] -= std::floor(u[k]);
        }
        double a = std::min(u[0], u[1]), b = std::max(u[0], u[1]);
        double m0 = a, m1 = b - a, m2 = 1 - b;
        const double tau = 2 * std::numbers::pi;
        Vec3 v{std::sqrt(m0), std::polar(std::sqrt(m1), tau * u[2]), std::polar(std::sqrt(m2), tau * u[3])};
        if (norm(v) < 1e-12) v = {1.0, 0.0, 0.0};
        out.push_back(point_new(v));
    }
    return out;
}

// Everything derived from one word ball.  The public entry points below are thin
// views of this so that a gallery run enumerates each ball once.
struct Analysis {
    BallEnumeration ball;
    std::vector<LimitPoint> limits;
    LimitEstimate eq_complement;  // kernels of limit maps, closed under generator translation
    LimitEstimate c_gamma;        // union of cyclic limit sets, closed likewise
    LimitEstimate l0, l1, l2;
    LimitEstimate lambda;         // Kulkarni limit set estimate
    std::size_t ill_conditioned_skipped = 0;
    std::vector<std::string> diagnostics;
    std::vector<std::pair<std::string, double>> timings;  // seconds per phase; not part of reports
};

namespace detail {

// Close a family of lines/points under translation by the word letters: an item
// of cost c spawns g.item with cost c + 1, up to the radius.  The result at radius r
// therefore contains g.X(r - 1) for every generator g.
inline void translate_closure(LineSet& lines, PointSet& points, const std::vector<GroupElement>& letters, int radius,
                              std::size_t cap, bool& truncated) {
    std::vector<Mat3> dual;
    for (const auto& g : letters) dual.push_back(transpose(adjugate(g.lift)));
    std::vector<std::vector<std::size_t>> lb(radius + 1), pb(radius + 1);
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines.costs()[i] <= radius) lb[lines.costs()[i]].push_back(i);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points.costs()[i] <= radius) pb[points.costs()[i]].push_back(i);
    for (int c = 0; c < radius; ++c) {
        for (std::size_t q = 0; q < lb[c].size(); ++q) {
            std::size_t i = lb[c][q];
            if (lines.costs()[i] != c) continue;
            for (const auto& d : dual) {
                if (lines.size() >= cap) {
                    truncated = true;
                    break;
                }
                auto r = lines.insert(line_new(d * lines[i].v), c + 1);
                if (r.fresh || r.lowered) lb[c + 1].push_back(r.id);
            }
        }
        for (std::size_t q = 0; q < pb[c].size(); ++q) {
            std::size_t i = pb[c][q];
            if (points.costs()[i] != c) continue;
            for (const auto& g : letters) {
                if (points.size() >= cap) {
                    truncated = true;
                    break;
                }
                auto r = points.insert(point_new(g.lift * points[i].v), c + 1);
                if (r.fresh || r.lowered) pb[c + 1].push_back(r.id);
            }
        }
    }
}

// Lines of a family that lie only in space-filling pencils are dropped.
inline std::vector<std::size_t> lines_outside_space_filling(const LimitEstimate& e, double tol) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < e.lines.size(); ++i) {
        bool in_filling = false, in_thin = false;
        for (const auto& pc : e.pencils) {
            if (incidence_residual(pc.point, e.lines[i]) >= tol) continue;
            (pc.space_filling ? in_filling : in_thin) = true;
        }
        if (!in_filling || in_thin) keep.push_back(i);
    }
    return keep;
}

}  // namespace detail

inline Analysis analyze(const GroupSpec& spec, const DynamicsConfig& cfg) {
    Analysis a;
    auto clock = std::chrono::steady_clock::now();
    auto lap = [&](const char* phase) {
        auto now = std::chrono::steady_clock::now();
        a.timings.emplace_back(phase, std::chrono::duration<double>(now - clock).count());
        clock = now;
    };
    a.ball = enumerate_ball_partial(spec, cfg.radius, cfg.cap);
    lap("enumerate");
    if (a.ball.truncated)
        a.diagnostics.push_back("ball truncated at " + std::to_string(cfg.cap) + " elements (complete to radius " +
                                std::to_string(a.ball.radius) + ")");
    if (a.ball.discreteness_warning)
        a.diagnostics.push_back("two distinct ball elements closer than 1e-6: group may be non-discrete");
    const int R = cfg.radius;

    LineSet e_lines(cfg.tol_cluster), c_lines(cfg.tol_cluster), l0_lines(cfg.tol_cluster);
    PointSet e_points(cfg.tol_cluster), c_points(cfg.tol_cluster), l0_points(cfg.tol_cluster);

    // Kernels are collected from every limit, not only from the cluster
    // representatives: limits closer than eps_cluster can still have kernels that
    // differ by much more than tol_cluster.
    a.limits = accumulate(a.ball, cfg.eps_cluster, [&](const PseudoProjMap& m, int cost) {
        if (m.kernel_line) e_lines.insert(*m.kernel_line, cost);
        if (m.kernel_point) e_points.insert(*m.kernel_point, cost);
    });
    lap("accumulate");

    std::size_t irrational_elliptic = 0;
    for (std::size_t i = 1; i < a.ball.elements.size(); ++i) {
        const auto& g = a.ball.elements[i];
        int cost = a.ball.length[i];
        auto e = eigen3(g.lift);
        bool elliptic = moduli_all_equal(e) && e.diagonalizable;
        bool infinite = !elliptic || !order_of(g).has_value();
        if (infinite) {
            for (const auto& grp : e.groups) {
                if (grp.geometric == 2)
                    l0_lines.insert(line_new(cross(e.vectors[grp.members[0]], e.vectors[grp.members[1]])), cost);
                else if (grp.geometric == 1)
                    l0_points.insert(point_new(e.vectors[grp.members[0]]), cost);
            }
        }
        if (elliptic) {
            // Infinite-order elliptic elements have no cyclic limit set in the closed
            // form; their fixed points still accumulate (infinite isotropy).
            if (infinite) {
                ++irrational_elliptic;
                for (const auto& grp : e.groups)
                    if (grp.geometric == 1) c_points.insert(point_new(e.vectors[grp.members[0]]), cost);
            }
            continue;
        }
        try {
            auto cl = cyclic_limit_set(g);
            for (const auto& l : cl.lines) c_lines.insert(l, cost);
            for (const auto& p : cl.points) c_points.insert(p, cost);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::IllConditioned) throw;
            ++a.ill_conditioned_skipped;
        }
    }
    if (irrational_elliptic)
        a.diagnostics.push_back(std::to_string(irrational_elliptic) +
                                " infinite-order elliptic elements contributed fixed points to the cyclic union");
    if (a.ill_conditioned_skipped)
        a.diagnostics.push_back(std::to_string(a.ill_conditioned_skipped) +
                                " ill-conditioned elements skipped in the cyclic union");

    lap("cyclic");
    bool trunc_e = false, trunc_c = false;
    detail::translate_closure(e_lines, e_points, a.ball.letters, R, cfg.line_cap, trunc_e);
    detail::translate_closure(c_lines, c_points, a.ball.letters, R, cfg.line_cap, trunc_c);
    if (trunc_e || trunc_c) a.diagnostics.push_back("line family capped at " + std::to_string(cfg.line_cap));

    a.eq_complement = to_estimate(e_lines, e_points, "eq_complement");
    a.eq_complement.truncated = a.ball.truncated || trunc_e;
    a.c_gamma = to_estimate(c_lines, c_points, "c_gamma");
    a.c_gamma.truncated = a.ball.truncated || trunc_c;
    a.l0 = to_estimate(l0_lines, l0_points, "L0");

    lap("closure");
    // L0 points arrive in word-length order; the shortest ones are probed as pencil centres.
    std::vector<ProjPoint> probes(a.l0.points.begin(),
                                  a.l0.points.begin() + long(std::min(a.l0.points.size(), cfg.pencil_probe_points)));
    a.eq_complement.pencils = find_pencils(a.eq_complement.lines, cfg.pencil_threshold, tol::concurrency, probes);
    mark_space_filling(a.eq_complement.pencils, a.eq_complement.lines, tol::concurrency);
    a.c_gamma.pencils = find_pencils(a.c_gamma.lines, cfg.pencil_threshold, tol::concurrency, probes);

    // Orbit accumulation of seeds (L1) and of small spheres around seeds that stay
    // away from L0 and L1 (L2).  These clouds are coarse (1e-3 resolution).
    lap("pencils");
    auto seeds = seed_points(cfg.seed_count, cfg.seed);
    std::vector<ProjPoint> live;
    for (const auto& s : seeds) {
        bool near0 = l0_points.nearest_within(s, 1e-6) != PointSet::npos;
        for (const auto& l : l0_lines.items())
            if (incidence_residual(s, l) < 1e-6) near0 = true;
        if (!near0) live.push_back(s);
    }
    int long_from = std::max(1, a.ball.max_length() - 1);
    std::vector<std::size_t> long_words;
    for (std::size_t i = 0; i < a.ball.elements.size(); ++i)
        if (a.ball.length[i] >= long_from) long_words.push_back(i);
    // A cloud point counts as an accumulation point only when several distinct long
    // words land within its cluster radius.
    PointSet l1(1e-3), l2(1e-3);
    std::vector<int> hits1, hits2;
    auto observe = [](PointSet& set, std::vector<int>& hits, const ProjPoint& p, int cost) {
        auto r = set.insert(p, cost);
        if (r.fresh) hits.push_back(0);
        ++hits[r.id];
    };
    if (a.ball.max_length() >= 2 && !a.ball.exhausted()) {
        for (const auto& s : live)
            for (std::size_t k = 0; k < long_words.size() && k < cfg.long_words_l1; ++k) {
                std::size_t i = long_words[k];
                observe(l1, hits1, point_new(a.ball.elements[i].lift * s.v), a.ball.length[i]);
            }
        for (const auto& s : live) {
            if (l1.nearest_within(s, 1e-2) != PointSet::npos) continue;
            auto basis = line_basis(ProjLine{conj(s.v)});  // Hermitian complement of s
            for (int j = 0; j < 8; ++j) {
                double th = 2 * std::numbers::pi * j / 8.0;
                Vec3 dir = add(scale(basis[0], std::cos(th)), scale(basis[1], cplx(0, std::sin(th))));
                if (j % 2) dir = add(scale(basis[0], cplx(0, std::cos(th))), scale(basis[1], std::sin(th)));
                Vec3 q = add(scale(s.v, std::cos(1e-2)), scale(dir, std::sin(1e-2)));
                for (std::size_t k = 0; k < long_words.size() && k < cfg.long_words_l2; ++k) {
                    std::size_t i = long_words[k];
                    observe(l2, hits2, point_new(a.ball.elements[i].lift * q), a.ball.length[i]);
                }
            }
        }
    }
    auto accumulated = [](const PointSet& set, const std::vector<int>& hits, const char* tag) {
        LimitEstimate e;
        e.provenance = tag;
        for (std::size_t i = 0; i < set.size(); ++i)
            if (hits[i] >= 2) e.add_point(set[i], set.costs()[i]);
        return e;
    };
    a.l1 = accumulated(l1, hits1, "L1");
    a.l2 = accumulated(l2, hits2, "L2");

    // Kulkarni estimate: kernel lines outside space-filling pencils, pointwise fixed
    // lines, and points of infinite isotropy that lie on none of those lines.
    lap("orbits");
    LimitEstimate& lam = a.lambda;
    lam.provenance = "kulkarni";
    lam.truncated = a.eq_complement.truncated;
    LineSet lam_lines(cfg.tol_cluster);
    for (auto i : detail::lines_outside_space_filling(a.eq_complement, tol::concurrency))
        lam_lines.insert(a.eq_complement.lines[i], a.eq_complement.line_cost[i]);
    for (std::size_t i = 0; i < l0_lines.size(); ++i) lam_lines.insert(l0_lines[i], l0_lines.costs()[i]);
    for (std::size_t i = 0; i < lam_lines.size(); ++i) lam.add_line(lam_lines[i], lam_lines.costs()[i]);
    if (l0_points.size() > cfg.point_cap)
        a.diagnostics.push_back("Kulkarni estimate uses the first " + std::to_string(cfg.point_cap) + " of " +
                                std::to_string(l0_points.size()) + " fixed points");
    for (std::size_t i = 0; i < l0_points.size() && i < cfg.point_cap; ++i) {
        bool on = false;
        for (const auto& l : lam.lines)
            if (incidence_residual(l0_points[i], l) < 1e-6) {
                on = true;
                break;
            }
        if (!on) lam.add_point(l0_points[i], l0_points.costs()[i]);
    }
    lam.pencils = find_pencils(lam.lines, cfg.pencil_threshold, tol::concurrency, probes);
    mark_space_filling(lam.pencils, lam.lines, tol::concurrency);
    for (const auto& pc : a.eq_complement.pencils)
        if (pc.space_filling)
            a.diagnostics.push_back("space-filling pencil of " + std::to_string(pc.count) +
                                    " kernel lines excluded from the Kulkarni estimate");
    lap("kulkarni");
    return a;
}

inline LimitEstimate eq_complement(const GroupSpec& spec, int radius, DynamicsConfig cfg = {}) {
    cfg.radius = radius;
    return analyze(spec, cfg).eq_complement;
}

struct KulkarniEstimate {
    LimitEstimate l0, l1, l2, lambda;
};

inline KulkarniEstimate kulkarni_estimate(const GroupSpec& spec, int radius, DynamicsConfig cfg = {}) {
    cfg.radius = radius;
    auto a = analyze(spec, cfg);
    return {a.l0, a.l1, a.l2, a.lambda};
}

inline LimitEstimate c_gamma_estimate(const GroupSpec& spec, int radius, DynamicsConfig cfg = {}) {
    cfg.radius = radius;
    return analyze(spec, cfg).c_gamma;
}

struct UnionCheck {
    bool pass = false;
    double line_distance = 0;
    double point_distance = 0;
};

// Compare the Kulkarni estimate with the union of cyclic limit sets: Hausdorff
// distance between the line families and between the isolated points.
inline UnionCheck lambda_union_check(const Analysis& a, double tol = 1e-4) {
    UnionCheck r;
    r.line_distance = hausdorff(a.lambda.lines, a.c_gamma.lines, std::max(tol * 10, 1e-3));
    auto iso = [](const LimitEstimate& e) {
        std::vector<ProjPoint> v;
        for (auto i : isolated_points(e)) v.push_back(e.points[i]);
        return v;
    };
    r.point_distance = hausdorff(iso(a.lambda), iso(a.c_gamma), std::max(tol * 10, 1e-3));
    r.pass = r.line_distance <= tol && r.point_distance <= tol;
    return r;
}

inline UnionCheck lambda_union_check(const GroupSpec& spec, int radius, double tol = 1e-4, DynamicsConfig cfg = {}) {
    cfg.radius = radius;
    return lambda_union_check(analyze(spec, cfg), tol);
}

}  // namespace klab
