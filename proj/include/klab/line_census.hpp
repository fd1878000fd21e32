#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pencils.hpp"

namespace klab {

inline constexpr int kInfinite = -1;  // bucket value for "infinitely many"

inline std::string bucket_name(int b) { return b == kInfinite ? "inf" : std::to_string(b); }

struct GeneralPositionResult {
    int size = 0;
    std::vector<std::size_t> witness;  // indices into the input family
    bool exact = true;                 // false: size is only a lower bound
    int upper = 0;                     // proven upper bound (== size when exact)
    bool ambiguous = false;            // some triple fell in the concurrency guard band
};

namespace detail {

// Exact maximum subfamily with no three concurrent for at most 64 lines.  A triple
// counts as concurrent when its residual is below `tol`.
class GpSearch {
public:
    GpSearch(const std::vector<ProjLine>& lines, double tol) : n_(lines.size()), t_(n_ * n_, 0) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                // Coincident lines behave like a concurrent triple with anything.
                bool same = fs_distance(lines[i], lines[j]) < tol::distinct;
                for (std::size_t k = 0; k < n_; ++k) {
                    if (k == i || k == j) continue;
                    if (same || concurrency_residual(lines[i], lines[j], lines[k]) < tol) {
                        t_[i * n_ + j] |= bit(k);
                        t_[j * n_ + i] |= bit(k);
                    }
                }
                if (same) pair_bad_.push_back({i, j});
            }
    }

    GeneralPositionResult run() {
        std::uint64_t all = n_ == 64 ? ~0ull : (bit(n_) - 1);
        // Coincident pairs can never both be chosen: drop the later one.
        for (auto [i, j] : pair_bad_) all &= ~bit(j);
        best_mask_ = 0;
        best_ = 0;
        std::vector<int> chosen;
        recurse(0, all, chosen);
        GeneralPositionResult r;
        r.size = best_;
        r.upper = best_;
        for (std::size_t i = 0; i < n_; ++i)
            if (best_mask_ & bit(i)) r.witness.push_back(i);
        return r;
    }

private:
    static std::uint64_t bit(std::size_t i) { return std::uint64_t(1) << i; }

    // Upper bound on how many candidates can still be added: candidates split
    // greedily into concurrent groups (two lines and every candidate through their
    // meet), each of which contributes at most two lines.
    int bound(std::uint64_t cand) const {
        int b = 0;
        while (cand) {
            int c = std::countr_zero(cand);
            cand &= cand - 1;
            std::uint64_t best_group = 0;
            for (std::uint64_t rest = cand; rest; rest &= rest - 1) {
                int d = std::countr_zero(rest);
                std::uint64_t g = (t_[c * n_ + d] & cand) | bit(d);
                if (std::popcount(g) > std::popcount(best_group)) best_group = g;
            }
            if (best_group) {
                b += 2;
                cand &= ~best_group;
            } else {
                b += 1;
            }
        }
        return b;
    }

    void recurse(std::uint64_t mask, std::uint64_t cand, std::vector<int>& chosen) {
        int cur = std::popcount(mask);
        if (cur > best_) {
            best_ = cur;
            best_mask_ = mask;
        }
        if (!cand || cur + std::popcount(cand) <= best_) return;
        if (cur + bound(cand) <= best_) return;
        int v = std::countr_zero(cand);
        // include v
        std::uint64_t forbid = 0;
        for (int u : chosen) forbid |= t_[u * n_ + v];
        chosen.push_back(v);
        recurse(mask | bit(v), cand & ~bit(v) & ~forbid, chosen);
        chosen.pop_back();
        // exclude v
        recurse(mask, cand & ~bit(v), chosen);
    }

    std::size_t n_;
    std::vector<std::uint64_t> t_;
    std::vector<std::pair<std::size_t, std::size_t>> pair_bad_;
    std::uint64_t best_mask_ = 0;
    int best_ = 0;
};

inline bool triple_in_band(double r) { return r >= tol::guard_lo && r <= tol::guard_hi; }

// Whether adding line c to the chosen set keeps it in general position.
inline bool extends(const std::vector<ProjLine>& lines, const std::vector<std::size_t>& chosen, std::size_t c,
                    double tol) {
    for (std::size_t a = 0; a < chosen.size(); ++a) {
        if (fs_distance(lines[chosen[a]], lines[c]) < tol::distinct) return false;
        for (std::size_t b = a + 1; b < chosen.size(); ++b)
            if (concurrency_residual(lines[chosen[a]], lines[chosen[b]], lines[c]) < tol) return false;
    }
    return true;
}

// Large families: greedy lower bound from several starting lines, stopped at
// `enough`, and an upper bound from a partition into detected pencils.
inline GeneralPositionResult heuristic_gp(const std::vector<ProjLine>& lines, double tol, int enough) {
    GeneralPositionResult r;
    r.exact = false;
    const std::size_t n = lines.size();
    const std::size_t starts = std::min<std::size_t>(n, 64);
    for (std::size_t s = 0; s < starts && r.size < enough; ++s) {
        std::vector<std::size_t> chosen = {s};
        for (std::size_t k = 1; k < n && int(chosen.size()) < enough; ++k) {
            std::size_t c = (s + k * 7919) % n;  // deterministic scramble of the visiting order
            if (extends(lines, chosen, c, tol)) chosen.push_back(c);
        }
        if (int(chosen.size()) > r.size) {
            r.size = int(chosen.size());
            std::sort(chosen.begin(), chosen.end());
            r.witness = chosen;
        }
    }
    // Upper bound: assign lines to pencils, largest first.
    auto pencils = find_pencils(lines, 3, tol);
    std::vector<char> used(n, 0);
    int upper = 0;
    for (const auto& pc : pencils) {
        int in = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && incidence_residual(pc.point, lines[i]) < tol) used[i] = 1, ++in;
        upper += std::min(in, 2);
    }
    for (std::size_t i = 0; i < n; ++i) upper += !used[i];
    r.upper = upper;
    r.exact = r.size >= upper;
    return r;
}

}  // namespace detail

// Largest subfamily with no three lines concurrent.  Exact by branch and bound up
// to 64 lines; above that a heuristic lower bound with a pencil-partition upper
// bound (exact flag set when they meet).  Values of 5 and more are all the same to
// the classifier, so the heuristic stops once it finds `enough` lines.
inline GeneralPositionResult max_general_position(const std::vector<ProjLine>& lines, double tol = tol::concurrency,
                                                  int enough = 5) {
    if (lines.empty()) return {};
    if (lines.size() <= 64) return detail::GpSearch(lines, tol).run();
    return detail::heuristic_gp(lines, tol, enough);
}

// Same, but also decides whether the answer depends on triples whose residual is in
// the guard band: they are read once as concurrent and once as not.
inline GeneralPositionResult max_general_position_guarded(const std::vector<ProjLine>& lines, int enough = 5,
                                                          std::optional<int>* alternative = nullptr) {
    auto nominal = max_general_position(lines, tol::concurrency, enough);
    bool band = false;
    if (lines.size() <= 64) {
        for (std::size_t i = 0; i < lines.size() && !band; ++i)
            for (std::size_t j = i + 1; j < lines.size() && !band; ++j)
                for (std::size_t k = j + 1; k < lines.size() && !band; ++k)
                    band = detail::triple_in_band(concurrency_residual(lines[i], lines[j], lines[k]));
    } else {
        // Only the witness triples and pencil memberships can matter; probe them.
        for (std::size_t a = 0; a < nominal.witness.size() && !band; ++a)
            for (std::size_t b = a + 1; b < nominal.witness.size() && !band; ++b)
                for (std::size_t c = 0; c < lines.size() && !band; ++c)
                    band = detail::triple_in_band(
                        concurrency_residual(lines[nominal.witness[a]], lines[nominal.witness[b]], lines[c]));
    }
    if (!band) return nominal;
    auto loose = max_general_position(lines, tol::guard_hi, enough);
    auto strict = max_general_position(lines, tol::guard_lo, enough);
    nominal.ambiguous = loose.size != strict.size;
    if (nominal.ambiguous && alternative) *alternative = loose.size != nominal.size ? loose.size : strict.size;
    return nominal;
}

// Meets of two witness lines through which at least `threshold` lines of the family pass.
inline std::vector<ProjPoint> detect_vertices(const std::vector<ProjLine>& lines,
                                              const std::vector<std::size_t>& witness, std::size_t threshold = 10,
                                              double tol = tol::concurrency) {
    std::vector<ProjPoint> out;
    PointSet seen(1e-7);
    for (std::size_t a = 0; a < witness.size(); ++a)
        for (std::size_t b = a + 1; b < witness.size(); ++b) {
            const auto& la = lines[witness[a]];
            const auto& lb = lines[witness[b]];
            if (fs_distance(la, lb) < tol::distinct) continue;
            ProjPoint p = meet(la, lb);
            if (count_through(p, lines, tol) >= threshold && seen.insert(p).fresh) out.push_back(p);
        }
    return out;
}

struct CensusConfig {
    std::size_t infinite_threshold = 50;
    std::size_t pencil_threshold = 10;
    std::optional<std::size_t> previous_count;  // line count one radius earlier, if known
};

struct CensusReport {
    std::size_t raw_count = 0;
    std::size_t pencil_flags = 0;
    int li_bucket = 0;  // 1, 2, 3 or kInfinite; 0 when no line was detected
    int lig_value = 0;
    bool lig_exact = true;
    int lig_upper = 0;
    int lig_bucket = 0;  // 1..4 or kInfinite; 0 when no line was detected
    std::vector<ProjPoint> vertices;
    std::vector<std::size_t> witness;
    bool ambiguous = false;
    std::optional<int> lig_bucket_alt;  // the other reading of the guard-band triples
    std::vector<std::string> diagnostics;
};

inline int lig_bucket_of(int value) { return value >= 5 ? kInfinite : value; }

inline CensusReport classify_census(const LimitEstimate& est, const CensusConfig& cfg = {}) {
    CensusReport r;
    r.raw_count = est.lines.size();
    for (const auto& pc : est.pencils) r.pencil_flags += pc.count >= cfg.pencil_threshold;

    if (r.raw_count == 0) {
        r.diagnostics.push_back("no lines detected");
    } else if (r.pencil_flags > 0 || r.raw_count >= cfg.infinite_threshold) {
        r.li_bucket = kInfinite;
    } else if (r.raw_count > 3) {
        r.li_bucket = kInfinite;
        r.diagnostics.push_back("theorem-coerced: " + std::to_string(r.raw_count) +
                                " lines is not a possible finite count, reported as infinite");
    } else {
        r.li_bucket = int(r.raw_count);
        if (cfg.previous_count && *cfg.previous_count != r.raw_count)
            r.diagnostics.push_back("line count not stable across radii (" + std::to_string(*cfg.previous_count) +
                                    " -> " + std::to_string(r.raw_count) + ")");
    }

    std::optional<int> alt;
    auto gp = max_general_position_guarded(est.lines, 5, &alt);
    r.lig_value = gp.size;
    r.lig_exact = gp.exact;
    r.lig_upper = gp.upper;
    r.witness = gp.witness;
    r.lig_bucket = lig_bucket_of(gp.size);
    if (!gp.exact && gp.size < 5)
        r.diagnostics.push_back("general-position count is a lower bound (upper bound " + std::to_string(gp.upper) +
                                ")");
    if (gp.size >= 5) {
        r.diagnostics.push_back(gp.exact && est.lines.size() <= 64
                                    ? "theorem-coerced: " + std::to_string(gp.size) +
                                          " lines in general position reported as infinite"
                                    : "at least 5 lines in general position, reported as infinite");
    }
    if (gp.ambiguous && alt) {
        int b = lig_bucket_of(*alt);
        if (b != r.lig_bucket) {
            r.ambiguous = true;
            r.lig_bucket_alt = b;
            r.diagnostics.push_back("concurrency guard band: bucket is " + bucket_name(r.lig_bucket) + " or " +
                                    bucket_name(b));
        }
    }
    r.vertices = detect_vertices(est.lines, r.witness, cfg.pencil_threshold);
    return r;
}

}  // namespace klab
