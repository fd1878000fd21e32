#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace klab {

// Uniform hash grid over R^D.  A query of radius r visits the home cell plus the
// neighbouring cells along every coordinate that lies within r of a cell wall, so
// it is cheap as long as r is small compared to the cell size.
template <std::size_t D>
class GridIndex {
public:
    using Key = std::array<std::int64_t, D>;
    using Feature = std::array<double, D>;

    explicit GridIndex(double cell) : cell_(cell) {}

    void insert(const Feature& f, std::size_t id) { cells_[key_of(f)].push_back(id); }

    // Calls fn(id) for every stored id whose cell might hold a point within r of f.
    template <class Fn>
    void visit(const Feature& f, double r, Fn&& fn) const {
        Key home = key_of(f);
        std::array<int, D> dir{};
        std::size_t nflex = 0;
        std::array<std::size_t, D> flex{};
        for (std::size_t i = 0; i < D; ++i) {
            double lo = (home[i] - kShift) * cell_, hi = lo + cell_;
            if (f[i] - lo < r) dir[i] = -1, flex[nflex++] = i;
            else if (hi - f[i] < r) dir[i] = 1, flex[nflex++] = i;
        }
        if (nflex > 12) {
            // Too many boundary coordinates for the corner walk: scan the cells.
            for (const auto& [k, ids] : cells_) {
                bool close = true;
                for (std::size_t i = 0; i < D && close; ++i) close = k[i] - home[i] <= 1 && home[i] - k[i] <= 1;
                if (!close) continue;
                for (std::size_t id : ids)
                    if (!fn(id)) return;
            }
            return;
        }
        for (std::uint32_t mask = 0; mask < (1u << nflex); ++mask) {
            Key k = home;
            for (std::size_t b = 0; b < nflex; ++b)
                if (mask & (1u << b)) k[flex[b]] += dir[flex[b]];
            auto it = cells_.find(k);
            if (it == cells_.end()) continue;
            for (std::size_t id : it->second)
                if (!fn(id)) return;
        }
    }

    std::size_t cell_count() const { return cells_.size(); }

private:
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (auto x : k) {
                h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
                h *= 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };

    // Cells are centred on multiples of the cell size, so exact values such as 0 and 1
    // are not on a wall.
    static constexpr double kShift = 0.5;

    Key key_of(const Feature& f) const {
        Key k;
        for (std::size_t i = 0; i < D; ++i) k[i] = static_cast<std::int64_t>(std::floor(f[i] / cell_ + kShift));
        return k;
    }

    double cell_;
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

}  // namespace klab
