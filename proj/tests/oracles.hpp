#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the pair automaton.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

// Symbols with an infinite admissible future (forward) or past (backward).
inline std::vector<char> extendable(const Matrix& a, bool forward) {
    const int s = static_cast<int>(a.size());
    std::vector<char> alive(s, 1);
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 0; x < s; ++x) {
            if (!alive[x]) continue;
            bool any = false;
            for (int y = 0; y < s; ++y) {
                const int e = forward ? a[x][y] : a[y][x];
                if (e && alive[y]) any = true;
            }
            if (!any) {
                alive[x] = 0;
                changed = true;
            }
        }
    }
    return alive;
}

inline int residue(int j, int n, bool two_sided) {
    const int t = ((j % n) + n) % n;
    return two_sided ? std::min(t, n - t) : t;
}

// Largest m such that some admissible distinct pair differs only where
// r(j) >= m, found by a DP over a window of positions. Returns -1 when no
// distinct pair exists.
//
// A pair with min r >= 1 agrees on every multiple of n, so it can be cut at
// the multiples of n around one difference and shifted by a multiple of n;
// the result differs only inside a window of width 2n. A window of radius
// 12 (two-sided) or length 25 (one-sided) therefore decides every n <= 8.
inline int windowed_exponent(const Matrix& a, int n, bool two_sided, int radius = 12) {
    const int s = static_cast<int>(a.size());
    const auto future = extendable(a, true);
    const auto past = extendable(a, false);
    const int lo = two_sided ? -radius : 0;
    const int hi = two_sided ? radius : 2 * radius;
    const int kNone = n + 1;  // no difference seen yet

    // Any distinct extendable pair at all?
    {
        // state: (a, b, differed)
        std::set<std::tuple<int, int, int>> cur;
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                if (two_sided && (!past[x] || !past[y])) continue;
                cur.insert({x, y, x != y});
            }
        }
        for (int j = lo + 1; j <= hi; ++j) {
            std::set<std::tuple<int, int, int>> next;
            for (auto [x, y, d] : cur) {
                for (int x2 = 0; x2 < s; ++x2) {
                    if (!a[x][x2]) continue;
                    for (int y2 = 0; y2 < s; ++y2) {
                        if (a[y][y2]) next.insert({x2, y2, d || x2 != y2});
                    }
                }
            }
            cur = std::move(next);
        }
        bool any = false;
        for (auto [x, y, d] : cur) {
            if (d && future[x] && future[y]) any = true;
        }
        if (!any) return -1;
    }

    // Pairs agreeing at both window ends: state (a, b) -> set of min r so far.
    std::map<std::pair<int, int>, std::set<int>> cur;
    for (int x = 0; x < s; ++x) {
        if (two_sided && !past[x]) continue;
        cur[{x, x}].insert(kNone);
    }
    for (int j = lo + 1; j <= hi; ++j) {
        std::map<std::pair<int, int>, std::set<int>> next;
        for (const auto& [xy, mins] : cur) {
            const auto [x, y] = xy;
            for (int x2 = 0; x2 < s; ++x2) {
                if (!a[x][x2]) continue;
                for (int y2 = 0; y2 < s; ++y2) {
                    if (!a[y][y2]) continue;
                    auto& slot = next[{x2, y2}];
                    for (int m : mins) slot.insert(x2 != y2 ? std::min(m, residue(j, n, two_sided)) : m);
                }
            }
        }
        cur = std::move(next);
    }
    int best = 0;
    for (const auto& [xy, mins] : cur) {
        if (xy.first != xy.second || !future[xy.first]) continue;
        for (int m : mins) {
            if (m != kNone) best = std::max(best, m);
        }
    }
    return best;
}

// Random 0/1 matrix with every row and column nonempty.
inline Matrix random_matrix(std::mt19937_64& rng, int symbols) {
    std::bernoulli_distribution coin(0.55);
    for (;;) {
        Matrix a(symbols, std::vector<int>(symbols, 0));
        for (auto& row : a) {
            for (auto& e : row) e = coin(rng) ? 1 : 0;
        }
        bool ok = true;
        for (int i = 0; i < symbols; ++i) {
            int row = 0, col = 0;
            for (int j = 0; j < symbols; ++j) {
                row += a[i][j];
                col += a[j][i];
            }
            if (row == 0 || col == 0) ok = false;
        }
        if (ok) return a;
    }
}

// Spectral radius of a small nonnegative matrix from characteristic roots.
inline double spectral_radius_2x2(const Matrix& a) {
    const double tr = a[0][0] + a[1][1];
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const double disc = tr * tr - 4 * det;
    return (tr + std::sqrt(std::max(0.0, disc))) / 2.0;
}

// Greedy open-ball count with lowest-index-first selection.
template <class Dist>
std::size_t greedy_cover(std::size_t count, double eps, Dist dist) {
    std::vector<char> covered(count, 0);
    std::size_t balls = 0;
    for (std::size_t c = 0; c < count; ++c) {
        if (covered[c]) continue;
        ++balls;
        for (std::size_t p = 0; p < count; ++p) {
            if (dist(c, p) < eps) covered[p] = 1;
        }
    }
    return balls;
}

// min over nonzero grid points of the max torus norm along the orbit under
// the 2x2 integer matrix m^n mod q, iterating with floating coordinates
// rebuilt from integers each step.
inline double torus_grid_bound(const std::vector<std::vector<long>>& m, int n, long q) {
    auto apply = [&](long x, long y) {
        long u = x, v = y;
        for (int k = 0; k < n; ++k) {
            const long nu = ((m[0][0] * u + m[0][1] * v) % q + q) % q;
            const long nv = ((m[1][0] * u + m[1][1] * v) % q + q) % q;
            u = nu;
            v = nv;
        }
        return std::pair<long, long>{u, v};
    };
    auto norm = [&](long x, long y) {
        const double dx = std::min(x, q - x) / static_cast<double>(q);
        const double dy = std::min(y, q - y) / static_cast<double>(q);
        return std::hypot(dx, dy);
    };
    double best = 1e9;
    for (long x = 0; x < q; ++x) {
        for (long y = 0; y < q; ++y) {
            if (x == 0 && y == 0) continue;
            double worst = norm(x, y);
            auto [u, v] = apply(x, y);
            while (u != x || v != y) {
                worst = std::max(worst, norm(u, v));
                std::tie(u, v) = apply(u, v);
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

}  // namespace oracle
