#include "expanse/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <functional>
#include <limits>
#include <numeric>

#include "expanse/error.hpp"
#include "expanse/samplers.hpp"
#include "pair_automaton.hpp"

namespace expanse {

MatrixDiagnostic validate_matrix(const std::vector<std::vector<int>>& entries) {
    MatrixDiagnostic diag;
    const std::size_t s = entries.size();
    if (s == 0) {
        diag.problems.emplace_back("matrix is empty");
        return diag;
    }
    for (std::size_t i = 0; i < s; ++i) {
        if (entries[i].size() != s) {
            diag.problems.emplace_back("row " + std::to_string(i) + " has " +
                                       std::to_string(entries[i].size()) + " entries, expected " +
                                       std::to_string(s));
        }
    }
    if (!diag.problems.empty()) return diag;
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            if (entries[i][j] != 0 && entries[i][j] != 1) {
                diag.problems.emplace_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") is not 0 or 1");
            }
        }
    }
    for (std::size_t i = 0; i < s; ++i) {
        bool row = false;
        bool col = false;
        for (std::size_t j = 0; j < s; ++j) {
            row = row || entries[i][j] == 1;
            col = col || entries[j][i] == 1;
        }
        if (!row) diag.problems.emplace_back("empty row " + std::to_string(i));
        if (!col) diag.problems.emplace_back("empty column " + std::to_string(i));
    }
    diag.valid = diag.problems.empty();
    if (!diag.valid) return diag;

    // Irreducible iff every symbol reaches every other: one BFS forward and one
    // backward from symbol 0.
    auto reach_all = [&](bool transpose) {
        std::vector<char> seen(s, 0);
        std::deque<std::size_t> queue{0};
        seen[0] = 1;
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < s; ++w) {
                const int e = transpose ? entries[w][v] : entries[v][w];
                if (e == 1 && !seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    diag.irreducible = reach_all(false) && reach_all(true);
    return diag;
}

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> entries) {
    const auto diag = validate_matrix(entries);
    if (!diag.valid) throw InvalidInput(diag.problems.front(), "entries");
    size_ = static_cast<int>(entries.size());
    allowed_.resize(static_cast<std::size_t>(size_) * size_);
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) allowed_[i * size_ + j] = static_cast<char>(entries[i][j]);
    }
    irreducible_ = diag.irreducible;
}

TransitionMatrix TransitionMatrix::full_shift(int symbols) {
    if (symbols < 1) throw InvalidInput("alphabet must be nonempty", "size");
    return TransitionMatrix(std::vector<std::vector<int>>(symbols, std::vector<int>(symbols, 1)));
}

TransitionMatrix TransitionMatrix::golden_mean() { return TransitionMatrix({{1, 1}, {1, 0}}); }

bool TransitionMatrix::is_full_shift() const noexcept {
    return std::all_of(allowed_.begin(), allowed_.end(), [](char c) { return c != 0; });
}

std::vector<std::vector<int>> TransitionMatrix::entries() const {
    std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) out[i][j] = allowed(i, j) ? 1 : 0;
    }
    return out;
}

TransitionMatrix TransitionMatrix::relabeled(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != size_) throw InvalidInput("permutation has wrong length", "perm");
    std::vector<char> seen(size_, 0);
    for (int p : perm) {
        if (p < 0 || p >= size_ || seen[p]) throw InvalidInput("not a permutation", "perm");
        seen[p] = 1;
    }
    std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) out[perm[i]][perm[j]] = allowed(i, j) ? 1 : 0;
    }
    return TransitionMatrix(std::move(out));
}

bool TransitionMatrix::admissible(std::span<const Symbol> word) const {
    for (Symbol c : word) {
        if (c < 0 || c >= size_) return false;
    }
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (!allowed(word[i], word[i + 1])) return false;
    }
    return true;
}

SymbolicSpace::SymbolicSpace(TransitionMatrix m, double q_, Sidedness sided_)
    : matrix(std::move(m)), q(q_), sided(sided_) {
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidInput("metric parameter must exceed 1", "q");
}

namespace {

// Entry sum of A^k for k = 1..count: exact in 64-bit integers until overflow,
// then log-scaled floating point.
std::vector<double> norm_trace(const TransitionMatrix& m, int count) {
    const int s = m.size();
    std::vector<double> trace;
    std::vector<std::uint64_t> exact(s, 1);
    bool overflow = false;
    std::vector<double> scaled(s, 1.0);
    double log_scale = 0.0;

    for (int k = 1; k <= count; ++k) {
        if (!overflow) {
            std::vector<std::uint64_t> next(s, 0);
            for (int i = 0; i < s && !overflow; ++i) {
                for (int j = 0; j < s; ++j) {
                    if (m.allowed(i, j) && __builtin_add_overflow(next[i], exact[j], &next[i])) {
                        overflow = true;
                        break;
                    }
                }
            }
            std::uint64_t total = 0;
            for (int i = 0; i < s && !overflow; ++i) {
                if (__builtin_add_overflow(total, next[i], &total)) overflow = true;
            }
            if (!overflow) {
                exact = std::move(next);
                trace.push_back(std::log(static_cast<double>(total)) / k);
                continue;
            }
            for (int i = 0; i < s; ++i) scaled[i] = static_cast<double>(exact[i]);
        }
        std::vector<double> next(s, 0.0);
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j) {
                if (m.allowed(i, j)) next[i] += scaled[j];
            }
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (auto& x : next) x /= total;
        log_scale += std::log(total);
        scaled = std::move(next);
        trace.push_back(log_scale / k);
    }
    return trace;
}

}  // namespace

namespace {

// Summing in sorted order makes the result independent of symbol order.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    return std::accumulate(terms.begin(), terms.end(), 0.0);
}

}  // namespace

EntropyResult entropy(const TransitionMatrix& m, int k_max, double tol) {
    if (k_max < 1) throw InvalidInput("k_max must be positive", "k_max");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive", "tol");
    const int s = m.size();
    EntropyResult res;

    std::vector<double> v(s, 1.0);
    double sum_v = static_cast<double>(s);
    double prev = -1.0;
    double ratio = 0.0;
    std::vector<double> terms;
    for (int k = 1; k <= k_max; ++k) {
        std::vector<double> w(s, 0.0);
        for (int i = 0; i < s; ++i) {
            terms.clear();
            for (int j = 0; j < s; ++j) {
                if (m.allowed(i, j)) terms.push_back(v[j]);
            }
            w[i] = sorted_sum(terms);
        }
        terms = w;
        const double sum_w = sorted_sum(terms);
        ratio = sum_w / sum_v;
        res.iterations = k;
        for (auto& x : w) x /= sum_w;
        v = std::move(w);
        sum_v = 1.0;
        if (k > 1 && std::abs(ratio - prev) < tol) {
            res.converged = true;
            break;
        }
        if (k < k_max) prev = ratio;
    }
    res.spectral_radius = (res.converged || prev <= 0.0) ? ratio : std::sqrt(ratio * prev);
    res.value = std::log(res.spectral_radius);
    res.trace = norm_trace(m, std::min(k_max, 60));
    return res;
}

DimensionResult hausdorff_dimension(const SymbolicSpace& space, int k_max, double tol) {
    const auto h = entropy(space.matrix, k_max, tol);
    const double factor = space.sided == Sidedness::two_sided ? 2.0 : 1.0;
    return {factor * h.value / std::log(space.q), h.converged};
}

PairWitness PairWitness::periodic(std::vector<Symbol> a, std::vector<Symbol> b, std::int64_t origin) {
    if (a.empty() || a.size() != b.size()) throw InvalidInput("periodic blocks must be nonempty and equal length", "seq");
    PairWitness w;
    w.period = a.size();
    w.origin = origin;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) w.difference_positions.push_back(origin + static_cast<std::int64_t>(i));
    }
    w.seq_a = std::move(a);
    w.seq_b = std::move(b);
    return w;
}

ExactGamma exact_expansive_constant(const SymbolicSpace& space, int n) {
    if (n < 1) throw InvalidInput("power must be positive", "n");
    const int cap = space.sided == Sidedness::two_sided ? n / 2 : n - 1;
    for (int m = cap; m >= 0; --m) {
        const detail::PairAutomaton automaton(space.matrix, n, space.sided, m);
        auto witness = detail::find_witness(automaton, n, space.sided);
        if (!witness) continue;
        ExactGamma out;
        out.exponent = m;
        out.value = std::pow(space.q, -m);
        out.witness = std::move(witness);
        return out;
    }
    ExactGamma vacuous;
    vacuous.vacuous = true;
    return vacuous;
}

namespace {

void require_admissible(const TransitionMatrix& m, Symbol from, Symbol to) {
    if (from < 0 || from >= m.size() || to < 0 || to >= m.size() || !m.allowed(from, to)) {
        throw InvalidInput("inadmissible sequence: transition " + std::to_string(from) + "->" +
                               std::to_string(to) + " is forbidden",
                           "witness");
    }
}

void require_block(const TransitionMatrix& m, const std::vector<Symbol>& block, bool cyclic) {
    for (Symbol c : block) {
        if (c < 0 || c >= m.size()) throw InvalidInput("symbol out of range", "witness");
    }
    for (std::size_t i = 0; i + 1 < block.size(); ++i) require_admissible(m, block[i], block[i + 1]);
    if (cyclic && !block.empty()) require_admissible(m, block.back(), block.front());
}

// Checks one coordinate of the witness.
void check_coordinate(const SymbolicSpace& space, const std::vector<Symbol>& left,
                      const std::vector<Symbol>& head, const std::vector<Symbol>& seq) {
    const auto& m = space.matrix;
    require_block(m, seq, true);
    require_block(m, head, false);
    if (!head.empty()) require_admissible(m, head.back(), seq.front());
    if (space.sided == Sidedness::one_sided) return;
    const auto& tail = left.empty() ? seq : left;
    require_block(m, tail, true);
    require_admissible(m, tail.back(), head.empty() ? seq.front() : head.front());
}

}  // namespace

bool verify_pair_witness(const SymbolicSpace& space, int n, const PairWitness& w, int claimed_exponent) {
    if (n < 1) throw InvalidInput("power must be positive", "n");
    if (w.seq_a.empty() || w.seq_a.size() != w.seq_b.size() || w.period != w.seq_a.size()) {
        throw InvalidInput("periodic block must be nonempty with length equal to the period", "witness");
    }
    if (w.head_a.size() != w.head_b.size() || w.left_a.size() != w.left_b.size()) {
        throw InvalidInput("coordinate blocks differ in length", "witness");
    }
    if (space.sided == Sidedness::one_sided) {
        if (!w.left_a.empty()) throw InvalidInput("one-sided witness has a left tail", "witness");
        if (w.origin != static_cast<std::int64_t>(w.head_a.size())) {
            throw InvalidInput("one-sided witness must start at position 0", "witness");
        }
    }
    check_coordinate(space, w.left_a, w.head_a, w.seq_a);
    check_coordinate(space, w.left_b, w.head_b, w.seq_b);

    const std::int64_t head_start = w.origin - static_cast<std::int64_t>(w.head_a.size());
    std::vector<std::int64_t> positions;
    int min_r = std::numeric_limits<int>::max();

    // A difference at j inside a block repeated with period p recurs at
    // j + kp, whose residues mod n sweep j + gcd(n, p)Z.
    auto periodic_r = [&](std::int64_t j, std::size_t p) {
        return detail::residue_distance(j, std::gcd(n, static_cast<int>(p)), space.sided);
    };
    for (std::size_t i = 0; i < w.head_a.size(); ++i) {
        if (w.head_a[i] == w.head_b[i]) continue;
        const std::int64_t j = head_start + static_cast<std::int64_t>(i);
        positions.push_back(j);
        min_r = std::min(min_r, detail::residue_distance(j, n, space.sided));
    }
    for (std::size_t i = 0; i < w.period; ++i) {
        if (w.seq_a[i] == w.seq_b[i]) continue;
        const std::int64_t j = w.origin + static_cast<std::int64_t>(i);
        positions.push_back(j);
        min_r = std::min(min_r, periodic_r(j, w.period));
        if (space.sided == Sidedness::two_sided && w.left_a.empty() && !w.head_a.empty()) {
            // implicit left tail: copies of `seq` ending at head_start
            const std::int64_t copy = head_start - static_cast<std::int64_t>(w.period) +
                                      static_cast<std::int64_t>(i);
            min_r = std::min(min_r, periodic_r(copy, w.period));
        }
    }
    if (space.sided == Sidedness::two_sided) {
        const std::int64_t left_start = head_start - static_cast<std::int64_t>(w.left_a.size());
        for (std::size_t i = 0; i < w.left_a.size(); ++i) {
            if (w.left_a[i] == w.left_b[i]) continue;
            const std::int64_t j = left_start + static_cast<std::int64_t>(i);
            positions.push_back(j);
            min_r = std::min(min_r, periodic_r(j, w.left_a.size()));
        }
    }
    if (positions.empty()) throw InvalidInput("empty difference set: the two sequences coincide", "witness");

    std::sort(positions.begin(), positions.end());
    auto stored = w.difference_positions;
    std::sort(stored.begin(), stored.end());
    if (positions != stored) return false;
    return min_r == claimed_exponent;
}

CylinderLebesgue cylinder_lebesgue_exact(const SymbolicSpace& space, int n) {
    if (n < 1) throw InvalidInput("refinement depth must be positive", "n");
    const auto& m = space.matrix;
    const int s = m.size();
    CylinderLebesgue out;
    if (s == 1) {
        out.unbounded = true;
        return out;
    }
    // branching[L][a]: number of admissible words of length L following a,
    // saturated at 2. Agreement on the window up to position k forces agreement
    // on [0, n-1] iff every symbol has at most one continuation of length n-1-k.
    std::vector<int> count(s, 1);
    std::vector<bool> unique_continuation(n, true);  // index L
    for (int len = 1; len < n; ++len) {
        std::vector<int> next(s, 0);
        for (int a = 0; a < s; ++a) {
            for (int b = 0; b < s; ++b) {
                if (m.allowed(a, b)) next[a] = std::min(2, next[a] + count[b]);
            }
        }
        count = std::move(next);
        unique_continuation[len] = std::all_of(count.begin(), count.end(), [](int c) { return c <= 1; });
    }
    int k = n - 1;
    while (k > 0 && unique_continuation[n - k]) --k;
    out.exponent = k;
    out.value = std::pow(space.q, -k);
    return out;
}

GeneratorReport generator_report(const TransitionMatrix& m) {
    const auto h = entropy(m);
    GeneratorReport rep;
    // exp(h) lands within rounding of an integer for full shifts.
    rep.lower_bound = static_cast<long>(std::ceil(std::exp(h.value) - 1e-9));
    // A one-symbol shift is a single point; no generator count is reported.
    if (m.is_full_shift() && m.size() >= 2) rep.exact = m.size();
    return rep;
}

FiniteSampledSystem periodic_orbit_sample(const SymbolicSpace& space, int period,
                                          std::vector<std::vector<Symbol>>* words_out) {
    if (period < 1 || period > 24) throw InvalidInput("period must lie in [1, 24]", "period");
    const auto& m = space.matrix;
    const int s = m.size();

    std::vector<std::vector<Symbol>> words;
    std::vector<Symbol> cur;
    std::function<void()> extend = [&] {
        if (static_cast<int>(cur.size()) == period) {
            if (m.allowed(cur.back(), cur.front())) words.push_back(cur);
            return;
        }
        for (Symbol c = 0; c < s; ++c) {
            if (cur.empty() || m.allowed(cur.back(), c)) {
                cur.push_back(c);
                extend();
                cur.pop_back();
            }
        }
    };
    extend();
    if (words.empty()) throw InvalidInput("no admissible periodic words of this period", "period");

    std::map<std::vector<Symbol>, PointIndex> index;
    for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], static_cast<PointIndex>(i));
    std::vector<PointIndex> map(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<Symbol> shifted(words[i].begin() + 1, words[i].end());
        shifted.push_back(words[i].front());
        map[i] = index.at(shifted);
    }

    const bool two_sided = space.sided == Sidedness::two_sided;
    auto metric = [&](PointIndex x, PointIndex y) {
        const auto& a = words[x];
        const auto& b = words[y];
        for (int j = 0; j < period; ++j) {
            if (two_sided) {
                const int right = j % period;
                const int left = ((-j) % period + period) % period;
                if (a[right] != b[right] || a[left] != b[left]) return std::pow(space.q, -j);
            } else if (a[j] != b[j]) {
                return std::pow(space.q, -j);
            }
        }
        return 0.0;
    };
    auto sys = FiniteSampledSystem::from_metric(words.size(), metric, std::move(map));
    if (words_out) *words_out = std::move(words);
    return sys;
}

OpenCoverSpec zero_cylinder_cover(const std::vector<std::vector<Symbol>>& words) {
    std::vector<std::size_t> label(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) label[i] = static_cast<std::size_t>(words[i].front());
    return partition_cover(label);
}

}  // namespace expanse
