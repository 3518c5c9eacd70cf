#include "pair_automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "expanse/error.hpp"

namespace expanse::detail {

int residue_distance(std::int64_t j, int n, Sidedness sided) {
    const std::int64_t t = ((j % n) + n) % n;
    if (sided == Sidedness::one_sided) return static_cast<int>(t);
    return static_cast<int>(std::min<std::int64_t>(t, n - t));
}

PairAutomaton::PairAutomaton(const TransitionMatrix& m, int n, Sidedness sided, int min_exponent)
    : symbols_(m.size()) {
    const int s = symbols_;
    const int per_layer = s * s;
    const int total = n * per_layer;
    allowed_.assign(total, 0);
    succ_.assign(total, {});
    pred_.assign(total, {});

    for (int node = 0; node < total; ++node) {
        const bool forced_equal = residue_distance(layer(node), n, sided) < min_exponent;
        allowed_[node] = (!forced_equal || !off_diagonal(node)) ? 1 : 0;
    }
    for (int node = 0; node < total; ++node) {
        if (!allowed_[node]) continue;
        const int next_layer = (layer(node) + 1) % n;
        const Symbol a = first(node);
        const Symbol b = second(node);
        for (Symbol a2 = 0; a2 < s; ++a2) {
            if (!m.allowed(a, a2)) continue;
            for (Symbol b2 = 0; b2 < s; ++b2) {
                if (!m.allowed(b, b2)) continue;
                const int target = next_layer * per_layer + a2 * s + b2;
                if (!allowed_[target]) continue;
                succ_[node].push_back(target);
                pred_[target].push_back(node);
            }
        }
    }
    for (auto& p : pred_) std::sort(p.begin(), p.end());
}

std::vector<char> PairAutomaton::cyclic_nodes() const {
    const auto comp = strongly_connected_components(succ_, allowed_);
    const int total = node_count();
    std::vector<int> comp_size(total, 0);
    for (int v = 0; v < total; ++v) {
        if (comp[v] >= 0) ++comp_size[comp[v]];
    }
    std::vector<char> cyclic(total, 0);
    for (int v = 0; v < total; ++v) {
        if (comp[v] < 0) continue;
        const bool self_loop = std::find(succ_[v].begin(), succ_[v].end(), v) != succ_[v].end();
        cyclic[v] = (comp_size[comp[v]] > 1 || self_loop) ? 1 : 0;
    }
    return cyclic;
}

std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& succ,
                                               const std::vector<char>& active) {
    const int total = static_cast<int>(succ.size());
    std::vector<int> index(total, -1), low(total, 0), comp(total, -1);
    std::vector<char> on_stack(total, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;  // (node, next successor slot)
    int counter = 0;
    int components = 0;

    for (int root = 0; root < total; ++root) {
        if (!active[root] || index[root] >= 0) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, slot] = call.back();
            if (slot < succ[v].size()) {
                const int w = succ[v][slot++];
                if (!active[w]) continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const int done = v;
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = components;
                } while (w != done);
                ++components;
            }
        }
    }
    return comp;
}

namespace {

using Adjacency = std::function<const std::vector<int>&(int)>;

// Marks every node reachable from `sources` along `next`.
std::vector<char> closure(int total, const std::vector<int>& sources, const Adjacency& next) {
    std::vector<char> seen(total, 0);
    std::deque<int> queue;
    for (int s : sources) {
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : next(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

// Shortest path source -> first node satisfying `is_target` (source included),
// exploring neighbours in ascending id order.
std::vector<int> shortest_path(int total, int source, const std::function<bool(int)>& is_target,
                               const Adjacency& next) {
    std::vector<int> parent(total, -2);
    std::deque<int> queue{source};
    parent[source] = -1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (is_target(v)) {
            std::vector<int> path;
            for (int x = v; x != -1; x = parent[x]) path.push_back(x);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int w : next(v)) {
            if (parent[w] == -2) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    return {};
}

// Shortest closed walk v -> ... -> v, returned without the repeated endpoint.
std::vector<int> shortest_cycle(const PairAutomaton& g, int v) {
    const int total = g.node_count();
    std::vector<int> parent(total, -2);
    std::deque<int> queue{v};
    parent[v] = -1;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int w : g.successors(x)) {
            if (w == v) {
                std::vector<int> cycle;
                for (int y = x; y != -1; y = parent[y]) cycle.push_back(y);
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (parent[w] == -2) {
                parent[w] = x;
                queue.push_back(w);
            }
        }
    }
    throw InternalError("expected a cycle through a cyclic node");
}

void append_nodes(const PairAutomaton& g, const std::vector<int>& nodes, std::vector<Symbol>& a,
                  std::vector<Symbol>& b) {
    for (int v : nodes) {
        a.push_back(g.first(v));
        b.push_back(g.second(v));
    }
}

void record_differences(const std::vector<Symbol>& a, const std::vector<Symbol>& b, std::int64_t start,
                        std::vector<std::int64_t>& out) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) out.push_back(start + static_cast<std::int64_t>(i));
    }
}

}  // namespace

std::optional<PairWitness> find_witness(const PairAutomaton& g, int n, Sidedness sided) {
    (void)n;
    const int total = g.node_count();
    const auto cyclic = g.cyclic_nodes();

    std::vector<int> cyclic_list;
    std::vector<int> start_list;
    for (int v = 0; v < total; ++v) {
        if (cyclic[v]) cyclic_list.push_back(v);
        if (g.allowed(v) && g.layer(v) == 0) start_list.push_back(v);
    }
    const Adjacency fwd = [&](int v) -> const std::vector<int>& { return g.successors(v); };
    const Adjacency bwd = [&](int v) -> const std::vector<int>& { return g.predecessors(v); };

    const auto reaches_cycle = closure(total, cyclic_list, bwd);
    const auto has_past = sided == Sidedness::two_sided ? closure(total, cyclic_list, fwd)
                                                        : closure(total, start_list, fwd);

    int chosen = -1;
    for (int v = 0; v < total; ++v) {
        if (g.allowed(v) && g.off_diagonal(v) && reaches_cycle[v] && has_past[v]) {
            chosen = v;
            break;
        }
    }
    if (chosen < 0) return std::nullopt;

    const auto is_cyclic = [&](int v) { return cyclic[v] != 0; };
    const std::vector<int> to_cycle = shortest_path(total, chosen, is_cyclic, fwd);
    const int right_anchor = to_cycle.back();

    std::vector<int> before;  // path ending at `chosen`, starting at a cyclic node or layer-0 node
    if (sided == Sidedness::two_sided) {
        if (cyclic[chosen]) {
            before = {chosen};
        } else {
            before = shortest_path(total, chosen, is_cyclic, bwd);
            std::reverse(before.begin(), before.end());
        }
    } else {
        before = shortest_path(
            total, chosen, [&](int v) { return g.layer(v) == 0; }, bwd);
        std::reverse(before.begin(), before.end());
    }
    if (before.empty() || to_cycle.empty()) throw InternalError("witness path search failed");

    PairWitness w;
    const std::vector<int> right_cycle = shortest_cycle(g, right_anchor);
    append_nodes(g, right_cycle, w.seq_a, w.seq_b);
    w.period = right_cycle.size();

    // Nodes strictly before the right anchor: before[0..] then to_cycle[1..] minus the anchor.
    std::vector<int> head(before.begin(), before.end() - 1);
    head.insert(head.end(), to_cycle.begin(), to_cycle.end() - 1);

    if (sided == Sidedness::two_sided) {
        const std::int64_t chosen_pos = g.layer(chosen);
        w.origin = chosen_pos + static_cast<std::int64_t>(to_cycle.size()) - 1;
        if (!head.empty()) {
            append_nodes(g, head, w.head_a, w.head_b);
            const std::vector<int> left_cycle = shortest_cycle(g, before.front());
            append_nodes(g, left_cycle, w.left_a, w.left_b);
        }
    } else {
        w.origin = static_cast<std::int64_t>(head.size());
        append_nodes(g, head, w.head_a, w.head_b);
    }

    const std::int64_t head_start = w.origin - static_cast<std::int64_t>(w.head_a.size());
    record_differences(w.left_a, w.left_b, head_start - static_cast<std::int64_t>(w.left_a.size()),
                       w.difference_positions);
    record_differences(w.head_a, w.head_b, head_start, w.difference_positions);
    record_differences(w.seq_a, w.seq_b, w.origin, w.difference_positions);
    std::sort(w.difference_positions.begin(), w.difference_positions.end());
    return w;
}

}  // namespace expanse::detail
