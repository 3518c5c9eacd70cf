#pragma once

#include <optional>
#include <vector>

#include "expanse/symbolic.hpp"

namespace expanse::detail {

/// r(j): distance from j to nZ (two-sided) or j mod n (one-sided).
int residue_distance(std::int64_t j, int n, Sidedness sided);

/// n layers of ordered symbol pairs; an edge (l, a, b) -> (l+1 mod n, a', b')
/// exists when both coordinates follow the transition matrix. Layers with
/// r(l) < min_exponent admit only diagonal pairs.
class PairAutomaton {
public:
    PairAutomaton(const TransitionMatrix& m, int n, Sidedness sided, int min_exponent);

    int node_count() const noexcept { return static_cast<int>(succ_.size()); }
    int layer(int node) const noexcept { return node / (symbols_ * symbols_); }
    Symbol first(int node) const noexcept { return (node / symbols_) % symbols_; }
    Symbol second(int node) const noexcept { return node % symbols_; }
    bool off_diagonal(int node) const noexcept { return first(node) != second(node); }
    bool allowed(int node) const noexcept { return allowed_[node] != 0; }

    const std::vector<int>& successors(int node) const { return succ_[node]; }
    const std::vector<int>& predecessors(int node) const { return pred_[node]; }

    /// Per node: lies in a strongly connected component containing a cycle.
    std::vector<char> cyclic_nodes() const;

private:
    int symbols_;
    std::vector<char> allowed_;
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<int>> pred_;
};

/// Tarjan's algorithm (iterative). Returns the component id of every node;
/// ids are assigned in reverse topological order of the condensation.
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& succ,
                                               const std::vector<char>& active);

/// Lowest-numbered off-diagonal node of the automaton that lies on an
/// infinite admissible path (bi-infinite for two-sided spaces, starting at
/// layer 0 for one-sided ones), with a witness assembled around it.
std::optional<PairWitness> find_witness(const PairAutomaton& automaton, int n, Sidedness sided);

}  // namespace expanse::detail
