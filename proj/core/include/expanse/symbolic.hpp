#pragma once

// Subshifts of finite type under the metric d(w, w') = q^{-min{|j| : w_j != w'_j}}.
//
// Exact expansive constants of every power of the shift come from a layered
// pair automaton: for distinct w, w' with difference set D,
//
//   sup_k d(s^{kn} w, s^{kn} w') = q^{-min_{j in D} r(j)},
//
// where r(j) is the distance from j to nZ (two-sided) or j mod n (one-sided).
// gamma(s^n) = q^{-m*} with m* the largest m for which some admissible pair
// differs only at positions with r(j) >= m.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanse/sampled.hpp"

namespace expanse {

using Symbol = int;

struct MatrixDiagnostic {
    bool valid = false;
    bool irreducible = false;
    std::vector<std::string> problems;
};

/// Checks the shape and 0/1 entries, and that no symbol is stranded. Never throws.
MatrixDiagnostic validate_matrix(const std::vector<std::vector<int>>& entries);

/// 0/1 transition matrix with no stranded symbols.
class TransitionMatrix {
public:
    explicit TransitionMatrix(std::vector<std::vector<int>> entries);

    static TransitionMatrix full_shift(int symbols);
    static TransitionMatrix golden_mean();

    int size() const noexcept { return size_; }
    bool allowed(Symbol from, Symbol to) const noexcept { return allowed_[from * size_ + to] != 0; }
    bool is_full_shift() const noexcept;
    bool irreducible() const noexcept { return irreducible_; }
    std::vector<std::vector<int>> entries() const;

    /// Matrix of the conjugate shift under the symbol map a -> perm[a].
    TransitionMatrix relabeled(std::span<const int> perm) const;

    bool admissible(std::span<const Symbol> word) const;

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

private:
    int size_;
    std::vector<char> allowed_;
    bool irreducible_;
};

enum class Sidedness { one_sided, two_sided };

struct SymbolicSpace {
    SymbolicSpace(TransitionMatrix m, double q, Sidedness sided);

    TransitionMatrix matrix;
    double q;
    Sidedness sided;
};

struct EntropyResult {
    double value = 0.0;            // log of the spectral radius
    double spectral_radius = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;     // (1/k) log ||A^k||, entry-sum norm, k = 1..
};

/// Power iteration from the all-ones vector, stopping when successive ratios
/// differ by less than `tol`. Unconverged (periodic) runs return the geometric
/// mean of the last two ratios and `converged == false`.
EntropyResult entropy(const TransitionMatrix& m, int k_max = 10000, double tol = 1e-13);

struct DimensionResult {
    double value = 0.0;
    bool converged = false;
};

/// (2/log q) h for two-sided spaces, (1/log q) h for one-sided ones.
DimensionResult hausdorff_dimension(const SymbolicSpace& space, int k_max = 10000,
                                    double tol = 1e-13);

/// A pair of eventually periodic admissible sequences certifying an upper
/// bound on gamma(s^n).
///
/// Layout on the integer line: `left` repeats to the left of `head`, which
/// ends at position `origin`; from `origin` on the block `seq` repeats with
/// period `period`. An empty `left` means the left tail also repeats `seq`
/// (so `head` empty and `left` empty is a purely periodic pair). One-sided
/// witnesses start at position 0 == origin - |head| and ignore `left`.
struct PairWitness {
    std::size_t period = 0;
    std::vector<Symbol> seq_a, seq_b;
    std::vector<std::int64_t> difference_positions;

    std::int64_t origin = 0;
    std::vector<Symbol> head_a, head_b;
    std::vector<Symbol> left_a, left_b;

    static PairWitness periodic(std::vector<Symbol> a, std::vector<Symbol> b, std::int64_t origin = 0);
    bool purely_periodic() const noexcept { return head_a.empty() && left_a.empty(); }
};

struct ExactGamma {
    double value = kUnbounded;  // q^{-exponent}, or kUnbounded when vacuous
    int exponent = 0;
    bool vacuous = false;       // no distinct pair exists
    std::optional<PairWitness> witness;
};

ExactGamma exact_expansive_constant(const SymbolicSpace& space, int n);

/// True iff the witness is admissible, its recomputed difference set matches
/// `difference_positions`, and min r over it equals `claimed_exponent`.
/// Throws InvalidInput for an inadmissible pair or an empty difference set.
bool verify_pair_witness(const SymbolicSpace& space, int n, const PairWitness& witness,
                         int claimed_exponent);

struct CylinderLebesgue {
    double value = kUnbounded;
    int exponent = 0;  // value == q^{-exponent}
    bool unbounded = false;
};

/// Exact Lebesgue number of the n-fold refinement of the zero-coordinate
/// cylinder cover.
CylinderLebesgue cylinder_lebesgue_exact(const SymbolicSpace& space, int n);

struct GeneratorReport {
    long lower_bound = 1;
    std::optional<long> exact;
};

GeneratorReport generator_report(const TransitionMatrix& m);

/// All admissible sequences of exact period dividing `period`, as a finite
/// sample with the q-metric and the shift map.
FiniteSampledSystem periodic_orbit_sample(const SymbolicSpace& space, int period,
                                          std::vector<std::vector<Symbol>>* words = nullptr);

/// The zero-coordinate cylinder cover of a periodic-orbit sample.
OpenCoverSpec zero_cylinder_cover(const std::vector<std::vector<Symbol>>& words);

}  // namespace expanse
