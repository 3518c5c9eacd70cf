#pragma once

// Linear automorphisms of the flat torus R^m / Z^m: validation, entropy,
// rigorous upper bounds on gamma(f^n) from finite invariant sets, and
// Lipschitz lower bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expanse/decay.hpp"
#include "expanse/sampled.hpp"

namespace expanse {

/// Square integer matrix.
class IntMatrix {
public:
    explicit IntMatrix(const std::vector<std::vector<std::int64_t>>& rows);

    static IntMatrix identity(int dim);

    int dim() const noexcept { return dim_; }
    std::int64_t operator()(int i, int j) const noexcept { return a_[i * dim_ + j]; }
    std::vector<std::vector<std::int64_t>> rows() const;

    /// Throws InvalidInput on 64-bit overflow.
    IntMatrix operator*(const IntMatrix& rhs) const;
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    IntMatrix(int dim, std::vector<std::int64_t> a) : dim_(dim), a_(std::move(a)) {}

    int dim_;
    std::vector<std::int64_t> a_;
};

/// Exact determinant (fraction-free elimination).
std::int64_t determinant(const IntMatrix& m);

/// Largest singular value.
double operator_norm(const IntMatrix& m);

/// Exact inverse of a unimodular matrix; throws InvalidInput otherwise.
IntMatrix integer_inverse(const IntMatrix& m);

struct TorusDiagnostic {
    std::int64_t determinant = 0;
    bool unimodular = false;
    bool hyperbolic = false;
    std::vector<double> eigen_moduli;  // descending
    std::vector<std::string> problems;

    bool valid() const noexcept { return unimodular && hyperbolic && problems.empty(); }
};

/// |det| == 1 and no eigenvalue modulus within 1e-9 of 1. Never throws.
TorusDiagnostic validate(const IntMatrix& m);

class ToralAutomorphism {
public:
    /// Throws InvalidInput naming the failed condition.
    explicit ToralAutomorphism(IntMatrix matrix);

    int dim() const noexcept { return matrix_.dim(); }
    const IntMatrix& matrix() const noexcept { return matrix_; }
    const IntMatrix& inverse() const noexcept { return inverse_; }
    const std::vector<double>& eigen_moduli() const noexcept { return moduli_; }
    double expanding_eigenvalue() const noexcept { return moduli_.front(); }
    /// Operator norms of M and M^{-1}: exact Lipschitz constants in the flat metric.
    double lipschitz() const noexcept { return lip_; }
    double inverse_lipschitz() const noexcept { return inv_lip_; }

private:
    IntMatrix matrix_;
    IntMatrix inverse_;
    std::vector<double> moduli_;
    double lip_;
    double inv_lip_;
};

/// P M P^{-1} for unimodular P.
ToralAutomorphism conjugated(const ToralAutomorphism& t, const IntMatrix& p);

/// ||P|| ||P^{-1}||.
double condition_number(const IntMatrix& p);

struct RationalGrid {
    explicit RationalGrid(int q);
    int denominator;
};

/// Sum of log eigenvalue moduli exceeding 1.
double entropy(const ToralAutomorphism& t);

/// Flat distance on R^m / Z^m.
double torus_distance(std::span<const double> u, std::span<const double> v);

/// min over nonzero p/Q of max over its cycle under M^n (mod 1) of the torus
/// norm. Exact integer orbit arithmetic; at most 2^26 grid points.
double gamma_upper_bound(const ToralAutomorphism& t, int n, RationalGrid grid);

/// Smallest torus norm of a nonzero fixed point of M^n, from a reduced basis
/// of (M^n - I)^{-1} Z^2. Empty when M^n has no nonzero fixed point, when
/// m != 2, or when the exact arithmetic would overflow.
std::optional<double> gamma_upper_bound_fixed_points(const ToralAutomorphism& t, int n);

/// gamma1 * min_j max(||M||^{-j}, ||M^{-1}||^{-(n-j)}).
double gamma_lower_bound_lipschitz(const ToralAutomorphism& t, int n, double gamma1_lower);

/// Certified lower bound on gamma(f): 1 / (4 max(||M||, ||M^{-1}||)).
double certified_gamma1(const ToralAutomorphism& t);

struct ExpansiveBracket {
    GammaSequence upper_grid{BoundKind::upper, "rational grid"};
    GammaSequence upper_fixed{BoundKind::upper, "fixed points of M^n"};
    GammaSequence upper{BoundKind::upper, "min of grid and fixed-point bounds"};
    GammaSequence lower{BoundKind::lower, "bi-Lipschitz bound"};
    double gamma1 = 0.0;
};

/// Upper and lower gamma(f^n) sequences for n = 1..n_max. Throws
/// InternalError if a lower value exceeds the matching upper value.
ExpansiveBracket expansive_bracket(const ToralAutomorphism& t, int n_max, RationalGrid grid,
                                   double gamma1_lower);

/// The Q-grid as a finite sample: torus metric, map M mod Q. At most 10^5 points.
FiniteSampledSystem rational_grid_system(const ToralAutomorphism& t, RationalGrid grid);

}  // namespace expanse
