#include "expanse/torus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "expanse/error.hpp"
#include "expanse/lipschitz.hpp"

namespace expanse {

__extension__ typedef __int128 i128;

namespace {

constexpr double kUnitCircleBand = 1e-9;

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
    Eigen::MatrixXd out(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) out(i, j) = static_cast<double>(m(i, j));
    }
    return out;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw InvalidInput("integer overflow in exact matrix arithmetic");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

IntMatrix::IntMatrix(const std::vector<std::vector<std::int64_t>>& rows) : dim_(static_cast<int>(rows.size())) {
    if (rows.empty()) throw InvalidInput("matrix is empty", "matrix");
    for (const auto& r : rows) {
        if (r.size() != rows.size()) throw InvalidInput("matrix must be square", "matrix");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(int dim) {
    if (dim < 1) throw InvalidInput("dimension must be positive", "dim");
    std::vector<std::int64_t> a(static_cast<std::size_t>(dim) * dim, 0);
    for (int i = 0; i < dim; ++i) a[i * dim + i] = 1;
    return IntMatrix(dim, std::move(a));
}

std::vector<std::vector<std::int64_t>> IntMatrix::rows() const {
    std::vector<std::vector<std::int64_t>> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i].assign(a_.begin() + i * dim_, a_.begin() + (i + 1) * dim_);
    return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (rhs.dim_ != dim_) throw InvalidInput("dimension mismatch");
    std::vector<std::int64_t> out(a_.size(), 0);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            i128 acc = 0;
            for (int k = 0; k < dim_; ++k) acc += static_cast<i128>((*this)(i, k)) * rhs(k, j);
            out[i * dim_ + j] = narrow(acc);
        }
    }
    return IntMatrix(dim_, std::move(out));
}

std::int64_t determinant(const IntMatrix& m) {
    // Bareiss elimination: every intermediate is a minor, so division is exact.
    const int n = m.dim();
    std::vector<i128> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    }
    int sign = 1;
    i128 prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            int swap = -1;
            for (int r = k + 1; r < n; ++r) {
                if (a[r * n + k] != 0) {
                    swap = r;
                    break;
                }
            }
            if (swap < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    return narrow(sign * a[(n - 1) * n + (n - 1)]);
}

double operator_norm(const IntMatrix& m) {
    if (m.dim() == 2) {
        const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
        const double frob = a * a + b * b + c * c + d * d;
        const double det = a * d - b * c;
        const double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
        return std::sqrt((frob + disc) / 2.0);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    return svd.singularValues()(0);
}

IntMatrix integer_inverse(const IntMatrix& m) {
    const auto det = determinant(m);
    if (det != 1 && det != -1) throw InvalidInput("matrix is not unimodular", "matrix");
    const int n = m.dim();
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n, 0));
    if (n == 1) {
        rows[0][0] = det;
    } else if (n == 2) {
        rows = {{det * m(1, 1), -det * m(0, 1)}, {-det * m(1, 0), det * m(0, 0)}};
    } else {
        const Eigen::MatrixXd inv = to_eigen(m).inverse();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) rows[i][j] = std::llround(inv(i, j));
        }
    }
    IntMatrix inv(rows);
    if (!(m * inv == IntMatrix::identity(n))) throw InternalError("integer inverse failed to verify");
    return inv;
}

TorusDiagnostic validate(const IntMatrix& m) {
    TorusDiagnostic diag;
    try {
        diag.determinant = determinant(m);
    } catch (const Error& e) {
        diag.problems.emplace_back(e.what());
        return diag;
    }
    diag.unimodular = diag.determinant == 1 || diag.determinant == -1;
    if (!diag.unimodular) {
        diag.problems.emplace_back("determinant " + std::to_string(diag.determinant) + " is not +-1");
    }

    const int n = m.dim();
    if (n == 1) {
        diag.eigen_moduli = {std::abs(static_cast<double>(m(0, 0)))};
    } else if (n == 2) {
        const double tr = static_cast<double>(m(0, 0) + m(1, 1));
        const double det = static_cast<double>(diag.determinant);
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            diag.eigen_moduli = {std::abs((tr + root) / 2.0), std::abs((tr - root) / 2.0)};
        } else {
            const double modulus = std::sqrt(std::abs(det));
            diag.eigen_moduli = {modulus, modulus};
        }
    } else {
        const Eigen::MatrixXd a = to_eigen(m);
        Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
        if (solver.info() != Eigen::Success) {
            diag.problems.emplace_back("eigenvalue iteration did not converge");
            return diag;
        }
        const auto values = solver.eigenvalues();
        const auto vectors = solver.eigenvectors();
        const double scale = std::max(1.0, a.norm());
        for (int k = 0; k < n; ++k) {
            const Eigen::VectorXcd v = vectors.col(k);
            const double residual = (a.cast<std::complex<double>>() * v - values(k) * v).norm();
            if (residual > 1e-9 * scale * std::max(1.0, v.norm())) {
                diag.problems.emplace_back("eigenpair residual " + std::to_string(residual) + " exceeds 1e-9");
            }
            diag.eigen_moduli.push_back(std::abs(values(k)));
        }
    }
    std::sort(diag.eigen_moduli.begin(), diag.eigen_moduli.end(), std::greater<>());
    diag.hyperbolic = std::none_of(diag.eigen_moduli.begin(), diag.eigen_moduli.end(),
                                   [](double r) { return std::abs(r - 1.0) <= kUnitCircleBand; });
    if (!diag.hyperbolic) diag.problems.emplace_back("eigenvalue on the unit circle (not hyperbolic)");
    return diag;
}

ToralAutomorphism::ToralAutomorphism(IntMatrix matrix)
    : matrix_(std::move(matrix)), inverse_(IntMatrix::identity(matrix_.dim())) {
    const auto diag = validate(matrix_);
    if (!diag.valid()) throw InvalidInput(diag.problems.front(), "matrix");
    inverse_ = integer_inverse(matrix_);
    moduli_ = diag.eigen_moduli;
    lip_ = operator_norm(matrix_);
    inv_lip_ = operator_norm(inverse_);
}

ToralAutomorphism conjugated(const ToralAutomorphism& t, const IntMatrix& p) {
    return ToralAutomorphism(p * t.matrix() * integer_inverse(p));
}

double condition_number(const IntMatrix& p) { return operator_norm(p) * operator_norm(integer_inverse(p)); }

RationalGrid::RationalGrid(int q) : denominator(q) {
    if (q < 2) throw InvalidInput("grid denominator must be at least 2", "Q");
}

double entropy(const ToralAutomorphism& t) {
    double h = 0.0;
    for (double r : t.eigen_moduli()) {
        if (r > 1.0) h += std::log(r);
    }
    return h;
}

double torus_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw InvalidInput("points have different dimensions");
    double sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || !std::isfinite(v[i])) throw InvalidInput("coordinates must be finite");
        const double d = u[i] - v[i];
        const double wrapped = d - std::round(d);
        sq += wrapped * wrapped;
    }
    return std::sqrt(sq);
}

namespace {

// M^n reduced mod q, entries in [0, q).
std::vector<std::int64_t> power_mod(const IntMatrix& m, int n, std::int64_t q) {
    const int d = m.dim();
    auto mul = [&](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
        std::vector<std::int64_t> z(static_cast<std::size_t>(d) * d, 0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                i128 acc = 0;
                for (int k = 0; k < d; ++k) acc += static_cast<i128>(x[i * d + k]) * y[k * d + j];
                z[i * d + j] = static_cast<std::int64_t>(acc % q);
            }
        }
        return z;
    };
    std::vector<std::int64_t> base(static_cast<std::size_t>(d) * d), acc(base.size(), 0);
    for (int i = 0; i < d; ++i) {
        acc[i * d + i] = 1 % q;
        for (int j = 0; j < d; ++j) base[i * d + j] = ((m(i, j) % q) + q) % q;
    }
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
    }
    return acc;
}

}  // namespace

double gamma_upper_bound(const ToralAutomorphism& t, int n, RationalGrid grid) {
    if (n < 1) throw InvalidInput("power must be positive", "n");
    const int d = t.dim();
    const std::int64_t q = grid.denominator;
    double points = std::pow(static_cast<double>(q), d);
    if (points > static_cast<double>(1u << 26)) throw InvalidInput("grid has too many points", "Q");
    const auto total = static_cast<std::size_t>(points);
    const auto p = power_mod(t.matrix(), n, q);

    std::vector<std::int64_t> coord(d), next(d);
    auto decode = [&](std::size_t idx) {
        for (int i = d - 1; i >= 0; --i) {
            coord[i] = static_cast<std::int64_t>(idx % q);
            idx /= q;
        }
    };
    auto encode = [&](const std::vector<std::int64_t>& c) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * q + static_cast<std::size_t>(c[i]);
        return idx;
    };
    auto norm2 = [&](const std::vector<std::int64_t>& c) {
        std::int64_t s = 0;
        for (auto x : c) {
            const auto r = std::min(x, q - x);
            s += r * r;
        }
        return s;
    };

    std::vector<char> seen(total, 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t start = 1; start < total; ++start) {
        if (seen[start]) continue;
        decode(start);
        std::int64_t cycle_max = 0;
        std::size_t idx = start;
        do {
            seen[idx] = 1;
            cycle_max = std::max(cycle_max, norm2(coord));
            for (int i = 0; i < d; ++i) {
                i128 acc = 0;
                for (int k = 0; k < d; ++k) acc += static_cast<i128>(p[i * d + k]) * coord[k];
                next[i] = static_cast<std::int64_t>(acc % q);
            }
            std::swap(coord, next);
            idx = encode(coord);
        } while (idx != start);
        best = std::min(best, cycle_max);
    }
    return std::sqrt(static_cast<double>(best)) / static_cast<double>(q);
}

namespace {

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }

bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }

bool dot2(const i128* u, const i128* v, i128& out) {
    i128 x, y;
    return mul_ok(u[0], v[0], x) && mul_ok(u[1], v[1], y) && add_ok(x, y, out);
}

// floor(a / b) for b > 0.
i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

}  // namespace

std::optional<double> gamma_upper_bound_fixed_points(const ToralAutomorphism& t, int n) {
    if (n < 1) throw InvalidInput("power must be positive", "n");
    if (t.dim() != 2) return std::nullopt;

    // M^n in 128-bit arithmetic.
    i128 a[4] = {1, 0, 0, 1};
    const i128 m[4] = {t.matrix()(0, 0), t.matrix()(0, 1), t.matrix()(1, 0), t.matrix()(1, 1)};
    for (int step = 0; step < n; ++step) {
        i128 r[4];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                i128 x, y;
                if (!mul_ok(a[i * 2], m[j], x) || !mul_ok(a[i * 2 + 1], m[2 + j], y) ||
                    !add_ok(x, y, r[i * 2 + j])) {
                    return std::nullopt;
                }
            }
        }
        std::copy(r, r + 4, a);
    }
    a[0] -= 1;
    a[3] -= 1;
    i128 ad, bc, det;
    if (!mul_ok(a[0], a[3], ad) || !mul_ok(a[1], a[2], bc) || __builtin_sub_overflow(ad, bc, &det)) {
        return std::nullopt;
    }
    if (det < 0) det = -det;
    if (det <= 1) return std::nullopt;  // only the origin is fixed

    // (M^n - I)^{-1} Z^2 = adj(M^n - I) Z^2 / det; reduce the adjugate columns.
    i128 u[2] = {a[3], -a[2]};
    i128 v[2] = {-a[1], a[0]};
    i128 nu, nv, uv;
    for (int guard = 0; guard < 10000; ++guard) {
        if (!dot2(u, u, nu) || !dot2(v, v, nv)) return std::nullopt;
        if (nu > nv) {
            std::swap(u[0], v[0]);
            std::swap(u[1], v[1]);
            std::swap(nu, nv);
        }
        if (!dot2(u, v, uv)) return std::nullopt;
        i128 twice;
        if (!mul_ok(uv, 2, twice) || !add_ok(twice, nu, twice)) return std::nullopt;
        const i128 mu = floor_div(twice, 2 * nu);  // nearest integer to uv / nu
        if (mu == 0) break;
        i128 s0, s1;
        if (!mul_ok(mu, u[0], s0) || !mul_ok(mu, u[1], s1)) return std::nullopt;
        v[0] -= s0;
        v[1] -= s1;
    }
    if (!dot2(u, u, nu)) return std::nullopt;
    return std::sqrt(static_cast<double>(nu)) / static_cast<double>(det);
}

double gamma_lower_bound_lipschitz(const ToralAutomorphism& t, int n, double gamma1_lower) {
    return gamma_lower_bound_bilipschitz(t.lipschitz(), t.inverse_lipschitz(), n, gamma1_lower);
}

double certified_gamma1(const ToralAutomorphism& t) {
    return 1.0 / (4.0 * std::max(t.lipschitz(), t.inverse_lipschitz()));
}

ExpansiveBracket expansive_bracket(const ToralAutomorphism& t, int n_max, RationalGrid grid,
                                   double gamma1_lower) {
    if (n_max < 1) throw InvalidInput("n_max must be positive", "n_max");
    if (!(gamma1_lower > 0.0)) throw InvalidInput("gamma1 must be positive", "gamma1");
    ExpansiveBracket b;
    b.gamma1 = gamma1_lower;
    for (int n = 1; n <= n_max; ++n) {
        const double grid_bound = gamma_upper_bound(t, n, grid);
        b.upper_grid.set(n, grid_bound);
        double upper = grid_bound;
        if (const auto fixed = gamma_upper_bound_fixed_points(t, n)) {
            b.upper_fixed.set(n, *fixed);
            upper = std::min(upper, *fixed);
        }
        b.upper.set(n, upper);
        const double lower = gamma_lower_bound_lipschitz(t, n, gamma1_lower);
        b.lower.set(n, lower);
        if (lower > upper * (1.0 + 1e-12)) {
            throw InternalError("lower bound " + std::to_string(lower) + " exceeds upper bound " +
                                std::to_string(upper) + " at n=" + std::to_string(n) +
                                "; gamma1 is not a valid lower bound on gamma(f)");
        }
    }
    return b;
}

FiniteSampledSystem rational_grid_system(const ToralAutomorphism& t, RationalGrid grid) {
    const int d = t.dim();
    const std::int64_t q = grid.denominator;
    const double points = std::pow(static_cast<double>(q), d);
    if (points > 1e5) throw InvalidInput("grid sample exceeds 10^5 points", "Q");
    const auto total = static_cast<std::size_t>(points);

    std::vector<std::vector<double>> coords(total, std::vector<double>(d));
    std::vector<PointIndex> map(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<std::int64_t> c(d);
        std::size_t rest = idx;
        for (int i = d - 1; i >= 0; --i) {
            c[i] = static_cast<std::int64_t>(rest % q);
            rest /= q;
        }
        std::size_t image = 0;
        for (int i = 0; i < d; ++i) {
            i128 acc = 0;
            for (int k = 0; k < d; ++k) acc += static_cast<i128>(t.matrix()(i, k)) * c[k];
            const auto r = static_cast<std::int64_t>(((acc % q) + q) % q);
            image = image * q + static_cast<std::size_t>(r);
            coords[idx][i] = static_cast<double>(c[i]) / static_cast<double>(q);
        }
        map[idx] = static_cast<PointIndex>(image);
    }
    return FiniteSampledSystem::from_metric(
        total, [&](PointIndex x, PointIndex y) { return torus_distance(coords[x], coords[y]); },
        std::move(map));
}

}  // namespace expanse
