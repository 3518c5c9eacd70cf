#include "expanse/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "expanse/error.hpp"

namespace expanse {

namespace {

void check_constant(double c, const char* field) {
    if (!std::isfinite(c) || c < 1.0) throw InvalidInput("Lipschitz constant must be finite and >= 1", field);
}

}  // namespace

double gamma_lower_bound_forward(double lip, int n, double gamma1) {
    check_constant(lip, "lipschitz");
    if (n < 1) throw InvalidInput("power must be positive", "n");
    if (!(gamma1 > 0.0)) throw InvalidInput("gamma1 must be positive", "gamma1");
    return gamma1 * std::pow(lip, -(n - 1));
}

double gamma_lower_bound_bilipschitz(double lip, double inv_lip, int n, double gamma1) {
    check_constant(lip, "lipschitz");
    check_constant(inv_lip, "inverse_lipschitz");
    if (n < 0) throw InvalidInput("power must be non-negative", "n");
    if (!(gamma1 > 0.0)) throw InvalidInput("gamma1 must be positive", "gamma1");
    if (n == 0) return gamma1;
    // A separating time m = kn + j sits j forward steps after one sample of
    // the f^n orbit and n - j backward steps before the next.
    double best = 1.0;
    for (int j = 0; j <= n; ++j) {
        best = std::min(best, std::max(std::pow(lip, -j), std::pow(inv_lip, -(n - j))));
    }
    return gamma1 * best;
}

double decay_rate_bound(double lip, std::optional<double> inv_lip) {
    check_constant(lip, "lipschitz");
    const double a = std::log(lip);
    if (!inv_lip) return a;
    check_constant(*inv_lip, "inverse_lipschitz");
    const double b = std::log(*inv_lip);
    if (a + b == 0.0) return 0.0;
    return a * b / (a + b);
}

}  // namespace expanse
