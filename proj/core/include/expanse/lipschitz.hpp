#pragma once

#include <optional>

namespace expanse {

/// gamma1 * L^{-(n-1)}: lower bound on gamma(f^n) for a Lipschitz map.
double gamma_lower_bound_forward(double lip, int n, double gamma1);

/// gamma1 * min_{0<=j<=n} max(L^{-j}, Linv^{-(n-j)}): lower bound on
/// gamma(f^n) for a bi-Lipschitz homeomorphism. n == 0 returns gamma1.
double gamma_lower_bound_bilipschitz(double lip, double inv_lip, int n, double gamma1);

/// Upper bound on the decay rate of gamma(f^n): log L for a Lipschitz map,
/// log L * log Linv / (log L + log Linv) when the inverse is Lipschitz too.
double decay_rate_bound(double lip, std::optional<double> inv_lip);

}  // namespace expanse
