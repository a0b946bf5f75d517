#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace fbflow {

/// Physical constants of the rotating stratified system. The solver is only
/// valid at Prandtl number 1 (the semigroup factorization needs nu == mu),
/// so unequal viscosity/diffusivity is rejected at construction.
struct PhysicalParams {
    double nu = 1.0;        // viscosity
    double mu = 1.0;        // diffusivity, must equal nu
    double omega = 0.0;     // Coriolis parameter
    double script_n = 0.0;  // stratification (Brunt-Vaisala frequency)
    double gravity = 1.0;

    double n_big = 0.0;     // N = script_n * sqrt(gravity)
    std::optional<double> burger;  // omega / script_n, undefined if script_n == 0

    PhysicalParams(double nu_, double mu_, double omega_, double script_n_,
                   double gravity_)
        : nu(nu_), mu(mu_), omega(omega_), script_n(script_n_), gravity(gravity_) {
        if (!(nu > 0.0) || !(mu > 0.0))
            throw std::invalid_argument("PhysicalParams: nu, mu must be positive");
        if (nu != mu)
            throw std::invalid_argument(
                "PhysicalParams: Prandtl number must be 1 (nu == mu)");
        if (script_n < 0.0)
            throw std::invalid_argument("PhysicalParams: script_n must be >= 0");
        if (!(gravity > 0.0))
            throw std::invalid_argument("PhysicalParams: gravity must be positive");
        n_big = script_n * std::sqrt(gravity);
        if (script_n > 0.0) burger = omega / script_n;
    }

    static PhysicalParams prandtl_one(double nu, double omega, double script_n,
                                      double gravity = 1.0) {
        return PhysicalParams(nu, nu, omega, script_n, gravity);
    }

    /// Convenience: specify N directly (gravity = 1, so script_n = N).
    static PhysicalParams from_n_big(double nu, double omega, double n_big) {
        return PhysicalParams(nu, nu, omega, n_big, 1.0);
    }
};

}  // namespace fbflow
