#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "herm/errors.hpp"
#include "herm/laguerre.hpp"

namespace herm {

// Rotation-invariant eigenfunctions psi_n of -Laplacian + |x|^2 on R^d,
//   psi_n(x) = c(d) * Lfn_n^{(d/2-1)}(|x|^2) * |x|^{-(d/2-1)},
// with eigenvalue 4n + d and c(d) = sqrt(2)/sqrt(Vol(S^{d-1})). Only d >= 2
// carries a nontrivial radial structure.
struct RadialBasis {
    int d = 2;
    double c_of_d = 0.0;

    double eigenvalue(int n) const { return 4.0 * n + static_cast<double>(d); }
    double alpha() const { return 0.5 * d - 1.0; }
};

double sphere_surface_volume(int d); // Vol(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2)

RadialBasis make_radial_basis(int d); // DomainError for d < 2

// psi_n at any point with |x| = radius; radius = 0 uses the continuous
// extension c(d) * sqrt(n!/Gamma(n+d/2)) * L_n^{(d/2-1)}(0) of the weight.
double radial_hermite(int n, int d, double radius);

// Value of the continuous extension at the origin (also the peak for d = 2).
double radial_hermite_at_origin(int n, int d);

// Streaming evaluation of psi_n over a fixed radius grid, ascending in n.
// consume(n, values) with values[g] = psi_n(radii[g]). Origin points are
// patched per order with the continuous extension.
template <class F>
void radial_sweep_all(int d, int n_max, std::span<const double> radii, F&& consume) {
    const RadialBasis basis = make_radial_basis(d);
    const double a = basis.alpha();

    std::vector<double> r_sq(radii.size());
    std::vector<double> log2_pref(radii.size());
    std::vector<std::size_t> origin_points;
    const double log2_c = std::log2(basis.c_of_d);
    for (std::size_t g = 0; g < radii.size(); ++g) {
        if (!(radii[g] >= 0.0)) throw DomainError("radial_sweep_all: radii must be >= 0");
        r_sq[g] = radii[g] * radii[g];
        if (radii[g] == 0.0) {
            origin_points.push_back(g);
            r_sq[g] = 0.0;
            log2_pref[g] = log2_c; // value patched below, prefactor kept finite
        } else {
            log2_pref[g] = log2_c - a * std::log2(radii[g]);
        }
    }

    std::vector<double> patched(radii.size());
    laguerre_sweep(a, std::span<const double>(r_sq), n_max,
                   [&](int n, std::span<const double> values) {
                       if (origin_points.empty()) {
                           consume(n, values);
                           return;
                       }
                       std::copy(values.begin(), values.end(), patched.begin());
                       const double at_origin = radial_hermite_at_origin(n, d);
                       for (std::size_t g : origin_points) patched[g] = at_origin;
                       consume(n, std::span<const double>(patched));
                   },
                   std::span<const double>(log2_pref));
}

} // namespace herm
