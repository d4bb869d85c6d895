#include "herm/radial.hpp"

#include <numbers>
#include <stdexcept>

namespace herm {

double sphere_surface_volume(int d) {
    if (d < 1) throw DomainError("sphere_surface_volume: d must be >= 1");
    return 2.0 * std::pow(std::numbers::pi_v<double>, 0.5 * d) / std::tgamma(0.5 * d);
}

RadialBasis make_radial_basis(int d) {
    if (d < 2) throw DomainError("radial basis requires d >= 2");
    RadialBasis basis;
    basis.d = d;
    basis.c_of_d = std::numbers::sqrt2_v<double> / std::sqrt(sphere_surface_volume(d));
    return basis;
}

double radial_hermite_at_origin(int n, int d) {
    const RadialBasis basis = make_radial_basis(d);
    if (n < 0) throw std::invalid_argument("radial_hermite_at_origin: n must be >= 0");
    // c(d) * sqrt(n!/Gamma(n+d/2)) * L_n^{(d/2-1)}(0)
    //   = c(d) * sqrt(Gamma(n+d/2)/n!) / Gamma(d/2), via the closed form at 0
    const double half_d = 0.5 * d;
    const double log_value =
        0.5 * (std::lgamma(n + half_d) - std::lgamma(n + 1.0)) - std::lgamma(half_d);
    return basis.c_of_d * std::exp(log_value);
}

double radial_hermite(int n, int d, double radius) {
    make_radial_basis(d); // dimension check
    if (n < 0) throw std::invalid_argument("radial_hermite: n must be >= 0");
    if (!(radius >= 0.0)) throw DomainError("radial_hermite: radius must be >= 0");
    if (radius == 0.0) return radial_hermite_at_origin(n, d);

    double value = 0.0;
    const double pt[1] = {radius};
    radial_sweep_all(d, n, std::span<const double>(pt, 1), [&](int k, std::span<const double> v) {
        if (k == n) value = v[0];
    });
    return value;
}

} // namespace herm
