#include "herm/hermite.hpp"

#include <cassert>
#include <stdexcept>

namespace herm {

HermiteBatch hermite_batch(double t, int k_max) {
    if (k_max < 0) throw std::invalid_argument("hermite_batch: k_max must be >= 0");
    HermiteBatch batch;
    batch.t = t;
    batch.k_max = k_max;
    batch.values.resize(static_cast<std::size_t>(k_max) + 1);
    const double pt[1] = {t};
    hermite_sweep(std::span<const double>(pt, 1), k_max,
                  [&](int k, std::span<const double> v) { batch.values[static_cast<std::size_t>(k)] = v[0]; });
    return batch;
}

double hermite_derivative(int k, double t) {
    if (k < 0) throw std::invalid_argument("hermite_derivative: k must be >= 0");
    const HermiteBatch b = hermite_batch(t, k + 1);
    const double lower = (k > 0) ? std::sqrt(static_cast<double>(k)) * b.values[static_cast<std::size_t>(k) - 1] : 0.0;
    const double upper = std::sqrt(static_cast<double>(k) + 1.0) * b.values[static_cast<std::size_t>(k) + 1];
    return std::numbers::sqrt2_v<double> / 2.0 * (lower - upper);
}

double hermite_tensor(std::span<const int> alpha, std::span<const double> x) {
    assert(alpha.size() == x.size());
    double product = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 0) throw std::invalid_argument("hermite_tensor: multi-index entries must be >= 0");
        product *= hermite_batch(x[i], alpha[i]).values[static_cast<std::size_t>(alpha[i])];
    }
    return product;
}

} // namespace herm
