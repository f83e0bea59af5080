#include "qrl/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

StateVector StateVector::uniform(size_t n) {
    if (n == 0) throw std::invalid_argument("StateVector: empty space");
    StateVector s(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& amp : s.amps_) amp = a;
    return s;
}

StateVector StateVector::basis(size_t n, uint64_t rank) {
    if (rank >= n) throw std::invalid_argument("StateVector: basis rank out of range");
    StateVector s(n);
    s.amps_[rank] = 1.0;
    return s;
}

double StateVector::norm() const {
    double total = 0.0;
    for (const auto& amp : amps_) total += std::norm(amp);
    return std::sqrt(total);
}

double StateVector::marked_mass(std::span<const uint64_t> marked) const {
    double total = 0.0;
    for (uint64_t rank : marked) total += std::norm(amps_[rank]);
    return total;
}

void StateVector::check_normalized(double tol) const {
    if (std::abs(norm() - 1.0) > tol)
        throw std::logic_error("StateVector: norm drifted out of tolerance");
}

uint64_t StateVector::measure(Rng& rng) const {
    const double u = rng.uniform_double();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < amps_.size(); ++i) {
        acc += std::norm(amps_[i]);
        if (u < acc) return i;
    }
    return amps_.size() - 1;
}

void apply_phase_flips(StateVector& state, std::span<const uint64_t> marked) {
    for (uint64_t rank : marked) state[rank] = -state[rank];
}

void diffusion(StateVector& state) {
    std::complex<double> mean = 0.0;
    const size_t n = state.size();
    for (size_t i = 0; i < n; ++i) mean += state[i];
    mean /= static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) state[i] = 2.0 * mean - state[i];
}

} // namespace qrl
