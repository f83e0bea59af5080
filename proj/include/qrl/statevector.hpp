#pragma once
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// Dense amplitude vector over action-sequence ranks.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(size_t n) : amps_(n) {}

    static StateVector uniform(size_t n);
    static StateVector basis(size_t n, uint64_t rank);

    size_t size() const { return amps_.size(); }
    std::complex<double>& operator[](size_t i) { return amps_[i]; }
    const std::complex<double>& operator[](size_t i) const { return amps_[i]; }

    double norm() const;
    double probability(uint64_t rank) const { return std::norm(amps_[rank]); }
    double marked_mass(std::span<const uint64_t> marked) const;

    // throws std::logic_error if the norm drifts past tol
    void check_normalized(double tol = 1e-12) const;

    // sample a basis rank by |amplitude|^2 (CDF inversion, index order)
    uint64_t measure(Rng& rng) const;

private:
    std::vector<std::complex<double>> amps_;
};

// Multiply the amplitudes at `marked` ranks by -1.
void apply_phase_flips(StateVector& state, std::span<const uint64_t> marked);

// Reflection about the uniform state: a <- 2*mean - a.
void diffusion(StateVector& state);

} // namespace qrl
