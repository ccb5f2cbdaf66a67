#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "opconvex/linalg.hpp"

namespace opconvex {

// ===========================================================================
// Deterministic randomness.
//
// Every randomized check derives an independent stream per trial index, so
// results are reproducible for a given seed and independent of how trials
// are chunked across threads.  We avoid std::uniform_real_distribution and
// std::normal_distribution on purpose: their output is not pinned by the
// standard, and we want bitwise-identical runs across library versions.
// ===========================================================================

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class TrialRng {
public:
    explicit TrialRng(uint64_t master_seed, uint64_t trial_index = 0) {
        uint64_t s = master_seed;
        const uint64_t base = splitmix64(s);
        uint64_t t = base + trial_index * 0x9E3779B97F4A7C15ull;
        engine_.seed(splitmix64(t));
    }

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int n) { // 0 .. n-1
        return static_cast<int>(engine_() % static_cast<uint64_t>(n));
    }

    /// Standard normal via Box-Muller (pairs are cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

    Complex cgauss() { return Complex(gaussian(), gaussian()); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// ===========================================================================
// Matrix samplers
// ===========================================================================

/// Matrix with i.i.d. standard complex Gaussian entries.
GeneralMatrix random_gaussian_matrix(TrialRng& rng, int rows, int cols);

/// Haar-ish unitary: modified Gram-Schmidt QR of a complex Gaussian matrix.
GeneralMatrix random_unitary(TrialRng& rng, int n);

/// Q diag(lambda) Q* with eigenvalues drawn uniformly from [lo, hi].
HermitianMatrix random_hermitian_in_window(TrialRng& rng, int n, double lo, double hi);

/// Complex Gaussian matrix rescaled to unit Frobenius norm.
GeneralMatrix random_unit_hs(TrialRng& rng, int rows, int cols);

std::vector<double> random_values(TrialRng& rng, int n, double lo, double hi);

} // namespace opconvex
