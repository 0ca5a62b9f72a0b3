#pragma once

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace quditlab {

using cplx = std::complex<double>;

/// Raised when an argument violates a structural precondition (bad level,
/// mismatched dimensions, malformed input). Maps to CLI exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a request exceeds a capacity cap (dense matrices, exhaustive
/// enumeration). Maps to CLI exit code 2.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

namespace caps {

inline long env_max_dim() {
    if (const char* s = std::getenv("QUDITLAB_MAX_DIM")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v > 0) return v;
    }
    return 0;
}

/// Largest total Hilbert-space dimension for dense unitaries (3^10 unless
/// QUDITLAB_MAX_DIM overrides it).
inline long dense_unitary() {
    long env = env_max_dim();
    return env > 0 ? env : 59049L;
}

/// Largest total dimension for density-matrix work (3^8 by default).
inline long density() {
    long env = env_max_dim();
    return env > 0 ? env : 6561L;
}

/// Largest total dimension for master-equation integration (3^6 by default).
inline long evolve() {
    long env = env_max_dim();
    return env > 0 ? env : 729L;
}

} // namespace caps

inline constexpr double kPruneThreshold = 1e-15;

} // namespace quditlab
