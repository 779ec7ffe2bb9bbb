#pragma once

namespace cqcap {

// Numerical tolerances used across the library. All validation and
// support-detection thresholds live here so they can be adjusted in one
// place.
struct Tolerances {
    double hermitian = 1e-9;      // max |a_ij - conj(a_ji)|
    double trace = 1e-9;          // |Tr - expected|
    double reconstruction = 1e-9; // spectral round-trip, max-abs entrywise
    double orthonormal = 1e-9;    // eigenvector Gram vs identity
    double psd = 1e-10;           // eigenvalues above -psd count as >= 0
    double kernel = 1e-10;        // support cut, relative to largest eigenvalue
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

// Largest Hilbert-space dimension d^n that operations may materialize.
inline constexpr int kDefaultMaxDim = 4096;

// Largest total Gram-matrix dimension (sum of per-word typical ranks)
// for the Gram-route error cross-check.
inline constexpr int kDefaultMaxGramDim = 8192;

} // namespace cqcap
