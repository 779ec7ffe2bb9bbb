#pragma once

#include "cqcap/channel.hpp"

namespace cqcap {

struct CapacityResult {
    Prior optimal_prior;
    double capacity = 0.0;       // bits
    double optimality_gap = 0.0; // max_i D(S_i||S-bar) - DeltaH, bits
    int iterations = 0;
    bool converged = false;
};

// Maximizes the entropy bound over priors by a multiplicative fixed-point
// ascent: pi_i <- pi_i * 2^D(S_i||S-bar) / Z, starting from the uniform
// prior. Convergence is certified by the duality gap of the concave
// program: the result satisfies max_i D(S_i||S-bar) - DeltaH(pi) <= tol.
// When max_iters runs out the partial result is returned with
// converged = false and the current gap.
CapacityResult optimize_prior(const CQChannel& channel, double tol = 1e-7,
                              int max_iters = 10000);

// Exhaustive maximum of DeltaH over the simplex grid with spacing
// 1/resolution. A lower bound on the capacity, used as an independent
// check of optimize_prior. Only tractable for alphabets of size <= 3.
double grid_search_capacity(const CQChannel& channel, int resolution);

// Product channel on the joint alphabet A1 x A2 with states S_i (x) S_j,
// first alphabet major in letter order.
CQChannel product_channel(const CQChannel& first, const CQChannel& second,
                          int max_dim = kDefaultMaxDim);

struct AdditivityReport {
    double c_first = 0.0;
    double c_second = 0.0;
    double c_product = 0.0;
    double defect = 0.0; // |c_product - c_first - c_second|
    CapacityResult product_result;
};

// Optimizes the two factor channels and the product channel over joint
// priors and reports the additivity defect.
AdditivityReport additivity_check(const CQChannel& first, const CQChannel& second,
                                  double tol = 1e-7, int max_iters = 100000,
                                  int max_dim = kDefaultMaxDim);

} // namespace cqcap
