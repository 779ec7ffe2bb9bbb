#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqcap/channel.hpp"
#include "cqcap/config.hpp"

namespace cqcap {

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;
    double p_err = 0.0;
    double det_bound = 0.0;
};

struct SimulationReport {
    int n = 0;
    int N = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::optional<double> rate;  // set only when N was derived from a rate
    std::vector<double> prior_weights;
    double avg_state_entropy = 0.0;
    double mean_letter_entropy = 0.0;
    std::vector<TrialRecord> records;
    double mean_p_err = 0.0;
    double mean_det_bound = 0.0;
    double rc_bound = 0.0;
    // Wall-clock time; deliberately excluded from structured output so
    // identical seeds produce byte-identical files.
    double elapsed_seconds = 0.0;
};

// Repeats: sample a codebook, build the decoder, record the exact error
// probability and its deterministic bound. Fully reproducible from the seed;
// trial seeds are derived by a fixed splitting rule.
SimulationReport monte_carlo_experiment(const ChannelPtr& channel, const Prior& prior,
                                        int n, std::optional<int> codebook_size,
                                        std::optional<double> rate, double delta,
                                        double epsilon, int trials, std::uint64_t seed,
                                        int max_dim = kDefaultMaxDim);

} // namespace cqcap
