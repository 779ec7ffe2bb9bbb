#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cqcap/channel.hpp"

namespace cqcap {

// Decorrelated child seed for stream `index` of a master seed. Stable across
// platforms so recorded seeds reproduce runs exactly.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index);

// Deterministic RNG with platform-stable derived quantities.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Index i with probability weights[i]; weights must sum to ~1.
    int sample_cdf(const std::vector<double>& weights);

    // Standard normal, for randomized test fixtures.
    double next_gaussian();

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Random block code: N words of length n over the channel alphabet.
struct Codebook {
    ChannelPtr channel;
    int n = 0;
    std::vector<Word> words;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(words.size()); }
};

// Draws every letter of every word i.i.d. from the prior.
Codebook sample_codebook(const ChannelPtr& channel, const Prior& prior, int n, int N,
                         std::uint64_t seed);

} // namespace cqcap
