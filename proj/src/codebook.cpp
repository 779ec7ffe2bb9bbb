#include "cqcap/codebook.hpp"

#include <cmath>

#include "cqcap/errors.hpp"

namespace cqcap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

} // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

int Rng::sample_cdf(const std::vector<double>& weights) {
    const double u = next_double();
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Codebook sample_codebook(const ChannelPtr& channel, const Prior& prior, int n, int N,
                         std::uint64_t seed) {
    if (!channel) throw ArgumentError("sample_codebook: channel is null");
    require_prior_matches(*channel, prior);
    if (n < 1) throw ArgumentError("sample_codebook: n must be >= 1");
    if (N < 1) throw ArgumentError("sample_codebook: N must be >= 1");

    Codebook book;
    book.channel = channel;
    book.n = n;
    book.seed = seed;
    book.words.reserve(static_cast<size_t>(N));

    Rng rng(seed);
    for (int u = 0; u < N; ++u) {
        Word word(static_cast<size_t>(n));
        for (int l = 0; l < n; ++l) word[static_cast<size_t>(l)] = rng.sample_cdf(prior.weights);
        book.words.push_back(std::move(word));
    }
    return book;
}

} // namespace cqcap
