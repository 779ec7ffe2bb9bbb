#include "cqcap/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "cqcap/codebook.hpp"
#include "cqcap/decoder.hpp"
#include "cqcap/errors.hpp"

namespace cqcap {

namespace {

// Guard against rate-derived codebook sizes that could never finish.
constexpr long kMaxCodebookSize = 1L << 20;

} // namespace

SimulationReport monte_carlo_experiment(const ChannelPtr& channel, const Prior& prior,
                                        int n, std::optional<int> codebook_size,
                                        std::optional<double> rate, double delta,
                                        double epsilon, int trials, std::uint64_t seed,
                                        int max_dim) {
    if (!channel) throw ArgumentError("monte_carlo_experiment: channel is null");
    require_prior_matches(*channel, prior);
    if (n < 1) throw ArgumentError("monte_carlo_experiment: n must be >= 1");
    if (trials < 1) throw ArgumentError("monte_carlo_experiment: trials must be >= 1");
    if (delta <= 0.0) throw ArgumentError("monte_carlo_experiment: delta must be positive");
    if (epsilon <= 0.0) {
        throw ArgumentError("monte_carlo_experiment: epsilon must be positive");
    }
    if (codebook_size.has_value() == rate.has_value()) {
        throw ArgumentError(
            "monte_carlo_experiment: exactly one of codebook size and rate must be given");
    }

    long N = 0;
    if (codebook_size) {
        N = *codebook_size;
        if (N < 1) throw ArgumentError("monte_carlo_experiment: N must be >= 1");
    } else {
        if (*rate <= 0.0) {
            throw ArgumentError("monte_carlo_experiment: rate must be positive");
        }
        const double raw = std::exp2(*rate * n);
        if (raw > static_cast<double>(kMaxCodebookSize)) {
            std::ostringstream msg;
            msg << "monte_carlo_experiment: rate " << *rate << " at n=" << n
                << " asks for " << raw << " words, above the cap " << kMaxCodebookSize;
            throw ResourceError(msg.str());
        }
        N = static_cast<long>(std::ceil(raw));
        if (N < 1) N = 1;
    }

    double full_dim = 1.0;
    for (int l = 0; l < n; ++l) full_dim *= channel->dim();
    if (full_dim > max_dim) {
        std::ostringstream msg;
        msg << "monte_carlo_experiment: dimension " << channel->dim() << "^" << n
            << " exceeds the cap " << max_dim;
        throw ResourceError(msg.str());
    }

    const auto start = std::chrono::steady_clock::now();

    SimulationReport report;
    report.n = n;
    report.N = static_cast<int>(N);
    report.delta = delta;
    report.epsilon = epsilon;
    report.trials = trials;
    report.seed = seed;
    report.rate = rate;
    report.prior_weights = prior.weights;
    report.avg_state_entropy = von_neumann_entropy(average_state(*channel, prior));
    report.mean_letter_entropy = mean_letter_entropy(*channel, prior);
    report.rc_bound = random_coding_bound(report.avg_state_entropy,
                                          report.mean_letter_entropy, n,
                                          report.N, delta, epsilon);

    report.records.reserve(static_cast<size_t>(trials));
    double err_total = 0.0;
    double bound_total = 0.0;
    for (int t = 0; t < trials; ++t) {
        TrialRecord rec;
        rec.index = t;
        rec.seed = derive_stream_seed(seed, static_cast<std::uint64_t>(t));
        const Codebook book = sample_codebook(channel, prior, n, report.N, rec.seed);
        const SqmDecoder decoder = SqmDecoder::build(book, prior, delta, max_dim);
        rec.p_err = average_error_probability(book, decoder);
        rec.det_bound = deterministic_error_bound(book, prior, delta, max_dim).total_bound;
        err_total += rec.p_err;
        bound_total += rec.det_bound;
        report.records.push_back(rec);
    }
    report.mean_p_err = err_total / trials;
    report.mean_det_bound = bound_total / trials;

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace cqcap
