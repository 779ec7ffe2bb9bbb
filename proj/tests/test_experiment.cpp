#include <doctest.h>

#include <cmath>

#include "cqcap/decoder.hpp"
#include "cqcap/experiment.hpp"
#include "test_support.hpp"

using namespace cqcap;

TEST_CASE("one trial reproduces the manual pipeline") {
    Rng rng(81);
    const ChannelPtr ch = testsup::random_channel(2, 2, rng);
    const Prior prior = testsup::random_prior(2, rng);
    const std::uint64_t master = 313;
    const SimulationReport rep =
        monte_carlo_experiment(ch, prior, 3, 2, std::nullopt, 1.0, 0.01, 1, master);

    const Codebook book = sample_codebook(ch, prior, 3, 2, derive_stream_seed(master, 0));
    const SqmDecoder dec = SqmDecoder::build(book, prior, 1.0);
    CHECK(rep.records.size() == 1);
    CHECK(rep.records[0].seed == derive_stream_seed(master, 0));
    CHECK(rep.records[0].p_err ==
          doctest::Approx(average_error_probability(book, dec)).epsilon(1e-15));
    CHECK(rep.records[0].det_bound ==
          doctest::Approx(deterministic_error_bound(book, prior, 1.0).total_bound)
              .epsilon(1e-15));
    CHECK(rep.rc_bound ==
          doctest::Approx(random_coding_bound(rep.avg_state_entropy,
                                              rep.mean_letter_entropy, 3, 2, 1.0, 0.01))
              .epsilon(1e-15));
}

TEST_CASE("identical seeds give identical reports") {
    Rng rng(82);
    const ChannelPtr ch = testsup::random_channel(2, 2, rng);
    const Prior prior = testsup::random_prior(2, rng);
    const SimulationReport a =
        monte_carlo_experiment(ch, prior, 3, 4, std::nullopt, 1.0, 0.01, 5, 99);
    const SimulationReport b =
        monte_carlo_experiment(ch, prior, 3, 4, std::nullopt, 1.0, 0.01, 5, 99);
    CHECK(a.records.size() == b.records.size());
    for (size_t t = 0; t < a.records.size(); ++t) {
        CHECK(a.records[t].seed == b.records[t].seed);
        CHECK(a.records[t].p_err == b.records[t].p_err);
        CHECK(a.records[t].det_bound == b.records[t].det_bound);
    }
    CHECK(a.mean_p_err == b.mean_p_err);

    const SimulationReport c =
        monte_carlo_experiment(ch, prior, 3, 4, std::nullopt, 1.0, 0.01, 5, 100);
    bool any_diff = false;
    for (size_t t = 0; t < c.records.size(); ++t) {
        any_diff = any_diff || c.records[t].p_err != a.records[t].p_err;
    }
    CHECK(any_diff);
}

TEST_CASE("report means are consistent with the records") {
    Rng rng(83);
    const ChannelPtr ch = testsup::random_channel(2, 2, rng);
    const SimulationReport rep =
        monte_carlo_experiment(ch, Prior::uniform(2), 3, 3, std::nullopt, 1.5, 0.02, 7, 5);
    double p = 0.0, b = 0.0;
    for (const TrialRecord& r : rep.records) {
        CHECK(r.p_err >= 0.0);
        CHECK(r.p_err <= 1.0);
        CHECK(r.p_err <= r.det_bound + 1e-9);
        p += r.p_err;
        b += r.det_bound;
    }
    CHECK(rep.mean_p_err == doctest::Approx(p / 7).epsilon(1e-12));
    CHECK(rep.mean_det_bound == doctest::Approx(b / 7).epsilon(1e-12));
    CHECK(rep.trials == 7);
    CHECK(rep.N == 3);
    CHECK_FALSE(rep.rate.has_value());
}

TEST_CASE("codebook size can come from a rate") {
    Rng rng(84);
    const ChannelPtr ch = testsup::random_channel(2, 2, rng);
    const SimulationReport rep =
        monte_carlo_experiment(ch, Prior::uniform(2), 5, std::nullopt, 0.4, 1.0, 0.01, 1, 3);
    CHECK(rep.N == static_cast<int>(std::ceil(std::exp2(0.4 * 5))));
    CHECK(rep.rate.has_value());
    CHECK(*rep.rate == doctest::Approx(0.4));
}

TEST_CASE("experiment argument checks") {
    Rng rng(85);
    const ChannelPtr ch = testsup::random_channel(2, 2, rng);
    const Prior u = Prior::uniform(2);
    CHECK_THROWS_AS(
        monte_carlo_experiment(ch, u, 3, std::nullopt, std::nullopt, 1.0, 0.01, 1, 0),
        ArgumentError);
    CHECK_THROWS_AS(monte_carlo_experiment(ch, u, 3, 2, 0.4, 1.0, 0.01, 1, 0),
                    ArgumentError);
    CHECK_THROWS_AS(monte_carlo_experiment(ch, u, 3, 2, std::nullopt, 1.0, 0.01, 0, 0),
                    ArgumentError);
    CHECK_THROWS_AS(monte_carlo_experiment(ch, u, 3, 2, std::nullopt, -1.0, 0.01, 1, 0),
                    ArgumentError);
    // Hilbert space beyond the cap is refused before any trial runs.
    CHECK_THROWS_AS(monte_carlo_experiment(ch, u, 30, 2, std::nullopt, 1.0, 0.01, 1, 0),
                    ResourceError);
    // Rates that explode the codebook are refused.
    CHECK_THROWS_AS(
        monte_carlo_experiment(ch, u, 12, std::nullopt, 3.0, 1.0, 0.01, 1, 0),
        ResourceError);
}
