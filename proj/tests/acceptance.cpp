// Acceptance checks for the capacity library and decoder pipeline. Each
// check prints exactly one [PASS]/[FAIL] line; the exit code is the number
// of failed checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cqcap/capacity.hpp"
#include "cqcap/channel_file.hpp"
#include "cqcap/commands.hpp"
#include "cqcap/decoder.hpp"
#include "cqcap/experiment.hpp"
#include "cqcap/typical.hpp"
#include "test_support.hpp"

using namespace cqcap;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) failures += 1;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// 1. Capacity against the simplex-grid oracle on channels with known values.
void check_capacity_regressions() {
    double worst = 0.0;
    bool ok = true;
    const auto probe = [&](const ChannelPtr& ch, double closed_form) {
        const double cap = optimize_prior(*ch, 1e-10, 200000).capacity;
        const double oracle = grid_search_capacity(*ch, 2000);
        worst = std::max(worst, std::abs(cap - oracle));
        ok = ok && std::abs(cap - oracle) <= 1e-6;
        // The grid value itself must sit on the closed form.
        ok = ok && std::abs(oracle - closed_form) <= 1e-7;
    };
    for (double p : {0.05, 0.1, 0.25}) probe(testsup::bsc_channel(p), 1.0 - testsup::h2(p));
    for (double c : {0.0, 0.25, 0.5, 0.9}) {
        probe(testsup::overlap_pair_channel(c), testsup::h2((1.0 - c) / 2.0));
    }
    report(1, "capacity regressions", ok, "max |capacity - grid oracle| = " + fmt(worst) +
                                              " over 7 channels (allowed 1e-6)");
}

// 2. Measured information never exceeds the entropy bound.
void check_information_bound() {
    Rng rng(1001);
    int violations = 0;
    double worst = -1.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 3);
        const int a = 2 + static_cast<int>(rng.next_u64() % 3);
        const int m = 2 + static_cast<int>(rng.next_u64() % 4);
        const ChannelPtr ch = testsup::random_channel(d, a, rng);
        const Prior prior = testsup::random_prior(a, rng);
        const ResolutionOfIdentity povm = testsup::random_complete_povm(d, m, rng);
        const double info = mutual_information(prior, transition_probs(*ch, povm));
        const double bound = holevo_quantity(*ch, prior);
        worst = std::max(worst, info - bound);
        if (info > bound + 1e-9) violations += 1;
    }
    report(2, "information bound", violations == 0,
           "0 of 200 random channel/measurement pairs exceed the bound; max I - bound = " +
               fmt(worst));
}

// 3. The maximized entropy bound is additive over product channels.
void check_additivity() {
    Rng rng(1002);
    double worst = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelPtr a = testsup::random_channel(2, 2, rng);
        const ChannelPtr b = testsup::random_channel(2, 2, rng);
        const AdditivityReport r = additivity_check(*a, *b);
        worst = std::max(worst, r.defect);
        ok = ok && r.defect <= 1e-4 && r.product_result.converged;
    }
    report(3, "additivity of the maximized bound", ok,
           "max defect " + fmt(worst) + " over 20 random qubit pairs (allowed 1e-4)");
}

struct InstanceStats {
    int tested = 0;
    int resampled = 0;
    double worst_excess = -1.0;
    double worst_gram_diff = 0.0;
    bool bound_ok = true;
    bool gram_ok = true;
};

// 4 + 5a. The deterministic bound and the Gram-route error on the same
// random codebooks.
InstanceStats run_codebook_instances() {
    Rng rng(1003);
    InstanceStats s;
    for (int n = 2; n <= 6; ++n) {
        for (int big_n : {2, 4, 8}) {
            for (double delta : {0.1, 0.3}) {
                for (int rep = 0; rep < 4; ++rep) {
                    for (int attempt = 0; attempt < 400; ++attempt) {
                        const ChannelPtr ch = testsup::random_channel(2, 2, rng);
                        const Prior prior = testsup::random_prior(2, rng);
                        const Codebook book =
                            sample_codebook(ch, prior, n, big_n, rng.next_u64());
                        try {
                            const SqmDecoder dec = SqmDecoder::build(book, prior, delta);
                            const double p_err = average_error_probability(book, dec);
                            const double bound =
                                deterministic_error_bound(book, prior, delta).total_bound;
                            s.worst_excess = std::max(s.worst_excess, p_err - bound);
                            if (p_err > bound + 1e-9) s.bound_ok = false;

                            const GramCrossCheck g = gram_cross_check(book, prior, delta);
                            s.worst_gram_diff = std::max(s.worst_gram_diff, g.max_diff);
                            if (g.max_diff > 1e-8 || !g.trace_check.holds) s.gram_ok = false;

                            s.tested += 1;
                            break;
                        } catch (const ValidationError&) {
                            s.resampled += 1;
                        }
                    }
                }
            }
        }
    }
    return s;
}

void check_error_bound_instances(const InstanceStats& s) {
    std::ostringstream detail;
    detail << s.tested << " codebooks (" << s.resampled
           << " degenerate draws resampled), max P_er - bound = " << fmt(s.worst_excess);
    report(4, "per-instance error bound", s.bound_ok && s.tested >= 100, detail.str());
}

void check_gram_route(const InstanceStats& s) {
    Rng rng(1004);
    bool pairs_ok = true;
    double worst_slack = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 11);
        const int rank = 1 + static_cast<int>(rng.next_u64() % dim);
        Matrix v(dim, rank);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < rank; ++j) {
                v(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
            }
        }
        Matrix gram = v * v.adjoint();
        gram *= (0.25 + 3.0 * rng.next_double()) / gram.trace().real();
        RealVector lambda(dim);
        for (int i = 0; i < dim; ++i) lambda(i) = rng.next_double();
        const TraceInequalityCheck check = trace_inequality_check(gram, lambda);
        worst_slack = std::max(worst_slack, check.lhs - check.rhs);
        pairs_ok = pairs_ok && check.holds;
    }
    std::ostringstream detail;
    detail << "max operator/coefficient gap " << fmt(s.worst_gram_diff) << " over "
           << s.tested << " codebooks; trace inequality holds on 100 random pairs (max "
           << "lhs - rhs = " << fmt(worst_slack) << ")";
    report(5, "gram-route cross-check", s.gram_ok && pairs_ok, detail.str());
}

// 6. Square-root measurement of two overlapping pure states, against a
// from-scratch 2x2 computation.
void check_sqm_closed_form() {
    const double c = 0.5;
    Vector e0(2), e1(2);
    e0 << 1.0, 0.0;
    e1 << c, std::sqrt(1.0 - c * c);
    const Matrix t = e0 * e0.adjoint() + e1 * e1.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(t);
    const Matrix tis = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                       es.eigenvectors().adjoint();
    const double s0 = (e0.adjoint() * tis * e0 * e0.adjoint() * tis * e0)(0, 0).real();
    const double s1 = (e1.adjoint() * tis * e1 * e1.adjoint() * tis * e1)(0, 0).real();
    const double oracle = 1.0 - 0.5 * (s0 + s1);

    Codebook book;
    book.channel = testsup::overlap_pair_channel(c);
    book.n = 1;
    book.words = {{0}, {1}};
    const SqmDecoder dec = SqmDecoder::build(book, Prior::uniform(2), 4.0);
    const double p_err = average_error_probability(book, dec);

    const bool ok = std::abs(p_err - oracle) <= 1e-9 && std::abs(p_err - 0.0669873) <= 5e-7;
    report(6, "square-root measurement closed form", ok,
           "P_er = " + fmt(p_err) + ", brute-force oracle = " + fmt(oracle) +
               ", |diff| = " + fmt(std::abs(p_err - oracle)));
}

// 7. Typical-subspace mass and rank for a binary source, and concentration
// at long block length.
void check_typicality() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 0.7;
    s(1, 1) = 0.3;
    const DensityOperator sbar{s};

    const TypicalSubspace sub = typical_projector(sbar, 10, 0.2);
    double oracle = 0.0;
    for (int k = 2; k <= 4; ++k) {
        const double logc = std::lgamma(11.0) - std::lgamma(k + 1.0) -
                            std::lgamma(11.0 - k);
        oracle += std::exp(logc + k * std::log(0.3) + (10 - k) * std::log(0.7));
    }
    const double mass = typicality_mass(sub);
    const bool band_ok = std::abs(mass - oracle) <= 1e-9 && sub.rank() == 375 &&
                         std::abs(mass - 0.700423) <= 5e-7;

    const double long_mass = typicality_mass(typical_projector(sbar, 200, 0.2));
    const bool long_ok = long_mass >= 0.999;

    report(7, "typical subspace mass and rank", band_ok && long_ok,
           "mass(n=10) = " + fmt(mass) + " vs binomial " + fmt(oracle) + ", rank " +
               std::to_string(sub.rank()) + "; mass(n=200) = " + fmt(long_mass));
}

// 8. Mean exact error under random coding falls as the block length grows at
// a fixed rate below the entropy bound.
void check_error_decay() {
    const ChannelPtr ch = testsup::overlap_pair_channel(0.5);
    std::vector<int> lengths{4, 6, 8, 10};
    std::vector<std::pair<int, double>> means;
    std::vector<int> degenerate;
    for (int n : lengths) {
        try {
            const SimulationReport rep = monte_carlo_experiment(
                ch, Prior::uniform(2), n, std::nullopt, 0.4, 0.1, 0.01, 50,
                5000 + static_cast<std::uint64_t>(n));
            means.emplace_back(n, rep.mean_p_err);
        } catch (const ValidationError&) {
            // The window at this exact (n, delta) contains no product
            // eigenvalue, so no decoder exists; the trend is evaluated on
            // the block lengths that admit one.
            degenerate.push_back(n);
        }
    }

    int inversions = 0;
    for (size_t i = 1; i < means.size(); ++i) {
        if (means[i].second > means[i - 1].second) inversions += 1;
    }
    const bool ok = means.size() >= 3 && inversions <= 1 &&
                    means.back().second < means.front().second;

    std::ostringstream detail;
    detail << "mean P_er:";
    for (const auto& [n, m] : means) detail << " n=" << n << " -> " << fmt(m);
    for (int n : degenerate) detail << "; n=" << n << " degenerate (empty window), skipped";
    detail << "; adjacent inversions = " << inversions;
    report(8, "error decay with block length", ok, detail.str());
}

// 9. Structured simulation reports are byte-identical for identical seeds.
void check_determinism() {
    const fs::path dir = fs::temp_directory_path() / "cqcap_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path chan = dir / "channel.json";
    write_channel_file(*testsup::overlap_pair_channel(0.5), chan.string());

    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto run = [&](const std::string& format, const fs::path& out_path) {
        std::ostringstream out, err;
        const int code = run_command({"simulate", "--channel", chan.string(), "--n", "4",
                                      "--N", "3", "--delta", "0.4", "--trials", "5",
                                      "--seed", "11", "--format", format, "--out",
                                      out_path.string()},
                                     out, err);
        return code;
    };

    bool ok = true;
    for (const std::string format : {"json", "csv"}) {
        const fs::path a = dir / ("a." + format);
        const fs::path b = dir / ("b." + format);
        ok = ok && run(format, a) == 0 && run(format, b) == 0;
        const std::string text_a = slurp(a);
        ok = ok && !text_a.empty() && text_a == slurp(b);
    }
    report(9, "seeded reports are byte-identical", ok,
           "json and csv outputs repeated with one seed match exactly");
}

} // namespace

int main() {
    check_capacity_regressions();
    check_information_bound();
    check_additivity();
    const InstanceStats stats = run_codebook_instances();
    check_error_bound_instances(stats);
    check_gram_route(stats);
    check_sqm_closed_form();
    check_typicality();
    check_error_decay();
    check_determinism();
    return failures;
}
