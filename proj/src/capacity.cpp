#include "cqcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqcap {

namespace {

// Weights at or below the floor stay in the iteration (keeps every state
// inside the support of S-bar); they are reported as zero on exit.
constexpr double kWeightFloor = 1e-12;
constexpr double kReportZero = 1e-11;

// Relative entropies against the running average state. The average-state
// eigenvalues are clamped from below instead of kernel-cut: the floored
// prior guarantees support(S-bar) covers every S_i, so a hard cut could
// only misclassify tiny positive directions and blow the update up.
std::vector<double> divergences_from_average(const CQChannel& channel,
                                             const std::vector<double>& tr_s_log_s,
                                             const Prior& prior) {
    const DensityOperator sbar = average_state(channel, prior);
    const SpectralDecomposition d = spectral_decompose(sbar.matrix());
    const double clamp = 1e-15 * std::max(d.eigenvalues[0], 1e-300);

    std::vector<double> log_mu(static_cast<size_t>(d.dim()));
    for (int j = 0; j < d.dim(); ++j) {
        log_mu[static_cast<size_t>(j)] = std::log2(std::max(d.eigenvalues[j], clamp));
    }

    std::vector<double> r(static_cast<size_t>(channel.alphabet_size()));
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        const Matrix overlaps = d.eigenvectors.adjoint() * channel.state(i).matrix() *
                                d.eigenvectors;
        double tr_s_log_t = 0.0;
        for (int j = 0; j < d.dim(); ++j) {
            tr_s_log_t += overlaps(j, j).real() * log_mu[static_cast<size_t>(j)];
        }
        r[static_cast<size_t>(i)] = tr_s_log_s[static_cast<size_t>(i)] - tr_s_log_t;
    }
    return r;
}

Prior floored(std::vector<double> w) {
    double sum = 0.0;
    for (double& x : w) {
        x = std::max(x, kWeightFloor);
        sum += x;
    }
    for (double& x : w) x /= sum;
    return Prior(std::move(w));
}

Prior reported(const Prior& p) {
    std::vector<double> w = p.weights;
    double sum = 0.0;
    for (double& x : w) {
        if (x <= kReportZero) x = 0.0;
        sum += x;
    }
    for (double& x : w) x /= sum;
    return Prior(std::move(w));
}

} // namespace

CapacityResult optimize_prior(const CQChannel& channel, double tol, int max_iters) {
    if (tol <= 0.0) {
        throw ArgumentError("optimize_prior: tol must be positive");
    }
    const int a = channel.alphabet_size();

    // Tr S_i log2 S_i is constant across iterations.
    std::vector<double> tr_s_log_s(static_cast<size_t>(a));
    for (int i = 0; i < a; ++i) {
        tr_s_log_s[static_cast<size_t>(i)] = -von_neumann_entropy(channel.state(i));
    }

    Prior prior = Prior::uniform(a);
    double gap = 0.0;
    int iter = 0;
    bool converged = false;
    for (iter = 0; iter < max_iters; ++iter) {
        const std::vector<double> r = divergences_from_average(channel, tr_s_log_s, prior);

        double r_max = r[0];
        double objective = 0.0;
        for (int i = 0; i < a; ++i) {
            r_max = std::max(r_max, r[static_cast<size_t>(i)]);
            objective += prior[i] * r[static_cast<size_t>(i)];
        }
        gap = r_max - objective;
        if (gap <= tol) {
            converged = true;
            break;
        }

        std::vector<double> next(static_cast<size_t>(a));
        for (int i = 0; i < a; ++i) {
            // Shift by r_max so the exponentials stay bounded.
            next[static_cast<size_t>(i)] =
                prior[i] * std::exp2(r[static_cast<size_t>(i)] - r_max);
        }
        prior = floored(std::move(next));
    }

    CapacityResult result;
    result.optimal_prior = reported(prior);
    result.capacity = holevo_quantity(channel, result.optimal_prior);
    result.iterations = iter;
    result.converged = converged;

    // Certificate against the reported prior, evaluated with the same
    // clamped routine used inside the iteration (the reported prior can
    // carry exact zeros).
    const std::vector<double> r_final =
        divergences_from_average(channel, tr_s_log_s, result.optimal_prior);
    result.optimality_gap =
        *std::max_element(r_final.begin(), r_final.end()) - result.capacity;
    return result;
}

double grid_search_capacity(const CQChannel& channel, int resolution) {
    const int a = channel.alphabet_size();
    if (a > 3) {
        std::ostringstream msg;
        msg << "grid_search_capacity: alphabet size " << a
            << " is too large for a simplex grid; use optimize_prior";
        throw ArgumentError(msg.str());
    }
    if (resolution < 10) {
        throw ArgumentError("grid_search_capacity: resolution must be >= 10");
    }

    if (a == 1) return 0.0;

    std::vector<double> letter_entropy(static_cast<size_t>(a));
    for (int i = 0; i < a; ++i) {
        letter_entropy[static_cast<size_t>(i)] = von_neumann_entropy(channel.state(i));
    }

    const auto delta_h = [&](const std::vector<double>& w) {
        Matrix sbar = Matrix::Zero(channel.dim(), channel.dim());
        double mean_h = 0.0;
        for (int i = 0; i < a; ++i) {
            sbar += w[static_cast<size_t>(i)] * channel.state(i).matrix();
            mean_h += w[static_cast<size_t>(i)] * letter_entropy[static_cast<size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sbar, Eigen::EigenvaluesOnly);
        return shannon_entropy_bits(solver.eigenvalues()) - mean_h;
    };

    double best = 0.0;
    if (a == 2) {
        for (int k = 0; k <= resolution; ++k) {
            const double p = static_cast<double>(k) / resolution;
            best = std::max(best, delta_h({p, 1.0 - p}));
        }
    } else {
        for (int k1 = 0; k1 <= resolution; ++k1) {
            for (int k2 = 0; k2 + k1 <= resolution; ++k2) {
                const double p1 = static_cast<double>(k1) / resolution;
                const double p2 = static_cast<double>(k2) / resolution;
                best = std::max(best, delta_h({p1, p2, 1.0 - p1 - p2}));
            }
        }
    }
    return best;
}

CQChannel product_channel(const CQChannel& first, const CQChannel& second, int max_dim) {
    const long prod_dim = static_cast<long>(first.dim()) * second.dim();
    if (prod_dim > max_dim) {
        std::ostringstream msg;
        msg << "product_channel: joint dimension " << prod_dim << " exceeds the cap "
            << max_dim;
        throw ResourceError(msg.str());
    }
    std::vector<Matrix> states;
    std::vector<std::string> labels;
    states.reserve(static_cast<size_t>(first.alphabet_size()) * second.alphabet_size());
    for (int i = 0; i < first.alphabet_size(); ++i) {
        for (int j = 0; j < second.alphabet_size(); ++j) {
            states.push_back(
                tensor_product(first.state(i).matrix(), second.state(j).matrix()));
            labels.push_back(first.label(i) + "*" + second.label(j));
        }
    }
    return CQChannel::validated(std::move(states), std::move(labels));
}

AdditivityReport additivity_check(const CQChannel& first, const CQChannel& second,
                                  double tol, int max_iters, int max_dim) {
    const CQChannel product = product_channel(first, second, max_dim);

    AdditivityReport report;
    report.c_first = optimize_prior(first, tol, max_iters).capacity;
    report.c_second = optimize_prior(second, tol, max_iters).capacity;
    report.product_result = optimize_prior(product, tol, max_iters);
    report.c_product = report.product_result.capacity;
    report.defect = std::abs(report.c_product - report.c_first - report.c_second);
    return report;
}

} // namespace cqcap
