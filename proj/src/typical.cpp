#include "cqcap/typical.hpp"

#include "cqcap/config.hpp"
#include "cqcap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace cqcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -log2(lambda) per eigenvalue; clipped-to-zero eigenvalues map to +inf and
// can never enter a typical window.
std::vector<double> neg_log2_eigs(const SpectralDecomposition& d) {
    std::vector<double> out(static_cast<size_t>(d.dim()));
    for (int j = 0; j < d.dim(); ++j) {
        const double lambda = d.eigenvalues[j];
        out[static_cast<size_t>(j)] =
            lambda > default_tolerances().psd ? -std::log2(lambda) : kInf;
    }
    return out;
}

bool fits_cap(int symbol_dim, int n, int max_dim) {
    double total = 1.0;
    for (int l = 0; l < n; ++l) {
        total *= symbol_dim;
        if (total > max_dim) return false;
    }
    return true;
}

// One weighted point of a type-class distribution: natural-log probability
// of the class and the common value sum(-log2 lambda) of its sequences.
struct TypeAtom {
    double log_prob;
    double value;
};

// Type classes of `count` i.i.d. draws over cells with probabilities
// `probs` and per-draw values `values`.
void enumerate_types(const std::vector<double>& probs, const std::vector<double>& values,
                     int count, std::vector<TypeAtom>& out) {
    const size_t cells = probs.size();
    std::vector<int> counts(cells, 0);
    const double log_count_fact = std::lgamma(count + 1.0);

    const auto recurse = [&](auto&& self, size_t cell, int remaining) -> void {
        if (cell + 1 == cells) {
            counts[cell] = remaining;
            double lp = log_count_fact;
            double v = 0.0;
            for (size_t c = 0; c < cells; ++c) {
                if (counts[c] == 0) continue;
                lp += counts[c] * std::log(probs[c]) - std::lgamma(counts[c] + 1.0);
                v += counts[c] * values[c];
            }
            out.push_back({lp, v});
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            counts[cell] = k;
            self(self, cell + 1, remaining - k);
        }
    };
    if (cells == 1) {
        out.push_back({count * std::log(probs[0]), count * values[0]});
        return;
    }
    recurse(recurse, 0, count);
}

// Probability that the summed value over all groups lands strictly inside
// (lo, hi). Groups are independent, so their type atoms convolve.
double window_probability(const std::vector<std::vector<TypeAtom>>& groups, double lo,
                          double hi) {
    double total = 0.0;
    const auto walk = [&](auto&& self, size_t g, double lp, double v) -> void {
        if (g == groups.size()) {
            if (lo < v && v < hi) total += std::exp(lp);
            return;
        }
        for (const TypeAtom& atom : groups[g]) {
            self(self, g + 1, lp + atom.log_prob, v + atom.value);
        }
    };
    walk(walk, 0, 0.0, 0.0);
    return std::clamp(total, 0.0, 1.0);
}

} // namespace

TypicalSubspace::TypicalSubspace(int n, double delta, double center,
                                 std::vector<SpectralDecomposition> classes,
                                 std::vector<int> class_of_site, int max_dim)
    : n_(n),
      delta_(delta),
      center_(center),
      lo_(n * (center - delta)),
      hi_(n * (center + delta)),
      classes_(std::move(classes)),
      class_of_site_(std::move(class_of_site)) {
    if (n_ < 1) throw ArgumentError("typical subspace: n must be >= 1");
    if (delta_ <= 0.0) throw ArgumentError("typical subspace: delta must be positive");

    const int d = classes_.front().dim();
    materialized_ = fits_cap(d, n_, max_dim);
    if (!materialized_) return;

    std::vector<std::vector<double>> neg_logs;
    neg_logs.reserve(classes_.size());
    for (const SpectralDecomposition& c : classes_) neg_logs.push_back(neg_log2_eigs(c));

    // Odometer over D^n with the strict two-sided window test.
    std::vector<int> index(static_cast<size_t>(n_), 0);
    while (true) {
        double value = 0.0;
        for (int l = 0; l < n_; ++l) {
            value += neg_logs[static_cast<size_t>(class_of_site_[static_cast<size_t>(l)])]
                             [static_cast<size_t>(index[static_cast<size_t>(l)])];
        }
        if (lo_ < value && value < hi_) index_set_.push_back(index);

        int pos = n_ - 1;
        while (pos >= 0 && index[static_cast<size_t>(pos)] == d - 1) {
            index[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++index[static_cast<size_t>(pos)];
    }
}

const std::vector<std::vector<int>>& TypicalSubspace::index_set() const {
    if (!materialized_) {
        std::ostringstream msg;
        msg << "typical subspace: index set for dimension " << symbol_dim() << "^"
            << n_ << " was not materialized (over the cap)";
        throw ResourceError(msg.str());
    }
    return index_set_;
}

double TypicalSubspace::eigenvalue(const std::vector<int>& multi_index) const {
    double lambda = 1.0;
    for (int l = 0; l < n_; ++l) {
        lambda *= site_basis(l).eigenvalues[multi_index[static_cast<size_t>(l)]];
    }
    return lambda;
}

TypicalSubspace typical_projector(const DensityOperator& sbar, int n, double delta,
                                  int max_dim) {
    SpectralDecomposition d = spectral_decompose(sbar.matrix());
    const double center = shannon_entropy_bits(d.eigenvalues);
    return TypicalSubspace(n, delta, center, {std::move(d)},
                           std::vector<int>(static_cast<size_t>(n), 0), max_dim);
}

TypicalSubspace word_typical_projector(const CQChannel& channel, const Word& word,
                                       const Prior& prior, double delta, int max_dim) {
    require_word_valid(channel, word);
    const double center = mean_letter_entropy(channel, prior);

    std::map<int, int> class_of_letter;
    std::vector<SpectralDecomposition> classes;
    std::vector<int> class_of_site;
    class_of_site.reserve(word.size());
    for (int letter : word) {
        auto it = class_of_letter.find(letter);
        if (it == class_of_letter.end()) {
            it = class_of_letter.emplace(letter, static_cast<int>(classes.size())).first;
            classes.push_back(spectral_decompose(channel.state(letter).matrix()));
        }
        class_of_site.push_back(it->second);
    }
    return TypicalSubspace(static_cast<int>(word.size()), delta, center,
                           std::move(classes), std::move(class_of_site), max_dim);
}

double typicality_mass(const TypicalSubspace& subspace) {
    // Sites of the same class are i.i.d. draws from that class's
    // eigenvalue distribution; one type enumeration per class.
    std::vector<int> class_count(subspace.site_classes().size(), 0);
    for (int c : subspace.class_of_site()) ++class_count[static_cast<size_t>(c)];

    std::vector<std::vector<TypeAtom>> groups;
    for (size_t c = 0; c < subspace.site_classes().size(); ++c) {
        if (class_count[c] == 0) continue;
        const SpectralDecomposition& basis = subspace.site_classes()[c];
        std::vector<double> probs;
        std::vector<double> values;
        for (int j = 0; j < basis.dim(); ++j) {
            const double lambda = basis.eigenvalues[j];
            if (lambda > default_tolerances().psd) {
                probs.push_back(lambda);
                values.push_back(-std::log2(lambda));
            }
        }
        groups.emplace_back();
        enumerate_types(probs, values, class_count[c], groups.back());
    }
    return window_probability(groups, subspace.window_lo(), subspace.window_hi());
}

double expected_word_typical_mass(const CQChannel& channel, const Prior& prior, int n,
                                  double delta) {
    require_prior_matches(channel, prior);
    if (n < 1) throw ArgumentError("expected_word_typical_mass: n must be >= 1");
    if (delta <= 0.0) {
        throw ArgumentError("expected_word_typical_mass: delta must be positive");
    }

    // Joint (letter, eigenvalue-index) cells of one i.i.d. trial.
    std::vector<double> probs;
    std::vector<double> values;
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        if (prior[i] <= 0.0) continue;
        const SpectralDecomposition d = spectral_decompose(channel.state(i).matrix());
        for (int j = 0; j < d.dim(); ++j) {
            const double lambda = d.eigenvalues[j];
            if (lambda > default_tolerances().psd) {
                probs.push_back(prior[i] * lambda);
                values.push_back(-std::log2(lambda));
            }
        }
    }

    const double center = mean_letter_entropy(channel, prior);
    std::vector<std::vector<TypeAtom>> groups(1);
    enumerate_types(probs, values, n, groups.front());
    return window_probability(groups, n * (center - delta), n * (center + delta));
}

Vector materialize_basis_vector(const TypicalSubspace& subspace,
                                const std::vector<int>& multi_index) {
    Vector v = subspace.site_basis(0).eigenvectors.col(multi_index[0]);
    for (int l = 1; l < subspace.n(); ++l) {
        const Vector& site =
            subspace.site_basis(l).eigenvectors.col(multi_index[static_cast<size_t>(l)]);
        Vector next(v.size() * site.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next.segment(i * site.size(), site.size()) = v[i] * site;
        }
        v = std::move(next);
    }
    return v;
}

Matrix materialize_projector(const TypicalSubspace& subspace, int max_dim) {
    if (!fits_cap(subspace.symbol_dim(), subspace.n(), max_dim)) {
        std::ostringstream msg;
        msg << "materialize_projector: dimension " << subspace.symbol_dim() << "^"
            << subspace.n() << " exceeds the cap " << max_dim;
        throw ResourceError(msg.str());
    }
    long dim = 1;
    for (int l = 0; l < subspace.n(); ++l) dim *= subspace.symbol_dim();

    Matrix p = Matrix::Zero(dim, dim);
    for (const std::vector<int>& j : subspace.index_set()) {
        const Vector e = materialize_basis_vector(subspace, j);
        p.noalias() += e * e.adjoint();
    }
    return p;
}

} // namespace cqcap
