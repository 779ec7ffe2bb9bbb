#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cqcap/operator_core.hpp"

namespace cqcap {

// Probability distribution on the input alphabet.
struct Prior {
    std::vector<double> weights;

    Prior() = default;
    explicit Prior(std::vector<double> w);

    static Prior uniform(int alphabet_size);
    static Prior point_mass(int alphabet_size, int letter);

    int size() const { return static_cast<int>(weights.size()); }
    double operator[](int i) const { return weights[static_cast<size_t>(i)]; }
};

// A word over the input alphabet: letters i_1,...,i_n.
using Word = std::vector<int>;

// Classical-quantum channel: a finite input alphabet mapped to density
// operators on a fixed Hilbert space. Immutable after validation.
class CQChannel {
public:
    // Validates every state; the error message lists each violated
    // invariant together with the offending letter and magnitude.
    static CQChannel validated(std::vector<Matrix> raw_states,
                               std::vector<std::string> labels = {},
                               const Tolerances& tol = default_tolerances());

    int alphabet_size() const { return static_cast<int>(states_.size()); }
    int dim() const { return dim_; }
    const DensityOperator& state(int letter) const { return states_[static_cast<size_t>(letter)]; }
    const std::vector<DensityOperator>& states() const { return states_; }
    const std::string& label(int letter) const { return labels_[static_cast<size_t>(letter)]; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    CQChannel(std::vector<DensityOperator> states, std::vector<std::string> labels);

    int dim_;
    std::vector<DensityOperator> states_;
    std::vector<std::string> labels_;
};

using ChannelPtr = std::shared_ptr<const CQChannel>;

void require_prior_matches(const CQChannel& channel, const Prior& prior);
void require_word_valid(const CQChannel& channel, const Word& word);

// S-bar = Sum_i pi_i S_i.
DensityOperator average_state(const CQChannel& channel, const Prior& prior);

// Entropy bound Delta-H(pi) = H(S-bar) - Sum_i pi_i H(S_i), in bits.
double holevo_quantity(const CQChannel& channel, const Prior& prior);

// Mean letter entropy Sum_i pi_i H(S_i), in bits.
double mean_letter_entropy(const CQChannel& channel, const Prior& prior);

// Product state S_u = S_{i_1} (x) ... (x) S_{i_n}. Throws ResourceError
// when d^n exceeds max_dim.
DensityOperator word_state(const CQChannel& channel, const Word& word,
                           int max_dim = kDefaultMaxDim);

// Transition probabilities P(j|i) = Tr S_i X_j, one row per state. Rows
// are stochastic when the measurement is complete. Values are clipped to
// [0, 1] at 1e-12.
Eigen::MatrixXd transition_probs(const std::vector<DensityOperator>& states,
                                 const ResolutionOfIdentity& povm);
Eigen::MatrixXd transition_probs(const CQChannel& channel,
                                 const ResolutionOfIdentity& povm);

// Shannon information I_1(pi, X) in bits for a prior and a transition
// matrix; zero-probability terms are dropped.
double mutual_information(const Prior& prior, const Eigen::MatrixXd& transitions);

} // namespace cqcap
