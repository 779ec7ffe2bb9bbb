#include "cqcap/channel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cqcap {

namespace {

constexpr double kPriorSumTol = 1e-12;
constexpr double kProbClip = 1e-12;

// Probabilities this small are treated as exact zeros in information sums.
constexpr double kProbFloor = 1e-15;

} // namespace

Prior::Prior(std::vector<double> w) : weights(std::move(w)) {
    if (weights.empty()) {
        throw ValidationError("prior: weight list is empty");
    }
    double sum = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) {
            std::ostringstream msg;
            msg << "prior: weight " << i << " is negative (" << weights[i] << ")";
            throw ValidationError(msg.str());
        }
        sum += weights[i];
    }
    if (std::abs(sum - 1.0) > kPriorSumTol) {
        std::ostringstream msg;
        msg << "prior: weights sum to " << sum << ", expected 1";
        throw ValidationError(msg.str());
    }
}

Prior Prior::uniform(int alphabet_size) {
    return Prior(std::vector<double>(static_cast<size_t>(alphabet_size),
                                     1.0 / alphabet_size));
}

Prior Prior::point_mass(int alphabet_size, int letter) {
    std::vector<double> w(static_cast<size_t>(alphabet_size), 0.0);
    w.at(static_cast<size_t>(letter)) = 1.0;
    return Prior(std::move(w));
}

CQChannel::CQChannel(std::vector<DensityOperator> states, std::vector<std::string> labels)
    : dim_(states.front().dim()), states_(std::move(states)), labels_(std::move(labels)) {}

CQChannel CQChannel::validated(std::vector<Matrix> raw_states,
                               std::vector<std::string> labels, const Tolerances& tol) {
    if (raw_states.empty()) {
        throw ValidationError("channel: needs at least one letter");
    }
    if (!labels.empty() && labels.size() != raw_states.size()) {
        std::ostringstream msg;
        msg << "channel: " << labels.size() << " labels for " << raw_states.size()
            << " states";
        throw ArgumentError(msg.str());
    }
    if (labels.empty()) {
        for (size_t i = 0; i < raw_states.size(); ++i) {
            labels.push_back(std::to_string(i));
        }
    }

    const Eigen::Index dim = raw_states.front().rows();
    std::vector<DensityOperator> states;
    states.reserve(raw_states.size());
    std::ostringstream problems;
    bool ok = true;
    for (size_t i = 0; i < raw_states.size(); ++i) {
        if (raw_states[i].rows() != dim || raw_states[i].cols() != dim) {
            ok = false;
            problems << "letter '" << labels[i] << "': dimension "
                     << raw_states[i].rows() << "x" << raw_states[i].cols()
                     << " differs from " << dim << "x" << dim << "; ";
            continue;
        }
        try {
            states.emplace_back(std::move(raw_states[i]), tol);
        } catch (const ValidationError& e) {
            ok = false;
            problems << "letter '" << labels[i] << "': " << e.what() << "; ";
        }
    }
    if (!ok) {
        throw ValidationError("channel validation failed: " + problems.str());
    }
    return CQChannel(std::move(states), std::move(labels));
}

void require_prior_matches(const CQChannel& channel, const Prior& prior) {
    if (prior.size() != channel.alphabet_size()) {
        std::ostringstream msg;
        msg << "prior has " << prior.size() << " weights but the alphabet has "
            << channel.alphabet_size() << " letters";
        throw ArgumentError(msg.str());
    }
}

void require_word_valid(const CQChannel& channel, const Word& word) {
    if (word.empty()) {
        throw ArgumentError("word: empty letter list");
    }
    for (size_t l = 0; l < word.size(); ++l) {
        if (word[l] < 0 || word[l] >= channel.alphabet_size()) {
            std::ostringstream msg;
            msg << "word: letter " << word[l] << " at position " << l
                << " is outside the alphabet of size " << channel.alphabet_size();
            throw ArgumentError(msg.str());
        }
    }
}

DensityOperator average_state(const CQChannel& channel, const Prior& prior) {
    require_prior_matches(channel, prior);
    Matrix sum = Matrix::Zero(channel.dim(), channel.dim());
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        sum += prior[i] * channel.state(i).matrix();
    }
    return DensityOperator(std::move(sum));
}

double holevo_quantity(const CQChannel& channel, const Prior& prior) {
    return von_neumann_entropy(average_state(channel, prior)) -
           mean_letter_entropy(channel, prior);
}

double mean_letter_entropy(const CQChannel& channel, const Prior& prior) {
    require_prior_matches(channel, prior);
    double h = 0.0;
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        if (prior[i] > 0.0) {
            h += prior[i] * von_neumann_entropy(channel.state(i));
        }
    }
    return h;
}

DensityOperator word_state(const CQChannel& channel, const Word& word, int max_dim) {
    require_word_valid(channel, word);
    double dims = 1.0;
    for (size_t l = 0; l < word.size(); ++l) {
        dims *= channel.dim();
        if (dims > max_dim) {
            std::ostringstream msg;
            msg << "word_state: dimension " << channel.dim() << "^" << word.size()
                << " exceeds the cap " << max_dim;
            throw ResourceError(msg.str());
        }
    }
    std::vector<Matrix> factors;
    factors.reserve(word.size());
    for (int letter : word) {
        factors.push_back(channel.state(letter).matrix());
    }
    return DensityOperator(tensor_product(factors));
}

Eigen::MatrixXd transition_probs(const std::vector<DensityOperator>& states,
                                 const ResolutionOfIdentity& povm) {
    if (states.empty()) {
        throw ArgumentError("transition_probs: state list is empty");
    }
    for (const DensityOperator& s : states) {
        if (s.dim() != povm.dim) {
            std::ostringstream msg;
            msg << "transition_probs: state dimension " << s.dim()
                << " does not match measurement dimension " << povm.dim;
            throw ArgumentError(msg.str());
        }
    }
    Eigen::MatrixXd probs(states.size(), povm.elements.size());
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = 0; j < povm.elements.size(); ++j) {
            double p = (states[i].matrix() * povm.elements[j]).trace().real();
            if (p < 0.0 && p > -kProbClip) p = 0.0;
            if (p > 1.0 && p < 1.0 + kProbClip) p = 1.0;
            probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
        }
    }
    return probs;
}

Eigen::MatrixXd transition_probs(const CQChannel& channel,
                                 const ResolutionOfIdentity& povm) {
    return transition_probs(channel.states(), povm);
}

double mutual_information(const Prior& prior, const Eigen::MatrixXd& transitions) {
    if (prior.size() != transitions.rows()) {
        std::ostringstream msg;
        msg << "mutual_information: prior has " << prior.size()
            << " weights but the transition matrix has " << transitions.rows()
            << " rows";
        throw ArgumentError(msg.str());
    }

    const Eigen::Index outputs = transitions.cols();
    Eigen::VectorXd marginal = Eigen::VectorXd::Zero(outputs);
    for (Eigen::Index i = 0; i < transitions.rows(); ++i) {
        marginal += prior[static_cast<int>(i)] * transitions.row(i).transpose();
    }

    double info = 0.0;
    for (Eigen::Index j = 0; j < outputs; ++j) {
        if (marginal[j] <= kProbFloor) continue;
        for (Eigen::Index i = 0; i < transitions.rows(); ++i) {
            const double joint = prior[static_cast<int>(i)] * transitions(i, j);
            if (joint <= kProbFloor) continue;
            info += joint * std::log2(transitions(i, j) / marginal[j]);
        }
    }
    return info;
}

} // namespace cqcap
