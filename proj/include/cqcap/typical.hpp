#pragma once

#include <vector>

#include "cqcap/channel.hpp"

namespace cqcap {

// Spectral projector descriptor for the typical subspace of a product
// density operator: the set B of eigenvalue multi-indices J whose product
// eigenvalue lies strictly inside the window
//
//     2^{-n(center+delta)} < lambda_J < 2^{-n(center-delta)}
//
// evaluated in the log domain. `center` is the entropy the window is
// anchored to: H(S-bar) for the average-state subspace, the mean letter
// entropy for per-word subspaces. The index set is materialized only when
// d^n fits the dimension cap; the classical typicality mass never needs
// it.
class TypicalSubspace {
public:
    int n() const { return n_; }
    double delta() const { return delta_; }
    double center() const { return center_; }

    // Window bounds for the sequence value sum(-log2 lambda), open on both
    // sides.
    double window_lo() const { return lo_; }
    double window_hi() const { return hi_; }

    int symbol_dim() const { return classes_.front().dim(); }

    // Spectral basis of the factor at position l.
    const SpectralDecomposition& site_basis(int l) const {
        return classes_[static_cast<size_t>(class_of_site_[static_cast<size_t>(l)])];
    }

    bool materialized() const { return materialized_; }

    // Multi-indices J in B; throws ResourceError when d^n exceeded the cap
    // at construction time.
    const std::vector<std::vector<int>>& index_set() const;

    long rank() const { return static_cast<long>(index_set().size()); }

    // Product eigenvalue lambda_J of the underlying operator.
    double eigenvalue(const std::vector<int>& multi_index) const;

    // Distinct per-site spectral decompositions and which class each site
    // uses; sites of one class share eigenvalues, which is what makes the
    // type-class mass computation cheap.
    const std::vector<SpectralDecomposition>& site_classes() const { return classes_; }
    const std::vector<int>& class_of_site() const { return class_of_site_; }

private:
    friend TypicalSubspace typical_projector(const DensityOperator&, int, double, int);
    friend TypicalSubspace word_typical_projector(const CQChannel&, const Word&,
                                                  const Prior&, double, int);

    TypicalSubspace(int n, double delta, double center,
                    std::vector<SpectralDecomposition> classes,
                    std::vector<int> class_of_site, int max_dim);

    int n_;
    double delta_;
    double center_;
    double lo_, hi_;
    std::vector<SpectralDecomposition> classes_;
    std::vector<int> class_of_site_;
    bool materialized_;
    std::vector<std::vector<int>> index_set_;
};

// Typical subspace of sbar^(x)n, window centered on H(sbar).
TypicalSubspace typical_projector(const DensityOperator& sbar, int n, double delta,
                                  int max_dim = kDefaultMaxDim);

// Typical subspace of the word state S_u, window centered on the mean
// letter entropy of (channel, prior), not on H(S_u)/n.
TypicalSubspace word_typical_projector(const CQChannel& channel, const Word& word,
                                       const Prior& prior, double delta,
                                       int max_dim = kDefaultMaxDim);

// Classical probability mass Sum_{J in B} lambda_J, computed by type-class
// enumeration in the log domain. Works far beyond the materialization cap.
double typicality_mass(const TypicalSubspace& subspace);

// Expectation over random words u ~ prior^n of Tr S_u P_u: the chance that
// n i.i.d. (letter, eigenvalue-index) draws land in the word-typical
// window. Exact type-class computation.
double expected_word_typical_mass(const CQChannel& channel, const Prior& prior,
                                  int n, double delta);

// Materializes P = Sum_{J in B} |e_J><e_J| on the full d^n space. Meant
// for small-n verification; the cap guards the dense allocation.
Matrix materialize_projector(const TypicalSubspace& subspace, int max_dim = 1024);

// Full-space basis vector |e_J> of the subspace's product eigenbasis.
Vector materialize_basis_vector(const TypicalSubspace& subspace,
                                const std::vector<int>& multi_index);

} // namespace cqcap
