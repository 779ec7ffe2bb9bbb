#include "cqcap/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cqcap/errors.hpp"

namespace cqcap {

namespace {

// Per-letter-class matrices expressed against the global site eigenbasis.
struct ClassFrame {
    Matrix overlap;  // <e-bar_j | e^c_k>, connects global and class bases
    Matrix state;    // <e-bar_j | S_c | e-bar_j'>
};

struct WordData {
    TypicalSubspace sub;
    std::vector<ClassFrame> frames;
    std::vector<double> eigs;  // lambda^u_K for K in the word's index set
    Matrix coords;             // columns: compressed coordinates of P|e^u_K>
};

struct Workspace {
    ChannelPtr channel;
    std::vector<Word> words;
    std::uint64_t seed = 0;
    int n = 0;
    double delta = 0.0;
    TypicalSubspace global_sub;
    std::vector<WordData> word_data;
    Matrix t;  // sum over words of coords * coords^dagger

    Workspace(TypicalSubspace g) : global_sub(std::move(g)) {}
};

Matrix coordinate_matrix(const TypicalSubspace& gsub, const WordData& wd) {
    const auto& rows = gsub.index_set();
    const auto& cols = wd.sub.index_set();
    const int n = gsub.n();
    Matrix c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t k = 0; k < cols.size(); ++k) {
            Complex prod(1.0, 0.0);
            for (int l = 0; l < n; ++l) {
                const auto& o = wd.frames[static_cast<size_t>(
                                              wd.sub.class_of_site()[static_cast<size_t>(l)])]
                                    .overlap;
                prod *= o(rows[r][static_cast<size_t>(l)], cols[k][static_cast<size_t>(l)]);
            }
            c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = prod;
        }
    }
    return c;
}

// Word state S_u compressed to the global typical basis: entries
// <e_J | S_u | e_J'> as letter-wise products. Hermitian.
Matrix compressed_word_state(const TypicalSubspace& gsub, const WordData& wd) {
    const auto& rows = gsub.index_set();
    const int n = gsub.n();
    const Eigen::Index dim = static_cast<Eigen::Index>(rows.size());
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = r; c < dim; ++c) {
            Complex prod(1.0, 0.0);
            for (int l = 0; l < n; ++l) {
                const auto& g = wd.frames[static_cast<size_t>(
                                              wd.sub.class_of_site()[static_cast<size_t>(l)])]
                                    .state;
                prod *= g(rows[static_cast<size_t>(r)][static_cast<size_t>(l)],
                          rows[static_cast<size_t>(c)][static_cast<size_t>(l)]);
            }
            m(r, c) = prod;
            if (c != r) m(c, r) = std::conj(prod);
        }
    }
    return m;
}

Workspace build_workspace(const Codebook& book, const Prior& prior, double delta,
                          int max_dim) {
    if (!book.channel) throw ArgumentError("decoder: codebook has no channel");
    if (book.words.empty()) throw ArgumentError("decoder: codebook is empty");
    const CQChannel& channel = *book.channel;
    require_prior_matches(channel, prior);
    for (const Word& w : book.words) {
        if (static_cast<int>(w.size()) != book.n) {
            throw ArgumentError("decoder: codebook words disagree on length");
        }
        require_word_valid(channel, w);
    }

    const DensityOperator sbar = average_state(channel, prior);
    Workspace ws(typical_projector(sbar, book.n, delta, max_dim));
    ws.channel = book.channel;
    ws.words = book.words;
    ws.seed = book.seed;
    ws.n = book.n;
    ws.delta = delta;

    if (!ws.global_sub.materialized()) {
        std::ostringstream msg;
        msg << "decoder: dimension " << channel.dim() << "^" << book.n
            << " exceeds the cap " << max_dim;
        throw ResourceError(msg.str());
    }
    if (ws.global_sub.index_set().empty()) {
        std::ostringstream msg;
        msg << "degenerate decoder: the typical subspace of the average state is empty"
            << " at n=" << book.n << ", delta=" << delta
            << "; increase n or widen delta";
        throw ValidationError(msg.str());
    }

    const Matrix& ebar = ws.global_sub.site_basis(0).eigenvectors;
    const Eigen::Index bdim = static_cast<Eigen::Index>(ws.global_sub.index_set().size());
    ws.t = Matrix::Zero(bdim, bdim);

    ws.word_data.reserve(book.words.size());
    for (const Word& word : book.words) {
        WordData wd{word_typical_projector(channel, word, prior, delta, max_dim), {}, {}, {}};
        wd.frames.reserve(wd.sub.site_classes().size());
        for (const SpectralDecomposition& cls : wd.sub.site_classes()) {
            ClassFrame f;
            f.overlap = ebar.adjoint() * cls.eigenvectors;
            f.state = f.overlap *
                      cls.eigenvalues.cast<Complex>().asDiagonal() * f.overlap.adjoint();
            wd.frames.push_back(std::move(f));
        }
        wd.eigs.reserve(wd.sub.index_set().size());
        for (const std::vector<int>& k : wd.sub.index_set()) {
            wd.eigs.push_back(wd.sub.eigenvalue(k));
        }
        wd.coords = coordinate_matrix(ws.global_sub, wd);
        ws.t.noalias() += wd.coords * wd.coords.adjoint();
        ws.word_data.push_back(std::move(wd));
    }
    return ws;
}

// Trace of (compressed operator a) * (compressed operator b).
double real_product_trace(const Matrix& a, const Matrix& b) {
    return a.cwiseProduct(b.transpose()).sum().real();
}

} // namespace

struct SqmDecoder::Impl {
    Workspace ws;
    Matrix t_inv_sqrt;
    std::vector<double> success;

    explicit Impl(Workspace w) : ws(std::move(w)) {}
};

SqmDecoder SqmDecoder::build(const Codebook& codebook, const Prior& prior, double delta,
                             int max_dim) {
    auto impl = std::make_shared<Impl>(build_workspace(codebook, prior, delta, max_dim));
    Workspace& ws = impl->ws;
    impl->t_inv_sqrt = gen_inv_sqrt(ws.t);

    impl->success.reserve(ws.word_data.size());
    for (const WordData& wd : ws.word_data) {
        const Matrix w = impl->t_inv_sqrt * wd.coords;
        const Matrix m = compressed_word_state(ws.global_sub, wd);
        const double s = (w.conjugate().cwiseProduct(m * w)).sum().real();
        impl->success.push_back(std::clamp(s, 0.0, 1.0));
    }
    return SqmDecoder(std::move(impl));
}

int SqmDecoder::codebook_size() const { return static_cast<int>(impl_->ws.words.size()); }
int SqmDecoder::word_length() const { return impl_->ws.n; }
double SqmDecoder::delta() const { return impl_->ws.delta; }
int SqmDecoder::compressed_dim() const { return static_cast<int>(impl_->ws.t.rows()); }

const TypicalSubspace& SqmDecoder::global_subspace() const { return impl_->ws.global_sub; }

const TypicalSubspace& SqmDecoder::word_subspace(int u) const {
    return impl_->ws.word_data.at(static_cast<size_t>(u)).sub;
}

Matrix SqmDecoder::povm_element(int u) const {
    const Matrix w = impl_->t_inv_sqrt * impl_->ws.word_data.at(static_cast<size_t>(u)).coords;
    return w * w.adjoint();
}

Matrix SqmDecoder::povm_sum() const {
    return impl_->t_inv_sqrt * impl_->ws.t * impl_->t_inv_sqrt;
}

Matrix SqmDecoder::embedding(int max_dim) const {
    const TypicalSubspace& gsub = impl_->ws.global_sub;
    double full = 1.0;
    for (int l = 0; l < gsub.n(); ++l) full *= gsub.symbol_dim();
    if (full > max_dim) {
        std::ostringstream msg;
        msg << "embedding: dimension " << gsub.symbol_dim() << "^" << gsub.n()
            << " exceeds the cap " << max_dim;
        throw ResourceError(msg.str());
    }
    Matrix e(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(gsub.rank()));
    Eigen::Index col = 0;
    for (const std::vector<int>& j : gsub.index_set()) {
        e.col(col++) = materialize_basis_vector(gsub, j);
    }
    return e;
}

double SqmDecoder::success_probability(int u) const {
    return impl_->success.at(static_cast<size_t>(u));
}

bool SqmDecoder::matches(const Codebook& codebook) const {
    return impl_->ws.channel == codebook.channel && impl_->ws.n == codebook.n &&
           impl_->ws.words == codebook.words;
}

double average_error_probability(const Codebook& codebook, const SqmDecoder& decoder) {
    if (!decoder.matches(codebook)) {
        throw ArgumentError(
            "average_error_probability: decoder was built for a different codebook");
    }
    double total = 0.0;
    for (int u = 0; u < decoder.codebook_size(); ++u) {
        total += 1.0 - decoder.success_probability(u);
    }
    return total / decoder.codebook_size();
}

ErrorBoundBreakdown deterministic_error_bound(const Codebook& codebook, const Prior& prior,
                                              double delta, int max_dim) {
    const Workspace ws = build_workspace(codebook, prior, delta, max_dim);
    const int N = static_cast<int>(ws.word_data.size());

    ErrorBoundBreakdown out;
    out.atypical_global.reserve(static_cast<size_t>(N));
    out.cross.reserve(static_cast<size_t>(N));
    out.atypical_word.reserve(static_cast<size_t>(N));

    double total = 0.0;
    for (const WordData& wd : ws.word_data) {
        const Matrix m = compressed_word_state(ws.global_sub, wd);
        const double a = 1.0 - m.trace().real();
        const Matrix others = ws.t - wd.coords * wd.coords.adjoint();
        const double c = real_product_trace(m, others);
        const double w = 1.0 - std::accumulate(wd.eigs.begin(), wd.eigs.end(), 0.0);
        out.atypical_global.push_back(a);
        out.cross.push_back(c);
        out.atypical_word.push_back(w);
        total += 3.0 * a + c + w;
    }
    out.total_bound = total / N;
    return out;
}

double random_coding_bound(double avg_state_entropy, double avg_letter_entropy, int n,
                           int N, double delta, double epsilon) {
    if (n < 1) throw ArgumentError("random_coding_bound: n must be >= 1");
    if (N < 1) throw ArgumentError("random_coding_bound: N must be >= 1");
    if (delta <= 0.0) throw ArgumentError("random_coding_bound: delta must be positive");
    if (epsilon <= 0.0) throw ArgumentError("random_coding_bound: epsilon must be positive");
    const double exponent = avg_state_entropy - avg_letter_entropy - 2.0 * delta;
    return 4.0 * epsilon + (N - 1) * std::exp2(-static_cast<double>(n) * exponent);
}

GramData build_gram(const Codebook& codebook, const Prior& prior, double delta, int max_dim,
                    int max_gram_dim) {
    const Workspace ws = build_workspace(codebook, prior, delta, max_dim);

    long total = 0;
    for (const WordData& wd : ws.word_data) total += static_cast<long>(wd.eigs.size());
    if (total > max_gram_dim) {
        std::ostringstream msg;
        msg << "build_gram: combined index-set size " << total << " exceeds the cap "
            << max_gram_dim;
        throw ResourceError(msg.str());
    }

    GramData out;
    out.lambda.resize(total);
    out.labels.reserve(static_cast<size_t>(total));
    Matrix v(ws.t.rows(), total);
    Eigen::Index col = 0;
    for (size_t u = 0; u < ws.word_data.size(); ++u) {
        const WordData& wd = ws.word_data[u];
        for (size_t k = 0; k < wd.eigs.size(); ++k) {
            out.lambda[col] = wd.eigs[k];
            out.labels.emplace_back(static_cast<int>(u), static_cast<int>(k));
            v.col(col) = wd.coords.col(static_cast<Eigen::Index>(k));
            ++col;
        }
    }
    out.gram = v.adjoint() * v;
    out.gram = Complex(0.5, 0.0) * (out.gram + out.gram.adjoint().eval());
    return out;
}

TraceInequalityCheck trace_inequality_check(const Matrix& gram, const RealVector& lambda) {
    if (gram.rows() != gram.cols() || gram.rows() != lambda.size()) {
        throw ArgumentError("trace_inequality_check: dimension mismatch");
    }
    TraceInequalityCheck out;
    if (gram.rows() == 0) {
        out.holds = true;
        return out;
    }

    SpectralDecomposition d = spectral_decompose(gram);
    RealVector roots = d.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    const Matrix sqrt_gram =
        d.eigenvectors * roots.cast<Complex>().asDiagonal() * d.eigenvectors.adjoint();

    const Matrix id = Matrix::Identity(gram.rows(), gram.cols());
    const Matrix a = id - sqrt_gram;
    const Matrix b = id - gram;
    out.lhs = (lambda.cast<Complex>().asDiagonal().toDenseMatrix() * a * a).trace().real();
    out.rhs = (lambda.cast<Complex>().asDiagonal().toDenseMatrix() * b * b).trace().real();
    out.holds = out.lhs <= out.rhs + 1e-9;
    return out;
}

GramCrossCheck gram_cross_check(const Codebook& codebook, const Prior& prior, double delta,
                                int max_dim, int max_gram_dim) {
    const SqmDecoder decoder = SqmDecoder::build(codebook, prior, delta, max_dim);
    const Workspace ws = build_workspace(codebook, prior, delta, max_dim);
    const GramData gd = build_gram(codebook, prior, delta, max_dim, max_gram_dim);

    GramCrossCheck out;
    out.trace_check = trace_inequality_check(gd.gram, gd.lambda);
    out.p_err_operator = average_error_probability(codebook, decoder);

    const Eigen::Index gdim = gd.gram.rows();
    const int N = static_cast<int>(ws.word_data.size());

    // Block offsets of each word's columns inside the Gram index set.
    std::vector<Eigen::Index> offset(static_cast<size_t>(N) + 1, 0);
    for (int u = 0; u < N; ++u) {
        offset[static_cast<size_t>(u) + 1] =
            offset[static_cast<size_t>(u)] +
            static_cast<Eigen::Index>(ws.word_data[static_cast<size_t>(u)].eigs.size());
    }

    Matrix v(ws.t.rows(), gdim);
    for (int u = 0; u < N; ++u) {
        const WordData& wd = ws.word_data[static_cast<size_t>(u)];
        if (wd.coords.cols() > 0) {
            v.middleCols(offset[static_cast<size_t>(u)], wd.coords.cols()) = wd.coords;
        }
    }
    const Matrix gram_inv_sqrt = gen_inv_sqrt(gd.gram);

    double gram_total = 0.0;
    double max_diff = 0.0;
    for (int u = 0; u < N; ++u) {
        const WordData& wd = ws.word_data[static_cast<size_t>(u)];
        const auto& class_of_site = wd.sub.class_of_site();
        const int n = ws.n;
        const int d = wd.sub.symbol_dim();

        // Every eigenvector of S_u with a positive eigenvalue, not just the
        // typical ones: the success term sums over the full eigenbasis.
        std::vector<double> lam;
        std::vector<std::vector<int>> idx;
        std::vector<int> k(static_cast<size_t>(n), 0);
        while (true) {
            double lambda = 1.0;
            for (int l = 0; l < n; ++l) {
                lambda *= wd.sub.site_classes()[static_cast<size_t>(
                                                    class_of_site[static_cast<size_t>(l)])]
                              .eigenvalues[k[static_cast<size_t>(l)]];
            }
            if (lambda > 0.0) {
                lam.push_back(lambda);
                idx.push_back(k);
            }
            int pos = n - 1;
            while (pos >= 0 && k[static_cast<size_t>(pos)] == d - 1) {
                k[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++k[static_cast<size_t>(pos)];
        }

        Matrix ext(ws.t.rows(), static_cast<Eigen::Index>(idx.size()));
        const auto& rows = ws.global_sub.index_set();
        for (size_t col = 0; col < idx.size(); ++col) {
            for (size_t r = 0; r < rows.size(); ++r) {
                Complex prod(1.0, 0.0);
                for (int l = 0; l < n; ++l) {
                    prod *= wd.frames[static_cast<size_t>(class_of_site[static_cast<size_t>(l)])]
                                .overlap(rows[r][static_cast<size_t>(l)],
                                         idx[col][static_cast<size_t>(l)]);
                }
                ext(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = prod;
            }
        }

        // alpha rows for this word's full eigenbasis, columns restricted to
        // its own block of the Gram index set.
        const Matrix alpha = (ext.adjoint() * v) * gram_inv_sqrt;
        const Eigen::Index block = offset[static_cast<size_t>(u)];
        const Eigen::Index width = offset[static_cast<size_t>(u) + 1] - block;
        double success = 0.0;
        for (Eigen::Index row = 0; row < alpha.rows(); ++row) {
            success += lam[static_cast<size_t>(row)] *
                       alpha.row(row).segment(block, width).squaredNorm();
        }
        success = std::clamp(success, 0.0, 1.0);
        gram_total += 1.0 - success;
        max_diff = std::max(max_diff,
                            std::abs(success - decoder.success_probability(u)));
    }

    out.p_err_gram = gram_total / N;
    out.max_diff = max_diff;
    return out;
}

} // namespace cqcap
