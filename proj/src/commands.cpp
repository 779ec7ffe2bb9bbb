#include "cqcap/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqcap/capacity.hpp"
#include "cqcap/channel.hpp"
#include "cqcap/channel_file.hpp"
#include "cqcap/codebook.hpp"
#include "cqcap/config.hpp"
#include "cqcap/decoder.hpp"
#include "cqcap/errors.hpp"
#include "cqcap/experiment.hpp"
#include "cqcap/report_io.hpp"
#include "cqcap/typical.hpp"

namespace cqcap {

namespace {

using json = nlohmann::ordered_json;

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::string sig9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

int env_max_dim() {
    const char* env = std::getenv("CQCAP_MAX_DIM");
    if (!env) return kDefaultMaxDim;
    try {
        const long v = std::stol(env);
        if (v < 1) throw ArgumentError("CQCAP_MAX_DIM must be a positive integer");
        return static_cast<int>(std::min<long>(v, 1L << 30));
    } catch (const ArgumentError&) {
        throw;
    } catch (const std::exception&) {
        throw ArgumentError("CQCAP_MAX_DIM must be a positive integer");
    }
}

Prior resolve_prior(const std::string& spec, const CQChannel& channel) {
    if (spec == "uniform") return Prior::uniform(channel.alphabet_size());
    if (spec == "optimal") {
        const CapacityResult r = optimize_prior(channel);
        if (!r.converged) {
            throw ConvergenceError("prior optimization stalled with gap " +
                                   sig9(r.optimality_gap));
        }
        return r.optimal_prior;
    }
    std::vector<double> weights;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            const double w = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
                ++used;
            }
            if (used != item.size()) throw std::invalid_argument(item);
            weights.push_back(w);
        } catch (const std::exception&) {
            throw ArgumentError("prior: cannot parse weight '" + item +
                                "' (expected uniform, optimal, or a comma list)");
        }
    }
    if (static_cast<int>(weights.size()) != channel.alphabet_size()) {
        std::ostringstream msg;
        msg << "prior: got " << weights.size() << " weights for an alphabet of "
            << channel.alphabet_size();
        throw ArgumentError(msg.str());
    }
    return Prior(std::move(weights));
}

int resolve_codebook_size(bool has_n_words, int n_words, bool has_rate, double rate, int n) {
    if (has_n_words == has_rate) {
        throw ArgumentError("exactly one of --N and --rate must be given");
    }
    if (has_n_words) {
        if (n_words < 1) throw ArgumentError("--N must be >= 1");
        return n_words;
    }
    if (rate <= 0.0) throw ArgumentError("--rate must be positive");
    const double raw = std::exp2(rate * n);
    if (raw > static_cast<double>(1L << 20)) {
        throw ResourceError("rate " + sig9(rate) + " at n=" + std::to_string(n) +
                            " asks for more than 2^20 words");
    }
    return std::max(1, static_cast<int>(std::ceil(raw)));
}

struct Options {
    std::string channel_path;
    std::string channel_b_path;
    std::string prior_spec = "uniform";
    int n = 1;
    int n_words = 0;
    double rate = 0.0;
    double delta = 0.1;
    double epsilon = 0.01;
    int trials = 20;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format;
    int max_dim = kDefaultMaxDim;
};

// Routes a finished document: file when --out was given (atomic), the
// stdout stream when --format alone was given, human text otherwise.
void deliver(const json& doc, const std::string& human, const Options& o,
             std::ostream& out) {
    if (!o.out_path.empty()) {
        ReportFormat f =
            o.format.empty() ? ReportFormat::Json : parse_report_format(o.format);
        if (f != ReportFormat::Json) {
            throw ArgumentError("this subcommand only supports --format json");
        }
        write_text_atomic(doc.dump(2) + "\n", o.out_path);
        return;
    }
    if (!o.format.empty()) {
        if (parse_report_format(o.format) != ReportFormat::Json) {
            throw ArgumentError("this subcommand only supports --format json");
        }
        out << doc.dump(2) << "\n";
        return;
    }
    out << human;
}

void run_info(const Options& o, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    json doc;
    doc["dim"] = ch->dim();
    doc["alphabet_size"] = ch->alphabet_size();
    doc["letters"] = json::array();
    std::ostringstream human;
    human << "dim = " << ch->dim() << "\n";
    human << "alphabet = " << ch->alphabet_size() << "\n";
    for (int i = 0; i < ch->alphabet_size(); ++i) {
        const double h = von_neumann_entropy(ch->state(i));
        json letter;
        letter["label"] = ch->label(i);
        letter["entropy"] = h;
        doc["letters"].push_back(std::move(letter));
        human << "letter '" << ch->label(i) << "': entropy = " << fixed6(h) << "\n";
    }
    deliver(doc, human.str(), o, out);
}

void run_holevo(const Options& o, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const Prior prior = resolve_prior(o.prior_spec, *ch);
    const double avg = von_neumann_entropy(average_state(*ch, prior));
    const double letters = mean_letter_entropy(*ch, prior);
    const double dh = holevo_quantity(*ch, prior);

    json doc;
    doc["prior"] = prior.weights;
    doc["avg_state_entropy"] = avg;
    doc["mean_letter_entropy"] = letters;
    doc["holevo"] = dh;
    std::ostringstream human;
    human << "avg_state_entropy = " << fixed6(avg) << "\n";
    human << "mean_letter_entropy = " << fixed6(letters) << "\n";
    human << "holevo = " << fixed6(dh) << "\n";
    deliver(doc, human.str(), o, out);
}

void run_capacity(const Options& o, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const CapacityResult r = optimize_prior(*ch);
    if (!r.converged) {
        throw ConvergenceError("capacity optimization stalled with gap " +
                               sig9(r.optimality_gap));
    }
    json doc;
    doc["capacity"] = r.capacity;
    doc["prior"] = r.optimal_prior.weights;
    doc["optimality_gap"] = r.optimality_gap;
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    std::ostringstream human;
    human << "capacity = " << fixed6(r.capacity) << "\n";
    human << "gap = " << sig9(r.optimality_gap) << "\n";
    human << "iterations = " << r.iterations << "\n";
    human << "prior =";
    for (double w : r.optimal_prior.weights) human << " " << fixed6(w);
    human << "\n";
    deliver(doc, human.str(), o, out);
}

void run_typicality(const Options& o, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const Prior prior = resolve_prior(o.prior_spec, *ch);
    const DensityOperator sbar = average_state(*ch, prior);
    const TypicalSubspace sub = typical_projector(sbar, o.n, o.delta, o.max_dim);
    const double mass = typicality_mass(sub);
    const double word_mass = expected_word_typical_mass(*ch, prior, o.n, o.delta);

    json doc;
    doc["n"] = o.n;
    doc["delta"] = o.delta;
    doc["avg_state_entropy"] = von_neumann_entropy(sbar);
    doc["mass"] = mass;
    if (sub.materialized()) doc["rank"] = sub.rank();
    doc["expected_word_mass"] = word_mass;
    std::ostringstream human;
    human << "avg_state_entropy = " << fixed6(von_neumann_entropy(sbar)) << "\n";
    human << "mass = " << fixed6(mass) << "\n";
    if (sub.materialized()) {
        human << "rank = " << sub.rank() << "\n";
    } else {
        human << "rank unavailable: dimension over the cap\n";
    }
    human << "expected_word_mass = " << fixed6(word_mass) << "\n";
    deliver(doc, human.str(), o, out);
}

void run_simulate(const Options& o, bool has_n_words, bool has_rate, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const Prior prior = resolve_prior(o.prior_spec, *ch);
    const SimulationReport report = monte_carlo_experiment(
        ch, prior, o.n, has_n_words ? std::optional<int>(o.n_words) : std::nullopt,
        has_rate ? std::optional<double>(o.rate) : std::nullopt, o.delta, o.epsilon,
        o.trials, o.seed, o.max_dim);

    if (!o.out_path.empty() || !o.format.empty()) {
        const ReportFormat f =
            o.format.empty() ? ReportFormat::Json : parse_report_format(o.format);
        const std::string text = f == ReportFormat::Json ? render_simulation_json(report)
                                                         : render_simulation_csv(report);
        if (!o.out_path.empty()) {
            write_text_atomic(text, o.out_path);
        } else {
            out << text;
        }
        return;
    }

    out << "n = " << report.n << ", N = " << report.N << ", delta = " << sig9(report.delta)
        << ", epsilon = " << sig9(report.epsilon) << ", seed = " << report.seed << "\n";
    for (const TrialRecord& rec : report.records) {
        out << "trial " << rec.index << ": p_err = " << fixed6(rec.p_err)
            << ", bound17 = " << sig9(rec.det_bound) << "\n";
    }
    out << "mean_p_err = " << fixed6(report.mean_p_err) << "\n";
    out << "mean_bound17 = " << sig9(report.mean_det_bound) << "\n";
    out << "bound18 = " << sig9(report.rc_bound) << "\n";
}

void run_bound(const Options& o, bool has_n_words, bool has_rate, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const Prior prior = resolve_prior(o.prior_spec, *ch);
    const int n_words = resolve_codebook_size(has_n_words, o.n_words, has_rate, o.rate, o.n);
    const std::uint64_t book_seed = derive_stream_seed(o.seed, 0);
    const Codebook book = sample_codebook(ch, prior, o.n, n_words, book_seed);
    const ErrorBoundBreakdown b = deterministic_error_bound(book, prior, o.delta, o.max_dim);
    const double rc = random_coding_bound(
        von_neumann_entropy(average_state(*ch, prior)),
        mean_letter_entropy(*ch, prior), o.n, n_words, o.delta, o.epsilon);

    json doc;
    doc["n"] = o.n;
    doc["N"] = n_words;
    doc["delta"] = o.delta;
    doc["epsilon"] = o.epsilon;
    doc["seed"] = o.seed;
    doc["codebook_seed"] = book_seed;
    doc["atypical_global_mean"] = mean_of(b.atypical_global);
    doc["cross_mean"] = mean_of(b.cross);
    doc["atypical_word_mean"] = mean_of(b.atypical_word);
    doc["bound17"] = b.total_bound;
    doc["bound18"] = rc;
    std::ostringstream human;
    human << "atypical_global_mean = " << sig9(mean_of(b.atypical_global)) << "\n";
    human << "cross_mean = " << sig9(mean_of(b.cross)) << "\n";
    human << "atypical_word_mean = " << sig9(mean_of(b.atypical_word)) << "\n";
    human << "bound17 = " << sig9(b.total_bound) << "\n";
    human << "bound18 = " << sig9(rc) << "\n";
    deliver(doc, human.str(), o, out);
}

void run_additivity(const Options& o, std::ostream& out) {
    const ChannelPtr first = parse_channel_file(o.channel_path);
    const ChannelPtr second = parse_channel_file(o.channel_b_path);
    const AdditivityReport r = additivity_check(*first, *second, 1e-7, 100000, o.max_dim);
    if (!r.product_result.converged) {
        throw ConvergenceError("product-channel optimization stalled with gap " +
                               sig9(r.product_result.optimality_gap));
    }
    json doc;
    doc["capacity_a"] = r.c_first;
    doc["capacity_b"] = r.c_second;
    doc["capacity_product"] = r.c_product;
    doc["defect"] = r.defect;
    std::ostringstream human;
    human << "capacity_a = " << fixed6(r.c_first) << "\n";
    human << "capacity_b = " << fixed6(r.c_second) << "\n";
    human << "capacity_product = " << fixed6(r.c_product) << "\n";
    human << "defect = " << sig9(r.defect) << "\n";
    deliver(doc, human.str(), o, out);
}

void run_crosscheck(const Options& o, bool has_n_words, bool has_rate, std::ostream& out) {
    const ChannelPtr ch = parse_channel_file(o.channel_path);
    const Prior prior = resolve_prior(o.prior_spec, *ch);
    const int n_words = resolve_codebook_size(has_n_words, o.n_words, has_rate, o.rate, o.n);
    const std::uint64_t book_seed = derive_stream_seed(o.seed, 0);
    const Codebook book = sample_codebook(ch, prior, o.n, n_words, book_seed);
    const GramCrossCheck r = gram_cross_check(book, prior, o.delta, o.max_dim);

    json doc;
    doc["n"] = o.n;
    doc["N"] = n_words;
    doc["delta"] = o.delta;
    doc["seed"] = o.seed;
    doc["codebook_seed"] = book_seed;
    doc["p_err_operator"] = r.p_err_operator;
    doc["p_err_gram"] = r.p_err_gram;
    doc["max_diff"] = r.max_diff;
    doc["trace_lhs"] = r.trace_check.lhs;
    doc["trace_rhs"] = r.trace_check.rhs;
    doc["trace_inequality_holds"] = r.trace_check.holds;
    std::ostringstream human;
    human << "p_err_operator = " << fixed6(r.p_err_operator) << "\n";
    human << "p_err_gram = " << fixed6(r.p_err_gram) << "\n";
    human << "max_diff = " << sig9(r.max_diff) << "\n";
    human << "trace_lhs = " << sig9(r.trace_check.lhs) << "\n";
    human << "trace_rhs = " << sig9(r.trace_check.rhs) << "\n";
    human << "trace_inequality_holds = " << (r.trace_check.holds ? "true" : "false") << "\n";
    deliver(doc, human.str(), o, out);
}

} // namespace

int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    try {
        Options o;
        o.max_dim = env_max_dim();

        CLI::App app{"classical-quantum channel capacity and decoding toolkit"};
        app.name("cqcap");
        app.require_subcommand(1);

        const auto add_channel = [&](CLI::App* cmd) {
            cmd->add_option("--channel", o.channel_path, "channel description file")
                ->required();
        };
        const auto add_prior = [&](CLI::App* cmd) {
            cmd->add_option("--prior", o.prior_spec,
                            "input distribution: uniform, optimal, or w1,w2,...");
        };
        const auto add_output = [&](CLI::App* cmd) {
            cmd->add_option("--out", o.out_path, "write the report to this file");
            cmd->add_option("--format", o.format, "report format: json or csv");
        };
        const auto add_max_dim = [&](CLI::App* cmd) {
            cmd->add_option("--max-dim", o.max_dim,
                            "largest product-space dimension to materialize");
        };

        CLI::App* info = app.add_subcommand("info", "validate a channel and list letters");
        add_channel(info);
        add_output(info);
        info->callback([&] { run_info(o, out); });

        CLI::App* holevo =
            app.add_subcommand("holevo", "entropy bound for a given prior");
        add_channel(holevo);
        add_prior(holevo);
        add_output(holevo);
        holevo->callback([&] { run_holevo(o, out); });

        CLI::App* capacity =
            app.add_subcommand("capacity", "maximize the entropy bound over priors");
        add_channel(capacity);
        add_output(capacity);
        capacity->callback([&] { run_capacity(o, out); });

        CLI::App* typicality =
            app.add_subcommand("typicality", "typical-subspace mass and rank");
        add_channel(typicality);
        add_prior(typicality);
        typicality->add_option("--n", o.n, "block length")->required();
        typicality->add_option("--delta", o.delta, "window half-width (bits)");
        add_max_dim(typicality);
        add_output(typicality);
        typicality->callback([&] { run_typicality(o, out); });

        CLI::App* simulate =
            app.add_subcommand("simulate", "Monte Carlo decoding experiment");
        add_channel(simulate);
        add_prior(simulate);
        simulate->add_option("--n", o.n, "block length")->required();
        CLI::Option* sim_words = simulate->add_option("--N", o.n_words, "codebook size");
        CLI::Option* sim_rate =
            simulate->add_option("--rate", o.rate, "code rate; N = ceil(2^(rate*n))");
        simulate->add_option("--delta", o.delta, "window half-width (bits)");
        simulate->add_option("--epsilon", o.epsilon, "analytic bound epsilon");
        simulate->add_option("--trials", o.trials, "number of codebooks to sample");
        simulate->add_option("--seed", o.seed, "master seed");
        add_max_dim(simulate);
        add_output(simulate);
        simulate->callback([&] {
            run_simulate(o, sim_words->count() > 0, sim_rate->count() > 0, out);
        });

        CLI::App* bound =
            app.add_subcommand("bound", "deterministic and analytic error bounds");
        add_channel(bound);
        add_prior(bound);
        bound->add_option("--n", o.n, "block length")->required();
        CLI::Option* bound_words = bound->add_option("--N", o.n_words, "codebook size");
        CLI::Option* bound_rate =
            bound->add_option("--rate", o.rate, "code rate; N = ceil(2^(rate*n))");
        bound->add_option("--delta", o.delta, "window half-width (bits)");
        bound->add_option("--epsilon", o.epsilon, "analytic bound epsilon");
        bound->add_option("--seed", o.seed, "master seed");
        add_max_dim(bound);
        add_output(bound);
        bound->callback([&] {
            run_bound(o, bound_words->count() > 0, bound_rate->count() > 0, out);
        });

        CLI::App* additivity =
            app.add_subcommand("additivity", "capacity additivity check for two channels");
        add_channel(additivity);
        additivity->add_option("--channel-b", o.channel_b_path, "second channel description file")
            ->required();
        add_max_dim(additivity);
        add_output(additivity);
        additivity->callback([&] { run_additivity(o, out); });

        CLI::App* crosscheck =
            app.add_subcommand("crosscheck", "Gram-matrix vs operator error probability");
        add_channel(crosscheck);
        add_prior(crosscheck);
        crosscheck->add_option("--n", o.n, "block length")->required();
        CLI::Option* cc_words = crosscheck->add_option("--N", o.n_words, "codebook size");
        CLI::Option* cc_rate =
            crosscheck->add_option("--rate", o.rate, "code rate; N = ceil(2^(rate*n))");
        crosscheck->add_option("--delta", o.delta, "window half-width (bits)");
        crosscheck->add_option("--seed", o.seed, "master seed");
        add_max_dim(crosscheck);
        add_output(crosscheck);
        crosscheck->callback([&] {
            run_crosscheck(o, cc_words->count() > 0, cc_rate->count() > 0, out);
        });

        std::reverse(args.begin(), args.end());
        try {
            app.parse(std::move(args));
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << "\n";
            return 1;
        }
        return 0;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cqcap
