#include "cqcap/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqcap/errors.hpp"

namespace cqcap {

namespace {

using json = nlohmann::ordered_json;

std::string sig9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

} // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ArgumentError("unknown report format '" + name + "' (expected json or csv)");
}

std::string render_simulation_json(const SimulationReport& report) {
    json doc;
    doc["n"] = report.n;
    doc["N"] = report.N;
    if (report.rate) doc["rate"] = *report.rate;
    doc["delta"] = report.delta;
    doc["epsilon"] = report.epsilon;
    doc["trials"] = report.trials;
    doc["seed"] = report.seed;
    doc["prior"] = report.prior_weights;
    doc["avg_state_entropy"] = report.avg_state_entropy;
    doc["mean_letter_entropy"] = report.mean_letter_entropy;
    doc["records"] = json::array();
    for (const TrialRecord& rec : report.records) {
        json row;
        row["trial"] = rec.index;
        row["seed"] = rec.seed;
        row["p_err"] = rec.p_err;
        row["bound17"] = rec.det_bound;
        doc["records"].push_back(std::move(row));
    }
    doc["mean_p_err"] = report.mean_p_err;
    doc["mean_bound17"] = report.mean_det_bound;
    doc["bound18"] = report.rc_bound;
    return doc.dump(2) + "\n";
}

std::string render_simulation_csv(const SimulationReport& report) {
    std::ostringstream out;
    out << "n,N,delta,trial,seed,p_err,bound17,bound18\n";
    for (const TrialRecord& rec : report.records) {
        out << report.n << ',' << report.N << ',' << sig9(report.delta) << ','
            << rec.index << ',' << rec.seed << ',' << sig9(rec.p_err) << ','
            << sig9(rec.det_bound) << ',' << sig9(report.rc_bound) << '\n';
    }
    return out.str();
}

void write_text_atomic(const std::string& text, const std::string& path) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + temp + "' for writing");
        out << text;
        out.flush();
        if (!out) {
            out.close();
            std::remove(temp.c_str());
            throw Error("write failed for '" + temp + "'");
        }
    }
    if (std::rename(temp.c_str(), path.c_str()) != 0) {
        std::remove(temp.c_str());
        throw Error("cannot move report into place at '" + path + "'");
    }
}

} // namespace cqcap
