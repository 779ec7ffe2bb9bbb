#include "cqcap/channel_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqcap/errors.hpp"

namespace cqcap {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& detail) {
    throw ValidationError("channel file '" + origin + "': " + detail);
}

double number_at(const json& entry, const std::string& origin, const std::string& where) {
    if (!entry.is_number()) fail(origin, where + " is not a number");
    return entry.get<double>();
}

Matrix parse_matrix(const json& rows, int dim, const std::string& origin,
                    const std::string& where) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
        std::ostringstream msg;
        msg << where << " must be an array of " << dim << " rows";
        fail(origin, msg.str());
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            std::ostringstream msg;
            msg << where << " row " << r << " must have " << dim << " entries";
            fail(origin, msg.str());
        }
        for (int c = 0; c < dim; ++c) {
            const json& cell = row[static_cast<size_t>(c)];
            if (!cell.is_array() || cell.size() != 2) {
                std::ostringstream msg;
                msg << where << " entry (" << r << "," << c << ") must be an [re, im] pair";
                fail(origin, msg.str());
            }
            std::ostringstream cellname;
            cellname << where << " entry (" << r << "," << c << ")";
            m(r, c) = Complex(number_at(cell[0], origin, cellname.str()),
                              number_at(cell[1], origin, cellname.str()));
        }
    }
    return m;
}

} // namespace

ChannelPtr parse_channel_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("malformed syntax: ") + e.what());
    }
    if (!doc.is_object()) fail(origin, "top level must be an object");
    if (!doc.contains("dim")) fail(origin, "missing field 'dim'");
    if (!doc["dim"].is_number_integer()) fail(origin, "'dim' must be an integer");
    const int dim = doc["dim"].get<int>();
    if (dim < 1) fail(origin, "'dim' must be >= 1");
    if (!doc.contains("letters") || !doc["letters"].is_array() || doc["letters"].empty()) {
        fail(origin, "'letters' must be a non-empty array");
    }

    std::vector<Matrix> states;
    std::vector<std::string> labels;
    int index = 0;
    for (const json& letter : doc["letters"]) {
        std::ostringstream where;
        where << "letter " << index;
        if (!letter.is_object()) fail(origin, where.str() + " must be an object");
        std::string label = std::to_string(index);
        if (letter.contains("label")) {
            if (!letter["label"].is_string()) {
                fail(origin, where.str() + ": 'label' must be a string");
            }
            label = letter["label"].get<std::string>();
            where << " ('" << label << "')";
        }
        if (!letter.contains("matrix")) fail(origin, where.str() + ": missing 'matrix'");
        states.push_back(parse_matrix(letter["matrix"], dim, origin, where.str() + ": matrix"));
        labels.push_back(label);
        ++index;
    }

    try {
        return std::make_shared<CQChannel>(
            CQChannel::validated(std::move(states), std::move(labels)));
    } catch (const Error& e) {
        fail(origin, e.what());
    }
}

ChannelPtr parse_channel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("channel file '" + path + "': cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_channel_text(buffer.str(), path);
}

std::string emit_channel_text(const CQChannel& channel) {
    json doc;
    doc["dim"] = channel.dim();
    doc["letters"] = json::array();
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        json letter;
        letter["label"] = channel.label(i);
        json rows = json::array();
        const Matrix& m = channel.state(i).matrix();
        for (int r = 0; r < channel.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < channel.dim(); ++c) {
                row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
            }
            rows.push_back(std::move(row));
        }
        letter["matrix"] = std::move(rows);
        doc["letters"].push_back(std::move(letter));
    }
    return doc.dump(2) + "\n";
}

void write_channel_file(const CQChannel& channel, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("channel file '" + path + "': cannot open for writing");
    out << emit_channel_text(channel);
    if (!out) throw ValidationError("channel file '" + path + "': write failed");
}

} // namespace cqcap
