#include "cqexp/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cqexp {

namespace {

using nlohmann::json;

Matrix parse_complex_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError(where + ": expected a non-empty array of rows");
    }
    const size_t rows = j.size();
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ValidationError(where + ": rows must be non-empty arrays");
    Matrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw ValidationError(where + ": ragged rows");
        }
        for (size_t c = 0; c < cols; ++c) {
            const json& e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ValidationError(where + ": entries must be [re, im] pairs");
            }
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json complex_matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ChannelSpec parse_channel_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("channel spec: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("channel spec: top level must be an object");

    ChannelSpec spec;
    if (!j.contains("d") || !j["d"].is_number_integer()) {
        throw ValidationError("channel spec: missing integer field 'd'");
    }
    spec.d = j["d"].get<std::int64_t>();
    if (spec.d < 2) throw ValidationError("channel spec: d must be at least 2");

    if (!j.contains("outputs") || !j["outputs"].is_array()) {
        throw ValidationError("channel spec: missing array field 'outputs'");
    }
    if (static_cast<std::int64_t>(j["outputs"].size()) != spec.d) {
        throw ValidationError("channel spec: need exactly d output matrices");
    }
    for (size_t z = 0; z < j["outputs"].size(); ++z) {
        spec.outputs.push_back(
            parse_complex_matrix(j["outputs"][z], "outputs[" + std::to_string(z) + "]"));
    }

    if (j.contains("input_distribution")) {
        if (!j["input_distribution"].is_array()) {
            throw ValidationError("channel spec: input_distribution must be an array");
        }
        std::vector<double> p;
        for (const json& e : j["input_distribution"]) {
            if (!e.is_number()) {
                throw ValidationError("channel spec: input_distribution entries must be numbers");
            }
            p.push_back(e.get<double>());
        }
        spec.input_distribution = std::move(p);
    }

    if (j.contains("symmetry")) {
        if (!j["symmetry"].is_array()) {
            throw ValidationError("channel spec: symmetry must be an array of matrices");
        }
        std::vector<Matrix> vs;
        for (size_t z = 0; z < j["symmetry"].size(); ++z) {
            vs.push_back(
                parse_complex_matrix(j["symmetry"][z], "symmetry[" + std::to_string(z) + "]"));
        }
        spec.symmetry = std::move(vs);
    }
    return spec;
}

ChannelSpec load_channel_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open channel spec file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_channel_spec(buffer.str());
}

std::string serialize_channel_spec(const ChannelSpec& spec) {
    json j;
    j["d"] = spec.d;
    if (spec.input_distribution) j["input_distribution"] = *spec.input_distribution;
    json outputs = json::array();
    for (const Matrix& m : spec.outputs) outputs.push_back(complex_matrix_to_json(m));
    j["outputs"] = std::move(outputs);
    if (spec.symmetry) {
        json vs = json::array();
        for (const Matrix& m : *spec.symmetry) vs.push_back(complex_matrix_to_json(m));
        j["symmetry"] = std::move(vs);
    }
    return j.dump(2) + "\n";
}

CQChannel to_channel(const ChannelSpec& spec, bool repair_normalization,
                     const Tolerances& tol) {
    std::vector<DensityMatrix> outputs;
    for (size_t z = 0; z < spec.outputs.size(); ++z) {
        Matrix m = spec.outputs[z];
        if (repair_normalization) {
            const double tr = m.trace().real();
            if (tr > 0.0) m /= tr;
        }
        try {
            outputs.emplace_back(std::move(m), tol);
        } catch (const ValidationError& e) {
            throw ValidationError("outputs[" + std::to_string(z) + "]: " + e.what());
        }
    }
    return CQChannel(std::move(outputs), tol);
}

ProbabilityVector input_distribution(const ChannelSpec& spec, bool repair_normalization,
                                     const Tolerances& tol) {
    if (!spec.input_distribution) {
        return ProbabilityVector::uniform(static_cast<int>(spec.d));
    }
    std::vector<double> p = *spec.input_distribution;
    if (static_cast<std::int64_t>(p.size()) != spec.d) {
        throw ValidationError("input_distribution length differs from d");
    }
    if (repair_normalization) {
        double sum = 0.0;
        for (double v : p) sum += std::max(v, 0.0);
        if (sum > 0.0) {
            for (double& v : p) v = std::max(v, 0.0) / sum;
        }
    }
    return ProbabilityVector(std::move(p), tol);
}

std::optional<GroupAction> spec_action(const ChannelSpec& spec) {
    if (!spec.symmetry) return std::nullopt;
    return GroupAction{*spec.symmetry};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    std::string s(buf);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string format_extended(const ExtendedReal& v) {
    return v.is_infinite() ? "inf" : format_double(v.value());
}

} // namespace cqexp
