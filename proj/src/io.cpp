#include "heron/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace heron::io {

namespace {

json complex_entries(const Vec& v) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        entries.push_back({v[i].real(), v[i].imag()});
    return entries;
}

Complex complex_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex entry must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

int read_dim(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError("missing integer \"dim\"");
    const int dim = j["dim"].get<int>();
    if (dim < 1) throw ParseError("\"dim\" must be positive");
    return dim;
}

// %.17g keeps doubles round-trippable and the output byte-stable.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json to_json(const FockVector& v) {
    return {{"dim", v.dim()}, {"entries", complex_entries(v.amps)}};
}

json to_json(const DensityOperator& rho) {
    const int d = rho.dim();
    Vec flat(static_cast<Eigen::Index>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) flat[static_cast<Eigen::Index>(r) * d + c] = rho.mat(r, c);
    return {{"dim", d}, {"entries", complex_entries(flat)}};
}

FockVector fock_from_json(const json& j) {
    const int dim = read_dim(j);
    const auto& entries = j.at("entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != dim)
        throw ParseError("state vector needs exactly dim entries");
    FockVector v(dim);
    for (int n = 0; n < dim; ++n) v.amps[n] = complex_from(entries[n]);
    return v;
}

DensityOperator density_from_json(const json& j) {
    const int dim = read_dim(j);
    const auto& entries = j.at("entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(dim) * dim)
        throw ParseError("density operator needs exactly dim*dim entries");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = complex_from(entries[static_cast<std::size_t>(r) * dim + c]);
    return DensityOperator(std::move(m));
}

json to_json(const HeraldConfig& config) {
    json betas = json::array();
    for (const Complex& b : config.betas)
        betas.push_back({b.real(), b.imag()});
    return {{"q", config.q},
            {"betas", betas},
            {"signal_dim", config.signal_dim},
            {"idler_dim", config.idler_dim},
            {"eta_signal", config.eta_signal},
            {"eta_detector", config.eta_detector},
            {"dark_prob", config.dark_prob}};
}

HeraldConfig herald_config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("herald config must be an object");
    HeraldConfig config;
    try {
        config.q = j.at("q").get<double>();
        const auto& betas = j.at("betas");
        if (!betas.is_array() || betas.size() != 3)
            throw ParseError("\"betas\" must hold three [re, im] pairs");
        for (int k = 0; k < 3; ++k) config.betas[k] = complex_from(betas[k]);
        if (j.contains("signal_dim")) config.signal_dim = j["signal_dim"].get<int>();
        if (j.contains("idler_dim")) config.idler_dim = j["idler_dim"].get<int>();
        if (j.contains("eta_signal")) config.eta_signal = j["eta_signal"].get<double>();
        if (j.contains("eta_detector"))
            config.eta_detector = j["eta_detector"].get<double>();
        if (j.contains("dark_prob")) config.dark_prob = j["dark_prob"].get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad herald config: ") + e.what());
    }
    config.validate();
    return config;
}

json to_json(const HeraldOutcome& outcome) {
    json j = to_json(outcome.rho);
    j["probability"] = outcome.probability;
    j["truncation_warning"] = outcome.truncation_warning;
    j["max_tail_population"] = outcome.max_tail_population;
    return j;
}

json to_json(const DisplacementRecipe& recipe) {
    json betas = json::array();
    for (const Complex& b : recipe.betas)
        betas.push_back({b.real(), b.imag()});
    return {{"q", recipe.q}, {"betas", betas}};
}

DisplacementRecipe recipe_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("recipe must be an object");
    DisplacementRecipe recipe;
    try {
        recipe.q = j.at("q").get<double>();
        const auto& betas = j.at("betas");
        if (!betas.is_array() || betas.size() != 3)
            throw ParseError("\"betas\" must hold three [re, im] pairs");
        for (int k = 0; k < 3; ++k) recipe.betas[k] = complex_from(betas[k]);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad recipe: ") + e.what());
    }
    return recipe;
}

json to_json(const WignerGrid& grid) {
    return {{"x_min", grid.spec.x_min}, {"x_max", grid.spec.x_max},
            {"p_min", grid.spec.p_min}, {"p_max", grid.spec.p_max},
            {"nx", grid.spec.nx},       {"np", grid.spec.np},
            {"values", grid.values}};
}

void write_grid_csv(const WignerGrid& grid, std::ostream& out) {
    out << "x,p,w\n";
    for (int j = 0; j < grid.spec.np; ++j)
        for (int i = 0; i < grid.spec.nx; ++i)
            out << format_double(grid.x_at(i)) << ',' << format_double(grid.p_at(j))
                << ',' << format_double(grid.value_at(i, j)) << '\n';
}

json records_to_json(const std::vector<QuadratureRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back({{"theta", r.theta}, {"x", r.x}});
    return {{"records", arr}};
}

std::vector<QuadratureRecord> records_from_json(const json& j) {
    if (!j.is_object() || !j.contains("records") || !j["records"].is_array())
        throw ParseError("expected {\"records\": [...]}");
    std::vector<QuadratureRecord> records;
    for (const auto& r : j["records"]) {
        if (!r.contains("theta") || !r.contains("x"))
            throw ParseError("record needs \"theta\" and \"x\"");
        records.push_back({r["theta"].get<double>(), r["x"].get<double>()});
    }
    return records;
}

void write_records_csv(const std::vector<QuadratureRecord>& records,
                       std::ostream& out) {
    out << "theta,x\n";
    for (const auto& r : records)
        out << format_double(r.theta) << ',' << format_double(r.x) << '\n';
}

std::vector<QuadratureRecord> read_records_csv(std::istream& in) {
    std::vector<QuadratureRecord> records;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("theta", 0) == 0) continue;  // header
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw ParseError("bad record line: " + line);
        try {
            records.push_back({std::stod(a), std::stod(b)});
        } catch (const std::exception&) {
            throw ParseError("bad record line: " + line);
        }
    }
    return records;
}

json to_json(const TomoResult& result) {
    return {{"iterations", result.iterations},
            {"log_likelihood", result.log_likelihood},
            {"converged", result.converged}};
}

json to_json(const MetricsReport& report) {
    json pops = json::array();
    for (Eigen::Index n = 0; n < report.populations.size(); ++n)
        pops.push_back(report.populations[n]);
    return {{"populations", pops},
            {"purity", report.purity},
            {"mean_photons", report.mean_photons},
            {"population_above_three", report.population_above_three}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

namespace {

bool type_matches(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "boolean") return doc.is_boolean();
    if (type == "integer") return doc.is_number_integer();
    if (type == "number") return doc.is_number();
    return false;
}

void validate_node(const json& doc, const json& schema, const std::string& where,
                   std::vector<std::string>& problems) {
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        if (!type_matches(doc, type)) {
            problems.push_back(where + ": expected " + type);
            return;
        }
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!doc.contains(key.get<std::string>()))
                    problems.push_back(where + ": missing \"" + key.get<std::string>() + "\"");
        const json props =
            schema.contains("properties") ? schema["properties"] : json::object();
        for (const auto& [key, value] : doc.items()) {
            if (props.contains(key)) {
                validate_node(value, props[key], where + "." + key, problems);
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                problems.push_back(where + ": unexpected \"" + key + "\"");
            }
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
            problems.push_back(where + ": fewer than minItems entries");
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>())
            problems.push_back(where + ": more than maxItems entries");
        if (schema.contains("items")) {
            std::size_t i = 0;
            for (const auto& item : doc) {
                validate_node(item, schema["items"],
                              where + "[" + std::to_string(i) + "]", problems);
                ++i;
            }
        }
    }
}

}  // namespace

std::vector<std::string> validate_schema(const json& doc, const json& schema) {
    std::vector<std::string> problems;
    validate_node(doc, schema, "$", problems);
    return problems;
}

}  // namespace heron::io
