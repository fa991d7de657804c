#include "sst/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sst {

using nlohmann::json;

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& field, const std::filesystem::path& path, std::size_t line) {
    const std::string t = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + t + "'");
    }
    return value;
}

json stat_json(const Stat& s) { return json{{"mean", s.mean}, {"sd", s.sd}}; }

template <class T>
std::vector<T> get_list(const json& doc, const char* key) {
    try {
        return doc.at(key).get<std::vector<T>>();
    } catch (const json::exception& e) {
        throw InputError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const double v = parse_number(line, path, lineno);
        if (!std::isfinite(v)) throw InputError(path.string() + ": non-finite value");
        values.push_back(v);
    }
    if (values.empty()) throw InputError(path.string() + ": no values");
    return values;
}

void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& values) {
    std::string text;
    for (double v : values) text += format_double(v) + "\n";
    write_text(path, text);
}

OrthogonalDesign read_design_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::size_t count = 0;
        while (std::getline(fields, field, ',')) {
            data.push_back(parse_number(field, path, lineno));
            ++count;
        }
        if (rows == 0) cols = count;
        if (count != cols) throw InputError(path.string() + ": ragged row at line " + std::to_string(lineno));
        ++rows;
    }
    if (rows == 0 || rows != cols) throw InputError(path.string() + ": design must be a non-empty square matrix");
    try {
        return OrthogonalDesign::from_rows(rows, std::move(data));
    } catch (const std::invalid_argument& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_design_csv(const std::filesystem::path& path, const OrthogonalDesign& design) {
    std::string text;
    const std::size_t n = design.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) text += ',';
            text += format_double(design.at(i, j));
        }
        text += '\n';
    }
    write_text(path, text);
}

json to_json(const ExperimentConfig& c) {
    json methods = json::array();
    for (Family f : c.methods) methods.push_back(std::string(family_name(f)));
    json coeffs = json::array();
    for (const auto& [index, value] : c.true_coeffs) coeffs.push_back(json::array({index, value}));
    json doc{
        {"n", c.n},
        {"sigma2", c.sigma2},
        {"true_coeffs", coeffs},
        {"methods", methods},
        {"lambda_grid", c.lambda_grid},
        {"gamma_grid", c.gamma_grid},
        {"m_grid", c.m_grid},
        {"al_gamma_grid", c.al_gamma_grid},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"sigma2_mode", std::string(sigma2_mode_name(c.sigma2_mode))},
        {"zero_index_set", c.zero_index_set},
    };
    doc["preset"] = c.preset.empty() ? json(nullptr) : json(c.preset);
    return doc;
}

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw InputError("config must be a JSON object");
    ExperimentConfig c;
    try {
        if (doc.contains("preset") && !doc["preset"].is_null()) {
            c = preset_config(doc["preset"].get<std::string>());
        }
        if (doc.contains("n")) c.n = doc["n"].get<std::size_t>();
        if (doc.contains("sigma2")) c.sigma2 = doc["sigma2"].get<double>();
        if (doc.contains("true_coeffs")) {
            c.true_coeffs.clear();
            for (const auto& pair : doc["true_coeffs"]) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw InputError("true_coeffs entries must be [index, value] pairs");
                }
                c.true_coeffs.emplace_back(pair[0].get<std::size_t>(), pair[1].get<double>());
            }
        }
        if (doc.contains("methods")) {
            c.methods.clear();
            for (const auto& name : get_list<std::string>(doc, "methods")) c.methods.push_back(parse_family(name));
        }
        if (doc.contains("lambda_grid")) c.lambda_grid = get_list<double>(doc, "lambda_grid");
        if (doc.contains("gamma_grid")) c.gamma_grid = get_list<double>(doc, "gamma_grid");
        if (doc.contains("m_grid")) c.m_grid = get_list<double>(doc, "m_grid");
        if (doc.contains("al_gamma_grid")) c.al_gamma_grid = get_list<double>(doc, "al_gamma_grid");
        if (doc.contains("trials")) c.trials = doc["trials"].get<std::size_t>();
        if (doc.contains("master_seed")) c.master_seed = doc["master_seed"].get<std::uint64_t>();
        if (doc.contains("sigma2_mode")) c.sigma2_mode = parse_sigma2_mode(doc["sigma2_mode"].get<std::string>());
        if (doc.contains("zero_index_set")) c.zero_index_set = get_list<std::size_t>(doc, "zero_index_set");
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

json to_json(const SureReport& r) {
    return json{{"residual", r.residual},
                {"sigma2", r.sigma2},
                {"dof", {{"d1", r.dof.d1}, {"d2", r.dof.d2}, {"total", r.dof.total}}},
                {"sure", r.sure},
                {"n", r.n}};
}

json to_json(const McSummary& s) {
    json doc;
    doc["config"] = to_json(s.config);
    doc["trials"] = s.trials;
    doc["seed"] = s.config.master_seed;
    if (!s.curves.empty()) {
        json sweep;
        sweep["lambda"] = s.lambdas;
        json d1 = json::array();
        json d2 = json::array();
        for (const auto& t : s.ht_theory) {
            d1.push_back(t.d1);
            d2.push_back(t.d2);
        }
        sweep["ht_theory"] = {{"d1", d1}, {"d2", d2}};
        json methods = json::array();
        for (const auto& curve : s.curves) {
            json points = json::array();
            for (const auto& p : curve.points) {
                json jp{{"lambda", p.lambda},
                        {"risk", stat_json(p.risk)},
                        {"k_hat", stat_json(p.k_hat)},
                        {"empirical_dof", stat_json(p.empirical_dof)}};
                if (p.has_sure) {
                    jp["sure"] = stat_json(p.sure);
                    jp["dof1"] = stat_json(p.dof1);
                    jp["dof2"] = stat_json(p.dof2);
                    jp["dof_total"] = stat_json(p.dof_total);
                    jp["sure_minus_risk"] = stat_json(p.sure_minus_risk);
                    jp["empirical_minus_formula"] = stat_json(p.empirical_minus_formula);
                } else {
                    jp["sure"] = nullptr;
                }
                points.push_back(std::move(jp));
            }
            methods.push_back({{"label", curve.method.label},
                               {"family", std::string(family_name(curve.method.family))},
                               {"hyper", curve.method.hyper},
                               {"points", points}});
        }
        sweep["methods"] = methods;
        doc["sweep"] = sweep;
    }
    if (!s.selection.empty()) {
        json rows = json::array();
        for (const auto& m : s.selection) {
            rows.push_back({{"method", std::string(family_name(m.family))},
                            {"risk", stat_json(m.risk)},
                            {"k_hat", stat_json(m.k_hat)},
                            {"serr", stat_json(m.serr)},
                            {"lambda", stat_json(m.lambda)},
                            {"sigma2_hat", stat_json(m.sigma2_hat)}});
        }
        doc["selection"] = rows;
    }
    return doc;
}

std::string sweep_csv(const McSummary& s) {
    std::string out = "lambda,method,risk_mean,risk_sd,sure_mean,dof1_mean,dof2_mean,ht_d1_theory,ht_d2_theory\n";
    const double nan = std::nan("");
    for (std::size_t j = 0; j < s.lambdas.size(); ++j) {
        for (const auto& curve : s.curves) {
            const CurvePoint& p = curve.points[j];
            out += format_double(s.lambdas[j]) + ',' + curve.method.label + ',' +
                   format_double(p.risk.mean) + ',' + format_double(p.risk.sd) + ',' +
                   format_double(p.has_sure ? p.sure.mean : nan) + ',' +
                   format_double(p.has_sure ? p.dof1.mean : nan) + ',' +
                   format_double(p.has_sure ? p.dof2.mean : nan) + ',' +
                   format_double(s.ht_theory[j].d1) + ',' + format_double(s.ht_theory[j].d2) + '\n';
        }
    }
    return out;
}

std::string selection_csv(const McSummary& s) {
    std::string out = "method,risk_mean,risk_sd,khat_mean,khat_sd,serr_mean,serr_sd\n";
    for (const auto& m : s.selection) {
        out += std::string(family_name(m.family)) + ',' + format_double(m.risk.mean) + ',' +
               format_double(m.risk.sd) + ',' + format_double(m.k_hat.mean) + ',' +
               format_double(m.k_hat.sd) + ',' + format_double(m.serr.mean) + ',' +
               format_double(m.serr.sd) + '\n';
    }
    return out;
}

}  // namespace sst
