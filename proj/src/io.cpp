#include "subspectra/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "subspectra/errors.hpp"

namespace subspectra {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(const std::string& text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) throw ConfigError("not a number: '" + text + "'");
    return v;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

const std::string* CsvTable::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return &v;
    return nullptr;
}

double CsvTable::real(std::size_t row, const std::string& col) const {
    const int c = column(col);
    if (c < 0) throw ConfigError("missing column '" + col + "'");
    return parse_real(rows.at(row).at(c));
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& t) {
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) t.meta.emplace_back(line.substr(1), "");
            else t.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        auto cells = split(line, ',');
        if (!header) {
            t.columns = cells;
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) throw ConfigError("CSV row width differs from header");
        t.rows.push_back(std::move(cells));
    }
    if (!header) throw ConfigError("CSV has no header line");
    return t;
}

SpectrumClass parse_spectrum_class(const std::string& s) {
    for (auto c : {SpectrumClass::Spectrum, SpectrumClass::PseudoSpectrum, SpectrumClass::OutsideBranch})
        if (s == to_string(c)) return c;
    throw ConfigError("unknown spectrum class '" + s + "'");
}

PointSource parse_point_source(const std::string& s) {
    for (auto c : {PointSource::polyroot, PointSource::continuation, PointSource::asymptotic,
                   PointSource::scaled_curve})
        if (s == to_string(c)) return c;
    throw ConfigError("unknown point source '" + s + "'");
}

CsvTable scan_to_csv(const SpectrumScan& s) {
    CsvTable t;
    t.meta = s.parameters;
    t.meta.emplace_back("lambda_sup", format_real(s.lambda_sup));
    t.meta.emplace_back("grid_size", std::to_string(s.grid.size()));
    for (const auto& e : s.errors) t.meta.emplace_back("error", "q=" + format_real(e.q) + " " + e.message);
    for (const auto& w : s.warnings) t.meta.emplace_back("warning", w);
    for (const auto& b : s.breaks)
        t.meta.emplace_back("break", "q=" + format_real(b.q) + " s=" + format_real(b.s.real()) + "," +
                                         format_real(b.s.imag()) + " " + b.reason);
    t.columns = {"q", "re_s", "im_s", "class", "multiplicity", "source"};
    for (const auto& p : s.points)
        t.rows.push_back({format_real(p.q), format_real(p.s.real()), format_real(p.s.imag()), to_string(p.cls),
                          std::to_string(p.multiplicity), to_string(p.source)});
    return t;
}

SpectrumScan scan_from_csv(const CsvTable& t) {
    SpectrumScan s;
    for (const auto& [k, v] : t.meta) {
        if (k == "model") s.model = parse_model_kind(v);
        else if (k == "lambda_sup") s.lambda_sup = parse_real(v);
        else if (k == "warning") s.warnings.push_back(v);
        else if (k != "error" && k != "break" && k != "grid_size") s.parameters.emplace_back(k, v);
    }
    for (const char* c : {"q", "re_s", "im_s", "class", "multiplicity", "source"})
        if (t.column(c) < 0) throw ConfigError(std::string("scan CSV lacks column '") + c + "'");
    const int cc = t.column("class"), cm = t.column("multiplicity"), cs = t.column("source");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        SpectrumPoint p;
        p.q = t.real(i, "q");
        p.s = cplx(t.real(i, "re_s"), t.real(i, "im_s"));
        p.cls = parse_spectrum_class(t.rows[i][cc]);
        p.multiplicity = std::stoi(t.rows[i][cm]);
        p.source = parse_point_source(t.rows[i][cs]);
        if (s.grid.empty() || s.grid.back() != p.q) s.grid.push_back(p.q);
        s.points.push_back(p);
    }
    return s;
}

nlohmann::json json_real(double x) {
    if (std::isfinite(x)) return x;
    return format_real(x);
}

double real_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_real(j.get<std::string>());
    throw ConfigError("expected a real number in JSON");
}

nlohmann::json json_complex(cplx z) { return nlohmann::json::array({json_real(z.real()), json_real(z.imag())}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected [re, im] in JSON");
    return {real_from_json(j[0]), real_from_json(j[1])};
}

nlohmann::json thresholds_to_json(const ThresholdSetA& t) {
    nlohmann::json j;
    j["model"] = "ss-system";
    j["delta"] = json_real(t.delta);
    j["theta1"] = json_real(t.theta1);
    j["d_c"] = {{"value", json_real(t.d_c)}, {"other_root", json_real(t.d_c_minus)},
                {"equation", "regular-threshold-quadratic"}};
    j["d_delta_inf"] = {{"value", json_real(t.d_delta_inf)}, {"other_root", json_real(t.d_delta_inf_minus)},
                        {"equation", "large-wavenumber-instability-quadratic"}};
    j["d_tilde_delta_inf"] = {{"value", json_real(t.d_tilde)}, {"case", t.d_tilde_case},
                              {"equation", "large-wavenumber-pseudospectrum-quadratic"}};
    j["delta_thresholds"] = {{"half", json_real(t.delta_half)},
                             {"full", json_real(t.delta_full)},
                             {"large_wavenumber", json_real(t.delta_inf)}};
    return j;
}

nlohmann::json thresholds_to_json(const ThresholdSetB& t, double d_c) {
    nlohmann::json j;
    j["model"] = "ca-system";
    j["gamma"] = json_real(t.gamma);
    j["case"] = to_string(t.tag);
    j["d_c"] = {{"value", json_real(d_c)}, {"equation", "regular-threshold-quadratic"}};
    j["gamma_min"] = {{"value", json_real(t.gamma_min)},
                      {"equation", t.tag == ReactionCase::cc ? "minimal-exponent-conjugate-pair"
                                                              : "minimal-exponent-negative-real"}};
    j["C"] = nlohmann::json::array({nlohmann::json::array({json_real(t.C(0, 0)), json_real(t.C(0, 1))}),
                                    nlohmann::json::array({json_real(t.C(1, 0)), json_real(t.C(1, 1))})});
    j["det_C"] = json_real(t.det_c);
    j["betas"] = {{"beta1_const", json_real(t.beta1_const)},
                  {"beta1_slope", json_real(t.beta1_slope)},
                  {"beta2", json_real(t.beta2)},
                  {"beta3", json_real(t.beta3)},
                  {"equation", "near-origin-quadratic-coefficients"}};
    auto opt = [](const std::optional<double>& v) { return v ? json_real(*v) : nlohmann::json(nullptr); };
    j["d_gamma"] = {{"value", opt(t.d_gamma)}, {"other_root", opt(t.d_gamma_minus)},
                    {"equation", "near-origin-threshold-quadratic"}};
    j["q_gamma"] = {{"value", t.q_gamma_sq ? json_real(std::sqrt(*t.q_gamma_sq)) : nlohmann::json(nullptr)},
                    {"q_gamma_sq", opt(t.q_gamma_sq)},
                    {"equation", "near-origin-critical-wavenumber"}};
    if (!t.reason.empty()) j["reason"] = t.reason;
    return j;
}

nlohmann::json decay_to_json(const DecayEstimate& e) {
    nlohmann::json j;
    j["kind"] = to_string(e.kind);
    j["s_star"] = json_complex(e.s_star);
    j["poly_power"] = json_real(e.poly_power);
    j["coefficient"] = nlohmann::json::array();
    for (int c = 0; c < e.components; ++c) j["coefficient"].push_back(json_complex(e.coefficient[c]));
    j["hypothesis_ok"] = e.hypothesis_ok;
    j["notes"] = e.notes;
    return j;
}

nlohmann::json convergence_to_json(const std::vector<ConvergenceEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["gamma"] = e.gamma;
        j["distance"] = e.distance ? json_real(*e.distance) : nlohmann::json(nullptr);
        j["worst_q"] = json_real(e.worst_q);
        j["worst_s"] = json_complex(e.worst_s);
        if (!e.note.empty()) j["note"] = e.note;
        arr.push_back(j);
    }
    return arr;
}

CsvTable series_to_csv(const GLSeries& s) {
    CsvTable t;
    t.meta.emplace_back("step", format_real(s.step));
    t.meta.emplace_back("richardson_error", format_real(s.richardson_error));
    for (int c = 0; c < s.components; ++c)
        t.meta.emplace_back("shift" + std::to_string(c + 1),
                            format_real(s.shift[c].real()) + "," + format_real(s.shift[c].imag()));
    t.columns = {"t", "abs_u1"};
    if (s.components == 2) t.columns.push_back("abs_u2");
    t.columns.push_back("log_abs_u1");
    if (s.components == 2) t.columns.push_back("log_abs_u2");
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        std::vector<std::string> r{format_real(s.t[i])};
        for (int c = 0; c < s.components; ++c) r.push_back(format_real(std::exp(s.log_abs(i, c))));
        for (int c = 0; c < s.components; ++c) r.push_back(format_real(s.log_abs(i, c)));
        t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace subspectra
