#include "flowray/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace flowray::io {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "bad number '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw Error(ErrorCode::InvalidInput, "bad number '" + s + "'");
    return v;
}

std::string sidecar_path(const std::string& csv) {
    auto dot = csv.rfind(".csv");
    return (dot == std::string::npos ? csv : csv.substr(0, dot)) + ".json";
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << data;
}

json field_to_json(const PolyField& f) {
    json c = json::array();
    for (const auto& t : f.terms()) c.push_back({{"p", t.p}, {"q", t.q}, {"re", t.a.real()}, {"im", t.a.imag()}});
    json j = {{"coeffs", c}, {"zero_tol", f.zero_tol()}};
    if (!f.name.empty()) j["name"] = f.name;
    return j;
}

PolyField field_from_json(const json& j, bool check_nonvanishing) {
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw Error(ErrorCode::InvalidInput, "field JSON needs a 'coeffs' array");
    std::map<std::pair<int, int>, cplx> m;
    for (const auto& e : j["coeffs"]) {
        const int p = e.at("p").get<int>(), q = e.at("q").get<int>();
        if (p < 0 || q < 0) throw Error(ErrorCode::InvalidInput, "negative exponent in field file");
        if (m.count({p, q}))
            throw Error(ErrorCode::InvalidInput,
                        "duplicate coefficient (" + std::to_string(p) + "," + std::to_string(q) + ")");
        m[{p, q}] = cplx(e.value("re", 0.0), e.value("im", 0.0));
    }
    PolyField f(m, j.value("zero_tol", 0.0), check_nonvanishing);
    f.name = j.value("name", std::string());
    return f;
}

PolyField load_field(const std::string& path, bool check_nonvanishing) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, "field file '" + path + "': " + e.what());
    }
    try {
        return field_from_json(j, check_nonvanishing);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, "field file '" + path + "': " + e.what());
    }
}

json phantom_to_json(const Phantom& f) {
    json b = json::array();
    for (const auto& x : f.bumps)
        b.push_back({{"x", x.center.real()}, {"y", x.center.imag()}, {"amplitude", x.amplitude}, {"width", x.width}});
    return {{"name", f.name}, {"support_radius", f.support_radius}, {"bumps", b}};
}

Phantom phantom_from_json(const json& j) {
    Phantom f;
    f.name = j.value("name", std::string());
    f.support_radius = j.value("support_radius", 0.9);
    for (const auto& e : j.at("bumps")) {
        Bump b{{e.at("x").get<double>(), e.at("y").get<double>()}, e.at("amplitude").get<double>(),
               e.at("width").get<double>()};
        if (!(b.width > 0)) throw Error(ErrorCode::InvalidInput, "bump width must be positive");
        f.bumps.push_back(b);
    }
    return f;
}

Phantom load_phantom(const std::string& path) {
    try {
        return phantom_from_json(json::parse(read_text(path)));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, "phantom file '" + path + "': " + e.what());
    }
}

std::string sinogram_csv(const Sinogram& s) {
    std::string out = "theta\\s";
    for (double v : s.s) out += "," + g17(v);
    out += "\n";
    for (std::size_t j = 0; j < s.n_theta(); ++j) {
        out += g17(s.theta[j]);
        for (std::size_t m = 0; m < s.n_s(); ++m) out += "," + g17(s.at(j, m));
        out += "\n";
    }
    return out;
}

Sinogram sinogram_from_csv(const std::string& text) {
    Sinogram s;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "empty sinogram file");
    auto head = split_csv_line(line);
    if (head.size() < 2) throw Error(ErrorCode::InvalidInput, "sinogram header has no s-nodes");
    for (std::size_t i = 1; i < head.size(); ++i) s.s.push_back(parse_double(head[i]));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != head.size()) throw Error(ErrorCode::InvalidInput, "ragged sinogram row");
        s.theta.push_back(parse_double(cells[0]));
        for (std::size_t i = 1; i < cells.size(); ++i) s.values.push_back(parse_double(cells[i]));
    }
    return s;
}

void save_sinogram(const Sinogram& s, const std::string& base) {
    write_text(base + ".csv", sinogram_csv(s));
    json side = {{"n_theta", s.n_theta()}, {"n_s", s.n_s()}, {"meta", s.meta}};
    write_text(base + ".json", side.dump(2) + "\n");
}

Sinogram load_sinogram(const std::string& csv_path) {
    Sinogram s = sinogram_from_csv(read_text(csv_path));
    const std::string side = sidecar_path(csv_path);
    std::ifstream probe(side);
    if (probe) {
        try {
            json j = json::parse(read_text(side));
            if (j.contains("meta")) s.meta = j["meta"].get<std::map<std::string, std::string>>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidInput, "sinogram sidecar: " + std::string(e.what()));
        }
    }
    return s;
}

std::string grid_csv(const ScalarGrid& g) {
    std::string out;
    for (int r = 0; r < g.n; ++r) {
        for (int c = 0; c < g.n; ++c) {
            if (c) out += ",";
            const double v = g.at(r, c);
            out += std::isnan(v) ? "nan" : g17(v);
        }
        out += "\n";
    }
    return out;
}

json grid_sidecar(const ScalarGrid& g) {
    return {{"n", g.n}, {"mask_radius", g.mask_radius}, {"row_order", "y ascending"}, {"meta", g.meta}};
}

std::string grid_pgm(const ScalarGrid& g) {
    double lo = INFINITY, hi = -INFINITY;
    for (double v : g.values)
        if (!std::isnan(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) hi = lo + 1.0;
    std::string out = "P5\n" + std::to_string(g.n) + " " + std::to_string(g.n) + "\n255\n";
    for (int r = g.n - 1; r >= 0; --r)
        for (int c = 0; c < g.n; ++c) {
            const double v = g.at(r, c);
            const int px = std::isnan(v) ? 0 : int(std::lround(255.0 * (v - lo) / (hi - lo)));
            out.push_back(char(std::clamp(px, 0, 255)));
        }
    return out;
}

json to_json(const MembershipReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"z", cjson(x.z)}, {"condition", x.condition}, {"margin", x.margin}});
    return {{"in_G", r.in_G()},
            {"admissible", r.admissible()},
            {"global_ok", r.global_ok},
            {"no_rescaling", r.no_rescaling},
            {"local_exponents_ok", r.local_exponents_ok},
            {"coeff_ratio_ok", r.coeff_ratio_ok},
            {"nonvanishing_ok", r.nonvanishing_ok},
            {"n_samples", r.n_samples},
            {"violations", v}};
}

json to_json(const HnessReport& r) {
    json s = json::array();
    for (const auto& x : r.samples) {
        json z2 = json::array(), dz = json::array();
        for (cplx w : x.cond2_zeros) z2.push_back(cjson(w));
        for (cplx w : x.denominator_zeros) dz.push_back(cjson(w));
        s.push_back({{"z", cjson(x.z)},
                     {"k", x.k},
                     {"l", x.l},
                     {"cond1", verdict_name(x.cond1)},
                     {"cond1_margin", x.cond1_margin},
                     {"cond1_root_count", x.cond1_root_count},
                     {"cond1_agree", x.cond1_agree},
                     {"lambda_i", cjson(x.lambda_i)},
                     {"cond2", verdict_name(x.cond2)},
                     {"cond2_margin", x.cond2_margin},
                     {"cond2_zeros", z2},
                     {"cond2_agree", x.cond2_agree},
                     {"cond3", verdict_name(x.cond3)},
                     {"cond3_margin", x.cond3_margin},
                     {"denominator_zeros", dz},
                     {"cond4", verdict_name(x.cond4)},
                     {"note", x.note}});
    }
    return {{"rescaled", r.rescaled},
            {"aggregate", verdict_name(r.aggregate)},
            {"denominator_ok", r.denominator_ok},
            {"jensen_agree", r.jensen_agree},
            {"samples", s}};
}

json to_json(const ErrorReport& r) {
    return {{"rel_l2", r.rel_l2},
            {"sup_error", r.sup_error},
            {"max_imag_residual", r.max_imag_residual},
            {"no_root_pixels", r.no_root_pixels},
            {"empirical", r.empirical},
            {"hness_aggregate", r.hness_aggregate}};
}

json to_json(const StabilityReport& r) {
    json e = json::array();
    for (const auto& x : r.entries)
        e.push_back({{"epsilon", x.epsilon},
                     {"window", {x.k, x.l, x.N}},
                     {"sino_distance", x.sino_distance},
                     {"schwartz_delta", {{"sup", x.schwartz_sup}, {"d1", x.schwartz_d1}}},
                     {"recon_sup_gap", x.recon_sup_gap},
                     {"recon_sup_err", x.recon_sup_err},
                     {"runtime_s", x.runtime_s}});
    return {{"spec", r.spec_name},
            {"reference_window", {r.ref_k, r.ref_l, r.ref_N}},
            {"reference_recon_sup_err", r.ref_recon_sup_err},
            {"slope_inf", r.slope_inf},
            {"fitted_C", r.fitted_C},
            {"entries", e}};
}

std::string stability_csv(const StabilityReport& r) {
    std::set<std::string> keys;
    for (const auto& x : r.entries)
        for (const auto& [k, v] : x.sino_distance) keys.insert(k);
    std::string out = "epsilon,k,l,N";
    for (const auto& k : keys) out += ",d_" + k;
    out += ",schwartz_sup,schwartz_d1,recon_sup_gap,recon_sup_err\n";
    for (const auto& x : r.entries) {
        out += g17(x.epsilon) + "," + std::to_string(x.k) + "," + std::to_string(x.l) + "," + std::to_string(x.N);
        for (const auto& k : keys) {
            auto it = x.sino_distance.find(k);
            out += "," + (it == x.sino_distance.end() ? std::string("nan") : g17(it->second));
        }
        out += "," + g17(x.schwartz_sup) + "," + g17(x.schwartz_d1) + "," + g17(x.recon_sup_gap) + "," +
               g17(x.recon_sup_err) + "\n";
    }
    return out;
}

json to_json(const PlemeljReport& r) {
    json s = json::array();
    for (const auto& x : r.samples)
        s.push_back({{"z", cjson(x.z)},
                     {"r", x.r},
                     {"u_re", x.u.real()},
                     {"u_im", x.u.imag()},
                     {"rhs_re", x.rhs.real()},
                     {"rhs_im", x.rhs.imag()},
                     {"dev", x.dev},
                     {"rel_dev", x.rel_dev}});
    return {{"theta", r.theta},
            {"samples", s},
            {"r_list", r.r_list},
            {"max_rel_dev", r.max_rel_dev},
            {"orientation", r.orientation},
            {"trend_ok", r.trend_ok}};
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": expected key = value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace flowray::io
