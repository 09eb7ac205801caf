#include "flowray/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "flowray/approx.hpp"
#include "flowray/io.hpp"
#include "flowray/oracle.hpp"

#ifndef FLOWRAY_VERSION
#define FLOWRAY_VERSION "dev"
#endif

namespace flowray::cli {

namespace fs = std::filesystem;
using io::json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

void validate_config(const RunConfig& c) {
    auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
    if (c.n <= 0) bad("--n must be positive");
    if (c.n_theta <= 0 || (c.n_theta & (c.n_theta - 1))) bad("--ntheta must be a power of two");
    if (c.n_s <= 0 || c.n_s % 2 == 0) bad("--ns must be positive and odd");
    if (!(c.mask_radius > 0 && c.mask_radius < 1)) bad("--mask must lie in (0, 1)");
    if (c.threads < 0) bad("--threads must be >= 0");
    if (c.quad_n <= 0) bad("--quad-n must be positive");
    if (c.samples <= 0) bad("--samples must be positive");
    if (c.n_curves < 0 || c.lookup_n < 0) bad("--curves and --lookup must be >= 0");
    if (!(c.rtol > 0 && c.atol > 0)) bad("tolerances must be positive");
    for (double e : c.eps)
        if (!(e > 0)) bad("--eps values must be positive");
    for (double q : c.q)
        if (!(q > 0)) bad("--q values must be positive");
    parse_labeling(c.labeling);
    parse_weight_mode(c.weight);
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Manifest {
public:
    Manifest(std::string dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {}

    void input(const std::string& role, const std::string& path) {
        inputs_.push_back({{"role", role}, {"path", path}, {"sha256", sha256_hex(io::read_text(path))}});
    }
    void builtin(const std::string& role, const std::string& name) {
        inputs_.push_back({{"role", role}, {"builtin", name}});
    }
    void write(const std::string& name, const std::string& data) {
        io::write_text((fs::path(dir_) / name).string(), data);
        outputs_.push_back({{"file", name}, {"sha256", sha256_hex(data)}});
    }
    void time(const std::string& k, double s) { timings_[k] = s; }
    void param(const std::string& k, json v) { params_[k] = std::move(v); }
    void finish() {
        json m = {{"tool", "flowray"},  {"version", FLOWRAY_VERSION}, {"command", command_},
                  {"params", params_}, {"inputs", inputs_},           {"outputs", outputs_},
                  {"timings", timings_}};
        io::write_text((fs::path(dir_) / "manifest.json").string(), m.dump(2) + "\n");
    }

private:
    std::string dir_, command_;
    json inputs_ = json::array(), outputs_ = json::array(), params_ = json::object();
    std::map<std::string, double> timings_;
};

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json run_params(const RunConfig& c) {
    return {{"n", c.n},           {"n_theta", c.n_theta},   {"n_s", c.n_s},         {"mask", c.mask_radius},
            {"threads", c.threads}, {"labeling", c.labeling}, {"weight", c.weight},   {"curves", c.n_curves},
            {"lookup", c.lookup_n}, {"seed", c.seed},         {"quad_n", c.quad_n}};
}

Phantom get_phantom(const RunConfig& c, Manifest& m) {
    if (c.phantom.empty()) {
        m.builtin("phantom", "three_bump");
        return three_bump_phantom();
    }
    m.input("phantom", c.phantom);
    return io::load_phantom(c.phantom);
}

PolyField get_field(const RunConfig& c, Manifest& m, bool check_nonvanishing = true) {
    if (c.field.empty()) throw UsageError("--field is required");
    m.input("field", c.field);
    return io::load_field(c.field, check_nonvanishing);
}

ChartOptions chart_options(const RunConfig& c) {
    ChartOptions co;
    co.labeling = parse_labeling(c.labeling);
    co.n_curves = c.n_curves;
    co.lookup_n = c.lookup_n > 0 ? c.lookup_n : 2 * c.n + 1;
    co.threads = c.threads;
    return co;
}

void emit_grid(Manifest& m, const std::string& stem, const ScalarGrid& g) {
    m.write(stem + ".csv", io::grid_csv(g));
    m.write(stem + ".json", io::grid_sidecar(g).dump(2) + "\n");
    m.write(stem + ".pgm", io::grid_pgm(g));
}

std::vector<cplx> audit_samples(const RunConfig& c) { return disc_samples(c.samples, c.mask_radius, c.seed); }

AnalyticFieldSpec parse_spec(const std::string& s, Manifest& m) {
    auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    if (kind == "geometric" || kind == "harmonic") {
        if (colon == std::string::npos) throw UsageError("--spec " + kind + " needs a parameter, e.g. " + kind + ":0.5");
        const double v = std::stod(s.substr(colon + 1));
        m.builtin("spec", s);
        return kind == "geometric" ? AnalyticFieldSpec::geometric(v) : AnalyticFieldSpec::harmonic_decay(v);
    }
    if (fs::exists(s)) {
        m.input("spec", s);
        return AnalyticFieldSpec::from_poly(io::load_field(s));
    }
    throw UsageError("unknown --spec '" + s + "' (geometric:<beta>, harmonic:<c>, or a field file)");
}

// ---- subcommands

// bump strings "x,y,amplitude,width"
int cmd_phantom(const RunConfig& c, const std::vector<std::string>& bumps, double support, Manifest& m) {
    Phantom f = bumps.empty() ? three_bump_phantom() : Phantom{};
    if (!bumps.empty()) {
        f.name = "custom";
        f.support_radius = support;
        for (const auto& b : bumps) {
            double x, y, a, w;
            char tail;
            if (std::sscanf(b.c_str(), "%lf,%lf,%lf,%lf%c", &x, &y, &a, &w, &tail) != 4 || !(w > 0))
                throw UsageError("--bump expects x,y,amplitude,width with width > 0");
            f.bumps.push_back({{x, y}, a, w});
        }
    }
    (void)c;
    m.write("phantom.json", io::phantom_to_json(f).dump(2) + "\n");
    return Ok;
}

int cmd_field(const std::vector<std::string>& terms, Manifest& m) {
    std::map<std::pair<int, int>, cplx> t;
    for (const auto& s : terms) {
        int p, q;
        double re, im = 0.0;
        const int got = std::sscanf(s.c_str(), "%d,%d,%lf,%lf", &p, &q, &re, &im);
        if (got < 3 || p < 0 || q < 0) throw UsageError("--term expects p,q,re[,im] with p, q >= 0");
        if (t.count({p, q})) throw UsageError("duplicate --term " + std::to_string(p) + "," + std::to_string(q));
        t[{p, q}] = {re, im};
    }
    if (t.empty()) throw UsageError("field needs at least one --term");
    PolyField f(t);
    m.write("field.json", io::field_to_json(f).dump(2) + "\n");
    return Ok;
}

int cmd_forward(const RunConfig& c, Manifest& m) {
    const PolyField field = get_field(c, m);
    const Phantom ph = get_phantom(c, m);
    auto t0 = std::chrono::steady_clock::now();
    const Chart chart = [&] {
        try {
            return Chart(field, chart_options(c));
        } catch (const Error& e) {
            throw e.with_stage("chart");
        }
    }();
    m.time("chart", since(t0));
    t0 = std::chrono::steady_clock::now();
    RayOptions ro;
    ro.threads = c.threads;
    Sinogram sg;
    try {
        sg = ray_transform(ph, field, chart, c.n_theta, c.n_s, ro);
    } catch (const Error& e) {
        throw e.with_stage("forward");
    }
    m.time("forward", since(t0));
    sg.meta["field_sha256"] = sha256_hex(io::read_text(c.field));
    sg.meta["phantom_sha256"] = c.phantom.empty() ? "builtin:three_bump" : sha256_hex(io::read_text(c.phantom));
    sg.meta["curves"] = std::to_string(c.n_curves);
    m.write("sinogram.csv", io::sinogram_csv(sg));
    m.write("sinogram.json", json({{"n_theta", sg.n_theta()}, {"n_s", sg.n_s()}, {"meta", sg.meta}}).dump(2) + "\n");
    return Ok;
}

int cmd_hness(const RunConfig& c, Manifest& m) {
    // an audit reports a vanishing field instead of refusing it
    const PolyField field = get_field(c, m, false);
    const auto samples = audit_samples(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto mem = membership_check(field, samples);
    HnessReport hr;
    try {
        hr = hness_check(field, samples, c.quad_n, c.threads);
    } catch (const Error& e) {
        throw e.with_stage("hness");
    }
    m.time("hness", since(t0));
    const double mmin = field.min_abs_on_disc();
    json j = {{"field_min_abs", mmin},
              {"nonvanishing", mmin > field.zero_tol()},
              {"membership", io::to_json(mem)},
              {"hness", io::to_json(hr)}};
    m.write("hness.json", j.dump(2) + "\n");
    std::cout << "hness: aggregate " << verdict_name(hr.aggregate) << ", membership "
              << (mem.admissible() ? "admissible" : "not admissible") << "\n";
    return Ok;
}

int cmd_invert(const RunConfig& c, Manifest& m) {
    ErrorReport rep;
    ScalarGrid fhat;
    bool have_truth = false;
    if (!c.sinogram.empty()) {
        if (c.field.empty()) throw UsageError("invert --sinogram needs --field");
        m.input("sinogram", c.sinogram);
        const Sinogram sg = io::load_sinogram(c.sinogram);
        const PolyField field = get_field(c, m);
        auto it = sg.meta.find("field_sha256");
        if (it != sg.meta.end() && it->second != sha256_hex(io::read_text(c.field)))
            throw UsageError("sinogram was computed for a different field (hash mismatch)");
        RunConfig cc = c;
        if (auto l = sg.meta.find("labeling"); l != sg.meta.end()) cc.labeling = l->second;
        if (auto l = sg.meta.find("curves"); l != sg.meta.end()) cc.n_curves = std::stoi(l->second);
        auto t0 = std::chrono::steady_clock::now();
        std::unique_ptr<Chart> chart;
        try {
            chart = std::make_unique<Chart>(field, chart_options(cc));
        } catch (const Error& e) {
            throw e.with_stage("chart");
        }
        m.time("chart", since(t0));
        t0 = std::chrono::steady_clock::now();
        BackprojectOptions bo;
        bo.weight = parse_weight_mode(c.weight);
        bo.threads = c.threads;
        BackprojectResult bp;
        try {
            bp = backproject(sg, *chart, field, c.n, c.mask_radius, bo);
        } catch (const Error& e) {
            throw e.with_stage("backproject");
        }
        m.time("backproject", since(t0));
        fhat = std::move(bp.f);
        rep.max_imag_residual = bp.max_imag_residual;
        rep.no_root_pixels = bp.no_root_pixels;
        if (!c.phantom.empty()) {
            const Phantom ph = get_phantom(c, m);
            grid_errors(fhat, sample_phantom(ph, c.n, c.mask_radius), rep.rel_l2, rep.sup_error);
            have_truth = true;
        }
    } else {
        const PolyField field = get_field(c, m);
        const Phantom ph = get_phantom(c, m);
        PipelineConfig pc;
        pc.n = c.n;
        pc.n_theta = c.n_theta;
        pc.n_s = c.n_s;
        pc.mask_radius = c.mask_radius;
        pc.lookup_n = c.lookup_n;
        pc.n_curves = c.n_curves;
        pc.labeling = parse_labeling(c.labeling);
        pc.weight = parse_weight_mode(c.weight);
        pc.threads = c.threads;
        auto res = reconstruct_end_to_end(ph, field, pc);
        for (const auto& [k, v] : res.report.timings) m.time(k, v);
        rep = res.report;
        fhat = std::move(res.f_hat);
        have_truth = true;
    }
    emit_grid(m, "f_hat", fhat);
    json rj = io::to_json(rep);
    if (!have_truth) {
        rj.erase("rel_l2");
        rj.erase("sup_error");
    }
    m.write("error_report.json", rj.dump(2) + "\n");
    if (have_truth) std::printf("invert: rel L2 %.3e, sup %.3e\n", rep.rel_l2, rep.sup_error);
    return Ok;
}

int cmd_approx(const RunConfig& c, const std::set<std::string>& given, Manifest& m) {
    if (c.spec.empty()) throw UsageError("approx needs --spec");
    const AnalyticFieldSpec spec = parse_spec(c.spec, m);
    const Phantom ph = get_phantom(c, m);
    StabilityConfig sc;
    if (given.count("n")) sc.n = c.n;
    if (given.count("ntheta")) sc.n_theta = c.n_theta;
    if (given.count("ns")) sc.n_s = c.n_s;
    if (given.count("mask")) sc.mask_radius = c.mask_radius;
    sc.threads = c.threads;
    const std::vector<double> eps = c.eps.empty() ? std::vector<double>{0.1, 0.05, 0.01} : c.eps;
    const std::vector<double> q = c.q.empty() ? std::vector<double>{1, 2} : c.q;
    const auto t0 = std::chrono::steady_clock::now();
    StabilityReport r;
    try {
        r = stability_report(spec, ph, eps, q, sc);
    } catch (const Error& e) {
        throw e.with_stage("approx");
    }
    m.time("approx", since(t0));
    json j = io::to_json(r);
    for (auto& e : j["entries"]) e.erase("runtime_s");  // timings live in the manifest
    for (std::size_t i = 0; i < r.entries.size(); ++i) m.time("eps_" + std::to_string(i), r.entries[i].runtime_s);
    m.write("stability.json", j.dump(2) + "\n");
    m.write("stability.csv", io::stability_csv(r));
    std::printf("approx: slope %.3f over %zu eps values\n", r.slope_inf, r.entries.size());
    return Ok;
}

// fast oracle suite on shipped defaults
int cmd_validate(const RunConfig& c, Manifest& m) {
    json checks = json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool ok, double value, double tol) {
        checks.push_back({{"check", name}, {"pass", ok}, {"value", value}, {"tol", tol}});
        all = all && ok;
        std::printf("%-28s %s  (%.3e, tol %.1e)\n", name.c_str(), ok ? "PASS" : "FAIL", value, tol);
    };
    const auto t0 = std::chrono::steady_clock::now();

    {
        const PolyField f({{{0, 0}, 1.0}, {{2, 0}, 0.3}});
        double worst = 0.0;
        for (cplx z : disc_samples(50, 0.95, c.seed)) {
            const cplx l = find_lambda_i(f, z);
            const cplx r = cplx(0, std::sqrt(0.3)) * z;
            worst = std::max(worst, std::min(std::abs(l - r), std::abs(l + r)));
        }
        record("root_field", worst <= 1e-9, worst, 1e-9);
    }
    {
        const int n = 8193;
        std::vector<double> s(n), in(n), out(n);
        const double L = 40.0, h = 2 * L / (n - 1);
        for (int i = 0; i < n; ++i) {
            s[i] = -L + i * h;
            in[i] = 1.0 / (1 + s[i] * s[i]);
        }
        HilbertFilter H(n, 8);
        H.apply(in.data(), out.data(), false);
        double worst = 0.0;
        for (int i = n / 4; i < 3 * n / 4; ++i) {
            // transform of the truncated row
            const double x = s[i];
            const double ref = (std::log(std::abs((x + L) / (x - L))) + 2 * x * std::atan(L)) / (kPi * (1 + x * x));
            worst = std::max(worst, std::abs(out[i] - ref));
        }
        record("hilbert_truncated_row", worst <= 1e-6, worst, 1e-6);
    }
    {
        const PolyField one({{{0, 0}, 1.0}});
        ChartOptions co;
        co.lookup_n = 129;
        co.threads = c.threads;
        const Chart ch(one, co);
        RayOptions ro;
        ro.threads = c.threads;
        const Phantom ph = three_bump_phantom();
        const Sinogram sg = ray_transform(ph, one, ch, 128, 129, ro);
        BackprojectOptions bo;
        bo.threads = c.threads;
        const auto rec = backproject(sg, ch, one, 64, 0.95, bo);
        const auto fbp = classical_fbp(sg, {1.0, -1.0}, 64, 0.95);
        double rel, sup, rel_t;
        grid_errors(rec.f, fbp, rel, sup);
        record("classical_reduction", rel <= 2e-2, rel, 2e-2);
        grid_errors(rec.f, sample_phantom(ph, 64, 0.95), rel_t, sup);
        record("unit_field_recon", rel_t <= 2e-2, rel_t, 2e-2);
        const Sinogram back = io::sinogram_from_csv(io::sinogram_csv(sg));
        record("sinogram_roundtrip", back.values == sg.values && back.s == sg.s && back.theta == sg.theta, 0.0, 0.0);
    }
    {
        GreenOptions go;
        go.n = 300;
        go.threads = c.threads;
        const auto pr = plemelj_check(three_bump_phantom(), 0.7, {cplx(0.2, 0.1), cplx(-0.3, 0.25)}, {0.9, 0.99, 0.999}, go);
        record("plemelj_trend", pr.trend_ok && pr.max_rel_dev.back() <= 5e-2, pr.max_rel_dev.back(), 5e-2);
    }
    {
        // vanishes at i/sqrt(2); only the coefficient-ratio test is exercised here
        const PolyField f({{{0, 0}, 1.0}, {{2, 0}, 2.0}}, 0.0, false);
        const auto r = membership_check(f, {cplx(0.8, 0.0)});
        record("membership_ratio_failure", !r.coeff_ratio_ok, double(r.violations.size()), 0.0);
    }
    m.time("validate", since(t0));
    m.write("validate.json", json({{"pass", all}, {"checks", checks}}).dump(2) + "\n");
    return all ? Ok : ValidationFailed;
}

// config keys become flags unless the flag already appears on the command line
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const auto kv = io::parse_flat_config(io::read_text(path));
    std::set<std::string> present;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0) present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    for (const auto& [k, v] : kv) {
        if (present.count(k)) continue;
        std::string cur;
        bool any = false;
        for (char ch : v + ",") {
            if (ch == ',' || ch == ' ' || ch == '\t') {
                if (!cur.empty()) {
                    args.push_back("--" + k + "=" + cur);
                    any = true;
                }
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        if (!any) args.push_back("--" + k + "=");
    }
    return args;
}

}  // namespace

int run_command(const std::vector<std::string>& raw) {
    RunConfig c;
    std::vector<std::string> bumps, terms;
    double support = 0.9;
    std::string config_path;

    CLI::App app{"flowray: ray transforms over integral curves of planar fields"};
    app.set_version_flag("--version", FLOWRAY_VERSION);
    app.require_subcommand(1);

    auto common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "output directory");
        s->add_option("--threads", c.threads, "worker threads (0: hardware)");
        s->add_option("--config", config_path, "flat key = value file");
        s->add_option("--seed", c.seed, "sample seed");
    };
    auto grid = [&](CLI::App* s) {
        s->add_option("--n", c.n, "reconstruction grid size");
        s->add_option("--ntheta", c.n_theta, "number of angles (power of two)");
        s->add_option("--ns", c.n_s, "number of s-nodes (odd)");
        s->add_option("--mask", c.mask_radius, "mask radius");
        s->add_option("--labeling", c.labeling, "flux | arclength | chord");
        s->add_option("--curves", c.n_curves, "cached characteristic curves");
        s->add_option("--lookup", c.lookup_n, "chart lookup grid size (0: 2n+1)");
    };

    auto* ph = app.add_subcommand("phantom", "write a phantom JSON");
    common(ph);
    ph->add_option("--bump", bumps, "x,y,amplitude,width (repeatable)");
    ph->add_option("--support", support, "support radius");

    auto* fd = app.add_subcommand("field", "write a field JSON from coefficients");
    common(fd);
    fd->add_option("--term", terms, "p,q,re[,im] (repeatable)");

    auto* fw = app.add_subcommand("forward", "field + phantom -> sinogram");
    common(fw);
    grid(fw);
    fw->add_option("--field", c.field)->required();
    fw->add_option("--phantom", c.phantom);

    auto* hn = app.add_subcommand("hness", "field -> H-ness audit");
    common(hn);
    hn->add_option("--field", c.field)->required();
    hn->add_option("--samples", c.samples, "audit sample count");
    hn->add_option("--quad-n", c.quad_n, "Jensen quadrature nodes");
    hn->add_option("--mask", c.mask_radius, "sample radius");

    auto* iv = app.add_subcommand("invert", "sinogram or phantom + field -> reconstruction");
    common(iv);
    grid(iv);
    iv->add_option("--field", c.field);
    iv->add_option("--phantom", c.phantom);
    iv->add_option("--sinogram", c.sinogram);
    iv->add_option("--weight", c.weight, "none | rescaled");

    auto* ap = app.add_subcommand("approx", "analytic spec + eps list -> stability report");
    common(ap);
    grid(ap);
    ap->add_option("--spec", c.spec, "geometric:<beta> | harmonic:<c> | field file");
    ap->add_option("--phantom", c.phantom);
    ap->add_option("--eps", c.eps, "truncation tolerances, comma separated or repeated")->delimiter(',');
    ap->add_option("--q", c.q, "L^q exponents, comma separated or repeated")->delimiter(',');

    auto* va = app.add_subcommand("validate", "run the oracle suite");
    common(va);

    std::vector<std::string> args;
    try {
        args = merge_config(raw);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::set<std::string> given;
    for (const auto* o : sub->get_options())
        if (o->count() > 0)
            for (const auto& ln : o->get_lnames()) given.insert(ln);

    try {
        validate_config(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }

    try {
        fs::create_directories(c.out);
        Manifest m(c.out, sub->get_name());
        m.param("run", run_params(c));
        int rc = Ok;
        const std::string name = sub->get_name();
        if (name == "phantom") rc = cmd_phantom(c, bumps, support, m);
        else if (name == "field") rc = cmd_field(terms, m);
        else if (name == "forward") rc = cmd_forward(c, m);
        else if (name == "hness") rc = cmd_hness(c, m);
        else if (name == "invert") rc = cmd_invert(c, m);
        else if (name == "approx") rc = cmd_approx(c, given, m);
        else if (name == "validate") rc = cmd_validate(c, m);
        m.finish();
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const Error& e) {
        std::cerr << (e.code() == ErrorCode::InvalidInput ? "invalid input" : "numerical failure");
        if (!e.stage().empty()) std::cerr << " [" << e.stage() << "]";
        std::cerr << ": " << e.what() << "\n";
        return e.code() == ErrorCode::InvalidInput ? Usage : Numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
}

int run_command(int argc, char** argv) { return run_command(std::vector<std::string>(argv, argv + argc)); }

}  // namespace flowray::cli
