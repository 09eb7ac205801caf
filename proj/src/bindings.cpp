#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowray/approx.hpp"
#include "flowray/io.hpp"
#include "flowray/oracle.hpp"

namespace py = pybind11;
using namespace flowray;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

PolyField make_field(const std::map<std::pair<int, int>, cplx>& coeffs, double zero_tol, bool check) {
    return PolyField(coeffs, zero_tol, check);
}

py::array_t<double> grid_array(const ScalarGrid& g) {
    py::array_t<double> a({g.n, g.n});
    std::copy(g.values.begin(), g.values.end(), a.mutable_data());
    return a;
}

py::array_t<double> sino_array(const Sinogram& s) {
    py::array_t<double> a({py::ssize_t(s.n_theta()), py::ssize_t(s.n_s())});
    std::copy(s.values.begin(), s.values.end(), a.mutable_data());
    return a;
}

Sinogram sino_from(py::array_t<double, py::array::c_style | py::array::forcecast> v, std::vector<double> theta,
                   std::vector<double> s) {
    if (v.ndim() != 2 || std::size_t(v.shape(0)) != theta.size() || std::size_t(v.shape(1)) != s.size())
        throw Error(ErrorCode::InvalidInput, "values must have shape (len(theta), len(s))");
    Sinogram out;
    out.theta = std::move(theta);
    out.s = std::move(s);
    out.values.assign(v.data(), v.data() + v.size());
    return out;
}

}  // namespace

PYBIND11_MODULE(_flowray, m) {
    m.doc() = "Ray transforms along integral curves of planar vector fields and their inversion";

    py::register_exception<Error>(m, "FlowrayError", PyExc_RuntimeError);
    m.def("error_code", [](const std::string& what) { return what.substr(0, what.find(':')); },
          "error name from a FlowrayError message");

    py::class_<PolyField>(m, "PolyField")
        .def(py::init(&make_field), py::arg("coeffs"), py::arg("zero_tol") = 0.0, py::arg("check_nonvanishing") = true,
             "coeffs maps (p, q) to a_pq for mu = sum a_pq z^p zbar^q")
        .def_static("constant", &PolyField::constant)
        .def("__call__", &PolyField::operator())
        .def("__call__",
             [](const PolyField& f, py::array_t<cplx, py::array::forcecast> z) {
                 py::array_t<cplx> out(z.request().shape);
                 const cplx* in = z.data();
                 cplx* o = out.mutable_data();
                 for (py::ssize_t i = 0; i < z.size(); ++i) o[i] = f(in[i]);
                 return out;
             })
        .def("coeffs", &PolyField::coeff_map)
        .def_property_readonly("degree", &PolyField::degree)
        .def_property_readonly("k_global", &PolyField::k_global)
        .def_property_readonly("l_global", &PolyField::l_global)
        .def("rotated", &PolyField::rotated)
        .def("min_abs_on_disc", &PolyField::min_abs_on_disc, py::arg("n_r") = 48, py::arg("n_phi") = 96)
        .def("to_json", [](const PolyField& f) { return to_py(io::field_to_json(f)); })
        .def_readwrite("name", &PolyField::name);
    m.def("load_field", &io::load_field, py::arg("path"), py::arg("check_nonvanishing") = true);

    m.def("laurent_coeff", &laurent_coeff, py::arg("field"), py::arg("r"), py::arg("z"));
    m.def("exponents", [](const PolyField& f, cplx z) {
        const auto e = exponents(f, z);
        return std::make_pair(e.k, e.l);
    });
    m.def("membership_check", [](const PolyField& f, const std::vector<cplx>& s) {
        const auto r = membership_check(f, s);
        py::dict d = to_py(io::to_json(r));
        d["in_G"] = r.in_G();
        return d;
    });
    m.def("find_lambda_i", &find_lambda_i);
    m.def("lambda_candidates", &lambda_candidates);
    m.def("xi", &xi_at, py::arg("field"), py::arg("z"), py::arg("lam"));
    m.def("rho", &rho_at, py::arg("field"), py::arg("z"), py::arg("lam"));
    m.def("jensen_criteria", [](const PolyField& f, cplx z, int quad_n) {
        const auto j = jensen_criteria(f, z, quad_n);
        py::dict d;
        d["cond1"] = j.cond1;
        d["cond2"] = j.cond2;
        d["vacuous"] = j.vacuous;
        d["nodes_used"] = j.nodes_used;
        return d;
    }, py::arg("field"), py::arg("z"), py::arg("quad_n") = 512);
    m.def("hness_check", [](const PolyField& f, const std::vector<cplx>& s, int quad_n, int threads) {
        return to_py(io::to_json(hness_check(f, s, quad_n, threads)));
    }, py::arg("field"), py::arg("samples"), py::arg("quad_n") = 512, py::arg("threads") = 0);

    py::class_<Chart>(m, "Chart")
        .def(py::init([](const PolyField& f, const std::string& labeling, int n_curves, int lookup_n, int threads) {
                 ChartOptions o;
                 o.labeling = parse_labeling(labeling);
                 o.n_curves = n_curves;
                 o.lookup_n = lookup_n;
                 o.threads = threads;
                 return Chart(f, o);
             }),
             py::arg("field"), py::arg("labeling") = "flux", py::arg("n_curves") = 64, py::arg("lookup_n") = 257,
             py::arg("threads") = 0)
        .def_property_readonly("s_min", &Chart::s_min)
        .def_property_readonly("s_max", &Chart::s_max)
        .def_property_readonly("orientation", &Chart::orientation)
        .def("s", &Chart::s_exact)
        .def("t", &Chart::t_exact)
        .def("grad_s", [](const Chart& c, cplx z) { return grad_s(c, z); });

    py::class_<Phantom>(m, "Phantom")
        .def(py::init([](const std::vector<std::tuple<cplx, double, double>>& bumps, double support) {
                 Phantom p;
                 for (const auto& [c, a, w] : bumps) p.bumps.push_back({c, a, w});
                 p.support_radius = support;
                 return p;
             }),
             py::arg("bumps"), py::arg("support_radius") = 0.9, "bumps: (center, amplitude, width)")
        .def("__call__", &Phantom::operator())
        .def("rotated", &Phantom::rotated)
        .def_readwrite("support_radius", &Phantom::support_radius);
    m.def("three_bump_phantom", &three_bump_phantom);

    py::class_<Sinogram>(m, "Sinogram")
        .def(py::init(&sino_from), py::arg("values"), py::arg("theta"), py::arg("s"))
        .def_readonly("theta", &Sinogram::theta)
        .def_readonly("s", &Sinogram::s)
        .def_readwrite("meta", &Sinogram::meta)
        .def_property_readonly("values", &sino_array)
        .def("to_csv", [](const Sinogram& s) { return io::sinogram_csv(s); });
    m.def("sinogram_from_csv", &io::sinogram_from_csv);

    m.def("ray_transform", [](const Phantom& f, const PolyField& field, const Chart& ch, int n_theta, int n_s, int threads) {
        RayOptions o;
        o.threads = threads;
        return ray_transform(f, field, ch, n_theta, n_s, o);
    }, py::arg("phantom"), py::arg("field"), py::arg("chart"), py::arg("n_theta"), py::arg("n_s"), py::arg("threads") = 0);
    m.def("beam_transform", [](const Phantom& f, const PolyField& field, const Chart& ch, cplx z, double th) {
        return beam_transform(f, field, ch, z, th);
    });
    m.def("hilbert_s", &hilbert_s, py::arg("row"), py::arg("pad_factor") = 8, py::arg("check_decay") = true);

    m.def("backproject", [](const Sinogram& s, const Chart& ch, const PolyField& f, int n, double mask, const std::string& weight,
                            int threads) {
        BackprojectOptions o;
        o.weight = parse_weight_mode(weight);
        o.threads = threads;
        return grid_array(backproject(s, ch, f, n, mask, o).f);
    }, py::arg("sinogram"), py::arg("chart"), py::arg("field"), py::arg("n"), py::arg("mask_radius") = 0.95,
       py::arg("weight") = "none", py::arg("threads") = 0);

    m.def("reconstruct_end_to_end", [](const Phantom& ph, const PolyField& f, int n, int n_theta, int n_s, double mask,
                                       const std::string& labeling, int threads) {
        PipelineConfig c;
        c.n = n;
        c.n_theta = n_theta;
        c.n_s = n_s;
        c.mask_radius = mask;
        c.labeling = parse_labeling(labeling);
        c.threads = threads;
        const auto r = reconstruct_end_to_end(ph, f, c);
        py::dict d;
        d["f_hat"] = grid_array(r.f_hat);
        d["truth"] = grid_array(r.truth);
        d["sinogram"] = r.sino;
        d["report"] = to_py(io::to_json(r.report));
        return d;
    }, py::arg("phantom"), py::arg("field"), py::arg("n") = 128, py::arg("n_theta") = 256, py::arg("n_s") = 257,
       py::arg("mask_radius") = 0.95, py::arg("labeling") = "flux", py::arg("threads") = 0);

    m.def("classical_fbp", [](const Sinogram& s, double rho0, double drho_ds, int n, double mask) {
        return grid_array(classical_fbp(s, {rho0, drho_ds}, n, mask));
    }, py::arg("sinogram"), py::arg("rho0"), py::arg("drho_ds"), py::arg("n"), py::arg("mask_radius") = 0.95);
    m.def("line_integral", &line_integral, py::arg("phantom"), py::arg("theta"), py::arg("rho"));
    m.def("plemelj_check", [](const Phantom& f, double th, const std::vector<cplx>& zs, const std::vector<double>& rs, int n) {
        GreenOptions o;
        o.n = n;
        o.threads = 0;
        return to_py(io::to_json(plemelj_check(f, th, zs, rs, o)));
    }, py::arg("phantom"), py::arg("theta"), py::arg("z_samples"), py::arg("r_list"), py::arg("n") = 400);

    py::class_<AnalyticFieldSpec>(m, "AnalyticFieldSpec")
        .def_static("geometric", &AnalyticFieldSpec::geometric)
        .def_static("harmonic_decay", &AnalyticFieldSpec::harmonic_decay)
        .def_static("from_poly", &AnalyticFieldSpec::from_poly)
        .def_readonly("name", &AnalyticFieldSpec::name)
        .def("coeff", [](const AnalyticFieldSpec& s, int p, int q) { return s.coeff(p, q); })
        .def("tail", [](const AnalyticFieldSpec& s, int N) { return s.tail(N); });
    m.def("project_Pkl", py::overload_cast<const PolyField&, int, int, int>(&project_Pkl));
    m.def("disc_samples", &disc_samples, py::arg("n"), py::arg("radius"), py::arg("seed") = 7);
    m.def("c_hat_test", [](const AnalyticFieldSpec& s, const std::vector<cplx>& zs, int j_max) {
        return c_hat_test(s, zs, j_max).verdict;
    }, py::arg("spec"), py::arg("samples"), py::arg("j_max") = 40);
    m.def("choose_truncation", [](const AnalyticFieldSpec& s, double eps, const std::vector<cplx>& zs) {
        const auto t = choose_truncation(s, eps, zs);
        py::dict d;
        d["k"] = t.k;
        d["l"] = t.l;
        d["N"] = t.N;
        d["tail"] = t.tail;
        d["field"] = t.field;
        return d;
    });
    m.def("stability_report", [](const AnalyticFieldSpec& s, const Phantom& ph, const std::vector<double>& eps,
                                 const std::vector<double>& q, int n, int n_theta, int n_s) {
        StabilityConfig c;
        c.n = n;
        c.n_theta = n_theta;
        c.n_s = n_s;
        return to_py(io::to_json(stability_report(s, ph, eps, q, c)));
    }, py::arg("spec"), py::arg("phantom"), py::arg("eps_list"), py::arg("q_list") = std::vector<double>{1, 2},
       py::arg("n") = 64, py::arg("n_theta") = 128, py::arg("n_s") = 129);
}
