#include <doctest.h>

#include <filesystem>
#include <set>

#include "flowray/cli.hpp"
#include "flowray/io.hpp"
#include "oracles.hpp"

using namespace flowray;
using oracle_ref::cplx;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("flowray_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "flowray");
    return cli::run_command(args);
}

std::string field_file(const fs::path& dir, const std::string& body) {
    const auto p = (dir / "field.json").string();
    io::write_text(p, body);
    return p;
}
}  // namespace

TEST_CASE("field file loader") {
    const auto d = scratch("field");
    const auto f = io::load_field(field_file(d, R"({"coeffs":[{"p":0,"q":0,"re":1,"im":0},{"p":2,"q":0,"re":0.3,"im":0}],"zero_tol":1e-12})"));
    CHECK(f.coeff(2, 0) == cplx(0.3));
    CHECK(f.zero_tol() == 1e-12);
    CHECK_THROWS_AS(io::load_field(field_file(d, R"({"coeffs":[{"p":-1,"q":0,"re":1,"im":0}]})")), Error);
    CHECK_THROWS_AS(io::load_field(field_file(d, R"({"coeffs":[{"p":0,"q":0,"re":1},{"p":0,"q":0,"re":2}]})")), Error);
    const auto back = io::field_from_json(io::field_to_json(f));
    CHECK(back.coeff_map() == f.coeff_map());
}

TEST_CASE("sinogram csv round trip is bit exact") {
    Sinogram s;
    s.theta = {0.0, 0.1, 2.0 / 3.0};
    s.s = {-1.0, 1.0 / 3.0, 0.7};
    std::mt19937 rng(1);
    std::normal_distribution<double> g;
    for (int i = 0; i < 9; ++i) s.values.push_back(g(rng) * 1e-7);
    const auto b = io::sinogram_from_csv(io::sinogram_csv(s));
    CHECK(b.theta == s.theta);
    CHECK(b.s == s.s);
    CHECK(b.values == s.values);
    CHECK_THROWS_AS(io::sinogram_from_csv("theta\\s,1\n0,1,2\n"), Error);
}

TEST_CASE("pgm and grid outputs") {
    ScalarGrid g = make_grid(4, 0.95);
    g.at(1, 1) = 1.0;
    const auto pgm = io::grid_pgm(g);
    CHECK(pgm.rfind("P5\n4 4\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n4 4\n255\n").size() + 16);
    CHECK(io::grid_csv(g).find("nan") != std::string::npos);
}

TEST_CASE("flat config parser") {
    const auto kv = io::parse_flat_config("# comment\n n = 64 \nlabeling=flux # trailing\n\n");
    CHECK(kv.at("n") == "64");
    CHECK(kv.at("labeling") == "flux");
    CHECK_THROWS_AS(io::parse_flat_config("novalue\n"), Error);
}

TEST_CASE("config validation") {
    cli::RunConfig c;
    CHECK_NOTHROW(cli::validate_config(c));
    c.n_theta = 100;
    CHECK_THROWS(cli::validate_config(c));
    c = {};
    c.n_s = 64;
    CHECK_THROWS(cli::validate_config(c));
    c = {};
    c.mask_radius = 1.2;
    CHECK_THROWS(cli::validate_config(c));
}

TEST_CASE("sha256") {
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cli exit codes and manifests") {
    const auto d = scratch("cli");
    const std::string f1 = (d / "f1").string(), f2 = (d / "f2").string();
    CHECK(run({"field", "--out", f1, "--term", "0,0,1", "--term", "2,0,0.3"}) == 0);
    CHECK(run({"field", "--out", f2, "--term", "0,0,1", "--term", "2,0,0.31"}) == 0);
    const std::string fw = (d / "fw").string();
    CHECK(run({"forward", "--field", f1 + "/field.json", "--out", fw, "--ntheta", "32", "--ns", "65", "--threads", "1"}) == 0);
    CHECK(run({"invert", "--sinogram", fw + "/sinogram.csv", "--field", f1 + "/field.json", "--n", "24", "--out", (d / "iv").string()}) == 0);
    CHECK(run({"invert", "--sinogram", fw + "/sinogram.csv", "--field", f2 + "/field.json", "--n", "24", "--out", (d / "bad").string()}) == 1);

    // manifest lists every output with a hash
    const auto m = io::json::parse(io::read_text(fw + "/manifest.json"));
    std::set<std::string> listed;
    for (const auto& o : m["outputs"]) {
        listed.insert(o["file"].get<std::string>());
        CHECK(o["sha256"].get<std::string>() == cli::sha256_hex(io::read_text(fw + "/" + o["file"].get<std::string>())));
    }
    for (const auto& e : fs::directory_iterator(fw))
        if (e.path().filename() != "manifest.json") CHECK(listed.count(e.path().filename().string()) == 1);

    CHECK(run({"forward", "--field", f1 + "/field.json", "--ntheta", "100", "--out", (d / "x").string()}) == 1);
    CHECK(run({"nonsense"}) == 1);
    CHECK(run({"forward", "--out", (d / "x").string()}) == 1);

    const std::string vanish = (d / "v").string();
    fs::create_directories(vanish);
    field_file(vanish, R"({"coeffs":[{"p":0,"q":0,"re":0.5,"im":0},{"p":0,"q":2,"re":1,"im":0}]})");
    CHECK(run({"forward", "--field", vanish + "/field.json", "--out", (d / "hv").string()}) == 2);
}

TEST_CASE("hness audit of a failing field succeeds") {
    const auto d = scratch("hness");
    // 1 + 2 z^2 vanishes at i / sqrt 2: authoring refuses it, the audit reports it
    CHECK(run({"field", "--out", d.string(), "--term", "0,0,1", "--term", "2,0,2"}) == 2);
    fs::create_directories(d / "f");
    field_file(d / "f", R"({"coeffs":[{"p":0,"q":0,"re":1,"im":0},{"p":2,"q":0,"re":2,"im":0}]})");
    CHECK(run({"hness", "--field", (d / "f" / "field.json").string(), "--out", (d / "h").string()}) == 0);
    const auto j = io::json::parse(io::read_text((d / "h" / "hness.json").string()));
    CHECK(j["nonvanishing"] == false);
    int fails = 0;
    for (const auto& s : j["hness"]["samples"]) fails += s["cond3"] == "fail";
    CHECK(fails > 0);
}

TEST_CASE("config file and determinism across threads") {
    const auto d = scratch("det");
    CHECK(run({"field", "--out", d.string(), "--term", "0,0,1", "--term", "2,0,0.3"}) == 0);
    const auto cfg = (d / "run.cfg").string();
    io::write_text(cfg, "# small run\nntheta = 32\nns = 65\nn = 24\nthreads = 4\n");
    const std::string a = (d / "a").string(), b = (d / "b").string();
    CHECK(run({"invert", "--field", (d / "field.json").string(), "--config", cfg, "--out", a}) == 0);
    CHECK(run({"invert", "--field", (d / "field.json").string(), "--config", cfg, "--threads", "1", "--out", b}) == 0);
    for (const char* f : {"f_hat.csv", "f_hat.json", "f_hat.pgm", "error_report.json"})
        CHECK(io::read_text(a + "/" + f) == io::read_text(b + "/" + f));
    const auto m = io::json::parse(io::read_text(a + "/manifest.json"));
    CHECK(m["params"]["run"]["n_theta"] == 32);
    CHECK(m["params"]["run"]["threads"] == 4);
    const auto mb = io::json::parse(io::read_text(b + "/manifest.json"));
    CHECK(mb["params"]["run"]["threads"] == 1);
}
