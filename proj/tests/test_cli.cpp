#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "fracspace/catalog.hpp"
#include "fracspace/cocompact.hpp"
#include "fracspace/gfn_io.hpp"
#include "fracspace/minimize.hpp"

using namespace fracspace;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string(FRACSPACE_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fracspace_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("norm subcommand prints a single number") {
    const fs::path dir = fresh_dir("norm");
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);
    write_gfn(catalog_function(CatalogName::gaussian_bump, {0.5}, g), dir / "f.gfn");

    const auto r = run_cli("norm --in " + (dir / "f.gfn").string() +
                               " --space sobolev --alpha 0.5 --p 2",
                           dir);
    CHECK(r.exit_code == 0);
    const double value = std::stod(r.out);
    CHECK(value == Catch::Approx(sobolev_norm(read_gfn(dir / "f.gfn"), 0.5, 2.0)));
    fs::remove_all(dir);
}

TEST_CASE("kfunc rejects q = 0 with a validation JSON naming the field") {
    const fs::path dir = fresh_dir("kfunc");
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);
    write_gfn(catalog_function(CatalogName::gaussian_bump, {0.5}, g), dir / "f.gfn");

    const auto r = run_cli("kfunc --couple L2_H1 --in " + (dir / "f.gfn").string() +
                               " --theta 0.5 --q 0",
                           dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("\"error\":\"validation\"") != std::string::npos);
    CHECK(r.err.find("\"field\":\"q\"") != std::string::npos);

    const auto ok = run_cli("kfunc --couple L2_H1 --in " + (dir / "f.gfn").string() +
                                " --theta 0.5 --q 2 --nodes 100 --out " +
                                (dir / "curve.csv").string(),
                            dir);
    CHECK(ok.exit_code == 0);
    const std::string csv = slurp(dir / "curve.csv");
    CHECK(csv.rfind("t,K\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("minimize writes artifacts matching the library result") {
    const fs::path dir = fresh_dir("minimize");
    const auto r = run_cli("minimize --alpha 0.6 --q 4 --grid 64 --L 16 --tol 1e-6 --out " +
                               (dir / "run1").string(),
                           dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "run1" / "u.gfn"));
    CHECK(fs::exists(dir / "run1" / "result.json"));
    CHECK(fs::exists(dir / "run1" / "config.json"));

    const std::string result = slurp(dir / "run1" / "result.json");
    CHECK(result.find("kappa_hat") != std::string::npos);

    MinimizeProblem prob;
    prob.alpha = 0.6;
    prob.q = 4.0;
    prob.grid = GridSpec::uniform(1, 64, 16.0);
    prob.tol_el = 1e-6;
    const MinimizerResult lib = solve_kappa(prob, default_seed(prob.grid));
    const GridFunction u = read_gfn(dir / "run1" / "u.gfn");
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        diff = std::max(diff, std::abs(u.values[i] - lib.u.values[i]));
    CHECK(diff <= 1e-12);
    fs::remove_all(dir);
}

TEST_CASE("outputs are byte-identical across reruns and thread counts") {
    const fs::path dir = fresh_dir("repro");
    const std::string sigma_args =
        " mollify --mode sigma --grid 128 --L 2 --m0 1 --p0 2 --m1 0 --p1 4"
        " --tmin 1e-3 --tmax 1e-1 --tnodes 5 --out ";

    const auto r1 = run_cli("--threads 1" + sigma_args + (dir / "a.csv").string(), dir);
    const auto r8 = run_cli("--threads 8" + sigma_args + (dir / "b.csv").string(), dir);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r8.exit_code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

    const auto again = run_cli("--threads 8" + sigma_args + (dir / "c.csv").string(), dir);
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir / "b.csv") == slurp(dir / "c.csv"));
    fs::remove_all(dir);
}

TEST_CASE("config files mirror flags and flags win") {
    const fs::path dir = fresh_dir("config");
    const GridSpec g = GridSpec::uniform(1, 64, 4.0);
    write_gfn(catalog_function(CatalogName::gaussian_bump, {0.5}, g), dir / "f.gfn");

    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"space":"sobolev","alpha":0.5,"p":2,"in":")" << (dir / "f.gfn").string()
            << R"("})";
    }
    const auto from_config = run_cli("--config " + (dir / "cfg.json").string() + " norm", dir);
    REQUIRE(from_config.exit_code == 0);
    const auto from_flags = run_cli("norm --in " + (dir / "f.gfn").string() +
                                        " --space sobolev --alpha 0.5 --p 2",
                                    dir);
    CHECK(from_config.out == from_flags.out);

    // Explicit flag overrides the config value.
    const auto overridden = run_cli("--config " + (dir / "cfg.json").string() +
                                        " norm --alpha 1.5",
                                    dir);
    const auto direct = run_cli("norm --in " + (dir / "f.gfn").string() +
                                    " --space sobolev --alpha 1.5 --p 2",
                                dir);
    CHECK(overridden.out == direct.out);
    CHECK(overridden.out != from_flags.out);

    // Unknown keys are fatal only in strict mode.
    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"space":"lp","p":2,"bogus":1,"in":")" << (dir / "f.gfn").string() << R"("})";
    }
    CHECK(run_cli("--config " + (dir / "bad.json").string() + " norm", dir).exit_code == 0);
    CHECK(run_cli("--strict --config " + (dir / "bad.json").string() + " norm", dir).exit_code ==
          1);
    fs::remove_all(dir);
}

TEST_CASE("mollify apply and cocompact demo round trip") {
    const fs::path dir = fresh_dir("apply");
    const GridSpec g = GridSpec::uniform(1, 128, 4.0);
    write_gfn(catalog_function(CatalogName::gaussian_bump, {0.25}, g), dir / "f.gfn");

    const auto ap = run_cli("mollify --mode apply --in " + (dir / "f.gfn").string() +
                                " --t 0.1 --out " + (dir / "m.gfn").string(),
                            dir);
    REQUIRE(ap.exit_code == 0);
    CHECK(lp_norm(read_gfn(dir / "m.gfn"), 2.0) <= lp_norm(read_gfn(dir / "f.gfn"), 2.0));

    const auto demo = run_cli(
        "cocompact --mode demo --alpha 1 --p 2 --q 4 --kmax 4 --grid 256 --L 64 --sigma0 0.5"
        " --out " + (dir / "demo").string(),
        dir);
    REQUIRE(demo.exit_code == 0);
    const std::string csv = slurp(dir / "demo" / "demo.csv");
    CHECK(csv.rfind("k,source_norm,target_norm\n", 0) == 0);
    CHECK(slurp(dir / "demo" / "report.json").find("\"verdict\": true") != std::string::npos);

    // Endpoint q = p is a precondition failure.
    const auto bad = run_cli(
        "cocompact --mode demo --alpha 1 --p 2 --q 2 --kmax 4 --grid 256 --L 64 --sigma0 0.5",
        dir);
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("precondition") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("profile extraction artifacts support the bl-check mode") {
    const fs::path dir = fresh_dir("extract");
    const GridSpec g = GridSpec::uniform(1, 256, 16.0);
    const GridFunction w = catalog_function(CatalogName::compact_bump, {0.45, 0.5}, g);
    GridFunction u = GridFunction::zeros(g, Kind::real);
    for (long cell : {2, 7, 12}) {
        const GridFunction part = lattice_shift(w, LatticeShift{{cell * 16, 0, 0}});
        for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += part.values[i];
    }
    write_gfn(u, dir / "u.gfn");

    const auto ex = run_cli("cocompact --mode extract --in " + (dir / "u.gfn").string() +
                                " --cell-size 16 --eps 0.2 --max-profiles 8 --out " +
                                (dir / "dec").string(),
                            dir);
    REQUIRE(ex.exit_code == 0);
    CHECK(fs::exists(dir / "dec" / "manifest.json"));
    CHECK(fs::exists(dir / "dec" / "profile_000.gfn"));
    CHECK(fs::exists(dir / "dec" / "remainder.gfn"));

    const auto bl = run_cli("cocompact --mode bl-check --in " + (dir / "u.gfn").string() +
                                " --decomp " + (dir / "dec").string() + " --bl-p 2",
                            dir);
    REQUIRE(bl.exit_code == 0);
    CHECK(std::stod(bl.out) <= 1e-12);
    fs::remove_all(dir);
}

TEST_CASE("numerical failures exit with code 2") {
    const fs::path dir = fresh_dir("exit2");
    const auto r = run_cli("minimize --alpha 0.6 --q 4 --grid 64 --L 16 --tau 100", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"error\":\"numerical\"") != std::string::npos);
    fs::remove_all(dir);
}
