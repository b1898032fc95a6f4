// fracspace command-line interface: norms, K-functionals, interpolation
// norms, mollifier experiments, cocompactness demos and variational solves,
// with JSON configs mirrored by command-line flags and CSV/JSON artifacts.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracspace/fracspace.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fracspace;

namespace {

// Validation failure tied to a named field; reported as machine-readable
// JSON on stderr.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error("validation", message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

double parse_exponent(const std::string& s, const std::string& field) {
    if (s == "inf" || s == "infinity") return inf_exponent;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(field, "cannot parse '" + s + "' as a number");
    }
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw FormatError("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

void write_gfn_atomic(const GridFunction& f, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    write_gfn(f, tmp);
    fs::rename(tmp, path);
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Records the fully resolved configuration next to the run's outputs. The
// timestamp lives in this one key and nowhere else, keeping every other
// artifact byte-reproducible.
void record_config(const fs::path& out_dir, const std::string& command, const json& resolved) {
    json cfg = resolved;
    cfg["command"] = command;
    cfg["timestamp"] = iso_timestamp();
    write_text_atomic(out_dir / "config.json", cfg.dump(2) + "\n");
}

// JSON config whose keys mirror the long command-line flags; explicit flags
// win over config values, unknown keys are rejected in strict mode.
class ConfigBinder {
public:
    template <class T>
    void bind(const std::string& key, T& var) {
        setters_[key] = [&var](const json& v) { assign(var, v); };
    }

    void apply(const json& cfg, CLI::App* sub, bool strict) const {
        for (const auto& [key, value] : cfg.items()) {
            if (key == "command" || key == "timestamp") continue;
            const auto it = setters_.find(key);
            if (it == setters_.end()) {
                if (strict) throw ConfigError("unknown config key '" + key + "'");
                std::cerr << "warning: ignoring unknown config key '" << key << "'\n";
                continue;
            }
            const CLI::Option* opt = sub->get_option_no_throw("--" + key);
            if (opt != nullptr && opt->count() > 0) continue;  // flag overrides config
            try {
                it->second(value);
            } catch (const json::exception& e) {
                throw ConfigError("bad value for config key '" + key + "': " + e.what());
            }
        }
    }

private:
    static void assign(double& var, const json& v) {
        var = v.is_string() ? parse_exponent(v.get<std::string>(), "config") : v.get<double>();
    }
    static void assign(int& var, const json& v) { var = v.get<int>(); }
    static void assign(long& var, const json& v) { var = v.get<long>(); }
    static void assign(bool& var, const json& v) { var = v.get<bool>(); }
    static void assign(std::string& var, const json& v) {
        var = v.is_number() ? fmt_double(v.get<double>()) : v.get<std::string>();
    }

    std::map<std::string, std::function<void(const json&)>> setters_;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("unparsable config: ") + e.what());
    }
}

CoupleSpec parse_couple(const std::string& s) {
    const auto split_params = [](const std::string& body) {
        std::vector<double> out;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(parse_exponent(tok, "couple"));
        return out;
    };
    if (s == "same" || s == "same_space") return CoupleSpec::same_space();
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "L2_H1") return CoupleSpec::l2_hs(1.0);
    if (head == "L2_Hs") {
        const auto p = split_params(body);
        if (p.size() != 1) throw ValidationError("couple", "L2_Hs needs one smoothness order");
        return CoupleSpec::l2_hs(p[0]);
    }
    if (head == "Hs0_Hs1") {
        const auto p = split_params(body);
        if (p.size() != 2) throw ValidationError("couple", "Hs0_Hs1 needs two smoothness orders");
        return CoupleSpec::hs0_hs1(p[0], p[1]);
    }
    if (head == "LpW1p") {
        const auto p = split_params(body);
        if (p.size() != 1) throw ValidationError("couple", "LpW1p needs one exponent");
        return CoupleSpec::lp_w1p(p[0]);
    }
    throw ValidationError("couple", "unknown couple '" + s + "'");
}

std::vector<double> log_nodes(double lo, double hi, int count) {
    if (!(lo > 0.0 && lo < hi) || count < 1)
        throw ValidationError("tmin", "need 0 < tmin < tmax and at least one node");
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i /
                                                             static_cast<double>(count - 1));
    return t;
}

struct GlobalFlags {
    int threads = 0;
    bool strict = false;
    std::string config_path;
};

// ---------------------------------------------------------------------------
// norm

struct NormCmd {
    GlobalFlags* g;
    std::string in, space = "lp";
    double p = 2.0, alpha = 0.0, s = 0.5, q = 2.0;
    std::string p_str = "2", q_str = "2";
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--in", in, "input GFN file");
        sub->add_option("--space", space, "lp | sobolev | besov");
        sub->add_option("--p", p_str, "Lebesgue exponent (number or inf)");
        sub->add_option("--alpha", alpha, "Sobolev smoothness order");
        sub->add_option("--s", s, "Besov smoothness order");
        sub->add_option("--q", q_str, "Besov second exponent");
        binder.bind("in", in);
        binder.bind("space", space);
        binder.bind("p", p_str);
        binder.bind("alpha", alpha);
        binder.bind("s", s);
        binder.bind("q", q_str);
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);
        if (in.empty()) throw ValidationError("in", "an input GFN file is required");
        p = parse_exponent(p_str, "p");
        q = parse_exponent(q_str, "q");
        const GridFunction f = read_gfn(in);
        double value = 0.0;
        if (space == "lp")
            value = lp_norm(f, p);
        else if (space == "sobolev")
            value = sobolev_norm(f, alpha, p);
        else if (space == "besov")
            value = besov_norm(f, s, p, q);
        else
            throw ValidationError("space", "unknown space '" + space + "'");
        std::cout << fmt_double(value) << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// kfunc

struct KfuncCmd {
    GlobalFlags* g;
    std::string in, couple_str = "L2_H1", kind = "exact", out;
    std::string theta_str, q_str;
    double tmin = 1e-6, tmax = 1e6;
    int nodes = 400;
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--in", in);
        sub->add_option("--couple", couple_str, "same | L2_Hs:s | Hs0_Hs1:s0,s1 | LpW1p:p");
        sub->add_option("--kind", kind, "exact | splitting");
        sub->add_option("--theta", theta_str, "also evaluate the (theta,q) norm");
        sub->add_option("--q", q_str);
        sub->add_option("--tmin", tmin);
        sub->add_option("--tmax", tmax);
        sub->add_option("--nodes", nodes);
        sub->add_option("--out", out, "write the sampled curve as CSV (t,K)");
        binder.bind("in", in);
        binder.bind("couple", couple_str);
        binder.bind("kind", kind);
        binder.bind("theta", theta_str);
        binder.bind("q", q_str);
        binder.bind("tmin", tmin);
        binder.bind("tmax", tmax);
        binder.bind("nodes", nodes);
        binder.bind("out", out);
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);
        if (in.empty()) throw ValidationError("in", "an input GFN file is required");
        const CoupleSpec couple = parse_couple(couple_str);
        QuadratureConfig cfg;
        cfg.t_min = tmin;
        cfg.t_max = tmax;
        cfg.nodes = nodes;
        cfg.strict = g->strict;
        const GridFunction f = read_gfn(in);
        const std::vector<double> t = quadrature_nodes(cfg);
        KCurve curve;
        if (kind == "exact")
            curve = k2_diagonal(f, couple, t);
        else if (kind == "splitting")
            curve = k_splitting_upper(f, couple, t);
        else
            throw ValidationError("kind", "unknown K source '" + kind + "'");

        if (!out.empty()) {
            std::string csv = "t,K\n";
            for (std::size_t i = 0; i < curve.t.size(); ++i)
                csv += fmt_double(curve.t[i]) + "," + fmt_double(curve.K[i]) + "\n";
            write_text_atomic(out, csv);
        }
        if (!theta_str.empty()) {
            const double theta = parse_exponent(theta_str, "theta");
            if (q_str.empty()) throw ValidationError("q", "theta given without q");
            const double q = parse_exponent(q_str, "q");
            if (!(q >= 1.0))
                throw ValidationError("q", "second parameter q must satisfy 1 <= q <= inf");
            if (!(theta > 0.0 && theta < 1.0))
                throw ValidationError("theta", "theta must lie in (0,1)");
            const auto res = interp_norm_from_curve(curve, theta, q, cfg);
            std::cout << fmt_double(res.value) << "\n";
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// interp

struct InterpCmd {
    GlobalFlags* g;
    std::string in, couple_str = "L2_H1", mode = "real", op = "identity", target_str;
    std::string theta_str = "0.5", q_str = "2";
    double tmin = 1e-6, tmax = 1e6;
    int nodes = 400;
    double p0 = 2.0, p1 = 6.0;
    int suite = 20;
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--in", in, "input GFN file (real/complex modes)");
        sub->add_option("--mode", mode, "real | complex | check-op | exponent-book");
        sub->add_option("--couple", couple_str);
        sub->add_option("--theta", theta_str);
        sub->add_option("--q", q_str);
        sub->add_option("--tmin", tmin);
        sub->add_option("--tmax", tmax);
        sub->add_option("--nodes", nodes);
        sub->add_option("--op", op, "identity | bessel:gamma | mollifier:t (check-op mode)");
        sub->add_option("--target-couple", target_str, "target couple for check-op");
        sub->add_option("--p0", p0, "exponent-book lower exponent");
        sub->add_option("--p1", p1, "exponent-book upper exponent");
        sub->add_option("--suite", suite, "test-suite size for check-op");
        binder.bind("in", in);
        binder.bind("mode", mode);
        binder.bind("couple", couple_str);
        binder.bind("theta", theta_str);
        binder.bind("q", q_str);
        binder.bind("tmin", tmin);
        binder.bind("tmax", tmax);
        binder.bind("nodes", nodes);
        binder.bind("op", op);
        binder.bind("target-couple", target_str);
        binder.bind("p0", p0);
        binder.bind("p1", p1);
        binder.bind("suite", suite);
    }

    SpectralOperator parse_op(int dim) const {
        if (op == "identity") return SpectralOperator::identity();
        const auto colon = op.find(':');
        const std::string head = op.substr(0, colon);
        if (colon != std::string::npos) {
            const double v = parse_exponent(op.substr(colon + 1), "op");
            if (head == "bessel") return SpectralOperator::bessel(v);
            if (head == "mollifier") return SpectralOperator::mollifier(dim, v);
        }
        throw ValidationError("op", "unknown operator '" + op + "'");
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);
        const double theta = parse_exponent(theta_str, "theta");
        const double q = parse_exponent(q_str, "q");
        QuadratureConfig cfg;
        cfg.t_min = tmin;
        cfg.t_max = tmax;
        cfg.nodes = nodes;
        cfg.strict = g->strict;

        if (mode == "exponent-book") {
            const auto entries = exponent_book(p0, p1, theta);
            json out{{"p", json_number(entries.p)}, {"c_theta_p", entries.c_theta_p}};
            std::cout << out.dump() << "\n";
            return 0;
        }

        if (mode == "check-op") {
            if (in.empty()) throw ValidationError("in", "check-op needs a reference GFN for the grid");
            const GridFunction ref = read_gfn(in);
            const CoupleSpec source = parse_couple(couple_str);
            const CoupleSpec target =
                target_str.empty() ? source : parse_couple(target_str);
            const auto suite_fns = random_suite(ref.grid, suite, 4242, 0.6);
            const auto rep = check_operator_bound(parse_op(ref.grid.dim), source, target,
                                                  theta, q, suite_fns, cfg);
            json out{{"endpoint0", rep.endpoint0},
                     {"endpoint1", rep.endpoint1},
                     {"bound", rep.bound},
                     {"worst_ratio", rep.worst_ratio},
                     {"n_checked", rep.n_checked},
                     {"ok", rep.worst_ratio <= 1.0 + 1e-8}};
            std::cout << out.dump() << "\n";
            return 0;
        }

        const GridFunction f = read_gfn(in);
        const CoupleSpec couple = parse_couple(couple_str);
        if (mode == "real") {
            const auto res = real_interp_norm(f, couple, theta, q, cfg);
            if (res.truncation_warning)
                std::cerr << "warning: truncation estimate "
                          << fmt_double(res.truncation_rel) << " of the value\n";
            std::cout << fmt_double(res.value) << "\n";
            return 0;
        }
        if (mode == "complex") {
            std::cout << fmt_double(complex_diag_norm(f, couple, theta)) << "\n";
            return 0;
        }
        throw ValidationError("mode", "unknown mode '" + mode + "'");
    }
};

// ---------------------------------------------------------------------------
// mollify

struct MollifyCmd {
    GlobalFlags* g;
    std::string mode = "apply";  // apply | fit | sigma
    std::string in, out;
    double t = 0.1;
    double p = 2.0;
    double tmin = 1e-3, tmax = 1e-1;
    int tnodes = 5;
    double m0 = 1.0, p0 = 2.0, m1 = 0.0, p1 = 4.0;
    int grid_n = 256, dim = 1;
    double box = 2.0;
    std::string test_set = smooth_test_set_name;
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--mode", mode, "apply | fit | sigma");
        sub->add_option("--in", in);
        sub->add_option("--out", out);
        sub->add_option("--t", t, "mollifier scale (apply mode)");
        sub->add_option("--p", p, "norm exponent (fit mode)");
        sub->add_option("--tmin", tmin);
        sub->add_option("--tmax", tmax);
        sub->add_option("--tnodes", tnodes);
        sub->add_option("--m0", m0);
        sub->add_option("--p0", p0);
        sub->add_option("--m1", m1);
        sub->add_option("--p1", p1);
        sub->add_option("--grid", grid_n);
        sub->add_option("--dim", dim);
        sub->add_option("--L", box);
        sub->add_option("--test-set", test_set);
        binder.bind("mode", mode);
        binder.bind("in", in);
        binder.bind("out", out);
        binder.bind("t", t);
        binder.bind("p", p);
        binder.bind("tmin", tmin);
        binder.bind("tmax", tmax);
        binder.bind("tnodes", tnodes);
        binder.bind("m0", m0);
        binder.bind("p0", p0);
        binder.bind("m1", m1);
        binder.bind("p1", p1);
        binder.bind("grid", grid_n);
        binder.bind("dim", dim);
        binder.bind("L", box);
        binder.bind("test-set", test_set);
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);
        if (mode == "apply") {
            if (in.empty() || out.empty())
                throw ValidationError("in", "apply mode needs --in and --out");
            const GridFunction f = read_gfn(in);
            write_gfn_atomic(mollify(f, {t, 64}), out);
            return 0;
        }
        if (mode == "fit") {
            if (in.empty()) throw ValidationError("in", "fit mode needs --in");
            const GridFunction f = read_gfn(in);
            const auto rep = residual_bound_check(f, p, log_nodes(tmin, tmax, tnodes));
            json jt = json::array(), jr = json::array();
            for (std::size_t i = 0; i < rep.t.size(); ++i) {
                jt.push_back(rep.t[i]);
                jr.push_back(rep.residual[i]);
            }
            json out_json{{"t", jt},
                          {"residual", jr},
                          {"slope", rep.slope},
                          {"c_hat", rep.c_hat},
                          {"grad_norm", rep.grad_norm},
                          {"degenerate", rep.degenerate}};
            const std::string text = out_json.dump(2) + "\n";
            if (out.empty())
                std::cout << text;
            else
                write_text_atomic(out, text);
            return 0;
        }
        if (mode == "sigma") {
            const GridSpec grid = GridSpec::uniform(dim, grid_n, box);
            if (test_set != smooth_test_set_name)
                throw ValidationError("test-set", "unknown test set '" + test_set + "'");
            const auto suite = smooth_test_set(grid);
            const SigmaCurve curve = sigma_estimate(m0, p0, m1, p1,
                                                    log_nodes(tmin, tmax, tnodes), suite,
                                                    test_set);
            std::string csv = "t,sigma\n";
            for (std::size_t i = 0; i < curve.t.size(); ++i)
                csv += fmt_double(curve.t[i]) + "," + fmt_double(curve.sigma[i]) + "\n";
            if (out.empty()) {
                std::cout << csv;
            } else {
                write_text_atomic(out, csv);
                json summary{{"test_set", curve.test_set},
                             {"trend_ok", curve.trend_ok},
                             {"max_source_ratio", curve.max_source_ratio}};
                write_text_atomic(fs::path(out).replace_extension(".json"),
                                  summary.dump(2) + "\n");
            }
            return curve.trend_ok ? 0 : 2;
        }
        throw ValidationError("mode", "unknown mode '" + mode + "'");
    }
};

// ---------------------------------------------------------------------------
// cocompact

struct CocompactCmd {
    GlobalFlags* g;
    std::string mode = "demo";  // demo | extract | bl-check
    std::string in, out, decomp, family = "sobolev";
    double alpha = 1.0, p = 2.0, q = 4.0, q0 = 2.0;
    int kmax = 16;
    int grid_n = 1024, dim = 1;
    double box = 256.0, sigma0 = 1.0;
    int cell_size = 16, max_profiles = 8;
    double eps = 0.2;
    double blp = 2.0;
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--mode", mode, "demo | extract | bl-check");
        sub->add_option("--in", in);
        sub->add_option("--out", out);
        sub->add_option("--decomp", decomp, "decomposition directory (bl-check)");
        sub->add_option("--family", family, "sobolev | besov");
        sub->add_option("--alpha", alpha, "source smoothness");
        sub->add_option("--p", p);
        sub->add_option("--q", q);
        sub->add_option("--q0", q0, "Besov third index");
        sub->add_option("--kmax", kmax);
        sub->add_option("--grid", grid_n);
        sub->add_option("--dim", dim);
        sub->add_option("--L", box);
        sub->add_option("--sigma0", sigma0, "base bump width of the vanishing sequence");
        sub->add_option("--cell-size", cell_size);
        sub->add_option("--eps", eps);
        sub->add_option("--max-profiles", max_profiles);
        sub->add_option("--bl-p", blp);
        binder.bind("mode", mode);
        binder.bind("in", in);
        binder.bind("out", out);
        binder.bind("decomp", decomp);
        binder.bind("family", family);
        binder.bind("alpha", alpha);
        binder.bind("p", p);
        binder.bind("q", q);
        binder.bind("q0", q0);
        binder.bind("kmax", kmax);
        binder.bind("grid", grid_n);
        binder.bind("dim", dim);
        binder.bind("L", box);
        binder.bind("sigma0", sigma0);
        binder.bind("cell-size", cell_size);
        binder.bind("eps", eps);
        binder.bind("max-profiles", max_profiles);
        binder.bind("bl-p", blp);
    }

    json resolved() const {
        return json{{"mode", mode},      {"family", family}, {"alpha", alpha},
                    {"p", p},            {"q", q},           {"q0", q0},
                    {"kmax", kmax},      {"grid", grid_n},   {"dim", dim},
                    {"L", box},          {"sigma0", sigma0}, {"cell_size", cell_size},
                    {"eps", eps},        {"max_profiles", max_profiles}};
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);
        if (mode == "demo") {
            const GridSpec grid = GridSpec::uniform(dim, grid_n, box);
            SequenceSpec spec;
            spec.kind = SequenceSpec::Kind::vanishing;
            spec.profiles = {catalog_function(CatalogName::gaussian_bump, {sigma0}, grid)};
            spec.p = p;
            spec.support_radius = 4.0 * sigma0;

            SpaceDescriptor src;
            src.family = family == "besov" ? SpaceDescriptor::Family::besov
                                           : SpaceDescriptor::Family::sobolev;
            src.smoothness = alpha;
            src.p = p;
            src.q0 = q0;
            const auto rep = cocompactness_demo(src, q, spec, kmax);

            std::string csv = "k,source_norm,target_norm\n";
            for (const auto& row : rep.rows)
                csv += std::to_string(row.k) + "," + fmt_double(row.source_norm) + "," +
                       fmt_double(row.target_norm) + "\n";
            json report{{"source", src.label()},
                        {"q", q},
                        {"predicted_exponent", rep.predicted_exponent},
                        {"source_bracket_ok", rep.source_bracket_ok},
                        {"decay_monotone", rep.decay_monotone},
                        {"decay_matches", rep.decay_matches},
                        {"reached_20pct", rep.reached_20pct},
                        {"verdict", rep.verdict}};
            if (out.empty()) {
                std::cout << csv << report.dump(2) << "\n";
            } else {
                fs::create_directories(out);
                write_text_atomic(fs::path(out) / "demo.csv", csv);
                write_text_atomic(fs::path(out) / "report.json", report.dump(2) + "\n");
                record_config(out, "cocompact", resolved());
            }
            return rep.verdict ? 0 : 2;
        }
        if (mode == "extract") {
            if (in.empty() || out.empty())
                throw ValidationError("in", "extract mode needs --in and --out");
            const GridFunction u = read_gfn(in);
            const auto dec = profile_extract(u, cell_size, eps, max_profiles);
            fs::create_directories(out);
            json manifest{{"cell_size", cell_size},
                          {"eps_stop", eps},
                          {"max_profiles", max_profiles},
                          {"bl_residual", dec.bl_residual},
                          {"reconstruction_error", dec.reconstruction_error}};
            json shifts = json::array(), files = json::array();
            for (std::size_t n = 0; n < dec.profiles.size(); ++n) {
                char name[32];
                std::snprintf(name, sizeof(name), "profile_%03zu.gfn", n);
                write_gfn_atomic(dec.profiles[n], fs::path(out) / name);
                files.push_back(name);
                shifts.push_back(json::array({dec.shifts[n].cells[0], dec.shifts[n].cells[1],
                                              dec.shifts[n].cells[2]}));
            }
            write_gfn_atomic(dec.remainder, fs::path(out) / "remainder.gfn");
            manifest["profiles"] = files;
            manifest["shifts"] = shifts;
            write_text_atomic(fs::path(out) / "manifest.json", manifest.dump(2) + "\n");
            record_config(out, "cocompact", resolved());
            return 0;
        }
        if (mode == "bl-check") {
            if (in.empty() || decomp.empty())
                throw ValidationError("in", "bl-check needs --in and --decomp");
            const GridFunction u = read_gfn(in);
            std::ifstream mf(fs::path(decomp) / "manifest.json");
            if (!mf) throw FormatError("cannot open manifest in '" + decomp + "'");
            const json manifest = json::parse(mf);
            std::vector<GridFunction> profiles;
            std::vector<LatticeShift> shifts;
            for (const auto& name : manifest.at("profiles"))
                profiles.push_back(read_gfn(fs::path(decomp) / name.get<std::string>()));
            for (const auto& sh : manifest.at("shifts"))
                shifts.push_back(LatticeShift{{sh[0].get<long>(), sh[1].get<long>(),
                                               sh[2].get<long>()}});
            std::cout << fmt_double(brezis_lieb_check(u, profiles, shifts, blp)) << "\n";
            return 0;
        }
        throw ValidationError("mode", "unknown mode '" + mode + "'");
    }
};

// ---------------------------------------------------------------------------
// minimize

struct MinimizeCmd {
    GlobalFlags* g;
    double alpha = 0.6, q = 4.0;
    int grid_n = 256, dim = 1;
    double box = 16.0;
    double tau = 0.0, tol = 1e-8;
    long max_iter = 400000;
    bool penalty = false, diagnostic_q2 = false, symmetry = false;
    double weight_amp = 0.5, weight_sigma = 2.0, b_inf = 1.0;
    std::string seed_in, out, sweep_alphas, sweep_qs;
    ConfigBinder binder;

    void install(CLI::App* sub) {
        sub->add_option("--alpha", alpha);
        sub->add_option("--q", q);
        sub->add_option("--grid", grid_n);
        sub->add_option("--dim", dim);
        sub->add_option("--L", box);
        sub->add_option("--tau", tau, "flow step (0 = automatic)");
        sub->add_option("--tol", tol, "Euler-Lagrange residual tolerance");
        sub->add_option("--max-iter", max_iter);
        sub->add_flag("--penalty", penalty, "solve the weighted penalty problem");
        sub->add_flag("--diagnostic-q2", diagnostic_q2, "allow the q = 2 boundary diagnostic");
        sub->add_flag("--symmetry", symmetry, "report the radial symmetry diagnostic");
        sub->add_option("--weight-amp", weight_amp, "penalty weight bump amplitude");
        sub->add_option("--weight-sigma", weight_sigma, "penalty weight bump width");
        sub->add_option("--b-inf", b_inf, "penalty weight level at infinity");
        sub->add_option("--seed-in", seed_in, "seed GFN (default: bump + 1% noise)");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--sweep-alphas", sweep_alphas, "comma list: sweep mode");
        sub->add_option("--sweep-qs", sweep_qs, "comma list: sweep mode");
        binder.bind("alpha", alpha);
        binder.bind("q", q);
        binder.bind("grid", grid_n);
        binder.bind("dim", dim);
        binder.bind("L", box);
        binder.bind("tau", tau);
        binder.bind("tol", tol);
        binder.bind("max-iter", max_iter);
        binder.bind("penalty", penalty);
        binder.bind("diagnostic-q2", diagnostic_q2);
        binder.bind("symmetry", symmetry);
        binder.bind("weight-amp", weight_amp);
        binder.bind("weight-sigma", weight_sigma);
        binder.bind("b-inf", b_inf);
        binder.bind("seed-in", seed_in);
        binder.bind("out", out);
        binder.bind("sweep-alphas", sweep_alphas);
        binder.bind("sweep-qs", sweep_qs);
    }

    MinimizeProblem make_problem(double a, double qq) const {
        MinimizeProblem prob;
        prob.alpha = a;
        prob.q = qq;
        prob.grid = GridSpec::uniform(dim, grid_n, box);
        prob.tau = tau;
        prob.tol_el = tol;
        prob.max_iter = max_iter;
        prob.allow_q2_diagnostic = diagnostic_q2;
        if (penalty) {
            GridFunction b =
                catalog_function(CatalogName::gaussian_bump, {weight_sigma}, prob.grid);
            for (cplx& z : b.values) z = b_inf + weight_amp * z.real();
            prob.weight_b = b;
            prob.b_infinity = b_inf;
        }
        return prob;
    }

    json resolved() const {
        return json{{"alpha", alpha},   {"q", q},
                    {"grid", grid_n},   {"dim", dim},
                    {"L", box},         {"tau", tau},
                    {"tol", tol},       {"max_iter", max_iter},
                    {"penalty", penalty}, {"diagnostic_q2", diagnostic_q2},
                    {"weight_amp", weight_amp}, {"weight_sigma", weight_sigma},
                    {"b_inf", b_inf},   {"seed_in", seed_in}};
    }

    static std::vector<double> parse_list(const std::string& s, const std::string& field) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(parse_exponent(tok, field));
        if (out.empty()) throw ValidationError(field, "empty sweep list");
        return out;
    }

    int run(CLI::App* sub) {
        if (!g->config_path.empty()) binder.apply(load_config(g->config_path), sub, g->strict);

        if (!sweep_alphas.empty() || !sweep_qs.empty()) {
            const auto alphas = sweep_alphas.empty() ? std::vector<double>{alpha}
                                                     : parse_list(sweep_alphas, "sweep-alphas");
            const auto qs =
                sweep_qs.empty() ? std::vector<double>{q} : parse_list(sweep_qs, "sweep-qs");
            struct Row {
                double alpha, q, kappa, el;
                long iters;
            };
            std::vector<Row> rows(alphas.size() * qs.size());
            parallel_for(rows.size(), [&](std::size_t idx) {
                const double a = alphas[idx / qs.size()];
                const double qq = qs[idx % qs.size()];
                const MinimizeProblem prob = make_problem(a, qq);
                const MinimizerResult res = solve_kappa(prob, default_seed(prob.grid));
                rows[idx] = {a, qq, res.energy, res.el_residual, res.iterations};
            });
            std::string csv = "alpha,q,kappa_hat,el_residual,iters\n";
            for (const auto& r : rows)
                csv += fmt_double(r.alpha) + "," + fmt_double(r.q) + "," +
                       fmt_double(r.kappa) + "," + fmt_double(r.el) + "," +
                       std::to_string(r.iters) + "\n";
            if (out.empty()) {
                std::cout << csv;
            } else {
                fs::create_directories(out);
                write_text_atomic(fs::path(out) / "sweep.csv", csv);
                record_config(out, "minimize", resolved());
            }
            return 0;
        }

        const MinimizeProblem prob = make_problem(alpha, q);
        const GridFunction seed = seed_in.empty() ? default_seed(prob.grid) : read_gfn(seed_in);
        MinimizerResult res;
        bool improves = false;
        if (penalty) {
            const PenaltyResult pres = solve_penalty(prob, seed);
            res = pres;
            improves = pres.improves_on_kappa;
        } else {
            res = solve_kappa(prob, seed);
        }
        if (!res.converged)
            throw NumericalError("flow did not reach tol_el within max_iter iterations");

        json trace = json::array();
        for (double e : res.energy_trace) trace.push_back(e);
        json result{{"kappa_hat", res.energy},
                    {"lambda", res.lambda},
                    {"el_residual", res.el_residual},
                    {"iterations", res.iterations},
                    {"converged", res.converged},
                    {"penalty", penalty},
                    {"energy_trace", trace}};
        if (penalty) result["improves_on_kappa"] = improves;
        if (symmetry) result["asymmetry"] = symmetry_diagnostic(res, tol);

        if (out.empty()) {
            json brief = result;
            brief.erase("energy_trace");
            std::cout << brief.dump(2) << "\n";
        } else {
            fs::create_directories(out);
            write_gfn_atomic(res.u, fs::path(out) / "u.gfn");
            write_text_atomic(fs::path(out) / "result.json", result.dump(2) + "\n");
            record_config(out, "minimize", resolved());
        }
        return 0;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracspace: fractional Sobolev/Besov norms, K-functionals, mollifiers,\n"
                 "lattice-shift cocompactness diagnostics and isoperimetric minimizers"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--threads", g.threads, "cap on worker threads (FRACSPACE_THREADS fallback)");
    app.add_flag("--strict", g.strict, "escalate warnings and unknown config keys to errors");
    app.add_option("--config", g.config_path, "JSON config mirrored by the flags");

    NormCmd norm_cmd{&g};
    KfuncCmd kfunc_cmd{&g};
    InterpCmd interp_cmd{&g};
    MollifyCmd mollify_cmd{&g};
    CocompactCmd cocompact_cmd{&g};
    MinimizeCmd minimize_cmd{&g};

    CLI::App* norm_sub = app.add_subcommand("norm", "evaluate a function-space norm");
    norm_cmd.install(norm_sub);
    CLI::App* kfunc_sub = app.add_subcommand("kfunc", "sample a K-functional curve");
    kfunc_cmd.install(kfunc_sub);
    CLI::App* interp_sub = app.add_subcommand("interp", "interpolation norms and bounds");
    interp_cmd.install(interp_sub);
    CLI::App* mollify_sub = app.add_subcommand("mollify", "mollifier operators and decay fits");
    mollify_cmd.install(mollify_sub);
    CLI::App* cocompact_sub =
        app.add_subcommand("cocompact", "vanishing-sequence demos and profile extraction");
    cocompact_cmd.install(cocompact_sub);
    CLI::App* minimize_sub = app.add_subcommand("minimize", "isoperimetric ground states");
    minimize_cmd.install(minimize_sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        json err{{"error", "validation"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }

    if (g.threads > 0) set_thread_cap(g.threads);

    try {
        if (norm_sub->parsed()) return norm_cmd.run(norm_sub);
        if (kfunc_sub->parsed()) return kfunc_cmd.run(kfunc_sub);
        if (interp_sub->parsed()) return interp_cmd.run(interp_sub);
        if (mollify_sub->parsed()) return mollify_cmd.run(mollify_sub);
        if (cocompact_sub->parsed()) return cocompact_cmd.run(cocompact_sub);
        if (minimize_sub->parsed()) return minimize_cmd.run(minimize_sub);
    } catch (const ValidationError& e) {
        json err{{"error", "validation"}, {"field", e.field()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const Error& e) {
        json err{{"error", e.kind()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return is_numerical_failure(e) ? 2 : 1;
    } catch (const std::exception& e) {
        json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 0;
}
