#include "stargraph/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "stargraph/io.hpp"
#include "stargraph/kernels.hpp"
#include "stargraph/parallel.hpp"
#include "stargraph/pde_oracle.hpp"
#include "stargraph/semigroup.hpp"
#include "stargraph/spectral.hpp"
#include "stargraph/transform.hpp"

namespace stargraph::cli {

nlohmann::json to_json(const Verdict& v) {
    return {{"check", v.check},         {"claim", v.claim},         {"value", v.value},
            {"expected", v.expected},   {"tolerance", v.tolerance}, {"pass", v.pass}};
}

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_real(const std::string& text) {
    try {
        std::size_t used = 0;
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            const double num = std::stod(text.substr(0, slash), &used);
            const double den = std::stod(text.substr(slash + 1));
            return num / den;
        }
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + text + "'");
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty()) out.push_back(parse_real(cell));
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

/// Built-in initial data; all are continuous at the vertex.
std::optional<EdgeFunction<double>> builtin_init(const std::string& name) {
    if (name == "one") return EdgeFunction<double>([](int, double) { return 1.0; });
    if (name == "ground") return EdgeFunction<double>([](int, double r) { return std::exp(-r * r / 2); });
    if (name == "bump") {
        return EdgeFunction<double>(
            [](int e, double r) { return e == 0 ? r * r * std::exp(-2 * (r - 1.5) * (r - 1.5)) : 0.0; });
    }
    if (name == "mixed") {
        return EdgeFunction<double>([](int e, double r) { return (1.0 + 0.4 * (e + 1) * r) * std::exp(-r * r / 2); });
    }
    return std::nullopt;
}

KernelSpec<double> model_spec(const std::string& model) {
    return model == "ou" ? KernelSpec<double>::ou() : KernelSpec<double>::harmonic_oscillator();
}

CoefficientTriple<double> model_coefficients(const std::string& model) {
    return model == "ou" ? CoefficientTriple<double>::ornstein_uhlenbeck()
                         : CoefficientTriple<double>::harmonic_oscillator();
}

Verdict make_verdict(std::string check, std::string claim, double value, double expected, double tolerance) {
    return {std::move(check), std::move(claim), value, expected, tolerance, std::abs(value - expected) <= tolerance};
}

std::string snapshot_name(std::size_t j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%03zu.csv", j);
    return buf;
}

std::string csv_of(const StarFunction<double>& f) {
    std::ostringstream os;
    io::write_star_csv(os, f);
    return os.str();
}

/// Writes verdict.json under `dir` and returns the exit code it implies.
int finish(const fs::path& dir, const std::string& command, const std::vector<Verdict>& verdicts, json extra,
           std::ostream& out) {
    bool pass = true;
    json list = json::array();
    for (const auto& v : verdicts) {
        list.push_back(to_json(v));
        pass = pass && v.pass;
        out << (v.pass ? "PASS " : "FAIL ") << v.check << " value=" << v.value.dump() << " expected=" << v.expected.dump()
            << " tol=" << io::format_double(v.tolerance) << '\n';
    }
    extra["command"] = command;
    extra["verdicts"] = std::move(list);
    extra["pass"] = pass;
    io::write_file((dir / "verdict.json").string(), extra.dump(2) + "\n");
    return pass ? kOk : kFailure;
}

struct EvolveOptions {
    std::string model = "ou";
    int m = 0;
    std::string times;
    std::string init = "one";
    double cutoff = 6.0;
    int points = 513;
    std::string out = ".";
};

int cmd_evolve(const EvolveOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    const std::vector<double> times = parse_list(o.times);
    for (std::size_t j = 0; j < times.size(); ++j) {
        require(times[j] >= kMinKernelTime && (j == 0 || times[j] > times[j - 1]),
                "--times must be ascending and >= 1e-8");
    }
    require(o.cutoff > 0 && o.points >= 3, "--cutoff must be positive and --points >= 3");
    const fs::path dir(o.out);
    fs::create_directories(dir);

    const KernelSpec<double> spec = model_spec(o.model);
    std::optional<EdgeFunction<double>> init_fn = builtin_init(o.init);
    std::optional<StarFunction<double>> init_samples;
    GridSpec<double> grid(o.cutoff, o.points);
    if (!init_fn) {
        require(o.init.rfind("file:", 0) == 0, "--init must be one, ground, bump, mixed or file:PATH");
        std::istringstream is(io::read_file(o.init.substr(5)));
        init_samples = io::read_star_csv(is);
        require(init_samples->m() == o.m, "--init file has a different edge count than --m");
        grid = init_samples->grid();
    }
    const StarFunction<double> f0 =
        init_samples ? *init_samples : StarFunction<double>::sample(StarGraph(o.m), grid, *init_fn);
    const double mu0 = integrate_star(f0, MeasureKind::gaussian_mu);
    const double sup0 = sup_norm(f0);

    std::vector<Verdict> verdicts;
    json snapshots = json::array();
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        const StarFunction<double> u = init_samples ? apply(spec, t, *init_samples) : apply(spec, o.m, t, *init_fn, grid);
        io::write_file((dir / snapshot_name(j)).string(), csv_of(u));
        const VertexDefect vd = vertex_defect(u);
        const double mu = integrate_star(u, MeasureKind::gaussian_mu);
        snapshots.push_back({{"index", j},
                             {"t", t},
                             {"file", snapshot_name(j)},
                             {"sup_norm", sup_norm(u)},
                             {"continuity_defect", vd.continuity},
                             {"kirchhoff_defect", vd.kirchhoff},
                             {"mu_integral", mu}});
        const std::string at = "@t=" + io::format_double(t);
        if (o.model == "ou") {
            verdicts.push_back(make_verdict("invariant_measure" + at, "invariant probability measure", mu, mu0, 1e-8));
            Verdict contract{"contractivity" + at, "contractive", sup_norm(u), sup0, 1e-8, sup_norm(u) <= sup0 + 1e-8};
            verdicts.push_back(contract);
            if (o.init == "one") {
                verdicts.push_back(make_verdict("conservativity" + at, "conservative",
                                                sup_distance(u, StarFunction<double>::constant(StarGraph(o.m), grid, 1.0)),
                                                0.0, 1e-8));
            }
        } else if (o.init == "ground") {
            verdicts.push_back(make_verdict("ground_state_fixed" + at, "ground state is stationary", sup_distance(u, f0),
                                            0.0, 1e-8));
        }
    }
    json summary = {{"model", o.model},
                    {"m", o.m},
                    {"init", o.init},
                    {"grid", {{"cutoff", grid.cutoff}, {"points_per_edge", grid.points_per_edge}}},
                    {"initial", {{"sup_norm", sup0}, {"mu_integral", mu0}}},
                    {"snapshots", std::move(snapshots)}};
    bool pass = true;
    json list = json::array();
    for (const auto& v : verdicts) {
        list.push_back(to_json(v));
        pass = pass && v.pass;
    }
    summary["verdicts"] = std::move(list);
    summary["pass"] = pass;
    io::write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
    out << "wrote " << times.size() << " snapshot(s) to " << dir.string() << (pass ? "; all checks pass\n" : "; checks FAILED\n");
    return pass ? kOk : kFailure;
}

struct KernelOptions {
    std::string model = "ou";
    int m = 0;
    double t = 0.0;
    int x_edge = 1;
    std::string x;
    int y_edge = 1;
    std::string y;
    std::string out;
};

int cmd_kernel(const KernelOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    require(o.t >= kMinKernelTime, "--t must be >= 1e-8");
    require(o.x_edge >= 1 && o.x_edge <= o.m && o.y_edge >= 1 && o.y_edge <= o.m, "edges must lie in 1..m");
    const auto xs = parse_list(o.x);
    const auto ys = parse_list(o.y);
    for (double v : xs) require(v >= 0, "radii must be non-negative");
    for (double v : ys) require(v >= 0, "radii must be non-negative");
    const KernelSpec<double> spec = model_spec(o.model);
    std::ostringstream os;
    os << "t,x_edge,x,y_edge,y,value\n";
    for (double x : xs) {
        for (double y : ys) {
            const double v = star_kernel(spec, o.m, o.t, StarPoint<double>(o.x_edge - 1, x), StarPoint<double>(o.y_edge - 1, y));
            os << io::format_double(o.t) << ',' << o.x_edge << ',' << io::format_double(x) << ',' << o.y_edge << ','
               << io::format_double(y) << ',' << io::format_double(v) << '\n';
        }
    }
    if (o.out.empty()) {
        out << os.str();
    } else {
        io::write_file(o.out, os.str());
    }
    return kOk;
}

struct SpectrumOptions {
    int m = 0;
    int levels = 6;
    double cutoff = 6.0;
    int points = 256;
    double tolerance = 0.05;
    std::string out = ".";
};

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    require(o.levels >= 1, "--levels must be >= 1");
    require(o.cutoff > 0 && o.points >= 2, "--cutoff must be positive and --points >= 2");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const auto fm = form_matrix(o.m, GridSpec<double>(o.cutoff, o.points));
    const Vector<double> ev = form_eigenvalues(fm);
    const auto clusters = cluster_levels(ev, o.m, o.levels, o.tolerance);
    std::size_t widest = 1;
    for (const auto& c : clusters) widest = std::max(widest, c.eigenvalues.size());

    std::ostringstream csv;
    csv << "level,eigenvalue,multiplicity_analytic,multiplicity_numeric";
    for (std::size_t j = 1; j <= widest; ++j) csv << ",numeric_" << j;
    csv << '\n';
    std::vector<Verdict> verdicts;
    json analytic = json::array();
    json numeric = json::array();
    for (const auto& c : clusters) {
        csv << c.level << ',' << io::format_double(-c.level) << ',' << c.multiplicity_analytic << ','
            << c.eigenvalues.size();
        for (std::size_t j = 0; j < widest; ++j) {
            csv << ',';
            if (j < c.eigenvalues.size()) csv << io::format_double(-c.eigenvalues[j]);
        }
        csv << '\n';
        analytic.push_back(c.multiplicity_analytic);
        numeric.push_back(c.eigenvalues.size());
        const auto n = static_cast<int>(c.eigenvalues.size());
        verdicts.push_back({"level_" + std::to_string(c.level) + "_multiplicity", "even levels simple, odd levels m-1",
                            n, c.multiplicity_analytic, o.tolerance, n == c.multiplicity_analytic});
    }
    verdicts.push_back({"multiplicity_pattern", "even levels simple, odd levels m-1", numeric, analytic, o.tolerance,
                        numeric == analytic});
    io::write_file((dir / "spectrum.csv").string(), csv.str());
    return finish(dir, "spectrum", verdicts,
                  {{"m", o.m}, {"grid", {{"cutoff", o.cutoff}, {"points_per_edge", o.points}}}}, out);
}

struct TraceOptions {
    int m = 0;
    double t = 1.0;
    int levels = 400;
    std::string out = ".";
};

int cmd_trace(const TraceOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    require(o.t >= kMinTraceTime, "--t must be >= 0.05");
    require(o.levels >= 0, "--levels must be >= 0");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const auto tr = trace_partial(o.t, o.m, o.levels);
    std::ostringstream csv;
    csv << "m,t,levels,analytic_partial,closed_form,kernel_trace\n"
        << o.m << ',' << io::format_double(o.t) << ',' << o.levels << ',' << io::format_double(tr.analytic_partial) << ','
        << io::format_double(tr.closed_form) << ',' << io::format_double(tr.kernel_trace) << '\n';
    io::write_file((dir / "trace.csv").string(), csv.str());
    std::vector<Verdict> verdicts = {
        make_verdict("trace_identity", "trace class", tr.kernel_trace, tr.closed_form, 1e-6),
        make_verdict("partial_sum", "trace class", tr.analytic_partial, tr.closed_form,
                     std::max(1e-6, 2.0 * o.m * std::exp(-(o.levels + 1) * o.t) / -std::expm1(-o.t)))};
    return finish(dir, "trace", verdicts, {{"m", o.m}, {"t", o.t}}, out);
}

struct OracleOptions {
    std::string model = "ou";
    int m = 0;
    double t = 0.5;
    std::string n = "8";
    std::string h = "1/64";
    std::string dt = "1e-3";
    std::string theta = "0.5";
    double window = 3.0;
    std::string init = "mixed";
    std::string n_list;
    double tolerance = 1e-3;
    std::string out = ".";
};

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    OracleConfig<double> cfg{parse_real(o.n), parse_real(o.h), parse_real(o.dt), parse_real(o.theta), o.t};
    try {
        cfg.validate();
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    require(o.window > 0 && o.window <= cfg.n, "--window must lie in (0, n]");
    const auto init = builtin_init(o.init);
    require(init.has_value(), "--init must be one, ground, bump or mixed");
    const fs::path dir(o.out);
    fs::create_directories(dir);

    const auto snaps = solve_star(model_coefficients(o.model), *init, o.m, cfg);
    const StarFunction<double>& oracle = snaps.back().value;
    const StarFunction<double> closed = apply(model_spec(o.model), o.m, o.t, *init, cfg.star_grid());
    const int window_nodes = static_cast<int>(std::floor(o.window / cfg.h + 1e-9));
    std::ostringstream csv;
    csv << "edge,radius,oracle,closed_form,difference\n";
    double defect = 0.0;
    for (int e = 0; e < o.m; ++e) {
        for (int k = 0; k <= window_nodes; ++k) {
            const double d = oracle(e, k) - closed(e, k);
            defect = std::max(defect, std::abs(d));
            csv << (e + 1) << ',' << io::format_double(oracle.radius(k)) << ',' << io::format_double(oracle(e, k)) << ','
                << io::format_double(closed(e, k)) << ',' << io::format_double(d) << '\n';
        }
    }
    io::write_file((dir / "oracle.csv").string(), csv.str());
    std::vector<Verdict> verdicts = {
        make_verdict("oracle_vs_closed_form", "kernel assembly formula", defect, 0.0, o.tolerance)};
    const VertexDefect vd = vertex_defect(oracle);
    json extra = {{"model", o.model},
                  {"m", o.m},
                  {"t", o.t},
                  {"config", {{"n", cfg.n}, {"h", cfg.h}, {"dt", cfg.dt}, {"theta", cfg.theta}}},
                  {"vertex_defect", {{"continuity", vd.continuity}, {"kirchhoff", vd.kirchhoff}}}};
    if (!o.n_list.empty()) {
        const auto ns = parse_list(o.n_list);
        const auto rows = truncation_study(model_coefficients(o.model), *init, o.m, cfg, ns);
        std::ostringstream tcsv;
        tcsv << "n,t,sup_defect\n";
        for (const auto& r : rows) {
            tcsv << io::format_double(r.n) << ',' << io::format_double(r.t) << ',' << io::format_double(r.sup_defect)
                 << '\n';
        }
        io::write_file((dir / "truncation.csv").string(), tcsv.str());
    }
    return finish(dir, "oracle", verdicts, std::move(extra), out);
}

struct InvarianceOptions {
    std::string model = "ou";
    int m = 0;
    std::string times = "0.1,1,5";
    double cutoff = 6.0;
    int points = 513;
    std::string out = ".";
};

int cmd_invariance(const InvarianceOptions& o, std::ostream& out) {
    require(o.m >= 1, "--m must be >= 1");
    const auto times = parse_list(o.times);
    for (double t : times) require(t >= kMinKernelTime, "--times must be >= 1e-8");
    require(o.cutoff > 0 && o.points >= 3, "--cutoff must be positive and --points >= 3");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const GridSpec<double> grid(o.cutoff, o.points);
    const KernelSpec<double> spec = model_spec(o.model);
    const std::vector<std::string> battery = {"one", "ground", "bump", "mixed"};

    std::vector<Verdict> verdicts;
    for (double t : times) {
        const std::string at = "@t=" + io::format_double(t);
        for (const auto& name : battery) {
            const EdgeFunction<double> f = *builtin_init(name);
            const StarFunction<double> f0 = StarFunction<double>::sample(StarGraph(o.m), grid, f);
            const StarFunction<double> u = apply(spec, o.m, t, f, grid);
            const double min_value = u.values().minCoeff();
            verdicts.push_back({"positivity/" + name + at, "positive", min_value, 0.0, 0.0, min_value >= 0.0});
            if (o.model == "ou") {
                verdicts.push_back(make_verdict("invariant_measure/" + name + at, "invariant probability measure",
                                                integrate_star(u, MeasureKind::gaussian_mu),
                                                integrate_star(f0, MeasureKind::gaussian_mu), 1e-8));
                verdicts.push_back({"contractivity/" + name + at, "contractive", sup_norm(u), sup_norm(f0), 1e-8,
                                    sup_norm(u) <= sup_norm(f0) + 1e-8});
            } else {
                verdicts.push_back(make_verdict("similarity/" + name + at, "U = T S T^-1",
                                                similarity_check(o.m, t, f, grid), 0.0, 1e-8));
            }
        }
        if (o.model == "ou") {
            const auto u = apply(spec, o.m, t, *builtin_init("one"), grid);
            verdicts.push_back(make_verdict("conservativity" + at, "conservative",
                                            sup_distance(u, StarFunction<double>::constant(StarGraph(o.m), grid, 1.0)),
                                            0.0, 1e-8));
        } else {
            const auto ground = *builtin_init("ground");
            const auto u = apply(spec, o.m, t, ground, grid);
            verdicts.push_back(make_verdict("ground_state_fixed" + at, "ground state is stationary",
                                            sup_distance(u, StarFunction<double>::sample(StarGraph(o.m), grid, ground)),
                                            0.0, 1e-10));
        }
    }
    return finish(dir, "invariance", verdicts,
                  {{"model", o.model}, {"m", o.m}, {"grid", {{"cutoff", o.cutoff}, {"points_per_edge", o.points}}}},
                  out);
}

/// Runs a command body, mapping library errors to exit 3 with a JSON
/// diagnostic (also written to <out>/error.json when an output directory
/// is known) and flag errors to exit 2.
int guarded(const std::string& command, const std::string& out_dir, std::ostream& err,
            const std::function<int()>& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return kUsage;
    } catch (const std::exception& e) {
        const json diag = {{"command", command}, {"error", e.what()}, {"pass", false}};
        err << diag.dump(2) << '\n';
        if (!out_dir.empty()) {
            std::error_code ec;
            fs::create_directories(out_dir, ec);
            if (!ec) io::write_file((fs::path(out_dir) / "error.json").string(), diag.dump(2) + "\n");
        }
        return kFailure;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_threads_from_env();
    CLI::App app{"Semigroups, kernels and spectra on metric star graphs"};
    app.require_subcommand(1);
    const std::vector<std::string> models = {"ou", "ho"};

    EvolveOptions ev;
    auto* evolve = app.add_subcommand("evolve", "Evolve initial data and write CSV snapshots");
    evolve->add_option("--model", ev.model, "ou or ho")->check(CLI::IsMember(models));
    evolve->add_option("--m", ev.m, "Number of edges")->required();
    evolve->add_option("--times", ev.times, "Comma-separated snapshot times")->required();
    evolve->add_option("--init", ev.init, "one|ground|bump|mixed|file:PATH");
    evolve->add_option("--cutoff", ev.cutoff, "Grid cutoff radius");
    evolve->add_option("--points", ev.points, "Grid points per edge");
    evolve->add_option("--out", ev.out, "Output directory");

    KernelOptions kn;
    auto* kernel = app.add_subcommand("kernel", "Tabulate the star kernel");
    kernel->add_option("--model", kn.model, "ou or ho")->check(CLI::IsMember(models));
    kernel->add_option("--m", kn.m, "Number of edges")->required();
    kernel->add_option("--t", kn.t, "Time")->required();
    kernel->add_option("--x-edge", kn.x_edge, "Edge of x (1-based)");
    kernel->add_option("--x", kn.x, "Comma-separated radii of x")->required();
    kernel->add_option("--y-edge", kn.y_edge, "Edge of y (1-based)");
    kernel->add_option("--y", kn.y, "Comma-separated radii of y")->required();
    kernel->add_option("--out", kn.out, "Output CSV (default stdout)");

    SpectrumOptions sp;
    auto* spectrum = app.add_subcommand("spectrum", "Finite-element spectrum and multiplicities");
    spectrum->add_option("--m", sp.m, "Number of edges")->required();
    spectrum->add_option("--levels", sp.levels, "Number of levels to report");
    spectrum->add_option("--cutoff", sp.cutoff, "Grid cutoff radius");
    spectrum->add_option("--points", sp.points, "Grid points per edge");
    spectrum->add_option("--tolerance", sp.tolerance, "Cluster tolerance");
    spectrum->add_option("--out", sp.out, "Output directory");

    TraceOptions tr;
    auto* trace = app.add_subcommand("trace", "Semigroup trace: spectral sum vs kernel diagonal");
    trace->add_option("--m", tr.m, "Number of edges")->required();
    trace->add_option("--t", tr.t, "Time (>= 0.05)");
    trace->add_option("--levels", tr.levels, "Partial-sum cutoff K");
    trace->add_option("--out", tr.out, "Output directory");

    OracleOptions orc;
    auto* oracle = app.add_subcommand("oracle", "Finite-difference oracle vs closed-form semigroup");
    oracle->set_help_flag("--help", "Print this help message and exit");
    oracle->add_option("--model", orc.model, "ou or ho")->check(CLI::IsMember(models));
    oracle->add_option("--m", orc.m, "Number of edges")->required();
    oracle->add_option("--t", orc.t, "Final time");
    oracle->add_option("--n", orc.n, "Truncation radius");
    oracle->add_option("--h", orc.h, "Spatial step (fractions like 1/64 accepted)");
    oracle->add_option("--dt", orc.dt, "Time step");
    oracle->add_option("--theta", orc.theta, "Implicitness in [1/2, 1]");
    oracle->add_option("--window", orc.window, "Comparison window [0, window]");
    oracle->add_option("--init", orc.init, "one|ground|bump|mixed");
    oracle->add_option("--n-list", orc.n_list, "Comma-separated truncations for a convergence table");
    oracle->add_option("--tolerance", orc.tolerance, "Sup-defect tolerance");
    oracle->add_option("--out", orc.out, "Output directory");

    InvarianceOptions inv;
    auto* invariance = app.add_subcommand("invariance", "Conservativity, invariant measure, positivity checks");
    invariance->add_option("--model", inv.model, "ou or ho")->check(CLI::IsMember(models));
    invariance->add_option("--m", inv.m, "Number of edges")->required();
    invariance->add_option("--times", inv.times, "Comma-separated times");
    invariance->add_option("--cutoff", inv.cutoff, "Grid cutoff radius");
    invariance->add_option("--points", inv.points, "Grid points per edge");
    invariance->add_option("--out", inv.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    if (*evolve) return guarded("evolve", ev.out, err, [&] { return cmd_evolve(ev, out); });
    if (*kernel) return guarded("kernel", "", err, [&] { return cmd_kernel(kn, out); });
    if (*spectrum) return guarded("spectrum", sp.out, err, [&] { return cmd_spectrum(sp, out); });
    if (*trace) return guarded("trace", tr.out, err, [&] { return cmd_trace(tr, out); });
    if (*oracle) return guarded("oracle", orc.out, err, [&] { return cmd_oracle(orc, out); });
    return guarded("invariance", inv.out, err, [&] { return cmd_invariance(inv, out); });
}

}  // namespace stargraph::cli
