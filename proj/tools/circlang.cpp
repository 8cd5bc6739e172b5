// circlang: command-line driver for the circular-Langevin heat-kernel library.
//
//   circlang constants [--json] [--out PATH]
//   circlang kernel --eps E --w W --y Y --z Z [--start w0,y0,z0] [--json]
//   circlang validate [--suite fast|mc|full] [--seed S] [--workers N] [--out PATH]
//   circlang export (--kernel-sweep | --phi-table) [options] --out PATH
//
// Exit codes: 0 success, 1 validation/bound failure, 2 usage error,
// 3 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "circlang/checks.hpp"
#include "circlang/kernel.hpp"
#include "circlang/manifest.hpp"
#include "circlang/quad.hpp"

using nlohmann::json;
using namespace circlang;

namespace {

constexpr double kPi = specfun::pi;

void emit_manifest(const manifest::RunManifest& m, const std::string& out_path, bool to_stdout) {
    if (!out_path.empty()) {
        std::ofstream os(out_path + ".manifest.json");
        os << m.to_string() << "\n";
    }
    if (to_stdout) std::cout << m.to_string() << "\n";
}

int cmd_constants(bool as_json, const std::string& out, double tol) {
    manifest::Stopwatch sw;
    const auto s = quad::sigma_const(tol);
    const auto sp = quad::sigma_prime_const(tol);
    const auto t1 = specfun::theta_root(1);
    const double fpi2 = 1.0 - 2.0 * std::tanh(kPi / 2.0) / kPi;
    const double c2 = quad::c_squared_diag();
    const double ssad = quad::sigma_saddle_diag();
    struct Row {
        const char* name;
        double value, err;
        const char* bound;
        bool ok;
    } rows[] = {
        {"sigma", s.value.real(), s.abs_error_estimate, "> 0.1", s.value.real() > 0.1},
        {"sigma_prime", sp.value.real(), sp.abs_error_estimate, "> 0.1", sp.value.real() > 0.1},
        {"theta_1", t1.value, t1.residual, "in (4pi/3, 3pi/2)",
         t1.value > 4.0 * kPi / 3.0 && t1.value < 1.5 * kPi},
        {"f(pi^2,0)", fpi2, 1e-16, "> 0 (1 - (2/pi) tanh(pi/2))", fpi2 > 0.0},
        {"C_squared_diag", c2, 1e-15, "> 0 (diagnostic only)", c2 > 0.0},
        {"sigma_saddle_diag", ssad, 1e-9, "(diagnostic: continuous-lift phase)", true},
    };
    bool all_ok = true;
    json jout;
    for (const auto& r : rows) {
        all_ok = all_ok && r.ok;
        if (as_json) {
            jout[r.name] = {{"value", r.value}, {"abs_error", r.err},
                            {"bound", r.bound}, {"satisfied", r.ok}};
        } else {
            std::printf("%-18s % .9f  +- %.1e   %-34s %s\n", r.name, r.value, r.err, r.bound,
                        r.ok ? "ok" : "VIOLATED");
        }
    }
    manifest::RunManifest m;
    m.command = "constants";
    m.parameters = {{"tol", tol}};
    m.wall_time_s = sw.seconds();
    if (as_json) {
        jout["manifest"] = m.to_json();
        std::cout << jout.dump(2) << "\n";
    } else {
        emit_manifest(m, out, false);
    }
    if (!s.converged || !sp.converged) return 3;
    return all_ok ? 0 : 1;
}

int cmd_kernel(double eps, double w, double y, double z, const std::vector<double>& start,
               bool as_json, const std::string& out) {
    manifest::Stopwatch sw;
    malliavin::TargetPoint s0{0.0, 0.0, 0.0};
    if (start.size() == 3) s0 = {start[0], start[1], start[2]};
    const malliavin::TargetPoint target{w, y, z};
    const auto h = malliavin::homogenize(s0, target);
    const bool in_support = kernel::support_indicator(eps, h.y, h.z);
    json jout;
    if (!in_support) {
        const char* msg = "target outside the support ball y^2 + z^2 <= eps^2; "
                          "the density vanishes there and the asymptote is not evaluated";
        if (as_json) {
            jout["error"] = msg;
        } else {
            std::fprintf(stderr, "refused: %s\n", msg);
        }
    }
    manifest::RunManifest m;
    m.command = "kernel";
    m.parameters = {{"eps", eps}, {"w", w}, {"y", y}, {"z", z},
                    {"start", {s0.w, s0.y, s0.z}}};
    int rc = 0;
    if (in_support) {
        try {
            const auto r = kernel::p_general(eps, s0, target);
            if (as_json) {
                jout = {{"regime", kernel::regime_name(r.regime)},
                        {"log_prefactor", r.log_prefactor},
                        {"exponent", r.exponent},
                        {"log_density", r.log_density()},
                        {"support", true}};
            } else {
                std::printf("regime        %s\n", kernel::regime_name(r.regime));
                std::printf("log_prefactor % .9g\n", r.log_prefactor);
                std::printf("exponent      % .9g\n", r.exponent);
                std::printf("log p_eps     % .9g\n", r.log_density());
            }
        } catch (const domain_error& e) {
            const auto reg = kernel::classify(h);
            if (as_json) {
                jout["error"] = e.what();
                jout["regime"] = kernel::regime_name(reg);
            } else {
                std::fprintf(stderr, "domain error in regime %s: %s\n",
                             kernel::regime_name(reg), e.what());
            }
            rc = 1;
        }
    } else {
        rc = 1;
    }
    m.wall_time_s = sw.seconds();
    if (as_json) {
        jout["manifest"] = m.to_json();
        std::cout << jout.dump(2) << "\n";
    } else {
        emit_manifest(m, out, false);
    }
    return rc;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, int workers,
                 const std::string& out, bool as_json) {
    manifest::Stopwatch sw;
    const auto results = checks::run_suite(suite, seed, workers);
    bool all_ok = true;
    json jrows = json::array();
    for (const auto& r : results) {
        all_ok = all_ok && r.passed;
        if (!as_json)
            std::printf("[%s] %02d %-52s %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                        r.detail.c_str());
        jrows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                         {"detail", r.detail}, {"seconds", r.seconds}});
    }
    manifest::RunManifest m;
    m.command = "validate";
    m.parameters = {{"suite", suite}, {"workers", workers}};
    m.seed = seed;
    m.wall_time_s = sw.seconds();
    if (!out.empty()) {
        std::ofstream os(out);
        json full = {{"results", jrows}, {"manifest", m.to_json()}};
        os << full.dump(2) << "\n";
    }
    if (as_json) {
        json full = {{"results", jrows}, {"manifest", m.to_json()}};
        std::cout << full.dump(2) << "\n";
    } else {
        std::printf("%s: %zu checks, %s\n", suite.c_str(), results.size(),
                    all_ok ? "all passed" : "FAILURES present (see notes above)");
        emit_manifest(m, out, false);
    }
    return all_ok ? 0 : 1;
}

int cmd_export(bool kernel_sweep, bool phi_table, double eps_lo, double eps_hi, int n_rows,
               double w, double y, double z, const std::string& format, const std::string& out) {
    if (out.empty()) {
        std::fprintf(stderr, "export: --out PATH is required\n");
        return 2;
    }
    manifest::Stopwatch sw;
    manifest::CsvTable table;
    json jrows = json::array();
    if (kernel_sweep) {
        table.header = {"eps (time)", "log_prefactor (log density units)",
                        "exponent (dimensionless)", "log_density (log units)"};
        for (int i = 0; i < n_rows; ++i) {
            const double eps = eps_lo * std::pow(eps_hi / eps_lo, i / double(n_rows - 1));
            const auto r = kernel::p_general(eps, {0, 0, 0}, {w, y, z});
            table.rows.push_back({eps, r.log_prefactor, r.exponent, r.log_density()});
        }
    } else if (phi_table) {
        table.header = {"x (dimensionless)", "abs_Phi", "arg_Phi (rad)"};
        for (int i = 1; i <= n_rows; ++i) {
            const double x = eps_lo + (eps_hi - eps_lo) * i / double(n_rows);
            const auto P = specfun::Phi_axis(x);
            table.rows.push_back({x, std::abs(P), std::arg(P)});
        }
    } else {
        std::fprintf(stderr, "export: choose --kernel-sweep or --phi-table\n");
        return 2;
    }
    manifest::RunManifest m;
    m.command = "export";
    m.parameters = {{"what", kernel_sweep ? "kernel-sweep" : "phi-table"},
                    {"range", {eps_lo, eps_hi}}, {"rows", n_rows},
                    {"w", w}, {"y", y}, {"z", z}, {"format", format}};
    m.outputs = {out};
    if (format == "csv") {
        std::ofstream os(out, std::ios::binary);  // LF line endings
        table.write(os);
    } else {
        for (const auto& row : table.rows) {
            json jr;
            for (std::size_t i = 0; i < row.size(); ++i) jr[table.header[i]] = row[i];
            jrows.push_back(jr);
        }
        std::ofstream os(out);
        os << json{{"columns", table.header}, {"rows", jrows}}.dump(2) << "\n";
    }
    m.wall_time_s = sw.seconds();
    emit_manifest(m, out, false);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circular Langevin heat-kernel asymptotics"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    // constants
    auto* c = app.add_subcommand("constants", "paper constants with bounds");
    double tol = 1e-10;
    std::string out;
    c->add_option("--tol", tol, "quadrature tolerance (>= 1e-10)");
    c->add_option("--out", out, "manifest path prefix");

    // kernel
    auto* k = app.add_subcommand("kernel", "log-density asymptote at a target point");
    double eps = 0.1, w = 1.0, y = 0.0, z = 0.0;
    std::vector<double> start;
    k->add_option("--eps", eps, "time parameter")->required();
    k->add_option("--w", w, "target fiber angle")->required();
    k->add_option("--y", y, "target y")->required();
    k->add_option("--z", z, "target z")->required();
    k->add_option("--start", start, "start point w0,y0,z0")->delimiter(',')->expected(3);

    // validate
    auto* v = app.add_subcommand("validate", "run the acceptance checks");
    std::string suite = "fast";
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int workers = 1;
    v->add_option("--suite", suite, "fast | mc | full")
        ->check(CLI::IsMember({"fast", "mc", "full"}));
    auto* seed_opt = v->add_option("--seed", seed_flag, "RNG seed");
    v->add_option("--workers", workers, "worker threads (must not change results)");
    v->add_option("--out", out, "write results JSON here");

    // export
    auto* e = app.add_subcommand("export", "write sweep tables (CSV/JSON)");
    bool kernel_sweep = false, phi_table = false;
    double lo = 0.01, hi = 0.5;
    int n_rows = 25;
    std::string format = "csv";
    e->add_flag("--kernel-sweep", kernel_sweep, "log-density vs eps");
    e->add_flag("--phi-table", phi_table, "|Phi(x)| table");
    e->add_option("--lo", lo, "sweep lower end");
    e->add_option("--hi", hi, "sweep upper end");
    e->add_option("--rows", n_rows, "row count");
    e->add_option("--w", w, "target w");
    e->add_option("--y", y, "target y");
    e->add_option("--z", z, "target z");
    e->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    e->add_option("--out", out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return (err.get_exit_code() == 0) ? 0 : 2;
    }

    try {
        if (c->parsed()) return cmd_constants(as_json, out, tol);
        if (k->parsed()) return cmd_kernel(eps, w, y, z, start, as_json, out);
        if (v->parsed()) {
            seed_given = seed_opt->count() > 0;
            const std::uint64_t seed = manifest::resolve_seed(seed_given, seed_flag);
            return cmd_validate(suite, seed, workers, out, as_json);
        }
        if (e->parsed())
            return cmd_export(kernel_sweep, phi_table, lo, hi, n_rows, w, y, z, format, out);
    } catch (const cancellation_error& ex) {
        std::fprintf(stderr, "numerical non-convergence: %s\n", ex.what());
        return 3;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 2;
}
