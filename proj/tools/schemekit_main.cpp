// schemekit — topological-conjugacy invariants ("schemes") of surface
// diffeomorphisms with one-dimensional basic sets: validate scheme files,
// compare schemes (with or without an equivalence certificate), compute
// moduli of tangency data, generate fixtures, and check separability /
// finite-moduli criteria over declared intersection facts.
//
// Exit codes: 0 equivalent / valid / done, 1 not equivalent (or check failed),
// 2 inconclusive (certificate needed / undetermined), 3 invalid input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schemekit/equivalence.hpp"
#include "schemekit/fixtures.hpp"
#include "schemekit/moduli.hpp"
#include "schemekit/scheme_io.hpp"
#include "schemekit/separability.hpp"
#include "schemekit/verdict_io.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schemekit::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace schemekit;
    CLI::App app{"scheme kit: conjugacy invariants of surface diffeomorphisms"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- scheme validate / compare ----
    auto* scheme_cmd = app.add_subcommand("scheme", "scheme file operations");
    scheme_cmd->require_subcommand(1);

    std::string validate_file;
    auto* validate = scheme_cmd->add_subcommand("validate", "check a scheme file's invariants");
    validate->add_option("file", validate_file, "scheme file")->required();
    validate->callback([&]() {
        Scheme s = parse_scheme(slurp(validate_file));
        ValidationReport rep = validate_scheme(s);
        if (rep.ok()) {
            std::cout << "valid\n";
            rc = 0;
        } else {
            for (const auto& v : rep.violations) std::cout << v << "\n";
            rc = 1;
        }
    });

    std::string cmp_a, cmp_b, cmp_cert;
    long long matrix_bound = 10, m_bound = 64;
    double tol = 1e-9;
    auto* compare = scheme_cmd->add_subcommand("compare", "decide scheme equivalence");
    compare->add_option("a", cmp_a, "first scheme file")->required();
    compare->add_option("b", cmp_b, "second scheme file")->required();
    compare->add_option("--certificate", cmp_cert, "equivalence certificate file");
    compare->add_option("--matrix-bound", matrix_bound, "GL(2,Z) search box bound (default 10)");
    compare->add_option("--m-bound", m_bound, "bound on |m| in condition 4b (default 64)");
    compare->add_option("--tol", tol, "relative tolerance for real comparisons (default 1e-9)");
    compare->callback([&]() {
        Scheme s1 = parse_scheme(slurp(cmp_a));
        Scheme s2 = parse_scheme(slurp(cmp_b));
        std::optional<Certificate> cert;
        if (!cmp_cert.empty()) cert = parse_certificate(slurp(cmp_cert));
        EquivalenceOptions opts{matrix_bound, m_bound, tol};
        Verdict v = schemes_equivalent(s1, s2, cert, opts);
        std::cout << verdict_to_json(v, !cert.has_value()).dump(2) << "\n";
        rc = v.exit_code();
    });

    // ---- moduli ----
    auto* moduli_cmd = app.add_subcommand("moduli", "tangency moduli numerics");
    moduli_cmd->require_subcommand(1);

    std::string ms_file;
    double fd_step = -1.0, fd_tol = 1e-6;
    auto* compute = moduli_cmd->add_subcommand("compute", "tau and tangency order per transition");
    compute->add_option("mapspec", ms_file, "map spec file")->required();
    compute->add_option("--fd-step", fd_step, "finite-difference step (default 1e-4*(1+|a_x|))");
    compute->add_option("--fd-tol", fd_tol, "self-check relative tolerance (default 1e-6)");
    compute->callback([&]() {
        MapSpec ms = parse_mapspec(slurp(ms_file));
        Json out = Json::array();
        bool any_error = false;
        for (const auto& g : ms.transitions) {
            Json row = Json::object();
            row["transition"] = g.id;
            try {
                row["tau"] = format_real(tau_at_tangency(g, fd_step, fd_tol));
            } catch (const std::exception& e) {
                row["tau_error"] = e.what();
                any_error = true;
            }
            try {
                TangencyOrder ord = tangency_order(g);
                row["order"] = ord.n;
                row["leading_coefficient"] = rational_to_string(ord.Q);
                row["one_sided"] = (ord.n % 2 == 0);
            } catch (const std::exception& e) {
                row["order_error"] = e.what();
            }
            out.push_back(row);
        }
        std::cout << out.dump(2) << "\n";
        rc = any_error ? 1 : 0;
    });

    double it_tau = 1, it_lambda = 0.5, it_mu = 2;
    long long it_k = 0;
    auto* iterate = moduli_cmd->add_subcommand("iterate", "scaling law |lambda/mu|^k tau");
    iterate->add_option("--tau", it_tau)->required();
    iterate->add_option("--lambda", it_lambda)->required();
    iterate->add_option("--mu", it_mu)->required();
    iterate->add_option("--k", it_k)->required();
    iterate->callback(
        [&]() { std::cout << format_real(tau_iterate(it_tau, it_lambda, it_mu, it_k)) << "\n"; });

    // ---- fixtures ----
    auto* fixture_cmd = app.add_subcommand("fixture", "generate deterministic fixtures");
    fixture_cmd->require_subcommand(1);

    std::string da_matrix, da_out;
    double da_tau = 1.0, da_lambda = 0, da_mu = 0;
    auto* fixture_da = fixture_cmd->add_subcommand("da", "DA-style scheme from a hyperbolic matrix");
    fixture_da->add_option("--matrix", da_matrix, "seed matrix a,b,c,d")->required();
    fixture_da->add_option("--tau", da_tau, "tau seed for the attached tangency family");
    fixture_da->add_option("--lambda", da_lambda, "attach a tangency family: stable eigenvalue");
    fixture_da->add_option("--mu", da_mu, "attach a tangency family: unstable eigenvalue");
    fixture_da->add_option("-o,--output", da_out, "output scheme file")->required();
    fixture_da->callback([&]() {
        auto entries = parse_int_list(da_matrix);
        if (entries.size() != 4) throw ParseError("--matrix expects four integers a,b,c,d");
        DaParams p;
        p.matrix = {entries[0], entries[1], entries[2], entries[3]};
        p.tau_seed = da_tau;
        if (da_lambda != 0 && da_mu != 0) {
            p.lambda = da_lambda;
            p.mu = da_mu;
        }
        spit(da_out, serialize_scheme(build_da_scheme(p)));
    });

    int tf_points = 2, tf_components = 1;
    double tf_lambda = 0.5, tf_mu = 2.0, tf_seed = 1.0;
    std::string tf_pattern, tf_out;
    auto* fixture_tan = fixture_cmd->add_subcommand("tangency", "synthetic tangency-family scheme");
    fixture_tan->add_option("--points", tf_points, "number of tangency points (default 2)");
    fixture_tan->add_option("--components", tf_components, "number of torus components (default 1)");
    fixture_tan->add_option("--lambda", tf_lambda, "stable eigenvalue (default 0.5)");
    fixture_tan->add_option("--mu", tf_mu, "unstable eigenvalue (default 2)");
    fixture_tan->add_option("--tau-seed", tf_seed, "base modulus (default 1)");
    fixture_tan->add_option("--pattern", tf_pattern, "winding pattern k0,k1,... (tau_i scaling)");
    fixture_tan->add_option("-o,--output", tf_out, "output scheme file")->required();
    fixture_tan->callback([&]() {
        std::vector<long long> pattern;
        if (!tf_pattern.empty()) pattern = parse_int_list(tf_pattern);
        spit(tf_out, serialize_scheme(build_tangency_fixture(tf_points, tf_components, tf_lambda,
                                                             tf_mu, tf_seed, pattern)));
    });

    // ---- separability ----
    std::string sep_file;
    auto* sep_cmd = app.add_subcommand("separability", "separability of a declared attractor");
    auto* sep_check = sep_cmd->add_subcommand("check", "Definition-1 conditions over a facts file");
    sep_check->add_option("file", sep_file, "facts file")->required();
    sep_check->callback([&]() {
        SeparabilityFacts f = parse_facts(slurp(sep_file));
        if (!f.complement_groups.empty())
            f.attractor.bunches = enumerate_bunches(f.attractor, f.complement_groups);
        SeparabilityReport rep =
            check_separable(f.attractor, f.ends, f.table, f.roster, f.closure_complement);
        Json j = Json::object();
        j["condition1"] = verdict3_name(rep.condition1);
        j["condition2"] = verdict3_name(rep.condition2);
        j["condition3"] = verdict3_name(rep.condition3);
        j["separable"] = verdict3_name(rep.overall());
        j["notes"] = rep.notes;
        if (!f.attractor.bunches.empty()) {
            Json bs = Json::array();
            for (const auto& b : f.attractor.bunches)
                bs.push_back(Json{{"id", b.id}, {"degree", b.degree}});
            j["bunches"] = bs;
        }
        std::cout << j.dump(2) << "\n";
        rc = rep.overall() == Verdict3::pass ? 0 : rep.overall() == Verdict3::fail ? 1 : 2;
    });

    std::string crit_file;
    auto* crit_cmd = app.add_subcommand("criteria", "finite-moduli criteria");
    auto* crit_check = crit_cmd->add_subcommand("check", "Statement-1 clauses over a facts file");
    crit_check->add_option("file", crit_file, "facts file")->required();
    crit_check->callback([&]() {
        SeparabilityFacts f = parse_facts(slurp(crit_file));
        CriteriaReport rep = check_finite_moduli_criteria(f.table, f.roster);
        Json j = Json::object();
        for (const auto& [k, v] : rep.criteria)
            j["criterion" + std::to_string(k)] = verdict3_name(v);
        j["overall"] = verdict3_name(rep.overall());
        j["notes"] = rep.notes;
        std::cout << j.dump(2) << "\n";
        rc = rep.overall() == Verdict3::pass ? 0 : rep.overall() == Verdict3::fail ? 1 : 2;
    });

    // ---- plot ----
    std::string plot_ms, plot_saddle, plot_kind = "stable", plot_out;
    int plot_samples = 101;
    std::pair<double, double> plot_range{-1.0, 1.0};
    auto* plot_cmd = app.add_subcommand("plot", "plot-data emission");
    auto* plot_sep = plot_cmd->add_subcommand("separatrix", "sample a separatrix image as CSV");
    plot_sep->add_option("mapspec", plot_ms, "map spec file")->required();
    plot_sep->add_option("--saddle", plot_saddle, "source saddle label")->required();
    plot_sep->add_option("--kind", plot_kind, "stable|unstable (default stable)")
        ->check(CLI::IsMember({"stable", "unstable"}));
    plot_sep->add_option("--samples", plot_samples, "sample count (default 101)");
    plot_sep->add_option("--range", plot_range, "parameter range (default -1 1)");
    plot_sep->add_option("-o,--output", plot_out, "output CSV file")->required();
    plot_sep->callback([&]() {
        MapSpec ms = parse_mapspec(slurp(plot_ms));
        auto pts = emit_separatrix_polyline(
            ms, plot_saddle, plot_kind == "stable" ? CurveKind::stable : CurveKind::unstable,
            plot_samples, plot_range);
        std::ostringstream csv;
        csv << "x,y\n";
        for (const auto& [x, y] : pts) csv << format_real(x) << "," << format_real(y) << "\n";
        spit(plot_out, csv.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 3 : 0;
    } catch (const schemekit::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationFailed& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
