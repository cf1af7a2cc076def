#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "avgcyc/avgcyc.hpp"

namespace {

using namespace avgcyc;

std::string bell_poly_text(int l, int m) {
    std::string out;
    for (const auto& mono : bell_monomials(l, m)) {
        if (!out.empty()) out += " + ";
        std::string factors;
        for (std::size_t j = 0; j < mono.exps.size(); ++j) {
            if (mono.exps[j] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += "x" + std::to_string(j + 1);
            if (mono.exps[j] != 1) factors += "^" + std::to_string(mono.exps[j]);
        }
        if (factors.empty()) factors = "1";
        out += mono.coeff == 1 ? factors : std::to_string(mono.coeff) + "*" + factors;
    }
    return out.empty() ? "0" : out;
}

int run_command(const std::string& file, int order_override, const std::string& mode_override,
                int grid_override, double tol_override, const std::string& out_override,
                const std::string& samples_override) {
    SystemSpec spec;
    RunConfig config;
    try {
        std::tie(spec, config) = parse_system_file(file);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegreeOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (order_override >= 0) {
        config.order = order_override;
        if (static_cast<int>(spec.p.size()) > order_override) {
            std::cerr << "error: perturbation sections exceed --order\n";
            return 2;
        }
        spec.order = order_override;
        spec.p.resize(static_cast<std::size_t>(order_override), PolyXY::zero());
        spec.q.resize(static_cast<std::size_t>(order_override), PolyXY::zero());
    }
    if (!mode_override.empty()) {
        if (mode_override == "auto")
            config.mode = RunMode::Auto;
        else if (mode_override == "exact")
            config.mode = RunMode::Exact;
        else if (mode_override == "numeric")
            config.mode = RunMode::Numeric;
        else {
            std::cerr << "error: --mode must be auto, exact or numeric\n";
            return 2;
        }
    }
    if (grid_override > 0) config.grid = grid_override;
    if (tol_override > 0) config.tol = tol_override;
    if (!out_override.empty()) config.out_base = out_override;
    if (!samples_override.empty()) config.samples_path = samples_override;

    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    try {
        rep = run_pipeline(spec, config);
    } catch (const StageFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    auto t1 = std::chrono::steady_clock::now();
    std::cerr << "elapsed: " << std::chrono::duration<double>(t1 - t0).count() << " s\n";

    std::string text = render_text(rep);
    if (config.out_base.empty()) {
        std::cout << text;
    } else {
        std::ofstream txt(config.out_base + ".txt");
        txt << text;
        std::ofstream js(config.out_base + ".json");
        js << render_json(rep).dump(2) << "\n";
    }
    if (!config.samples_path.empty() && !rep.samples.empty()) {
        std::ofstream csv(config.samples_path);
        csv << samples_to_csv(rep.samples, config.order);
    }
    return rep.failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"averaging method toolkit for planar polynomial perturbations of centers"};
    app.require_subcommand(1);

    std::string file, mode, out, samples;
    int order = -1, grid = 0;
    double tol = 0;

    auto* run = app.add_subcommand("run", "run the full pipeline on a system file");
    run->add_option("file", file, "system description file")->required();
    run->add_option("--order", order, "averaging order override");
    run->add_option("--mode", mode, "auto | exact | numeric");
    run->add_option("--grid", grid, "zero-scan grid size");
    run->add_option("--tol", tol, "zero-scan tolerance");
    run->add_option("--out", out, "report base path (writes <out>.txt and <out>.json)");
    run->add_option("--samples", samples, "samples CSV path");

    int fk = 1;
    auto* formula = app.add_subcommand("formula", "print the order-k integral formula");
    formula->add_option("--order", fk, "averaging order k >= 1")->required();

    int bl = 1, bm = 1;
    auto* bell = app.add_subcommand("bell", "print a partial Bell polynomial");
    bell->add_option("--l", bl, "first index")->required();
    bell->add_option("--m", bm, "second index")->required();

    std::string kukles_spec;
    auto* bound = app.add_subcommand("bound", "limit-cycle bound for the Kukles family");
    bound->add_option("--kukles", kukles_spec, "m,n1,n2,n3,k")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(file, order, mode, grid, tol, out, samples);
        if (formula->parsed()) {
            avgcyc::IntegrandTemplate tmpl = avgcyc::integrand_formula(fk);
            std::cout << "y_" << fk << "(theta,z) = Y(theta,z) * Int_0^theta Y(s,z)^-1 * ( "
                      << tmpl.to_text() << " ) ds\n";
            std::cout << "f_" << fk << "(z) = y_" << fk << "(2*pi, z) / " << fk << "!\n";
            return 0;
        }
        if (bell->parsed()) {
            std::cout << "B_{" << bl << "," << bm << "} = " << bell_poly_text(bl, bm) << "\n";
            return 0;
        }
        if (bound->parsed()) {
            int m, n1, n2, n3, k;
            if (std::sscanf(kukles_spec.c_str(), "%d,%d,%d,%d,%d", &m, &n1, &n2, &n3, &k) != 5) {
                std::cerr << "error: --kukles expects m,n1,n2,n3,k\n";
                return 2;
            }
            std::cout << avgcyc::kukles_bound(m, n1, n2, n3, k) << "\n";
            return 0;
        }
    } catch (const avgcyc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const avgcyc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
