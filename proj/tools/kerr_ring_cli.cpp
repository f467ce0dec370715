// kerr_ring: command-line front end for the two-mode Kerr ring resonator
// toolkit. Subcommands: dynamics, sweep, map, quantum, snr, spectrum.
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 resource limit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kerr_ring/config.hpp"
#include "kerr_ring/csv.hpp"
#include "kerr_ring/errors.hpp"
#include "kerr_ring/model.hpp"
#include "kerr_ring/quantum.hpp"
#include "kerr_ring/semiclassical.hpp"
#include "kerr_ring/stability.hpp"
#include "kerr_ring/svg.hpp"

namespace kr = kerr_ring;
namespace fs = std::filesystem;

namespace {

struct RunContext {
    kr::RunConfig cfg;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool dry_run = false;

    std::string path(const std::string& file) const {
        return (fs::path(out_dir) / file).string();
    }
};

std::string stability_label(kr::Stability s) {
    switch (s) {
        case kr::Stability::Stable: return "stable";
        case kr::Stability::Unstable: return "unstable";
        default: return "marginal";
    }
}

void print_dry_run(const RunContext& ctx, const std::string& command) {
    std::cout << "command = " << command << "\n";
    std::cout << "out = " << ctx.out_dir << "\n";
    std::cout << "seed = " << ctx.seed << "\n";
    std::cout << "threads = " << ctx.threads << "\n";
    for (const auto& [key, value] : ctx.cfg.values)
        std::cout << key << " = " << value << "\n";
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> parse_initials(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string chunk = text.substr(pos, end - pos);
        auto pair = kr::parse_double_list(chunk);
        if (pair.size() != 2)
            throw kr::ConfigError(
                "dynamics.initials: each ';'-separated entry must be "
                "\"n_alpha,n_beta\", got '" + chunk + "'");
        if (pair[0] < 0.0 || pair[1] < 0.0)
            throw kr::ConfigError("dynamics.initials: populations must be >= 0");
        out.emplace_back(pair[0], pair[1]);
        pos = end + 1;
    }
    if (out.empty())
        throw kr::ConfigError("dynamics.initials: no initial conditions given");
    return out;
}

int cmd_dynamics(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const double t_end = ctx.cfg.get_double("dynamics.t_end", 50.0);
    const double tol = ctx.cfg.get_double("dynamics.tol", 1e-10);
    if (t_end <= 0.0) throw kr::ConfigError("dynamics.t_end must be > 0");
    const auto initials =
        parse_initials(ctx.cfg.get_string("dynamics.initials", "0,0"));

    std::vector<kr::Series> series;
    const std::vector<std::string> palette = {"#2ca02c", "#d62728", "#1f77b4",
                                              "#ff7f0e", "#9467bd", "#8c564b"};
    for (std::size_t k = 0; k < initials.size(); ++k) {
        kr::SemiclassicalState s0{std::sqrt(initials[k].first),
                                  std::sqrt(initials[k].second)};
        kr::Trajectory traj = kr::integrate(s0, p, t_end, tol);

        kr::CsvWriter csv(ctx.path("dynamics_" + std::to_string(k) + ".csv"),
                          {"t", "re_alpha", "im_alpha", "re_beta", "im_beta",
                           "n_alpha", "n_beta", "stability"});
        kr::Series na{"n_alpha (ic " + std::to_string(k) + ")",
                      palette[(2 * k) % palette.size()]};
        kr::Series nb{"n_beta (ic " + std::to_string(k) + ")",
                      palette[(2 * k + 1) % palette.size()]};
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const auto& s = traj.states[i];
            csv.write_row({kr::format_double(traj.times[i]),
                           kr::format_double(s.alpha.real()),
                           kr::format_double(s.alpha.imag()),
                           kr::format_double(s.beta.real()),
                           kr::format_double(s.beta.imag()),
                           kr::format_double(s.n_alpha()),
                           kr::format_double(s.n_beta()), "na"});
            na.x.push_back(traj.times[i]);
            na.y.push_back(s.n_alpha());
            nb.x.push_back(traj.times[i]);
            nb.y.push_back(s.n_beta());
        }
        series.push_back(std::move(na));
        series.push_back(std::move(nb));

        const auto& fin = traj.states.back();
        const double total = fin.n_alpha() + fin.n_beta();
        std::cout << "initial(" << initials[k].first << "," << initials[k].second
                  << "): final n_alpha=" << fin.n_alpha()
                  << " n_beta=" << fin.n_beta() << " residual="
                  << traj.final_residual;
        if (total > 0.0)
            std::cout << " asymmetry_ratio=" << kr::asymmetry_ratio(fin);
        std::cout << "\n";
    }
    kr::svg_line_plot(ctx.path("dynamics.svg"), "mode populations vs time", "t",
                      "n", series);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

void write_branches(
    const RunContext& ctx, const std::string& axis_label,
    const std::vector<std::pair<double, std::vector<kr::FixedPoint>>>& branches) {
    kr::CsvWriter csv(ctx.path("sweep.csv"),
                      {axis_label, "re_alpha", "im_alpha", "re_beta", "im_beta",
                       "n_alpha", "n_beta", "stability"});
    kr::Series stable_a{"n_alpha stable", "#2ca02c"};
    kr::Series stable_b{"n_beta stable", "#d62728"};
    kr::Series unstable_a{"n_alpha unstable", "#b5dcb5"};
    kr::Series unstable_b{"n_beta unstable", "#efb4b4"};
    for (auto* s : {&stable_a, &stable_b, &unstable_a, &unstable_b})
        s->markers_only = true;
    for (const auto& [value, points] : branches) {
        for (const auto& fp : points) {
            const auto& s = fp.state;
            csv.write_row({kr::format_double(value),
                           kr::format_double(s.alpha.real()),
                           kr::format_double(s.alpha.imag()),
                           kr::format_double(s.beta.real()),
                           kr::format_double(s.beta.imag()),
                           kr::format_double(s.n_alpha()),
                           kr::format_double(s.n_beta()),
                           stability_label(fp.stability)});
            const bool is_stable = fp.stability == kr::Stability::Stable;
            (is_stable ? stable_a : unstable_a).x.push_back(value);
            (is_stable ? stable_a : unstable_a).y.push_back(s.n_alpha());
            (is_stable ? stable_b : unstable_b).x.push_back(value);
            (is_stable ? stable_b : unstable_b).y.push_back(s.n_beta());
        }
    }
    kr::svg_line_plot(ctx.path("sweep.svg"), "steady-state branches",
                      axis_label, "n",
                      {stable_a, stable_b, unstable_a, unstable_b});
}

int cmd_sweep(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const std::string axis = ctx.cfg.get_string("sweep.axis", "f_in");
    const int n_starts = ctx.cfg.get_int("sweep.n_starts", 64);
    if (n_starts < 1) throw kr::ConfigError("sweep.n_starts must be >= 1");

    if (axis == "f_in") {
        const auto values = kr::grid_from_config(ctx.cfg, "sweep", "f_in");
        write_branches(ctx, "f_in",
                       kr::sweep_drive(p, values, n_starts, ctx.seed,
                                       ctx.threads));
    } else if (axis == "im_j") {
        const auto values = kr::grid_from_config(ctx.cfg, "sweep", "im_j");
        const double f_in = ctx.cfg.get_double("sweep.f_in", p.f_a);
        write_branches(ctx, "im_j",
                       kr::trsb_response(p, values, f_in, n_starts, ctx.seed,
                                         ctx.threads));
    } else {
        throw kr::ConfigError("sweep.axis must be 'f_in' or 'im_j', got '" +
                              axis + "'");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// map
// ---------------------------------------------------------------------------

int cmd_map(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const std::string axis_name = ctx.cfg.get_string("map.axis", "delta");
    kr::SolutionCountMap::Axis axis;
    if (axis_name == "delta")
        axis = kr::SolutionCountMap::Axis::Delta;
    else if (axis_name == "epsilon")
        axis = kr::SolutionCountMap::Axis::Epsilon;
    else
        throw kr::ConfigError("map.axis must be 'delta' or 'epsilon', got '" +
                              axis_name + "'");
    const auto x_values = kr::grid_from_config(ctx.cfg, "map", axis_name);
    const auto f_values = kr::grid_from_config(ctx.cfg, "map", "f_in");
    const int n_starts = ctx.cfg.get_int("map.n_starts", 64);
    if (n_starts < 1) throw kr::ConfigError("map.n_starts must be >= 1");

    const kr::SolutionCountMap map = kr::solution_count_map(
        p, axis, x_values, f_values, n_starts, ctx.seed, ctx.threads);

    kr::CsvWriter csv(ctx.path("map.csv"),
                      {axis_name, "f_in", "count_total", "count_stable"});
    std::vector<double> total(map.count_total.size()),
        stable(map.count_stable.size());
    for (std::size_t ix = 0; ix < x_values.size(); ++ix)
        for (std::size_t jf = 0; jf < f_values.size(); ++jf) {
            const std::size_t cell = ix * f_values.size() + jf;
            csv.write_row({kr::format_double(x_values[ix]),
                           kr::format_double(f_values[jf]),
                           kr::format_int(map.count_total[cell]),
                           kr::format_int(map.count_stable[cell])});
            total[cell] = map.count_total[cell];
            stable[cell] = map.count_stable[cell];
        }
    kr::svg_heatmap(ctx.path("map_total.svg"), "steady-state solution count",
                    axis_name, "f_in", x_values, f_values, total);
    kr::svg_heatmap(ctx.path("map_stable.svg"), "stable solution count",
                    axis_name, "f_in", x_values, f_values, stable);
    return 0;
}

// ---------------------------------------------------------------------------
// quantum
// ---------------------------------------------------------------------------

kr::FockSpace fock_space_from(const RunContext& ctx) {
    kr::FockSpace space;
    space.n_max = ctx.cfg.get_int("quantum.n_max", 12);
    if (space.n_max < 1) throw kr::ConfigError("quantum.n_max must be >= 1");
    return space;
}

int cmd_quantum_single(const RunContext& ctx, const kr::ModelParams& p,
                       kr::FockSpace space) {
    const kr::DensityMatrix rho =
        kr::steady_state(kr::liouvillian(p, space));
    const kr::StatisticsReport stats = kr::make_statistics(rho, p);

    {
        kr::CsvWriter csv(ctx.path("distributions.csv"), {"n", "p_a", "p_b"});
        for (int n = 0; n <= space.n_max; ++n)
            csv.write_row({kr::format_int(n), kr::format_double(stats.p_a[n]),
                           kr::format_double(stats.p_b[n])});
    }
    {
        kr::CsvWriter csv(ctx.path("statistics.csv"),
                          {"mean_a", "mean_b", "mean_delta_n", "var_delta_n",
                           "sigma_shot"});
        csv.write_row({kr::format_double(stats.mean_a),
                       kr::format_double(stats.mean_b),
                       kr::format_double(stats.mean_delta_n),
                       kr::format_double(stats.var_delta_n),
                       kr::format_double(stats.sigma_shot)});
    }

    // Single-shot PDFs (variance = Var(Delta n)) and time-integrated PDFs
    // (variance shrunk by the SEM factor 1/(kappa tau)).
    const double tau = ctx.cfg.get_double("quantum.tau", 50.0);
    const double sigma2_shot = std::max(stats.var_delta_n, 1e-12);
    const double sigma2_int = sigma2_shot / (p.kappa * tau);
    const double lo =
        std::min(stats.mean_a, stats.mean_b) - 5.0 * std::sqrt(sigma2_shot);
    const double hi =
        std::max(stats.mean_a, stats.mean_b) + 5.0 * std::sqrt(sigma2_shot);
    const auto xs = kr::linspace(lo, hi, 401);
    {
        kr::CsvWriter shot(ctx.path("pdf.csv"), {"x", "pdf_a", "pdf_b"});
        kr::CsvWriter integrated(ctx.path("pdf_integrated.csv"),
                                 {"x", "pdf_a", "pdf_b"});
        for (double x : xs) {
            shot.write_row(
                {kr::format_double(x),
                 kr::format_double(kr::pdf(stats.mean_a, sigma2_shot, x)),
                 kr::format_double(kr::pdf(stats.mean_b, sigma2_shot, x))});
            integrated.write_row(
                {kr::format_double(x),
                 kr::format_double(kr::pdf(stats.mean_a, sigma2_int, x)),
                 kr::format_double(kr::pdf(stats.mean_b, sigma2_int, x))});
        }
    }

    if (ctx.cfg.get_bool("quantum.dump_rho", false))
        kr::write_density_matrix(ctx.path("rho.bin"), rho);

    // Overlay plot: P(n) markers, integrated PDFs as lines, semiclassical
    // stable populations as vertical markers.
    std::vector<kr::Series> series;
    kr::Series pa{"P_a(n)", "#2ca02c"}, pb{"P_b(n)", "#d62728"};
    pa.markers_only = pb.markers_only = true;
    for (int n = 0; n <= space.n_max; ++n) {
        pa.x.push_back(n);
        pa.y.push_back(stats.p_a[n]);
        pb.x.push_back(n);
        pb.y.push_back(stats.p_b[n]);
    }
    const double pdf_scale =
        std::max(*std::max_element(stats.p_a.begin(), stats.p_a.end()),
                 *std::max_element(stats.p_b.begin(), stats.p_b.end())) /
        std::max(kr::pdf(0.0, sigma2_int, 0.0), 1e-300);
    kr::Series fa{"pdf_a (scaled)", "#98df8a"}, fb{"pdf_b (scaled)", "#ff9896"};
    for (double x : xs) {
        fa.x.push_back(x);
        fa.y.push_back(kr::pdf(stats.mean_a, sigma2_int, x) * pdf_scale);
        fb.x.push_back(x);
        fb.y.push_back(kr::pdf(stats.mean_b, sigma2_int, x) * pdf_scale);
    }
    series = {pa, pb, fa, fb};

    std::vector<kr::VLine> vlines;
    for (const auto& fp :
         kr::find_steady_states(p, ctx.cfg.get_int("quantum.n_starts", 64),
                                ctx.seed)) {
        if (fp.stability != kr::Stability::Stable) continue;
        vlines.push_back({fp.state.n_alpha(), "#2ca02c"});
        vlines.push_back({fp.state.n_beta(), "#d62728"});
    }
    kr::svg_line_plot(ctx.path("quantum.svg"),
                      "photon statistics (vlines: semiclassical stable)", "n",
                      "probability", series, vlines);

    std::cout << "mean_a=" << stats.mean_a << " mean_b=" << stats.mean_b
              << " mean_delta_n=" << stats.mean_delta_n
              << " var_delta_n=" << stats.var_delta_n << "\n";
    return 0;
}

int cmd_quantum_sweep(const RunContext& ctx, const kr::ModelParams& p,
                      kr::FockSpace space) {
    const auto f_values = kr::grid_from_config(ctx.cfg, "quantum", "f_in");
    kr::CsvWriter csv(ctx.path("quantum_sweep.csv"),
                      {"f_in", "mean_a", "mean_b", "mean_delta_n",
                       "var_delta_n"});
    kr::Series ma{"quantum <n_a>", "#e377c2"}, mb{"quantum <n_b>", "#2ca02c"};
    std::optional<Eigen::VectorXcd> guess;
    for (double f : f_values) {
        kr::ModelParams q = p;
        q.f_a = q.f_b = f;
        const kr::DensityMatrix rho = kr::steady_state(
            kr::liouvillian(q, space), guess ? &*guess : nullptr);
        guess = Eigen::Map<const Eigen::VectorXcd>(rho.entries.data(),
                                                   rho.entries.size());
        const kr::StatisticsReport stats = kr::make_statistics(rho, q);
        csv.write_row({kr::format_double(f), kr::format_double(stats.mean_a),
                       kr::format_double(stats.mean_b),
                       kr::format_double(stats.mean_delta_n),
                       kr::format_double(stats.var_delta_n)});
        ma.x.push_back(f);
        ma.y.push_back(stats.mean_a);
        mb.x.push_back(f);
        mb.y.push_back(stats.mean_b);
    }

    // Semiclassical branches on the same grid for the overlay.
    kr::Series sc_a{"semiclassical n_alpha (stable)", "#7f7f7f"};
    kr::Series sc_b{"semiclassical n_beta (stable)", "#bcbd22"};
    sc_a.markers_only = sc_b.markers_only = true;
    for (const auto& [f, points] :
         kr::sweep_drive(p, f_values, ctx.cfg.get_int("quantum.n_starts", 64),
                         ctx.seed, ctx.threads)) {
        for (const auto& fp : points) {
            if (fp.stability != kr::Stability::Stable) continue;
            sc_a.x.push_back(f);
            sc_a.y.push_back(fp.state.n_alpha());
            sc_b.x.push_back(f);
            sc_b.y.push_back(fp.state.n_beta());
        }
    }
    kr::svg_line_plot(ctx.path("quantum_sweep.svg"),
                      "quantum means vs semiclassical branches", "f_in", "n",
                      {ma, mb, sc_a, sc_b});
    return 0;
}

int cmd_quantum(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const kr::FockSpace space = fock_space_from(ctx);
    const std::string mode = ctx.cfg.get_string("quantum.mode", "single");
    if (mode == "single") return cmd_quantum_single(ctx, p, space);
    if (mode == "sweep") return cmd_quantum_sweep(ctx, p, space);
    throw kr::ConfigError("quantum.mode must be 'single' or 'sweep', got '" +
                          mode + "'");
}

// ---------------------------------------------------------------------------
// snr
// ---------------------------------------------------------------------------

void write_snr(const RunContext& ctx, const std::string& stem,
               const std::string& noise_label, const kr::SnrMap& map) {
    kr::CsvWriter csv(ctx.path(stem + ".csv"), {"tau", "noise", "snr"});
    for (std::size_t it = 0; it < map.tau_values.size(); ++it)
        for (std::size_t jn = 0; jn < map.noise_values.size(); ++jn)
            csv.write_row({kr::format_double(map.tau_values[it]),
                           kr::format_double(map.noise_values[jn]),
                           kr::format_double(map.at(it, jn))});
    kr::svg_heatmap(ctx.path(stem + ".svg"), "integrated SNR", "tau",
                    noise_label, map.tau_values, map.noise_values, map.snr);
}

int cmd_snr(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const kr::FockSpace space = fock_space_from(ctx);
    const auto tau_values = kr::grid_from_config(ctx.cfg, "snr", "tau");

    const bool has_thermal = ctx.cfg.has("snr.n_th_values") ||
                             ctx.cfg.has("snr.n_th_min");
    const bool has_dephasing = ctx.cfg.has("snr.gamma_phi_values") ||
                               ctx.cfg.has("snr.gamma_phi_min");
    if (!has_thermal && !has_dephasing)
        throw kr::ConfigError(
            "snr: configure a thermal axis (snr.n_th_*) and/or a dephasing "
            "axis (snr.gamma_phi_*)");

    if (has_thermal) {
        const auto noise = kr::grid_from_config(ctx.cfg, "snr", "n_th");
        write_snr(ctx, "snr_thermal", "n_th",
                  kr::snr_map(p, space, tau_values, noise,
                              kr::NoiseKind::Thermal, ctx.threads));
    }
    if (has_dephasing) {
        const auto noise = kr::grid_from_config(ctx.cfg, "snr", "gamma_phi");
        write_snr(ctx, "snr_dephasing", "gamma_phi",
                  kr::snr_map(p, space, tau_values, noise,
                              kr::NoiseKind::Dephasing, ctx.threads));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

void write_spectrum(
    const RunContext& ctx, const std::string& stem,
    const std::vector<std::pair<double, std::vector<double>>>& rows) {
    const std::size_t k = rows.empty() ? 0 : rows.front().second.size();
    std::vector<std::string> header{"v"};
    for (std::size_t i = 1; i <= k; ++i) header.push_back("eig_" + std::to_string(i));
    kr::CsvWriter csv(ctx.path(stem + ".csv"), header);
    std::vector<kr::Series> series(k);
    const std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                              "#d62728", "#9467bd", "#8c564b",
                                              "#e377c2", "#7f7f7f"};
    for (std::size_t i = 0; i < k; ++i) {
        series[i].name = "eig_" + std::to_string(i + 1);
        series[i].color = palette[i % palette.size()];
    }
    for (const auto& [v, eigs] : rows) {
        std::vector<std::string> cells{kr::format_double(v)};
        for (std::size_t i = 0; i < k; ++i) {
            cells.push_back(kr::format_double(eigs[i]));
            series[i].x.push_back(v);
            series[i].y.push_back(eigs[i]);
        }
        csv.write_row(cells);
    }
    kr::svg_line_plot(ctx.path(stem + ".svg"), stem + " eigenvalues vs V", "v",
                      "energy", series);
}

int cmd_spectrum(const RunContext& ctx) {
    const kr::ModelParams p = kr::model_from_config(ctx.cfg);
    const int n_total = ctx.cfg.get_int("spectrum.n_total", 2);
    if (n_total < 1) throw kr::ConfigError("spectrum.n_total must be >= 1");
    const int n_max = ctx.cfg.get_int("quantum.n_max", 12);
    if (n_total > n_max)
        throw kr::ConfigError("spectrum.n_total must be <= quantum.n_max");
    const auto v_values = kr::grid_from_config(ctx.cfg, "spectrum", "v");
    write_spectrum(ctx, "spectrum", kr::undriven_spectrum(p, v_values, n_total));
    write_spectrum(ctx, "spectrum_mean_field",
                   kr::undriven_spectrum_mean_field(p, v_values, n_total));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode Kerr ring resonator simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;
    bool dry_run = false;
    app.add_option("--config", config_path, "config file (INI-style)");
    app.add_option("--param", overrides,
                   "override a config value, e.g. --param model.v=0.1")
        ->take_all();
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads");
    app.add_flag("--dry-run", dry_run,
                 "print the resolved parameter set and exit");

    std::map<std::string, int (*)(const RunContext&)> commands = {
        {"dynamics", cmd_dynamics}, {"sweep", cmd_sweep},
        {"map", cmd_map},           {"quantum", cmd_quantum},
        {"snr", cmd_snr},           {"spectrum", cmd_spectrum}};
    for (const auto& [name, fn] : commands) {
        (void)fn;
        app.add_subcommand(name, name + " analysis");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error kind=ConfigError code=2 message=\"" << e.what()
                  << "\"\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunContext ctx;
        if (config_path.empty())
            throw kr::ConfigError("--config is required");
        ctx.cfg = kr::load_config(config_path);
        for (const auto& kv : overrides) kr::apply_override(ctx.cfg, kv);
        ctx.out_dir = out_opt->count() ? out_dir
                                       : ctx.cfg.get_string("run.out", out_dir);
        ctx.seed = seed_opt->count()
                       ? seed
                       : static_cast<std::uint64_t>(
                             ctx.cfg.get_int("run.seed", 0));
        ctx.threads = threads_opt->count() ? threads
                                           : ctx.cfg.get_int("run.threads", 1);
        if (ctx.threads < 1)
            throw kr::ConfigError("--threads must be >= 1");
        ctx.dry_run = dry_run;

        if (ctx.dry_run) {
            print_dry_run(ctx, command);
            return 0;
        }
        fs::create_directories(ctx.out_dir);
        return commands.at(command)(ctx);
    } catch (const kr::ConfigError& e) {
        std::cerr << "error kind=ConfigError code=2 message=\"" << e.what()
                  << "\"\n";
        return 2;
    } catch (const kr::DimensionTooLarge& e) {
        std::cerr << "error kind=DimensionTooLarge code=4 message=\"" << e.what()
                  << "\"\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error kind=SolverFailure code=3 message=\"" << e.what()
                  << "\"\n";
        return 3;
    }
}
