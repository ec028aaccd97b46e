#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldps/config.hpp"
#include "ldps/control.hpp"
#include "ldps/field.hpp"
#include "ldps/girsanov.hpp"
#include "ldps/grid.hpp"
#include "ldps/io.hpp"
#include "ldps/kernel.hpp"
#include "ldps/laplace.hpp"
#include "ldps/noise.hpp"
#include "ldps/presets.hpp"
#include "ldps/rate.hpp"
#include "ldps/representation.hpp"
#include "ldps/skeleton.hpp"
#include "ldps/solver.hpp"
#include "ldps/version.hpp"
#include "ldps/walsh.hpp"

namespace ldps {
namespace tasks {

using json = nlohmann::ordered_json;

/// Exit statuses of the batch front door.
enum ExitCode : int { kPass = 0, kError = 1, kFailedCheck = 2 };

struct TaskContext {
    ExperimentConfig cfg;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

namespace detail {

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << v;
    return os.str();
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << j.dump(2) << '\n';
}

inline void write_manifest(const TaskContext& ctx) {
    json m = {
        {"config_hash", hex64(config_hash(ctx.cfg.raw()))},
        {"version", kVersion},
        {"seed", ctx.seed},
        {"task", ctx.cfg.task_name()},
    };
    write_json(ctx.out_dir + "/manifest.json", m);
}

inline void write_summary(const TaskContext& ctx, const std::string& text) {
    std::ofstream out(ctx.out_dir + "/summary.txt");
    out << "task: " << ctx.cfg.task_name() << "\nseed: " << ctx.seed << "\n" << text;
}

inline std::vector<double> make_x0(const ExperimentConfig& cfg, const GridSpec& grid) {
    const std::string profile = cfg.get_string("model", "x0_profile", "zero");
    const double amp = cfg.get_double("model", "x0_amplitude", 1.0);
    const BasisSpec b = BasisSpec::sine(2);
    std::vector<double> x0(grid.n_x, 0.0);
    if (profile == "zero") return x0;
    for (std::size_t j = 0; j < grid.n_x; ++j) {
        const double x = grid.x_center(j);
        if (profile == "mode1") x0[j] = amp * b.phi(0, x);
        else if (profile == "mode12") x0[j] = amp * (b.phi(0, x) + 0.5 * b.phi(1, x));
        else throw ConfigError("unknown x0_profile '" + profile + "'");
    }
    return x0;
}

inline Control make_control(const ExperimentConfig& cfg, const GridSpec& grid) {
    const std::string kind = cfg.get_string("task", "control", "zero");
    const double scale = cfg.get_double("task", "control_scale", 1.0);
    const double bound = cfg.get_double("task", "control_bound", 0.0);
    const BasisSpec b = BasisSpec::sine(2);
    if (kind == "zero") return Control::zero(grid, bound);
    if (kind == "mode1" || kind == "mode2") {
        const std::size_t m = (kind == "mode1") ? 0 : 1;
        return Control::from_function(
            grid, [&](double, double x) { return scale * b.phi(m, x); }, bound);
    }
    throw ConfigError("unknown control '" + kind + "'");
}

inline KernelModel make_kernel(const ExperimentConfig& cfg, std::size_t default_modes = 16) {
    const std::size_t n_modes =
        static_cast<std::size_t>(cfg.get_int("model", "n_modes", static_cast<std::int64_t>(default_modes)));
    return KernelModel::heat(n_modes);
}

} // namespace detail

inline int task_sample_noise(const TaskContext& ctx) {
    const GridSpec grid = ctx.cfg.grid(ctx.seed);
    const SheetSample sheet = sample_sheet_direct(grid, ctx.seed);
    io::write_sheet_csv(ctx.out_dir + "/noise.csv", sheet);
    io::write_binary_dump(ctx.out_dir + "/noise.bin", static_cast<std::uint32_t>(grid.n_t),
                          static_cast<std::uint32_t>(grid.n_x), 0, ctx.seed, sheet.increments());
    json r = {{"task", "sample-noise"},
              {"n_t", grid.n_t},
              {"n_x", grid.n_x},
              {"T", grid.T},
              {"seed", ctx.seed}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, "wrote noise.csv and noise.bin\n");
    return kPass;
}

inline int task_solve_spde(const TaskContext& ctx) {
    const GridSpec grid = ctx.cfg.grid(ctx.seed);
    const std::string preset = ctx.cfg.get_string("model", "preset", "heat-linear");
    const CoefficientSet coeffs = presets::spde_coefficients(preset);
    const KernelModel kernel = detail::make_kernel(ctx.cfg);
    const double eps = ctx.cfg.get_double("task", "eps", 1.0);
    const double alpha = ctx.cfg.get_double("task", "alpha", 0.2);
    const std::vector<double> x0 = detail::make_x0(ctx.cfg, grid);
    const SheetSample sheet = sample_sheet_direct(grid, ctx.seed);
    const Field x = solve_spde(kernel, coeffs, eps, x0, sheet);
    io::write_field_csv(ctx.out_dir + "/field.csv", x);
    io::write_binary_dump(ctx.out_dir + "/field.bin", static_cast<std::uint32_t>(grid.n_t),
                          static_cast<std::uint32_t>(grid.n_x),
                          static_cast<std::uint32_t>(kernel.n_modes()), ctx.seed, x.values());
    json r = {{"task", "solve-spde"},
              {"preset", preset},
              {"eps", eps},
              {"sup_norm", x.sup_norm()},
              {"holder_norm_space", x.holder_norm_space(alpha)},
              {"alpha", alpha}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, "sup norm " + std::to_string(x.sup_norm()) + "\n");
    return kPass;
}

inline int task_skeleton(const TaskContext& ctx) {
    const GridSpec grid = ctx.cfg.grid(ctx.seed);
    const std::string preset = ctx.cfg.get_string("model", "preset", "heat-reaction");
    const CoefficientSet coeffs = presets::spde_coefficients(preset);
    const KernelModel kernel = detail::make_kernel(ctx.cfg);
    const std::vector<double> x0 = detail::make_x0(ctx.cfg, grid);
    const Control u = detail::make_control(ctx.cfg, grid);
    PicardConfig pc;
    pc.tolerance = ctx.cfg.get_double("task", "tolerance", 1e-9);
    pc.max_iters = static_cast<std::size_t>(ctx.cfg.get_int("task", "max_iters", 200));
    const SkeletonResult res = solve_skeleton(kernel, coeffs, x0, u, pc);
    io::write_field_csv(ctx.out_dir + "/field.csv", res.field);
    json r = {{"task", "skeleton"},
              {"preset", preset},
              {"iterations", res.iterations},
              {"final_gap", res.final_gap},
              {"converged", res.converged},
              {"gap_history", res.gap_history}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, "Picard converged in " + std::to_string(res.iterations) + " iterations\n");
    return kPass;
}

inline int task_rate(const TaskContext& ctx) {
    const std::string preset = ctx.cfg.get_string("model", "preset", "heat-linear");
    RateOptions opts;
    opts.max_iters_per_stage =
        static_cast<std::size_t>(ctx.cfg.get_int("task", "max_iters_per_stage", 4000));

    json r;
    bool pass = true;
    if (presets::is_fd_preset(preset)) {
        const FdModel m = presets::fd_model(preset);
        const std::size_t n_t = static_cast<std::size_t>(ctx.cfg.get_int("grid", "n_t", 100));
        const double T = ctx.cfg.get_double("grid", "T", 1.0);
        const double slope = ctx.cfg.get_double("task", "target_slope", 1.0);
        const double dt = T / static_cast<double>(n_t);
        std::vector<std::vector<double>> target(n_t + 1, std::vector<double>(1, 0.0));
        for (std::size_t i = 0; i <= n_t; ++i) target[i][0] = slope * dt * static_cast<double>(i);
        const RateResult opt = rate_function_fd_opt(m, {0.0}, target, dt, opts);
        const RateResult oracle = rate_function_fd(m, target, dt);
        pass = opt.converged && opt.feasible;
        r = {{"task", "rate"},         {"preset", preset},
             {"value", opt.value},     {"oracle_value", oracle.value},
             {"residual_sup", opt.residual_sup}, {"iterations", opt.iterations},
             {"converged", opt.converged}, {"feasible", opt.feasible}};
    } else {
        const GridSpec grid = ctx.cfg.grid(ctx.seed);
        const CoefficientSet coeffs = presets::spde_coefficients(preset);
        const KernelModel kernel = detail::make_kernel(ctx.cfg);
        const std::vector<double> x0 = detail::make_x0(ctx.cfg, grid);
        const std::string target_kind = ctx.cfg.get_string("task", "target", "skeleton");
        Field f_target(grid);
        if (target_kind == "skeleton") {
            const Control u = detail::make_control(ctx.cfg, grid);
            f_target = solve_skeleton(kernel, coeffs, x0, u).field;
        } else if (target_kind == "mode1-ramp") {
            const double scale = ctx.cfg.get_double("task", "target_scale", 1.0);
            const double mu1 = kernel.mu(0);
            const BasisSpec b = BasisSpec::sine(1);
            f_target = Field::from_function(grid, [&](double t, double x) {
                return scale * (1.0 - std::exp(-mu1 * t)) / mu1 * b.phi(0, x);
            });
        } else {
            throw ConfigError("unknown rate target '" + target_kind + "'");
        }
        const RateResult res = rate_function(kernel, coeffs, x0, f_target, opts);
        pass = res.converged && res.feasible;
        r = {{"task", "rate"},           {"preset", preset},
             {"target", target_kind},    {"value", res.value},
             {"residual_sup", res.residual_sup}, {"iterations", res.iterations},
             {"converged", res.converged}, {"feasible", res.feasible}};
    }
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, std::string("rate value ") + r["value"].dump() + "\n");
    return pass ? kPass : kFailedCheck;
}

inline int task_verify_representation(const TaskContext& ctx) {
    const double T = ctx.cfg.get_double("grid", "T", 0.25);
    const std::size_t n_steps = static_cast<std::size_t>(ctx.cfg.get_int("task", "n_steps", 4));
    const double clip = ctx.cfg.get_double("task", "clip", 4.0);
    const double tol = ctx.cfg.get_double("task", "tolerance", 2e-2);
    RepresentationOptions opt;
    opt.n_ctrl = static_cast<std::size_t>(ctx.cfg.get_int("task", "n_ctrl", 41));
    opt.gh_order = static_cast<std::size_t>(ctx.cfg.get_int("task", "gh_order", 16));
    const auto f = [clip](double z) { return std::min(z * z, clip); };
    const RepresentationReport rep = verify_representation(T, n_steps, f, opt);
    const bool pass = rep.gap <= tol;
    json r = {{"task", "verify-representation"},
              {"T", T},
              {"n_steps", n_steps},
              {"clip", clip},
              {"lhs", rep.lhs},
              {"rhs", rep.rhs},
              {"gap", rep.gap},
              {"tolerance", tol},
              {"pass", pass}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    io::write_dat(ctx.out_dir + "/representation.dat", {{rep.lhs, rep.rhs}});
    detail::write_summary(ctx, "gap " + std::to_string(rep.gap) + (pass ? " (pass)\n" : " (FAIL)\n"));
    return pass ? kPass : kFailedCheck;
}

inline int task_verify_laplace(const TaskContext& ctx) {
    const double T = ctx.cfg.get_double("grid", "T", 1.0);
    const double target = ctx.cfg.get_double("task", "target", 1.0);
    const double clip = ctx.cfg.get_double("task", "clip", 4.0);
    const double final_tol = ctx.cfg.get_double("task", "final_gap_tolerance", 0.05);
    const std::vector<double> eps = ctx.cfg.get_double_list("task", "eps", {0.1, 0.05, 0.02});
    LaplaceSpec spec;
    spec.eps_schedule = eps;
    spec.clip_bound = clip;
    spec.validate();

    const auto h = [&](double z) {
        const double d = z - target;
        return std::min(d * d, clip);
    };
    std::vector<LaplaceRow> rows;
    for (double e : eps) rows.push_back(laplace_terminal_quadrature(e, T, h));

    // reference: inf over straight-line endpoints z of h(z) + z^2 / (2T),
    // the inner rate evaluated by the closed-form FD oracle
    const FdModel m = presets::fd_schilder();
    const std::size_t n_t = 200;
    const double dt = T / static_cast<double>(n_t);
    auto h_plus_rate = [&](double z) {
        std::vector<std::vector<double>> line(n_t + 1, std::vector<double>(1, 0.0));
        for (std::size_t i = 0; i <= n_t; ++i)
            line[i][0] = z * static_cast<double>(i) / static_cast<double>(n_t);
        return h(z) + rate_function_fd(m, line, dt).value;
    };
    const auto [z_star, inf_value] = infimum_over_family(-3.0, 3.0, h_plus_rate);

    const LaplaceVerification rep = verify_laplace_rows(rows, inf_value);
    const bool pass = rep.gaps_decreasing && rep.final_gap <= final_tol;
    json jrows = json::array();
    std::vector<std::pair<double, double>> dat;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        jrows.push_back({{"eps", rep.rows[i].eps},
                         {"value", rep.rows[i].value},
                         {"gap", rep.gaps[i]}});
        dat.push_back({rep.rows[i].eps, rep.gaps[i]});
    }
    json r = {{"task", "verify-laplace"},
              {"rows", jrows},
              {"inf_h_plus_I", rep.inf_h_plus_I},
              {"argmin", z_star},
              {"gaps_decreasing", rep.gaps_decreasing},
              {"final_gap", rep.final_gap},
              {"pass", pass}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    io::write_dat(ctx.out_dir + "/laplace_gaps.dat", dat);
    detail::write_summary(ctx, "final gap " + std::to_string(rep.final_gap) + (pass ? " (pass)\n" : " (FAIL)\n"));
    return pass ? kPass : kFailedCheck;
}

inline int task_girsanov_check(const TaskContext& ctx) {
    const GridSpec grid = ctx.cfg.grid(ctx.seed);
    const std::string preset = ctx.cfg.get_string("model", "preset", "heat-linear");
    const CoefficientSet coeffs = presets::spde_coefficients(preset);
    const KernelModel kernel = detail::make_kernel(ctx.cfg);
    const double eps = ctx.cfg.get_double("task", "eps", 0.5);
    const std::size_t n_mc = static_cast<std::size_t>(ctx.cfg.get_int("task", "n_mc", 10000));
    const std::vector<double> x0 = detail::make_x0(ctx.cfg, grid);
    Control u = detail::make_control(ctx.cfg, grid);

    const auto phi = [](const Field& f) {
        double s = 0.0;
        const std::size_t last = f.grid().n_t;
        for (std::size_t j = 0; j < f.n_x(); ++j) s += f.at(last, j);
        return s / static_cast<double>(f.n_x());
    };
    const GirsanovReport rep = girsanov_check(kernel, coeffs, eps, x0, u, phi, n_mc, ctx.seed);
    json r = {{"task", "girsanov-check"},
              {"preset", preset},
              {"eps", eps},
              {"n_mc", n_mc},
              {"weighted_mean", rep.weighted_mean},
              {"baseline_mean", rep.baseline_mean},
              {"diff", rep.diff},
              {"diff_stderr", rep.diff_stderr},
              {"mean_weight", rep.mean_weight},
              {"weight_stderr", rep.weight_stderr},
              {"ess", rep.ess},
              {"degenerate", rep.degenerate},
              {"pass", rep.pass}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, std::string("girsanov ") + (rep.pass ? "pass\n" : "FAIL\n"));
    return rep.pass ? kPass : kFailedCheck;
}

inline int task_verify_kernel(const TaskContext& ctx) {
    // audit grid defaults target the singular regime of the shipped kernel
    GridSpec grid;
    grid.T = ctx.cfg.get_double("grid", "T", 0.2);
    grid.n_t = static_cast<std::size_t>(ctx.cfg.get_int("grid", "n_t", 100));
    grid.n_x = static_cast<std::size_t>(ctx.cfg.get_int("grid", "n_x", 128));
    grid.seed = ctx.seed;
    grid.validate();
    const KernelModel kernel = detail::make_kernel(ctx.cfg, 64);
    Assumption4Options opt;
    opt.alpha = ctx.cfg.get_double("task", "alpha", 0.2);
    const EstimateReport rep = verify_assumption4(kernel, grid, opt);
    detail::write_json(ctx.out_dir + "/result.json", rep.to_json());
    detail::write_summary(ctx, std::string("kernel audit ") + (rep.passes ? "pass\n" : "FAIL\n"));
    return rep.passes ? kPass : kFailedCheck;
}

inline int task_sweep_theorem12(const TaskContext& ctx) {
    const GridSpec grid = ctx.cfg.grid(ctx.seed);
    const std::string preset = ctx.cfg.get_string("model", "preset", "heat-linear");
    const CoefficientSet coeffs = presets::spde_coefficients(preset);
    const KernelModel kernel = detail::make_kernel(ctx.cfg);
    const std::vector<double> eps =
        ctx.cfg.get_double_list("task", "eps", {0.2, 0.1, 0.05, 0.025});
    const std::size_t n_seeds = static_cast<std::size_t>(ctx.cfg.get_int("task", "n_seeds", 200));
    const std::vector<double> x0 = detail::make_x0(ctx.cfg, grid);
    const Control u = detail::make_control(ctx.cfg, grid);

    const auto table = convergence_sweep(
        kernel, coeffs, grid, [&](double) { return x0; }, [&](double) { return u; },
        [](double e) { return e; }, eps, n_seeds, ctx.seed);
    io::write_sweep_csv(ctx.out_dir + "/sweep.csv", table);
    const double ratio = table.back().q90 / table.front().q90;
    const bool pass = ratio < 0.5;
    json jrows = json::array();
    for (const auto& row : table)
        jrows.push_back({{"eps", row.eps}, {"q50", row.q50}, {"q90", row.q90}});
    json r = {{"task", "sweep-theorem12"},
              {"rows", jrows},
              {"q90_ratio", ratio},
              {"pass", pass}};
    detail::write_json(ctx.out_dir + "/result.json", r);
    detail::write_summary(ctx, "q90 ratio " + std::to_string(ratio) + (pass ? " (pass)\n" : " (FAIL)\n"));
    return pass ? kPass : kFailedCheck;
}

/// Dispatch a parsed configuration. The manifest is written before the task
/// runs, so it exists even when the task fails.
inline int run(const TaskContext& ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    ctx.cfg.validate();
    detail::write_manifest(ctx);
    const std::string task = ctx.cfg.task_name();
    if (task == "sample-noise") return task_sample_noise(ctx);
    if (task == "solve-spde") return task_solve_spde(ctx);
    if (task == "skeleton") return task_skeleton(ctx);
    if (task == "rate") return task_rate(ctx);
    if (task == "verify-representation") return task_verify_representation(ctx);
    if (task == "verify-laplace") return task_verify_laplace(ctx);
    if (task == "girsanov-check") return task_girsanov_check(ctx);
    if (task == "verify-kernel") return task_verify_kernel(ctx);
    if (task == "sweep-theorem12") return task_sweep_theorem12(ctx);
    throw ConfigError("unknown task '" + task + "'");
}

} // namespace tasks
} // namespace ldps
