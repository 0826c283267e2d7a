#include "vdlab/cli.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "vdlab/dynamics.hpp"
#include "vdlab/extensions.hpp"
#include "vdlab/invariants.hpp"
#include "vdlab/laxcore.hpp"
#include "vdlab/projection.hpp"
#include "vdlab/random.hpp"
#include "vdlab/scattering.hpp"

namespace vdlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json vec_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

struct ResolvedInputs {
    PhasePoint p0;
    CouplingParams c;
};

/// Missing fields are drawn from the seed: couplings first, then the point,
/// so a config that pins one of them still reads the same stream positions.
ResolvedInputs resolve_inputs(const ExperimentConfig& cfg, bool want_kappa) {
    std::mt19937_64 rng(cfg.seed);
    ResolvedInputs r;
    if (cfg.mu && cfg.nu) {
        r.c = CouplingParams(*cfg.mu, *cfg.nu);
        r.c.kappa = cfg.kappa;
    } else {
        r.c = random_couplings(rng);
        r.c.kappa = cfg.kappa;
    }
    if (want_kappa && !r.c.kappa) {
        while (true) {
            const double kappa = uniform(rng, 0.0, 3.141592653589793);
            if (std::abs(std::sin(kappa)) > 0.05) {
                r.c.kappa = kappa;
                break;
            }
        }
    }
    if (cfg.lambda0 && cfg.theta0)
        r.p0 = PhasePoint(*cfg.lambda0, *cfg.theta0);
    else
        r.p0 = random_phase_point(rng, cfg.n);
    return r;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    const Eigen::Index n = traj.points.front().n();
    std::ofstream out(path);
    out << "t";
    for (Eigen::Index a = 1; a <= n; ++a) out << ",lambda_" << a;
    for (Eigen::Index a = 1; a <= n; ++a) out << ",theta_" << a;
    out << ",H";
    for (Eigen::Index a = 1; a <= n; ++a) out << ",theta_hat_" << a;
    out << "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << fmt17(traj.times[i]);
        for (Eigen::Index a = 0; a < n; ++a) out << "," << fmt17(traj.points[i].lambda[a]);
        for (Eigen::Index a = 0; a < n; ++a) out << "," << fmt17(traj.points[i].theta[a]);
        out << "," << fmt17(traj.energy[i]);
        for (Eigen::Index a = 0; a < n; ++a) out << "," << fmt17(traj.theta_hat[i][a]);
        out << "\n";
    }
}

struct CsvTable {
    std::vector<double> times;
    std::vector<Vec> lambda;
    std::vector<Vec> theta;
};

CsvTable read_trajectory_csv(const fs::path& path, Eigen::Index n) {
    std::ifstream in(path);
    CsvTable t;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < static_cast<std::size_t>(1 + 2 * n)) continue;
        t.times.push_back(row[0]);
        Vec l(n), th(n);
        for (Eigen::Index a = 0; a < n; ++a) {
            l[a] = row[1 + a];
            th[a] = row[1 + n + a];
        }
        t.lambda.push_back(l);
        t.theta.push_back(th);
    }
    return t;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

int run_simulate(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const ResolvedInputs in = resolve_inputs(cfg, false);
    const Trajectory traj = integrate(in.p0, in.c, cfg.t0, cfg.t1, cfg.out_dt, cfg.tol);
    write_trajectory_csv(out_dir / "trajectory.csv", traj);

    json j;
    j["mode"] = "simulate";
    j["n"] = cfg.n;
    j["mu"] = in.c.mu;
    j["nu"] = in.c.nu;
    j["seed"] = cfg.seed;
    j["samples"] = traj.size();
    j["steps_accepted"] = traj.stats.accepted;
    j["steps_rejected"] = traj.stats.rejected;
    j["energy_drift_rel"] =
        std::abs(traj.energy.back() - traj.energy.front()) / std::abs(traj.energy.front());
    write_json(out_dir / "summary.json", j);
    return 0;
}

int run_project(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const ResolvedInputs in = resolve_inputs(cfg, false);
    Trajectory traj;
    for (double t = cfg.t0;; t += cfg.out_dt) {
        if (t > cfg.t1 + 1e-12) break;
        const PhasePoint p = solve_at(in.p0, in.c, t - cfg.t0);
        traj.times.push_back(t);
        traj.energy.push_back(hamiltonian(p, in.c));
        traj.theta_hat.push_back(lax_spectrum(build_bundle(p, in.c)));
        traj.points.push_back(p);
    }
    write_trajectory_csv(out_dir / "projected_trajectory.csv", traj);

    // cross-check against a previous simulate run on the same grid
    const fs::path sim = out_dir / "trajectory.csv";
    if (fs::exists(sim)) {
        const CsvTable ref = read_trajectory_csv(sim, cfg.n);
        double dl = 0.0, dth = 0.0;
        const std::size_t m = std::min(ref.times.size(), traj.size());
        std::size_t compared = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (std::abs(ref.times[i] - traj.times[i]) > 1e-9) continue;
            ++compared;
            for (Eigen::Index a = 0; a < cfg.n; ++a) {
                dl = std::max(dl, std::abs(ref.lambda[i][a] - traj.points[i].lambda[a]));
                dth = std::max(dth, std::abs(ref.theta[i][a] - traj.points[i].theta[a]));
            }
        }
        json j;
        j["compared_samples"] = compared;
        j["max_abs_diff_lambda"] = dl;
        j["max_abs_diff_theta"] = dth;
        write_json(out_dir / "crosscheck.json", j);
    }
    return 0;
}

int run_scatter(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const ResolvedInputs in = resolve_inputs(cfg, false);
    if (!(cfg.t0 <= -20.0 && cfg.t1 >= 20.0))
        throw ValidationError({"scatter mode needs t0 <= -20 and t1 >= 20"});
    const Trajectory traj = integrate_window(in.p0, in.c, cfg.t0, cfg.t1, cfg.out_dt, cfg.tol);
    write_trajectory_csv(out_dir / "trajectory.csv", traj);

    const ScatteringData sd = scattering_data(in.p0, in.c);
    const AsymptoticsReport rep = verify_asymptotics(traj, sd);

    json j;
    j["theta_plus"] = vec_json(sd.theta_plus);
    j["lambda_plus"] = vec_json(sd.lambda_plus);
    j["theta_minus"] = vec_json(sd.theta_minus);
    j["lambda_minus"] = vec_json(sd.lambda_minus);
    json tails = json::array();
    json rates = json::array();
    for (Eigen::Index a = 0; a < cfg.n; ++a) {
        tails.push_back(std::max(rep.endpoint_deviation_plus[a], rep.endpoint_deviation_minus[a]));
        rates.push_back(std::min(rep.decay_rate_plus[a], -rep.decay_rate_minus[a]));
    }
    j["tail_residuals"] = tails;
    j["decay_rate"] = rates;
    j["theta_fit_plus"] = vec_json(rep.theta_fit_plus);
    j["theta_fit_minus"] = vec_json(rep.theta_fit_minus);
    j["lambda_fit_plus"] = vec_json(rep.lambda_fit_plus);
    j["lambda_fit_minus"] = vec_json(rep.lambda_fit_minus);
    write_json(out_dir / "scattering.json", j);
    return 0;
}

int run_invariants(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const ResolvedInputs in = resolve_inputs(cfg, false);
    const LaxBundle lb = build_bundle(in.p0, in.c);
    const Vec K = char_poly_coeffs(lb.L);
    const int n = static_cast<int>(cfg.n);

    const VanDiejenParams vp = VanDiejenParams::two_parameter(in.c);
    Vec H(n + 1);
    for (int l = 0; l <= n; ++l) H[l] = vd_hamiltonian(in.p0, vp, l);

    const Mat T = relation_matrix(in.c, n);
    const Vec pred = T * H;
    double rel_res = 0.0;
    for (int m = 0; m <= n; ++m) rel_res = std::max(rel_res, std::abs(K[m] - pred[m]));

    const double max_bracket = cfg.n >= 2 ? involution_check(in.p0, in.c) : 0.0;

    json j;
    j["K"] = vec_json(K);
    j["H"] = vec_json(H);
    j["relation_residual"] = rel_res;
    j["max_bracket"] = max_bracket;
    write_json(out_dir / "invariants.json", j);
    return 0;
}

int run_verify(const ExperimentConfig& cfg, const fs::path& out_dir) {
    std::mt19937_64 rng(cfg.seed);
    struct Worst {
        double lcl = 0, herm = 0, commut = 0, trace = 0, dy = 0, b_anti = 0, b_comm = 0,
               lax = 0, proj = 0, h1 = 0, relation = 0, bracket = 0, min_eig = 1e300,
               pairing = 0;
    } w;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        const CouplingParams c = random_couplings(rng);
        const PhasePoint p = random_phase_point(rng, cfg.n);
        const DoubledIndex d = DoubledIndex::from(p);
        const LaxBundle lb = build_bundle(p, c);

        w.lcl = std::max(w.lcl, group_relation_residual(lb));
        w.herm = std::max(w.herm, (lb.L - lb.L.adjoint()).cwiseAbs().maxCoeff() /
                                      std::max(1.0, lb.L.cwiseAbs().maxCoeff()));
        w.commut = std::max(w.commut, commutation_residual(lb, d, c));

        Eigen::SelfAdjointEigenSolver<CMat> es(lb.L, Eigen::EigenvaluesOnly);
        w.min_eig = std::min(w.min_eig, es.eigenvalues().minCoeff());
        const Vec th = lax_spectrum(lb);
        for (Eigen::Index k = 0; k < cfg.n; ++k) {
            const double pr = std::abs(std::log(es.eigenvalues()[k] *
                                                es.eigenvalues()[2 * cfg.n - 1 - k]));
            w.pairing = std::max(w.pairing, pr);
        }

        w.trace = std::max(w.trace, std::abs(lb.L.trace().real() - 2.0 * hamiltonian(p, c)) /
                                        std::max(1.0, std::abs(lb.L.trace().real())));

        const BMatrixBundle bb = build_b_bundle(p, c);
        const CMat half = 0.5 * (lb.L - c_conjugate(lb.L));
        const double lscale = std::max(1.0, lb.L.cwiseAbs().maxCoeff());
        w.dy = std::max(w.dy, (Mat(bb.D.asDiagonal()).cast<Complex>() + bb.Y - half)
                                  .cwiseAbs()
                                  .maxCoeff() /
                                  lscale);
        const double bscale = std::max(1.0, bb.B.cwiseAbs().maxCoeff());
        w.b_anti = std::max(w.b_anti, (bb.B + bb.B.adjoint()).cwiseAbs().maxCoeff() / bscale);
        const Mat C = involution_matrix(cfg.n);
        w.b_comm = std::max(w.b_comm, (bb.B * C - C * bb.B).cwiseAbs().maxCoeff() / bscale);

        w.lax = std::max(w.lax, lax_residual(p, c, 1e-4));

        for (double t : {1.0, -1.0}) {
            const PhasePoint ps = solve_at(p, c, t);
            Vec y0(2 * cfg.n);
            y0.head(cfg.n) = p.lambda;
            y0.tail(cfg.n) = p.theta;
            const Trajectory tr = integrate(p, c, 0.0, t, std::abs(t), 1e-11);
            const PhasePoint& pe = tr.points.back();
            w.proj = std::max(w.proj, (ps.lambda - pe.lambda).cwiseAbs().maxCoeff());
            w.proj = std::max(w.proj, (ps.theta - pe.theta).cwiseAbs().maxCoeff());
        }

        const int n = static_cast<int>(cfg.n);
        const VanDiejenParams vp = VanDiejenParams::two_parameter(c);
        const double h1 = vd_hamiltonian(p, vp, 1);
        const double cst = 2.0 * std::cos(c.nu + (n - 1) * c.mu) * std::sin(n * c.mu) /
                           std::sin(c.mu);
        w.h1 = std::max(w.h1, std::abs(h1 + cst - lb.L.trace().real()) /
                                  std::max(1.0, std::abs(lb.L.trace().real())));

        Vec H(n + 1);
        for (int l = 0; l <= n; ++l) H[l] = vd_hamiltonian(p, vp, l);
        const Vec K = char_poly_coeffs(lb.L);
        const Vec pred = relation_matrix(c, n) * H;
        for (int m = 0; m <= n; ++m)
            w.relation = std::max(w.relation, std::abs(K[m] - pred[m]));

        if (cfg.n >= 2 && trial < 5) w.bracket = std::max(w.bracket, involution_check(p, c));
    }

    const auto entry = [](double value, double threshold) {
        json e;
        e["value"] = value;
        e["threshold"] = threshold;
        e["pass"] = value < threshold;
        return e;
    };
    json j;
    j["trials"] = cfg.trials;
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;
    j["group_relation"] = entry(w.lcl, 1e-10);
    j["hermiticity"] = entry(w.herm, 1e-12);
    j["commutation"] = entry(w.commut, 1e-10);
    j["min_eigenvalue_positive"] = w.min_eig > 0.0;
    j["pairing"] = entry(w.pairing, 1e-9);
    j["trace_identity"] = entry(w.trace, 1e-10);
    j["d_plus_y"] = entry(w.dy, 1e-10);
    j["b_anti_hermitian"] = entry(w.b_anti, 1e-12);
    j["b_involution_commutant"] = entry(w.b_comm, 1e-12);
    j["lax_representation"] = entry(w.lax, 1e-6);
    j["projection_agreement"] = entry(w.proj, 1e-6);
    j["h1_trace_identity"] = entry(w.h1, 1e-9);
    j["relation_k_th"] = entry(w.relation, 1e-8);
    if (cfg.n >= 2) j["involution_bracket"] = entry(w.bracket, 1e-6);

    bool all = w.min_eig > 0.0;
    for (const auto& [key, val] : j.items())
        if (val.is_object() && val.contains("pass")) all = all && val["pass"].get<bool>();
    j["all_pass"] = all;
    write_json(out_dir / "verify.json", j);
    return all ? 0 : 3;
}

int run_conjectures(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const ResolvedInputs in = resolve_inputs(cfg, true);
    std::vector<Complex> etas;
    if (cfg.etas_re.empty()) {
        etas = {Complex(0.7, 0.0), Complex(1.0, 0.0), Complex(1.5, 0.5), Complex(2.2, 0.0),
                Complex(3.0, -0.3)};
    } else {
        for (std::size_t i = 0; i < cfg.etas_re.size(); ++i)
            etas.emplace_back(cfg.etas_re[i],
                              i < cfg.etas_im.size() ? cfg.etas_im[i] : 0.0);
    }
    const ConjectureReport rep = conjecture_report(cfg.n, in.c, etas, cfg.trials, cfg.seed);

    json cells = json::array();
    for (const auto& cell : rep.cells) {
        json e;
        if (cell.three_param) {
            e["kind"] = "three_parameter";
            e["kappa"] = *in.c.kappa;
        } else {
            e["kind"] = "spectral";
            e["eta"] = {cell.eta.real(), cell.eta.imag()};
        }
        e["seed"] = cell.seed;
        e["conservation_residual"] = cell.conservation_residual;
        e["involution_residual"] = cell.involution_residual;
        e["pass"] = cell.pass;
        cells.push_back(e);
    }
    json j;
    j["mu"] = in.c.mu;
    j["nu"] = in.c.nu;
    j["kappa"] = *in.c.kappa;
    j["n"] = cfg.n;
    j["conservation_threshold"] = rep.conservation_threshold;
    j["involution_threshold"] = rep.involution_threshold;
    j["cells"] = cells;
    j["all_pass"] = rep.all_pass;
    write_json(out_dir / "conjectures.json", j);
    return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    const auto violations = cfg.violations();
    if (!violations.empty()) {
        std::cerr << "config rejected:\n";
        for (const auto& v : violations) std::cerr << "  - " << v << "\n";
        return 2;
    }
    const fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        std::cerr << "cannot create output directory " << out << ": " << ec.message() << "\n";
        return 2;
    }

    try {
        if (cfg.mode == "simulate") return run_simulate(cfg, out);
        if (cfg.mode == "project") return run_project(cfg, out);
        if (cfg.mode == "scatter") return run_scatter(cfg, out);
        if (cfg.mode == "invariants") return run_invariants(cfg, out);
        if (cfg.mode == "verify") return run_verify(cfg, out);
        if (cfg.mode == "conjectures") return run_conjectures(cfg, out);
        std::cerr << "unknown mode '" << cfg.mode << "'\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = e.what();
        j["mode"] = cfg.mode;
        j["seed"] = cfg.seed;
        write_json(out / "error.json", j);
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace vdlab
