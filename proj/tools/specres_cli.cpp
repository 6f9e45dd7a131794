// Command-line runner: configuration-driven stages writing CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 contract violation, 3 configuration error,
// 4 numerical non-convergence.

#include "specres/config.hpp"
#include "specres/io.hpp"
#include "specres/mourre.hpp"
#include "specres/pipeline.hpp"
#include "specres/quadrature.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace specres;

constexpr const char* kToolVersion = "0.1.0";

struct StageClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

struct Manifest {
    ordered_json stages = ordered_json::array();

    void add(const std::string& name, long long wall_ms,
             const std::vector<std::string>& outputs) {
        ordered_json s;
        s["name"] = name;
        s["wall_ms"] = wall_ms;
        s["outputs"] = outputs;
        stages.push_back(s);
    }
    void write(const ExperimentConfig& cfg, const std::string& out_dir) const {
        ordered_json j;
        j["config_hash"] = config_hash(cfg);
        j["tool_version"] = kToolVersion;
        j["stages"] = stages;
        write_json(j, out_dir + "/manifest.json");
    }
};

std::string path_join(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

SweepOptions sweep_options(const ExperimentConfig& cfg) {
    SweepOptions opts;
    opts.interval = cfg.interval;
    opts.n = cfg.n;
    opts.plateau_halfwidth = cfg.plateau_halfwidth;
    opts.time_max_tau = cfg.time_max_tau;
    opts.time_count = cfg.time_count;
    opts.method = TraceMethod::ClosedForm;
    opts.jobs = cfg.jobs;
    return opts;
}

/// kappa_0 estimate from the contraction requirement c*kappa^2 < r/2.
double kappa0_estimate(const TaylorApproximant& taylor) {
    const double c = std::max(taylor.sup_bound, 1e-300);
    return std::sqrt(0.5 * taylor.radius_r / c);
}

void check_kappa_max(const ExperimentConfig& cfg, const TaylorApproximant& taylor) {
    const double k0 = kappa0_estimate(taylor);
    if (cfg.kappa_max > k0)
        fail_config("kappa.max = " + std::to_string(cfg.kappa_max) +
                    " exceeds the model's kappa_0 estimate " + std::to_string(k0));
}

int run_fgr(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;
    FriedrichsModel model = build_friedrichs(cfg.friedrichs_spec());

    BoundaryTrace tr = boundary_trace(model, cfg.interval, 0.0, cfg.n, TraceMethod::ClosedForm);
    const double gamma = golden_rule_width(tr, model.lambda);
    BoundaryTrace tr_pv =
        boundary_trace(model, cfg.interval, 0.0, cfg.n, TraceMethod::PvQuadrature);
    const double gamma_pv = golden_rule_width(tr_pv, model.lambda);
    const double gamma_plemelj = 2.0 * M_PI * model.coupling(model.lambda);

    write_trace_csv(tr, path_join(out_dir, "trace.csv"));
    ordered_json j;
    j["lambda"] = model.lambda;
    j["gamma"] = gamma;
    j["gamma_pv"] = gamma_pv;
    j["gamma_plemelj"] = gamma_plemelj;
    j["im_F_at_lambda"] = tr.value_at(model.lambda).imag();
    j["c_bound"] = tr.c_bound;
    write_json(j, path_join(out_dir, "gamma.json"));
    manifest.add("fgr", clock.ms(), {"trace.csv", "gamma.json"});
    manifest.write(cfg, out_dir);
    return 0;
}

int run_resonance(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;
    FriedrichsModel model = build_friedrichs(cfg.friedrichs_spec());
    SweepOptions opts = sweep_options(cfg);

    BoundaryTrace tr0 = boundary_trace(model, cfg.interval, 0.0, cfg.n, opts.method);
    const double gamma = golden_rule_width(tr0, model.lambda);
    const double r = 0.5 * std::min(model.lambda - cfg.interval.lo,
                                    cfg.interval.hi - model.lambda);

    std::ofstream jsonl(path_join(out_dir, "resonances.jsonl"));
    std::vector<Resonance> ladder;
    for (double kappa : cfg.kappa_ladder()) {
        BoundaryTrace tr = boundary_trace(model, cfg.interval, kappa, cfg.n, opts.method);
        ReducedFunction red = make_reduced(tr, model.lambda, model.phi_V_phi());
        TaylorApproximant taylor = build_taylor(tr, red.lambda1, cfg.n, r);
        if (kappa == cfg.kappa_ladder().front()) check_kappa_max(cfg, taylor);
        Resonance res = find_resonance(taylor, kappa);
        res.gamma_fgr = gamma;
        res.expansion_gap = expansion_gap(res, tr0, model.lambda, model.phi_V_phi());
        append_resonance_jsonl(res, jsonl);
        ladder.push_back(res);
    }
    ordered_json j;
    j["gamma"] = gamma;
    j["expansion_slope"] = expansion_slope(ladder);
    write_json(j, path_join(out_dir, "resonance_summary.json"));
    manifest.add("resonance", clock.ms(), {"resonances.jsonl", "resonance_summary.json"});
    manifest.write(cfg, out_dir);
    return 0;
}

int run_decay(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;
    FriedrichsModel model = build_friedrichs(cfg.friedrichs_spec());
    SweepOptions opts = sweep_options(cfg);

    BoundaryTrace tr0 = boundary_trace(model, cfg.interval, 0.0, cfg.n, opts.method);
    const double gamma = golden_rule_width(tr0, model.lambda);
    const double kappa = cfg.kappa_max;
    SweepRecord rec = run_single_kappa(model, tr0, gamma, kappa, opts);

    write_survival_csv(rec.survival, path_join(out_dir, "survival_spectral.csv"));
    std::vector<std::string> outputs{"survival_spectral.csv", "decay_report.json"};

    double direct_spectral_sup = std::numeric_limits<double>::quiet_NaN();
    if (cfg.grid_N_direct > 0) {
        MatrixModel star = discretize(model, cfg.grid_N_direct);
        Cutoff g = make_cutoff(cfg.interval, model.lambda, cfg.plateau_halfwidth);
        SurvivalSeries direct = survival_direct(star, g, kappa, rec.survival.times);
        write_survival_csv(direct, path_join(out_dir, "survival_direct.csv"));
        outputs.insert(outputs.begin() + 1, "survival_direct.csv");
        direct_spectral_sup = 0.0;
        for (Eigen::Index i = 0; i < direct.times.size(); ++i)
            direct_spectral_sup = std::max(
                direct_spectral_sup, std::abs(direct.values(i) - rec.survival.values(i)));
    }

    ordered_json j;
    j["kappa"] = kappa;
    j["gamma"] = gamma;
    j["resonance"] = resonance_json(rec.res);
    j["a_fit"] = {{"re", rec.fit.amplitude.real()}, {"im", rec.fit.amplitude.imag()}};
    j["lambda_fit"] = {{"re", rec.fit.lambda_fit.real()}, {"im", rec.fit.lambda_fit.imag()}};
    j["b_sup_weighted_n"] = rec.sups.sup_weighted_n;
    j["b_sup_weighted_nm1"] = rec.sups.sup_weighted_nm1;
    j["b_sup"] = rec.sups.sup_abs;
    j["rn_l1_norms"] = rec.rn_norms;
    j["uniqueness_gap"] = std::abs(rec.res.lambda_res - rec.fit.lambda_fit);
    j["uniqueness_C"] = rec.uniqueness_C;
    j["ghat_domination_C"] = rec.ghat_C;
    if (!std::isnan(direct_spectral_sup)) j["direct_spectral_sup"] = direct_spectral_sup;
    write_json(j, path_join(out_dir, "decay_report.json"));
    manifest.add("decay", clock.ms(), outputs);
    manifest.write(cfg, out_dir);
    return 0;
}

int run_sweep_stage(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;
    FriedrichsModel model = build_friedrichs(cfg.friedrichs_spec());
    SweepOptions opts = sweep_options(cfg);
    SweepResult sw = run_sweep(model, cfg.kappa_ladder(), opts);

    std::ofstream jsonl(path_join(out_dir, "resonances.jsonl"));
    std::ofstream points(path_join(out_dir, "scaling_points.csv"));
    points << std::setprecision(17)
           << "kappa,expansion_gap,b_sup,b_weighted_nm1,rn_j0,rn_order0,uniqueness_C,ghat_C\n";
    std::vector<double> kappas, gaps, bsups, rn0, rn_order0;
    std::vector<Resonance> ladder;
    for (const auto& rec : sw.records) {
        append_resonance_jsonl(rec.res, jsonl);
        ladder.push_back(rec.res);
        kappas.push_back(rec.kappa);
        gaps.push_back(rec.res.expansion_gap);
        bsups.push_back(rec.sups.sup_abs);
        rn0.push_back(rec.rn_norms[0]);
        rn_order0.push_back(rec.rn_order0_norm);
        points << rec.kappa << "," << rec.res.expansion_gap << "," << rec.sups.sup_abs << ","
               << rec.sups.sup_weighted_nm1 << "," << rec.rn_norms[0] << ","
               << rec.rn_order0_norm << "," << rec.uniqueness_C << "," << rec.ghat_C << "\n";
        write_survival_csv(rec.survival,
                           path_join(out_dir, "survival_kappa_" + std::to_string(rec.kappa) +
                                                  ".csv"));
    }

    ordered_json j;
    j["gamma"] = sw.gamma;
    ordered_json slopes;
    slopes["expansion"] = expansion_slope(ladder);
    slopes["remainder"] = loglog_slope(kappas, bsups);
    for (int jj = 0; jj <= cfg.n; ++jj) {
        std::vector<double> vals;
        for (const auto& rec : sw.records) vals.push_back(rec.rn_norms[jj]);
        slopes["rn_j" + std::to_string(jj)] = loglog_slope(kappas, vals);
    }
    j["slopes"] = slopes;
    auto cmp = compare_log_model(kappas, rn_order0);
    j["rn_log_model"] = {{"log_model_residual", cmp.log_model_residual},
                         {"best_power_residual", cmp.best_power_residual},
                         {"best_power", cmp.best_power},
                         {"log_model_wins", cmp.log_model_wins()}};
    double wmin = std::numeric_limits<double>::max(), wmax = 0.0;
    double umin = std::numeric_limits<double>::max(), umax = 0.0;
    for (const auto& rec : sw.records) {
        const double wn = rec.sups.sup_weighted_nm1 / (rec.kappa * rec.kappa);
        wmin = std::min(wmin, wn);
        wmax = std::max(wmax, wn);
        umin = std::min(umin, rec.uniqueness_C);
        umax = std::max(umax, rec.uniqueness_C);
    }
    j["weighted_remainder_stability"] = wmax / wmin;
    j["uniqueness_stability"] = umax / umin;
    write_json(j, path_join(out_dir, "sweep_report.json"));
    manifest.add("sweep", clock.ms(),
                 {"resonances.jsonl", "scaling_points.csv", "sweep_report.json"});
    manifest.write(cfg, out_dir);
    return 0;
}

int run_mourre_check(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;

    // identities and relative bounds run on a small model (dense matrix algebra);
    // certificates and the virial check run on the configured star grid
    MatrixModel identity_model;
    MatrixModel model;
    const bool with_certificates = !cfg.is_random_model();
    if (cfg.is_random_model()) {
        identity_model = random_matrix_model(cfg.random_size, cfg.seed);
        model = identity_model;
    } else {
        FriedrichsModel fm = build_friedrichs(cfg.friedrichs_spec());
        identity_model = discretize(fm, std::min(cfg.mourre_grid_N, 120));
        model = discretize(fm, cfg.mourre_grid_N);
    }

    CommutatorLedger ledger = build_ledger(identity_model, cfg.mourre_nu);
    auto residuals = commutator_identities_check(ledger, 0.1, std::min(3, cfg.mourre_nu - 2));
    const double virial = virial_residual(model, 0.0);
    const double comm_norm = commutator_i(model.H, model.A).norm();

    MourreCertificate reduced0, reduced, unreduced;
    if (with_certificates) {
        CertificateOptions copts;
        reduced0 = mourre_certificate(model, cfg.mourre_delta, true, 0.0, copts);
        copts.theta_target = 0.5 * reduced0.theta;
        reduced = mourre_certificate(model, cfg.mourre_delta, true, cfg.mourre_kappa, copts);
        unreduced = mourre_certificate(model, cfg.mourre_delta, false, cfg.mourre_kappa, copts);
    }

    bool pass = true;
    ordered_json rj = ordered_json::array();
    for (const auto& r : residuals) {
        ordered_json e;
        e["name"] = r.name;
        e["residual"] = r.residual;
        e["scale"] = r.scale;
        e["tol"] = r.tol;
        e["pass"] = r.pass();
        rj.push_back(e);
        pass = pass && r.pass();
        std::cout << (r.pass() ? "[PASS] " : "[FAIL] ") << r.name
                  << " residual=" << r.residual << " scale=" << r.scale << "\n";
    }
    const bool virial_ok = virial <= 1e-10 * std::max(1.0, comm_norm);
    pass = pass && virial_ok;
    std::cout << (virial_ok ? "[PASS] " : "[FAIL] ") << "virial residual=" << virial << "\n";

    auto cert_json = [](const MourreCertificate& c) {
        ordered_json e;
        e["reduced"] = c.reduced;
        e["kappa"] = c.kappa;
        e["delta"] = {c.delta.lo, c.delta.hi};
        e["theta"] = c.theta;
        e["theta_target"] = c.theta_target;
        e["deficiency_rank"] = c.deficiency_rank;
        e["exact_compression_min"] = c.exact_compression_min;
        e["probe_count"] = c.probe_count;
        e["sigma"] = c.sigma;
        return e;
    };
    ordered_json j;
    j["identities"] = rj;
    j["virial_residual"] = virial;
    j["commutator_norm"] = comm_norm;
    j["relative_bounds_aH"] = ledger.a_H;
    j["relative_bounds_aV"] = ledger.a_V;
    if (with_certificates) {
        const bool cert_ok = reduced.theta > 0.0 && reduced.deficiency_rank == 0 &&
                             unreduced.deficiency_rank >= 1;
        pass = pass && cert_ok;
        std::cout << (cert_ok ? "[PASS] " : "[FAIL] ") << "certificates: reduced theta="
                  << reduced.theta << " deficiency=" << reduced.deficiency_rank
                  << "; unreduced deficiency=" << unreduced.deficiency_rank << "\n";
        j["certificate_reduced_kappa0"] = cert_json(reduced0);
        j["certificate_reduced"] = cert_json(reduced);
        j["certificate_unreduced"] = cert_json(unreduced);
    }
    j["pass"] = pass;
    write_json(j, path_join(out_dir, "mourre_report.json"));
    manifest.add("mourre-check", clock.ms(), {"mourre_report.json"});
    manifest.write(cfg, out_dir);
    if (!pass) fail_contract("mourre-check: one or more checks failed");
    return 0;
}

int run_feshbach_check(const ExperimentConfig& cfg, const std::string& out_dir) {
    Manifest manifest;
    StageClock clock;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    double worst = 0.0;
    cxd worst_z;
    int count = 0;
    for (int m = 0; m < cfg.check_models; ++m) {
        const int size = 4 + int(rng() % std::uint64_t(std::max(1, cfg.check_size - 3)));
        MatrixModel model = random_matrix_model(size, rng());
        for (int s = 0; s < cfg.check_samples; ++s) {
            const double kappa = 0.4 * std::abs(unif(rng));
            cxd z(model.lambda + unif(rng), 0.0);
            double im = unif(rng);
            z.imag(im == 0.0 ? 0.1 : im);
            const double resid = feshbach_identity_residual(model, z, kappa);
            const double normalized = resid / (1.0 + std::abs(z));
            if (normalized > worst) {
                worst = normalized;
                worst_z = z;
            }
            ++count;
        }
    }
    const bool pass = worst < 1e-9;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "feshbach identity: max residual/(1+|z|)="
              << worst << " over " << count << " samples\n";

    ordered_json j;
    j["samples"] = count;
    j["max_normalized_residual"] = worst;
    j["worst_z"] = {{"re", worst_z.real()}, {"im", worst_z.imag()}};
    j["pass"] = pass;
    write_json(j, path_join(out_dir, "feshbach_report.json"));
    manifest.add("feshbach-check", clock.ms(), {"feshbach_report.json"});
    manifest.write(cfg, out_dir);
    if (!pass) fail_contract("feshbach-check: identity residual above tolerance");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embedded-eigenvalue resonance toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    double kappa_max_override = -1.0;
    int n_override = -1;
    long long seed_override = -1;
    int jobs_override = -1;

    app.add_option("--config", config_path, "configuration file (flat key=value or JSON)")
        ->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--kappa-max", kappa_max_override, "override kappa.max");
    app.add_option("--n", n_override, "override smoothness order n");
    app.add_option("--seed", seed_override, "override RNG seed");
    app.add_option("--jobs", jobs_override, "override worker count");

    auto* fgr = app.add_subcommand("fgr", "boundary trace and Golden-Rule width");
    auto* resonance = app.add_subcommand("resonance", "resonance ladder and expansion slope");
    auto* decay = app.add_subcommand("decay", "survival amplitude and remainder report");
    auto* sweep = app.add_subcommand("sweep", "full kappa-ladder scaling study");
    auto* mourre = app.add_subcommand("mourre-check", "commutator calculus and certificates");
    auto* feshbach = app.add_subcommand("feshbach-check", "inversion identity on random models");

    CLI11_PARSE(app, argc, argv);

    try {
        specres::ExperimentConfig cfg = specres::load_config(config_path);
        if (kappa_max_override > 0.0) cfg.kappa_max = kappa_max_override;
        if (n_override >= 1) cfg.n = n_override;
        if (seed_override >= 0) cfg.seed = std::uint64_t(seed_override);
        if (jobs_override >= 1) cfg.jobs = jobs_override;
        specres::validate_config(cfg);
        specres::ensure_directory(out_dir);

        if (fgr->parsed()) return run_fgr(cfg, out_dir);
        if (resonance->parsed()) return run_resonance(cfg, out_dir);
        if (decay->parsed()) return run_decay(cfg, out_dir);
        if (sweep->parsed()) return run_sweep_stage(cfg, out_dir);
        if (mourre->parsed()) return run_mourre_check(cfg, out_dir);
        if (feshbach->parsed()) return run_feshbach_check(cfg, out_dir);
        return 3;
    } catch (const specres::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case specres::ErrorKind::Contract: return 2;
            case specres::ErrorKind::Config: return 3;
            case specres::ErrorKind::Convergence: return 4;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
