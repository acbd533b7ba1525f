// SPDX-License-Identifier: Apache-2.0
//
// mapsp - multi-group adjustable phase shift pilot simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mapsp/harness.hpp"

#include "mapsp/transforms.hpp"

#include <Eigen/Dense>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>

namespace mapsp {

namespace {

constexpr double kDataFraction = 6.0 / 7.0;

struct MethodRun
{
    Method method;
    std::size_t groups;
};

struct Cell
{
    double err = 0.0;
    double theory = 0.0;
    double bound = 0.0;
    double power = 0.0;
    double se = 0.0;
};

struct TrialOut
{
    std::vector<Cell> cells; // [run][snr][lag]
    std::vector<double> ms;  // [run]
};

std::vector<MethodRun> method_runs(const ExperimentConfig &cfg)
{
    std::vector<MethodRun> runs;
    for (const auto m : cfg.methods) {
        if (m == Method::Apsp) {
            runs.push_back({m, 1});
            continue;
        }
        for (const auto q : cfg.groups)
            runs.push_back({m, q});
    }
    return runs;
}

std::string row_name(Method m, std::size_t lag)
{
    std::string s = method_name(m);
    if (lag > 0)
        s += "@dl" + std::to_string(lag);
    return s;
}

std::filesystem::path ensemble_path(const std::string &base, std::size_t k, bool many)
{
    std::filesystem::path p(base);
    if (!many)
        return p;
    return p.parent_path() / (p.stem().string() + "_K" + std::to_string(k) + p.extension().string());
}

// One trial of every method run for `uts` UTs.
TrialOut run_trial(const ExperimentConfig &cfg, const std::vector<MethodRun> &runs,
                   const std::map<std::size_t, PilotBook> &books, std::size_t uts, std::size_t trial)
{
    const auto &d = cfg.dims;
    const std::size_t nsnr = cfg.snr_db.size();
    const std::size_t nlag = cfg.delta_ell.size();
    TrialOut out;
    out.cells.assign(runs.size() * nsnr * nlag, Cell{});
    out.ms.assign(runs.size(), 0.0);

    Rng ch_rng = derive_rng(cfg.seed, {uts, trial, 1});
    const TrialScene scene = draw_scene(cfg, uts, ch_rng);

    // Ground truth at every lag is shared by all methods.
    std::vector<std::vector<ComplexMatrix>> truth(nlag);
    std::vector<double> rho(nlag);
    for (std::size_t l = 0; l < nlag; ++l) {
        rho[l] = tcf(static_cast<double>(cfg.delta_ell[l]), cfg.nu_tsym);
        for (std::size_t u = 0; u < uts; ++u) {
            if (cfg.delta_ell[l] == 0) {
                truth[l].push_back(scene.channels[u]);
                continue;
            }
            Rng evo = derive_rng(cfg.seed, {uts, trial, 4, cfg.delta_ell[l], u});
            truth[l].push_back(evolve_channel(scene.channels[u], scene.powers[u], scene.args[u],
                                              static_cast<double>(cfg.delta_ell[l]), cfg.nu_tsym, evo,
                                              cfg.magnitude));
        }
    }

    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto &run = runs[r];
        const PilotBook &book = books.at(run.groups);

        ScheduleOptions so;
        so.groups = run.groups;
        so.upsilon = cfg.upsilon;
        Rng sched_rng = derive_rng(cfg.seed, {uts, trial, 2, run.groups});
        const ScheduleResult sched = schedule(scene.powers, d.subcarriers, so, sched_rng);

        std::vector<InterferenceProfile> profiles;
        profiles.reserve(uts);
        for (std::size_t u = 0; u < uts; ++u)
            profiles.push_back(
                aggregate_interference_power(scene.powers, scene.args, sched.assignments, book, u, d));

        UplinkScene up;
        up.dims = d;
        up.book = &book;
        up.channels = scene.channels;
        up.assignments = sched.assignments;

        for (std::size_t s = 0; s < nsnr; ++s) {
            const double eta = std::pow(10.0, cfg.snr_db[s] / 10.0);
            up.p_ntr = 1.0 / eta;
            Rng noise = derive_rng(cfg.seed, {uts, trial, 3, s});
            const ComplexMatrix y = synthesize_received(up, noise);

            std::vector<ComplexMatrix> est(uts);
            std::vector<double> est_theory(uts), est_bound(uts), pw(uts);
            std::vector<RealMatrix> err_var(uts);
            for (std::size_t u = 0; u < uts; ++u) {
                const auto &a = sched.assignments[u];
                const ComplexMatrix yu = ls_decorrelate(y, a, book.basic(a.group), d);
                const RealMatrix &p = scene.powers[u];
                if (run.method == Method::Mapsp && run.groups > 1) {
                    const PreprocessResult pr = preprocess(yu, p, profiles[u], cfg.sigma_bar_sq, eta);
                    est[u] = wiener_apply(pr.y, p, pr.denominator);
                    est_theory[u] = pr.predicted_error;
                    err_var[u] = wiener_error_variance(p, pr.denominator);
                } else {
                    est[u] = mmse_estimate(yu, p, profiles[u].p_sigma, eta);
                    est_theory[u] = mmse_error_theoretical(p, profiles[u].p_sigma, eta);
                    RealMatrix den = profiles[u].p_sigma;
                    for (auto &v : den.data())
                        v += 1.0 / eta;
                    err_var[u] = wiener_error_variance(p, den);
                }
                est_bound[u] = mmse_error_lower_bound(p, eta);
                pw[u] = sum(p);
            }

            for (std::size_t l = 0; l < nlag; ++l) {
                Cell &c = out.cells[(r * nsnr + s) * nlag + l];
                const double r2 = rho[l] * rho[l];
                std::vector<ComplexMatrix> pred(uts);
                std::vector<RealMatrix> pred_var(uts);
                for (std::size_t u = 0; u < uts; ++u) {
                    pred_var[u] = err_var[u];
                    for (std::size_t i = 0; i < pred_var[u].size(); ++i)
                        pred_var[u].data()[i] =
                            (1.0 - r2) * scene.powers[u].data()[i] + r2 * err_var[u].data()[i];
                    pred[u] = est[u];
                    pred[u] *= cplx(rho[l]);
                    c.err += frobenius_sq(pred[u] - truth[l][u]);
                    c.theory += (1.0 - r2) * pw[u] + r2 * est_theory[u];
                    c.bound += (1.0 - r2) * pw[u] + r2 * est_bound[u];
                    c.power += pw[u];
                }
                c.se = se_proxy(pred, truth[l], eta, d, cfg.se_subcarriers, kDataFraction, pred_var);
            }
        }
        out.ms[r] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig &cfg, ExecPolicy policy)
{
    cfg.validate();
    const auto runs = method_runs(cfg);
    std::map<std::size_t, PilotBook> books;
    for (const auto &r : runs)
        if (!books.count(r.groups))
            books.emplace(r.groups, make_zc_book(r.groups, cfg.dims.subcarriers, cfg.zc_root, cfg.zc_variant));

    const std::size_t nsnr = cfg.snr_db.size();
    const std::size_t nlag = cfg.delta_ell.size();
    std::vector<SweepRow> rows;

    for (const std::size_t k : cfg.ut_counts) {
        if (!cfg.ensemble_out.empty()) {
            Rng rng = derive_rng(cfg.seed, {k, 0, 1});
            const TrialScene sc = draw_scene(cfg, k, rng);
            write_ensemble(ensemble_path(cfg.ensemble_out, k, cfg.ut_counts.size() > 1),
                           {cfg.dims, cfg.sigma_bar_sq, sc.powers, sc.args});
        }

        std::vector<TrialOut> outs(cfg.trials);
        const auto trials = static_cast<long long>(cfg.trials);
        if (policy == ExecPolicy::Serial) {
            for (long long t = 0; t < trials; ++t)
                outs[t] = run_trial(cfg, runs, books, k, static_cast<std::size_t>(t));
        } else {
            std::exception_ptr failure;
            const int nthreads = cfg.threads > 0 ? static_cast<int>(cfg.threads) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
            for (long long t = 0; t < trials; ++t) {
                try {
                    outs[t] = run_trial(cfg, runs, books, k, static_cast<std::size_t>(t));
                } catch (...) {
#pragma omp critical(mapsp_sweep_failure)
                    if (!failure)
                        failure = std::current_exception();
                }
            }
            if (failure)
                std::rethrow_exception(failure);
        }

        // Merge in trial order so the result does not depend on the worker count.
        std::vector<Cell> total(runs.size() * nsnr * nlag);
        std::vector<double> ms(runs.size(), 0.0);
        for (const auto &o : outs) {
            for (std::size_t i = 0; i < total.size(); ++i) {
                total[i].err += o.cells[i].err;
                total[i].theory += o.cells[i].theory;
                total[i].bound += o.cells[i].bound;
                total[i].power += o.cells[i].power;
                total[i].se += o.cells[i].se;
            }
            for (std::size_t r = 0; r < runs.size(); ++r)
                ms[r] += o.ms[r];
        }
        for (std::size_t r = 0; r < runs.size(); ++r)
            for (std::size_t s = 0; s < nsnr; ++s)
                for (std::size_t l = 0; l < nlag; ++l) {
                    const Cell &c = total[(r * nsnr + s) * nlag + l];
                    SweepRow row;
                    row.method = row_name(runs[r].method, cfg.delta_ell[l]);
                    row.groups = runs[r].groups;
                    row.uts = k;
                    row.snr_db = cfg.snr_db[s];
                    row.mse_emp = c.err / c.power;
                    row.mse_theory = c.theory / c.power;
                    row.mse_bound = c.bound / c.power;
                    row.se_proxy = c.se / static_cast<double>(cfg.trials);
                    row.seed = cfg.seed;
                    row.wall_ms = ms[r] / static_cast<double>(nsnr * nlag);
                    rows.push_back(row);
                }
    }
    return rows;
}

std::string fmt(double v, const char *spec = "%.10g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

TrialScene draw_scene(const ExperimentConfig &cfg, std::size_t uts, Rng &rng)
{
    const ChannelParams params = cfg.channel_params();
    TrialScene sc;
    for (std::size_t u = 0; u < uts; ++u) {
        sc.powers.push_back(generate_power_matrix(params, rng));
        sc.args.push_back(generate_argument_model(params, rng));
        sc.channels.push_back(realize_channel(sc.powers.back(), sc.args.back(), rng, params.magnitude));
    }
    return sc;
}

std::vector<SweepRow> run_mse_sweep(const ExperimentConfig &cfg, ExecPolicy policy)
{
    ExperimentConfig c = cfg;
    c.delta_ell = {0};
    return run_sweep(c, policy);
}

std::vector<SweepRow> run_prediction_sweep(const ExperimentConfig &cfg, ExecPolicy policy)
{
    return run_sweep(cfg, policy);
}

RealMatrix wiener_error_variance(const RealMatrix &p, const RealMatrix &denominator)
{
    if (!p.same_shape(denominator))
        throw std::invalid_argument("wiener_error_variance: shape mismatch");
    RealMatrix e(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pw = p.data()[i];
        const double den = denominator.data()[i];
        e.data()[i] = den > 0.0 ? std::max(0.0, pw - pw * pw / den) : pw;
    }
    return e;
}

double se_proxy(const std::vector<ComplexMatrix> &estimates, const std::vector<ComplexMatrix> &truth, double eta,
                const SystemDims &dims, std::size_t samples, double data_fraction,
                const std::vector<RealMatrix> &error_var)
{
    dims.validate();
    if (estimates.size() != truth.size())
        throw std::invalid_argument("se_proxy: estimate and truth counts differ");
    if (samples < 1 || samples > dims.subcarriers)
        throw std::invalid_argument("se_proxy: sample count must be in [1, N_c]");
    if (!error_var.empty() && error_var.size() != truth.size())
        throw std::invalid_argument("se_proxy: one error variance matrix per UT required");
    const std::size_t k_total = truth.size();
    if (k_total == 0)
        return 0.0;
    const std::size_t m = dims.antennas;
    const double n0 = std::isfinite(eta) ? 1.0 / eta : 1e-12;
    const ComplexMatrix a = array_response(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.subcarriers));

    // Column n of ad_to_sf(H) without forming the full matrix.
    auto sf_column = [&](const ComplexMatrix &h, std::size_t n, Eigen::Ref<Eigen::VectorXcd> out) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < dims.cp_length; ++j) {
            const cplx w = std::polar(1.0, -2.0 * kPi * static_cast<double>((n * j) % dims.subcarriers) /
                                               static_cast<double>(dims.subcarriers));
            for (std::size_t i = 0; i < m; ++i)
                t(static_cast<Eigen::Index>(i)) += h(i, j) * w;
        }
        for (std::size_t i = 0; i < m; ++i) {
            cplx acc{};
            for (std::size_t c = 0; c < m; ++c)
                acc += a(i, c) * t(static_cast<Eigen::Index>(c));
            out(static_cast<Eigen::Index>(i)) = acc * scale;
        }
    };

    const auto mi = static_cast<Eigen::Index>(m);
    const auto ki = static_cast<Eigen::Index>(k_total);

    // Error covariance per subcarrier: A diag(sum_j e(i, j)) A^H / N_c, the same on every subcarrier.
    Eigen::MatrixXcd err_cov = Eigen::MatrixXcd::Zero(mi, mi);
    if (!error_var.empty()) {
        Eigen::VectorXd beam = Eigen::VectorXd::Zero(mi);
        for (const auto &e : error_var) {
            if (e.rows() != m || e.cols() != dims.cp_length)
                throw std::invalid_argument("se_proxy: error variance must be M x N_g");
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < dims.cp_length; ++j)
                    beam(static_cast<Eigen::Index>(i)) += e(i, j);
        }
        Eigen::MatrixXcd ae(mi, mi);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < m; ++c)
                ae(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = a(i, c);
        err_cov = ae * (beam / static_cast<double>(dims.subcarriers)).asDiagonal() * ae.adjoint();
    }

    Eigen::MatrixXcd gh(mi, ki), g(mi, ki);
    double total = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t n = s * dims.subcarriers / samples;
        for (std::size_t k = 0; k < k_total; ++k) {
            sf_column(estimates[k], n, gh.col(static_cast<Eigen::Index>(k)));
            sf_column(truth[k], n, g.col(static_cast<Eigen::Index>(k)));
        }
        Eigen::MatrixXcd c = gh * gh.adjoint() + err_cov;
        c.diagonal().array() += n0;
        const Eigen::MatrixXcd v = c.llt().solve(gh);
        const Eigen::MatrixXcd proj = v.adjoint() * g; // proj(k, j) = v_k^H g_j
        for (Eigen::Index k = 0; k < ki; ++k) {
            const double vn = v.col(k).squaredNorm();
            if (vn == 0.0)
                continue;
            const double sig = std::norm(proj(k, k));
            double interf = 0.0;
            for (Eigen::Index j = 0; j < ki; ++j)
                if (j != k)
                    interf += std::norm(proj(k, j));
            total += std::log2(1.0 + sig / (interf + n0 * vn));
        }
    }
    return data_fraction * total / static_cast<double>(samples);
}

void write_csv(const std::vector<SweepRow> &rows, std::ostream &out)
{
    out << kSweepHeader << '\n';
    for (const auto &r : rows)
        out << r.method << ',' << r.groups << ',' << r.uts << ',' << fmt(r.snr_db) << ',' << fmt(r.mse_emp) << ','
            << fmt(r.mse_theory) << ',' << fmt(r.mse_bound) << ',' << fmt(r.se_proxy) << ',' << r.seed << ','
            << fmt(r.wall_ms, "%.3f") << '\n';
}

void emit_csv(const std::vector<SweepRow> &rows, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    write_csv(rows, out);
    out.flush();
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

std::vector<SweepRow> parse_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader)
        throw std::runtime_error("sweep csv: unexpected header");
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        std::string x;
        while (std::getline(ss, x, ','))
            f.push_back(x);
        if (f.size() != 10)
            throw std::runtime_error("sweep csv: expected 10 fields at line " + std::to_string(lineno));
        SweepRow r;
        r.method = f[0];
        r.groups = std::stoul(f[1]);
        r.uts = std::stoul(f[2]);
        r.snr_db = std::stod(f[3]);
        r.mse_emp = std::stod(f[4]);
        r.mse_theory = std::stod(f[5]);
        r.mse_bound = std::stod(f[6]);
        r.se_proxy = std::stod(f[7]);
        r.seed = std::stoull(f[8]);
        r.wall_ms = std::stod(f[9]);
        rows.push_back(r);
    }
    return rows;
}

void write_schedule_csv(const ExperimentConfig &cfg, const std::filesystem::path &path)
{
    cfg.validate();
    const std::size_t k = cfg.ut_counts.front();
    const std::size_t q = cfg.groups.front();
    Rng ch_rng = derive_rng(cfg.seed, {k, 0, 1});
    const TrialScene sc = draw_scene(cfg, k, ch_rng);
    ScheduleOptions so;
    so.groups = q;
    so.upsilon = cfg.upsilon;
    Rng sched_rng = derive_rng(cfg.seed, {k, 0, 2, q});
    const ScheduleResult res = schedule(sc.powers, cfg.dims.subcarriers, so, sched_rng);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    out << "ut_id,group,shift,final_gamma\n";
    for (std::size_t u = 0; u < k; ++u)
        out << u << ',' << res.assignments[u].group << ',' << res.assignments[u].shift << ','
            << fmt(res.final_gamma[u]) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

void write_profile_csv(std::size_t n, long long root_a, std::size_t shift_a, long long root_b, std::size_t shift_b,
                       const std::filesystem::path &path)
{
    const BasicPilot a = zc_sequence(n, root_a, shift_a);
    const BasicPilot b = zc_sequence(n, root_b, shift_b);
    const RVec prof = interference_profile(a, b);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    out << "index,magnitude\n";
    for (std::size_t i = 0; i < prof.size(); ++i)
        out << i << ',' << fmt(prof[i], "%.12g") << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace mapsp
