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

#include "mapsp/estimation.hpp"

#include "mapsp/transforms.hpp"

#include <cmath>

namespace mapsp {

namespace {

void require_shape(const RealMatrix &a, const RealMatrix &b, const char *what)
{
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

double inv_eta(double eta)
{
    if (!(eta > 0.0))
        throw std::invalid_argument("SNR must be positive");
    return 1.0 / eta;
}

struct PhasorSums
{
    double w = 0.0;
    cplx s1{};
    cplx s2{};

    void add(double weight, double beta)
    {
        w += weight;
        s1 += std::polar(weight, beta);
        s2 += std::polar(weight, 2.0 * beta);
    }
};

} // namespace

InterferenceProfile aggregate_interference_power(const std::vector<RealMatrix> &powers,
                                                 const std::vector<ArgumentModel> &args,
                                                 const std::vector<PilotAssignment> &assignments,
                                                 const PilotBook &book, std::size_t target, const SystemDims &dims)
{
    dims.validate();
    if (powers.size() != assignments.size() || args.size() != powers.size())
        throw std::invalid_argument("aggregate_interference_power: per-UT input lengths differ");
    if (target >= powers.size())
        throw std::out_of_range("aggregate_interference_power: target index out of range");
    const std::size_t m = dims.antennas, ng = dims.cp_length, nc = dims.subcarriers;
    const auto &ta = assignments[target];
    const auto &mu_t = args[target].mu;

    InterferenceProfile prof;
    prof.p_intra = RealMatrix(m, ng);
    prof.p_inter = RealMatrix(m, ng);
    prof.theta_sigma = RealMatrix(m, ng);
    prof.inter_misalign = RealMatrix(m, ng);
    prof.theta_zero = return_to_zero(args[target]);
    std::vector<PhasorSums> sums(m * ng);

    for (std::size_t k = 0; k < powers.size(); ++k) {
        const auto &a = assignments[k];
        const auto &pk = powers[k];
        if (pk.rows() != m || pk.cols() != ng)
            throw std::invalid_argument("aggregate_interference_power: power matrix is not M x N_g");
        const long long delta = static_cast<long long>(a.shift) - static_cast<long long>(ta.shift);
        const double w = a.power / ta.power;
        if (a.group == ta.group) {
            RealMatrix pw = interference_power(pk, delta, nullptr, dims);
            pw *= w;
            prof.p_intra += pw;
            continue;
        }
        const Adpcm &z = book.pair(a.group, ta.group);
        RealMatrix pw = interference_power(pk, delta, &z, dims);
        pw *= w;
        prof.p_inter += pw;
        const auto &mu_k = args[k].mu;
        // Every (source column a, output column b) pair with a nonzero circulant coefficient.
        for (std::size_t b = 0; b < ng; ++b)
            for (std::size_t src = 0; src < ng; ++src) {
                const cplx zc = z.first_col[mod_index(static_cast<long long>(src) - static_cast<long long>(b) + delta, nc)];
                const double zn = std::norm(zc);
                if (zn < 1e-24)
                    continue;
                const double zarg = std::arg(zc);
                for (std::size_t i = 0; i < m; ++i) {
                    const double weight = pk(i, src) * zn * w;
                    if (weight == 0.0)
                        continue;
                    sums[i * ng + b].add(weight, zarg + mu_k(i, src) - mu_t(i, b));
                }
            }
    }

    prof.p_sigma = prof.p_intra + prof.p_inter;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < ng; ++j) {
            const auto &s = sums[i * ng + j];
            if (s.w == 0.0)
                continue;
            const double th = std::arg(s.s1);
            prof.theta_sigma(i, j) = th;
            prof.inter_misalign(i, j) = std::max(0.0, 0.5 * (s.w - std::real(std::polar(1.0, -2.0 * th) * s.s2)));
        }
    return prof;
}

ComplexMatrix wiener_apply(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &denominator)
{
    if (y.rows() != p.rows() || y.cols() != p.cols())
        throw std::invalid_argument("wiener_apply: signal and power shapes differ");
    require_shape(p, denominator, "wiener_apply");
    ComplexMatrix out(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double pw = p.data()[i];
        const double d = denominator.data()[i];
        out.data()[i] = (pw > 0.0 && d > 0.0) ? (pw / d) * y.data()[i] : cplx{};
    }
    return out;
}

ComplexMatrix mmse_estimate(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &p_sigma, double eta)
{
    require_shape(p, p_sigma, "mmse_estimate");
    const double n0 = inv_eta(eta);
    RealMatrix den = p_sigma;
    for (auto &v : den.data())
        v += n0;
    return wiener_apply(y, p, den);
}

ComplexMatrix mmse_estimate(const ComplexMatrix &y, const RealMatrix &p, const InterferenceProfile &profile, double eta)
{
    return mmse_estimate(y, p, profile.p_sigma, eta);
}

double mmse_error_theoretical(const RealMatrix &p, const RealMatrix &p_sigma, double eta)
{
    require_shape(p, p_sigma, "mmse_error_theoretical");
    const double n0 = inv_eta(eta);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pw = p.data()[i];
        if (pw <= 0.0)
            continue;
        s += pw - pw * pw / (p_sigma.data()[i] + n0);
    }
    return s;
}

double mmse_error_lower_bound(const RealMatrix &p, double eta)
{
    return mmse_error_theoretical(p, p, eta);
}

double mmse_error_lower_bound(const std::vector<RealMatrix> &powers, double eta)
{
    double s = 0.0;
    for (const auto &p : powers)
        s += mmse_error_lower_bound(p, eta);
    return s;
}

ComplexMatrix preprocess_projection(const ComplexMatrix &y, const InterferenceProfile &profile, double eps_tan)
{
    if (y.rows() != profile.theta_zero.rows() || y.cols() != profile.theta_zero.cols())
        throw std::invalid_argument("preprocess_projection: signal and profile shapes differ");
    ComplexMatrix out(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) {
            const cplx r = profile.theta_zero(i, j) * y(i, j);
            const double th = profile.theta_sigma(i, j);
            if (!profile.has_inter(i, j) || std::abs(std::sin(th)) < eps_tan) {
                out(i, j) = r;
                continue;
            }
            out(i, j) = r.real() - r.imag() / std::tan(th);
        }
    return out;
}

PreprocessResult preprocess(const ComplexMatrix &y, const RealMatrix &p_target, const InterferenceProfile &profile,
                            double sigma_bar_sq, double eta, const PreprocessOptions &opts)
{
    require_shape(p_target, profile.p_sigma, "preprocess");
    if (y.rows() != p_target.rows() || y.cols() != p_target.cols())
        throw std::invalid_argument("preprocess: signal and power shapes differ");
    const double n0 = inv_eta(eta);
    const double rescale = std::exp(0.5 * sigma_bar_sq);
    const ComplexMatrix proj = preprocess_projection(y, profile, opts.eps_tan);

    PreprocessResult res;
    res.y = y;
    res.denominator = profile.p_sigma;
    for (auto &v : res.denominator.data())
        v += n0;

    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) {
            const double p = p_target(i, j);
            const double raw_den = res.denominator(i, j);
            const double raw_err = p > 0.0 ? p - p * p / raw_den : 0.0;
            if (!profile.has_inter(i, j) || p <= 0.0) {
                res.predicted_error += raw_err;
                continue;
            }
            const double th = profile.theta_sigma(i, j);
            const double s2 = std::sin(th) * std::sin(th);
            if (std::sqrt(s2) < opts.eps_tan) {
                ++res.singular;
                res.predicted_error += raw_err;
                continue;
            }
            // Residual after projection: argument spread of target and inter-group terms,
            // inter-group phasors off the common argument, half of the same-group and noise power.
            const double others = std::max(0.0, profile.p_intra(i, j) - p);
            const double v = rescale * rescale *
                             (sigma_bar_sq * (p + profile.p_inter(i, j)) + profile.inter_misalign(i, j) +
                              0.5 * others + 0.5 * n0) /
                             s2;
            const double pre_err = p * v / (p + v);
            if (opts.gate && pre_err >= raw_err) {
                ++res.declined;
                res.predicted_error += raw_err;
                continue;
            }
            ++res.processed;
            res.predicted_error += pre_err;
            res.y(i, j) = std::conj(profile.theta_zero(i, j)) * proj(i, j) * rescale;
            res.denominator(i, j) = p + v;
        }
    return res;
}

ComplexMatrix predict_channel(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &p_sigma, double eta,
                              double delta_ell, double nu_tsym)
{
    ComplexMatrix h = mmse_estimate(y, p, p_sigma, eta);
    h *= cplx(tcf(delta_ell, nu_tsym));
    return h;
}

double prediction_error_theoretical(const RealMatrix &p, const RealMatrix &p_sigma, double eta, double delta_ell,
                                    double nu_tsym)
{
    require_shape(p, p_sigma, "prediction_error_theoretical");
    const double n0 = inv_eta(eta);
    const double rho = tcf(delta_ell, nu_tsym);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pw = p.data()[i];
        if (pw <= 0.0)
            continue;
        s += pw - rho * rho * pw * pw / (p_sigma.data()[i] + n0);
    }
    return s;
}

} // namespace mapsp
