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

#include "mapsp/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mapsp {

namespace {

double wrap_two_pi(double x)
{
    x = std::fmod(x, 2.0 * kPi);
    if (x < 0.0)
        x += 2.0 * kPi;
    return x;
}

void require_same_shape(const RealMatrix &p, const RealMatrix &mu, const char *what)
{
    if (!p.same_shape(mu))
        throw std::invalid_argument(std::string(what) + ": power and argument shapes differ");
}

} // namespace

void ChannelParams::validate() const
{
    dims.validate();
    if (taps < 1 || taps > dims.cp_length)
        throw std::invalid_argument("ChannelParams: require 1 <= taps <= N_g");
    if (span() > dims.antennas)
        throw std::invalid_argument("ChannelParams: angular span exceeds antenna count");
    if (sigma_bar_sq < 0.0 || nu_tsym < 0.0 || mu_jitter < 0.0 || mu_ramp < 0.0 || tap_decay < 0.0)
        throw std::invalid_argument("ChannelParams: negative variance, Doppler, jitter or decay");
}

ComplexMatrix return_to_zero(const ArgumentModel &args)
{
    ComplexMatrix t(args.mu.rows(), args.mu.cols());
    for (std::size_t i = 0; i < t.size(); ++i)
        t.data()[i] = std::polar(1.0, -args.mu.data()[i]);
    return t;
}

RealMatrix generate_power_matrix(const ChannelParams &params, Rng &rng)
{
    params.validate();
    const auto &d = params.dims;
    const std::size_t c = params.taps;
    const std::size_t s = params.span();
    const std::size_t t0 = std::uniform_int_distribution<std::size_t>(0, d.cp_length - c)(rng);
    const std::size_t b0 = std::uniform_int_distribution<std::size_t>(0, d.antennas - s)(rng);
    const double decay = params.tap_decay > 0.0 ? params.tap_decay : std::max(1.0, 0.5 * static_cast<double>(c));

    RealMatrix p(d.antennas, d.cp_length);
    double total = 0.0;
    for (std::size_t m = 0; m < s; ++m) {
        const double w = std::pow(std::sin(kPi * static_cast<double>(m + 1) / static_cast<double>(s + 1)), 2);
        for (std::size_t j = 0; j < c; ++j) {
            const double v = w * std::exp(-static_cast<double>(j) / decay);
            p(b0 + m, t0 + j) = v;
            total += v;
        }
    }
    p *= static_cast<double>(d.antennas * d.subcarriers) / total;
    return p;
}

ArgumentModel generate_argument_model(const ChannelParams &params, Rng &rng)
{
    params.validate();
    ArgumentModel a;
    a.sigma_bar_sq = params.sigma_bar_sq;
    a.mu = RealMatrix(params.dims.antennas, params.dims.cp_length);
    const double los = uniform(rng, 0.0, 2.0 * kPi);
    // Leakage of an off-grid LoS path: linear phase across beams and taps.
    const double slope_a = uniform(rng, -kPi, kPi) * params.mu_ramp;
    const double slope_d = uniform(rng, -kPi, kPi) * params.mu_ramp;
    for (std::size_t i = 0; i < a.mu.rows(); ++i)
        for (std::size_t j = 0; j < a.mu.cols(); ++j) {
            const double jitter = params.mu_jitter > 0.0 ? uniform(rng, -params.mu_jitter, params.mu_jitter) : 0.0;
            a.mu(i, j) = wrap_two_pi(los + slope_a * static_cast<double>(i) + slope_d * static_cast<double>(j) + jitter);
        }
    return a;
}

ComplexMatrix realize_channel(const RealMatrix &p, const ArgumentModel &args, Rng &rng, MagnitudeModel magnitude)
{
    require_same_shape(p, args.mu, "realize_channel");
    if (args.sigma_bar_sq < 0.0)
        throw std::invalid_argument("realize_channel: negative argument variance");
    const double sigma = std::sqrt(args.sigma_bar_sq);
    ComplexMatrix h(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pw = p.data()[i];
        if (pw < 0.0)
            throw std::invalid_argument("realize_channel: negative power entry");
        // Draw for every element so the stream layout does not depend on the support.
        const double theta = wrap_two_pi(args.mu.data()[i] + sigma * std_normal(rng));
        double g = 1.0;
        if (magnitude == MagnitudeModel::Rayleigh) {
            const double x = std_normal(rng), y = std_normal(rng);
            g = std::sqrt(0.5 * (x * x + y * y));
        }
        h.data()[i] = pw > 0.0 ? std::polar(std::sqrt(pw) * g, theta) : cplx{};
    }
    return h;
}

double bessel_j0(double x)
{
    x = std::abs(x);
    if (x < 12.0) {
        // sum_k (-1)^k (x^2/4)^k / (k!)^2
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= -q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)))
                break;
        }
        return sum;
    }
    // Hankel asymptotic expansion, truncated at the smallest term.
    double p = 0.0, q = 0.0;
    double a = 1.0; // a_k / x^k with a_k = prod_{m=1..k} (2m-1)^2 / (8 m)
    double prev = 1e300;
    for (int k = 0; k < 100; ++k) {
        if (k > 0)
            a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (std::abs(a) > prev)
            break;
        prev = std::abs(a);
        // a_k(0) carries (-1)^k, so the odd series picks up one extra sign flip.
        const int sign = (k / 2) % 2 == 0 ? 1 : -1;
        if (k % 2 == 0)
            p += sign * a;
        else
            q -= sign * a;
        if (a < 1e-17)
            break;
    }
    const double chi = x - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double tcf(double delta_ell, double nu_tsym)
{
    return bessel_j0(2.0 * kPi * nu_tsym * delta_ell);
}

ComplexMatrix evolve_channel(const ComplexMatrix &h, const RealMatrix &p, const ArgumentModel &args, double delta_ell,
                             double nu_tsym, Rng &rng, MagnitudeModel magnitude)
{
    if (!h.same_shape(ComplexMatrix(p.rows(), p.cols())))
        throw std::invalid_argument("evolve_channel: channel and power shapes differ");
    const double rho = tcf(delta_ell, nu_tsym);
    if (rho == 1.0)
        return h;
    ArgumentModel innov_args = args;
    const double los = uniform(rng, 0.0, 2.0 * kPi);
    for (auto &v : innov_args.mu.data())
        v = wrap_two_pi(v + los);
    const ComplexMatrix innov = realize_channel(p, innov_args, rng, magnitude);
    const double beta = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    ComplexMatrix out(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.size(); ++i)
        out.data()[i] = rho * h.data()[i] + beta * innov.data()[i];
    return out;
}

ComplexMatrix ray_channel(const std::vector<RayPath> &paths, const SystemDims &dims)
{
    dims.validate();
    ComplexMatrix g(dims.antennas, dims.subcarriers);
    for (const auto &path : paths) {
        if (path.delay < 0.0 || path.delay >= static_cast<double>(dims.cp_length))
            throw std::invalid_argument("ray_channel: path delay outside the cyclic prefix");
        for (std::size_t m = 0; m < dims.antennas; ++m) {
            const cplx steer = std::polar(1.0, -kPi * static_cast<double>(m) * path.cosine);
            for (std::size_t n = 0; n < dims.subcarriers; ++n) {
                const double ang = -2.0 * kPi * static_cast<double>(n) * path.delay / static_cast<double>(dims.subcarriers);
                g(m, n) += path.gain * steer * std::polar(1.0, ang);
            }
        }
    }
    return g;
}

cplx los_gain(double beta, double distance, double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("los_gain: wavelength must be positive");
    const double cycles = distance / wavelength;
    return std::polar(beta, -2.0 * kPi * (cycles - std::round(cycles)));
}

void write_ensemble(const std::filesystem::path &path, const ChannelEnsemble &ens)
{
    if (ens.power.size() != ens.args.size())
        throw std::invalid_argument("write_ensemble: power and argument counts differ");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open ensemble file for writing: " + path.string());
    out.precision(17);
    out << "# mapsp-ensemble M=" << ens.dims.antennas << " Nc=" << ens.dims.subcarriers
        << " Ng=" << ens.dims.cp_length << " sigma_bar_sq=" << ens.sigma_bar_sq << '\n';
    out << "ut,row,col,power,mu\n";
    for (std::size_t k = 0; k < ens.power.size(); ++k) {
        const auto &p = ens.power[k];
        const auto &mu = ens.args[k].mu;
        require_same_shape(p, mu, "write_ensemble");
        if (p.rows() != ens.dims.antennas || p.cols() != ens.dims.cp_length)
            throw std::invalid_argument("write_ensemble: matrix shape does not match dims");
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j)
                out << k << ',' << i << ',' << j << ',' << p(i, j) << ',' << mu(i, j) << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

ChannelEnsemble read_ensemble(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open ensemble file: " + path.string());
    ChannelEnsemble ens;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# mapsp-ensemble", 0) != 0)
        throw std::runtime_error("ensemble file: missing '# mapsp-ensemble' preamble");
    {
        std::istringstream ss(line.substr(16));
        std::string tok;
        while (ss >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("ensemble file: malformed preamble token '" + tok + "'");
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            if (key == "M")
                ens.dims.antennas = std::stoul(val);
            else if (key == "Nc")
                ens.dims.subcarriers = std::stoul(val);
            else if (key == "Ng")
                ens.dims.cp_length = std::stoul(val);
            else if (key == "sigma_bar_sq")
                ens.sigma_bar_sq = std::stod(val);
        }
    }
    ens.dims.validate();
    if (!std::getline(in, line) || line != "ut,row,col,power,mu")
        throw std::runtime_error("ensemble file: expected header 'ut,row,col,power,mu'");
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string f[5];
        for (auto &x : f)
            if (!std::getline(ss, x, ','))
                throw std::runtime_error("ensemble file: short row at line " + std::to_string(lineno));
        const std::size_t k = std::stoul(f[0]), i = std::stoul(f[1]), j = std::stoul(f[2]);
        if (i >= ens.dims.antennas || j >= ens.dims.cp_length)
            throw std::runtime_error("ensemble file: index out of range at line " + std::to_string(lineno));
        while (ens.power.size() <= k) {
            ens.power.emplace_back(ens.dims.antennas, ens.dims.cp_length);
            ens.args.push_back({RealMatrix(ens.dims.antennas, ens.dims.cp_length), ens.sigma_bar_sq});
        }
        ens.power[k](i, j) = std::stod(f[3]);
        ens.args[k].mu(i, j) = std::stod(f[4]);
    }
    return ens;
}

} // namespace mapsp
