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

#include "mapsp/uplink.hpp"

#include "mapsp/transforms.hpp"

#include <cmath>

namespace mapsp {

PilotBook::PilotBook(std::vector<BasicPilot> basics) : basics_(std::move(basics))
{
    if (basics_.empty())
        throw std::invalid_argument("PilotBook: at least one basic pilot required");
    const auto n = basics_.front().size();
    for (const auto &b : basics_)
        if (b.size() != n)
            throw std::invalid_argument("PilotBook: basic pilots differ in length");
    const auto q = basics_.size();
    pairs_.reserve(q * q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t t = 0; t < q; ++t)
            pairs_.push_back(adpcm_fast(sfpcm_diagonal(basics_[i], basics_[t], 0, 0)));
}

const Adpcm &PilotBook::pair(std::size_t interferer, std::size_t target) const
{
    if (interferer >= groups() || target >= groups())
        throw std::out_of_range("PilotBook::pair: group index out of range");
    return pairs_[interferer * groups() + target];
}

PilotBook make_zc_book(std::size_t groups, std::size_t subcarriers, long long root, ZcVariant variant)
{
    if (groups < 1)
        throw std::invalid_argument("make_zc_book: need at least one group");
    std::vector<BasicPilot> basics;
    const std::size_t step = subcarriers / groups;
    for (std::size_t q = 0; q < groups; ++q)
        basics.push_back(zc_sequence(subcarriers, root, q * step, variant));
    return PilotBook(std::move(basics));
}

void UplinkScene::validate() const
{
    dims.validate();
    if (book == nullptr)
        throw std::invalid_argument("UplinkScene: no pilot book");
    if (channels.size() != assignments.size())
        throw std::invalid_argument("UplinkScene: channel and assignment counts differ");
    if (book->basic(0).size() != dims.subcarriers)
        throw std::invalid_argument("UplinkScene: pilot length differs from N_c");
    for (std::size_t k = 0; k < channels.size(); ++k) {
        if (channels[k].rows() != dims.antennas || channels[k].cols() != dims.cp_length)
            throw std::invalid_argument("UplinkScene: channel " + std::to_string(k) + " is not M x N_g");
        if (assignments[k].group >= book->groups())
            throw std::invalid_argument("UplinkScene: group index out of range for UT " + std::to_string(k));
    }
    if (p_ntr < 0.0)
        throw std::invalid_argument("UplinkScene: negative noise power");
}

ComplexMatrix synthesize_received(const UplinkScene &scene, Rng &rng)
{
    scene.validate();
    const auto &d = scene.dims;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d.subcarriers));
    // Accumulate (1/sqrt(N_c)) H W^T X per UT, then apply A once.
    ComplexMatrix b(d.antennas, d.subcarriers);
    CVec padded(d.subcarriers);
    for (std::size_t k = 0; k < scene.channels.size(); ++k) {
        const auto &a = scene.assignments[k];
        const CVec x = pilot_frequency_signal(a, scene.book->basic(a.group));
        const auto &h = scene.channels[k];
        for (std::size_t m = 0; m < d.antennas; ++m) {
            std::fill(padded.begin(), padded.end(), cplx{});
            for (std::size_t j = 0; j < d.cp_length; ++j)
                padded[j] = h(m, j);
            const CVec t = dft(padded);
            auto row = b.row(m);
            for (std::size_t n = 0; n < d.subcarriers; ++n)
                row[n] += scale * t[n] * x[n];
        }
    }
    ComplexMatrix y = matmul(array_response(d.antennas), b);
    if (scene.p_ntr > 0.0) {
        const double s = std::sqrt(0.5 * scene.p_ntr);
        for (auto &v : y.data()) {
            const double re = std_normal(rng);
            const double im = std_normal(rng);
            v += cplx(s * re, s * im);
        }
    }
    return y;
}

ComplexMatrix ls_decorrelate(const ComplexMatrix &y, const PilotAssignment &target, const BasicPilot &basic,
                             const SystemDims &dims)
{
    dims.validate();
    if (y.rows() != dims.antennas || y.cols() != dims.subcarriers)
        throw std::invalid_argument("ls_decorrelate: expected an M x N_c signal");
    const CVec x = pilot_frequency_signal(target, basic);
    ComplexMatrix yx(y.rows(), y.cols());
    for (std::size_t m = 0; m < y.rows(); ++m)
        for (std::size_t n = 0; n < y.cols(); ++n)
            yx(m, n) = y(m, n) * std::conj(x[n]);
    const ComplexMatrix c = matmul(conj_transpose(array_response(dims.antennas)), yx);
    // [C W*]_{m,j} = N_c idft(C_m)[j]; combined with 1/(p sqrt(N_c)) this is sqrt(N_c)/p.
    const double scale = std::sqrt(static_cast<double>(dims.subcarriers)) / target.power;
    ComplexMatrix out(dims.antennas, dims.cp_length);
    for (std::size_t m = 0; m < dims.antennas; ++m) {
        const CVec t = idft(c.row(m));
        for (std::size_t j = 0; j < dims.cp_length; ++j)
            out(m, j) = scale * t[j];
    }
    return out;
}

ComplexMatrix intra_interference(const ComplexMatrix &h, long long delta_phi, const SystemDims &dims)
{
    return shift_truncate(h, dims.subcarriers, delta_phi, dims.cp_length);
}

ComplexMatrix inter_interference(const ComplexMatrix &h, const Adpcm &z, long long delta_phi, const SystemDims &dims)
{
    const auto nc = dims.subcarriers;
    if (z.size() != nc)
        throw std::invalid_argument("inter_interference: ADPCM length differs from N_c");
    if (z.structure == AdpcmStructure::CyclicShiftScaled) {
        ComplexMatrix out =
            shift_truncate(h, nc, delta_phi - static_cast<long long>(z.offset), dims.cp_length);
        out *= z.first_col[z.offset];
        return out;
    }
    // out[:, b] = sum_a H[:, a] z[<a - b + delta>]
    ComplexMatrix out(h.rows(), dims.cp_length);
    for (std::size_t b = 0; b < dims.cp_length; ++b)
        for (std::size_t a = 0; a < h.cols(); ++a) {
            const cplx w = z.first_col[mod_index(static_cast<long long>(a) - static_cast<long long>(b) + delta_phi, nc)];
            if (w == cplx{})
                continue;
            for (std::size_t i = 0; i < h.rows(); ++i)
                out(i, b) += h(i, a) * w;
        }
    return out;
}

RealMatrix interference_power(const RealMatrix &p, long long delta_phi, const Adpcm *z, const SystemDims &dims)
{
    const auto nc = dims.subcarriers;
    if (z == nullptr)
        return shift_truncate(p, nc, delta_phi, dims.cp_length);
    if (z->size() != nc)
        throw std::invalid_argument("interference_power: ADPCM length differs from N_c");
    if (z->structure == AdpcmStructure::CyclicShiftScaled) {
        RealMatrix out = shift_truncate(p, nc, delta_phi - static_cast<long long>(z->offset), dims.cp_length);
        out *= std::norm(z->first_col[z->offset]);
        return out;
    }
    RealMatrix out(p.rows(), dims.cp_length);
    for (std::size_t b = 0; b < dims.cp_length; ++b)
        for (std::size_t a = 0; a < p.cols(); ++a) {
            const double w =
                std::norm(z->first_col[mod_index(static_cast<long long>(a) - static_cast<long long>(b) + delta_phi, nc)]);
            if (w == 0.0)
                continue;
            for (std::size_t i = 0; i < p.rows(); ++i)
                out(i, b) += p(i, a) * w;
        }
    return out;
}

namespace {

// (1/N_c) H_bar T I_{N_c x N_g} for a dense N_c x N_c operator T.
ComplexMatrix apply_dense(const ComplexMatrix &h, const ComplexMatrix &t, const SystemDims &dims)
{
    const ComplexMatrix hb = zero_pad_columns(h, dims.subcarriers);
    const ComplexMatrix full = matmul(hb, t);
    ComplexMatrix out(h.rows(), dims.cp_length);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < dims.cp_length; ++j)
            out(i, j) = full(i, j);
    return out;
}

ComplexMatrix to_complex(const RealMatrix &m)
{
    ComplexMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i)
        c.data()[i] = m.data()[i];
    return c;
}

} // namespace

ComplexMatrix intra_interference_dense(const ComplexMatrix &h, long long delta_phi, const SystemDims &dims)
{
    // (1/N_c) W^T D_delta W*
    const auto nc = dims.subcarriers;
    const ComplexMatrix w = dft_matrix(nc);
    ComplexMatrix wt_d(nc, nc);
    for (std::size_t k = 0; k < nc; ++k)
        for (std::size_t n = 0; n < nc; ++n)
            wt_d(k, n) = w(n, k) * w(n, mod_index(delta_phi, nc));
    ComplexMatrix wc(nc, nc);
    for (std::size_t i = 0; i < w.size(); ++i)
        wc.data()[i] = std::conj(w.data()[i]);
    ComplexMatrix t = matmul(wt_d, wc);
    t *= cplx(1.0 / static_cast<double>(nc));
    return apply_dense(h, t, dims);
}

ComplexMatrix inter_interference_dense(const ComplexMatrix &h, const Adpcm &z, long long delta_phi,
                                       const SystemDims &dims)
{
    const ComplexMatrix t = matmul(z.dense(), to_complex(cyclic_shift_matrix(dims.subcarriers, delta_phi)));
    return apply_dense(h, t, dims);
}

Decomposition decompose(const UplinkScene &scene, std::size_t target)
{
    scene.validate();
    if (target >= scene.channels.size())
        throw std::out_of_range("decompose: target index out of range");
    const auto &d = scene.dims;
    const auto &ta = scene.assignments[target];
    Decomposition out{scene.channels[target], ComplexMatrix(d.antennas, d.cp_length),
                      ComplexMatrix(d.antennas, d.cp_length)};
    for (std::size_t k = 0; k < scene.channels.size(); ++k) {
        if (k == target)
            continue;
        const auto &a = scene.assignments[k];
        const long long delta = static_cast<long long>(a.shift) - static_cast<long long>(ta.shift);
        const double amp = std::sqrt(a.power / ta.power);
        if (a.group == ta.group) {
            ComplexMatrix term = intra_interference(scene.channels[k], delta, d);
            term *= cplx(amp);
            out.intra += term;
        } else {
            ComplexMatrix term = inter_interference(scene.channels[k], scene.book->pair(a.group, ta.group), delta, d);
            term *= cplx(amp);
            out.inter += term;
        }
    }
    return out;
}

} // namespace mapsp
