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

#pragma once

#include "mapsp/rng.hpp"
#include "mapsp/zc_pilot.hpp"

namespace mapsp {

/// Basic pilots of every group plus the cross-correlation of each (interferer, target) pair.
class PilotBook
{
  public:
    PilotBook() = default;
    explicit PilotBook(std::vector<BasicPilot> basics);

    std::size_t groups() const noexcept { return basics_.size(); }
    const BasicPilot &basic(std::size_t q) const { return basics_.at(q); }
    const std::vector<BasicPilot> &basics() const noexcept { return basics_; }

    // ADPCM of group `interferer` seen by a UT of group `target`, both at zero phase shift.
    const Adpcm &pair(std::size_t interferer, std::size_t target) const;

  private:
    std::vector<BasicPilot> basics_;
    std::vector<Adpcm> pairs_;
};

// One basic pilot per group: ZC of the given root with cyclic shift q * floor(N_c / Q).
PilotBook make_zc_book(std::size_t groups, std::size_t subcarriers, long long root, ZcVariant variant);

struct UplinkScene
{
    SystemDims dims;
    const PilotBook *book = nullptr;
    std::vector<ComplexMatrix> channels;      // M x N_g each
    std::vector<PilotAssignment> assignments; // same length as channels
    double p_ntr = 0.0;                       // noise power per element

    void validate() const;
};

/// Y = sum_k ad_to_sf(H_k) diag(x_k) + N, with N circular Gaussian of variance p_ntr.
ComplexMatrix synthesize_received(const UplinkScene &scene, Rng &rng);

/// (1/(p sqrt(N_c))) A^H Y X^H W*_{N_c x N_g}.
ComplexMatrix ls_decorrelate(const ComplexMatrix &y, const PilotAssignment &target, const BasicPilot &basic,
                             const SystemDims &dims);

/// Zero-pad, shift right by delta_phi, keep the first N_g columns.
ComplexMatrix intra_interference(const ComplexMatrix &h, long long delta_phi, const SystemDims &dims);

/// H_bar Z Lambda^{delta_phi} I_{N_c x N_g} with Z given by its normalised first column.
ComplexMatrix inter_interference(const ComplexMatrix &h, const Adpcm &z, long long delta_phi, const SystemDims &dims);

/// Expected |interference|^2 for independent elements of variance P. `z == nullptr` means same group.
RealMatrix interference_power(const RealMatrix &p, long long delta_phi, const Adpcm *z, const SystemDims &dims);

// Dense references used by the tests.
ComplexMatrix intra_interference_dense(const ComplexMatrix &h, long long delta_phi, const SystemDims &dims);
ComplexMatrix inter_interference_dense(const ComplexMatrix &h, const Adpcm &z, long long delta_phi,
                                       const SystemDims &dims);

/// Term-by-term expansion of ls_decorrelate for a noise-free scene.
struct Decomposition
{
    ComplexMatrix own;
    ComplexMatrix intra;
    ComplexMatrix inter;
};
Decomposition decompose(const UplinkScene &scene, std::size_t target);

} // namespace mapsp
