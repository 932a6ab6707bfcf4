// SPDX-License-Identifier: Apache-2.0
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

/// @file eval.hpp
/// Post-beamforming SINR and capacity of an approximate inverse X, with the
/// exact-inverse and full MMSE references.
///
/// The long-term projector of user i is G_i = V_i^H X, where V_i holds the
/// top-r eigenvectors of R_i. On every subcarrier the projected stream is
/// equalized by MMSE:
///
///     gamma = (E_i / N_s) h^H C^{-1} h,   h = G_i H_i[n] e_s,
///     C = sum over other streams (E_j / N_s) G_i h_j h_j^H G_i^H + N0 G_i G_i^H.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrpcg/cmatrix.hpp"
#include "lrpcg/pipeline.hpp"
#include "lrpcg/scenario.hpp"

namespace lrpcg {

inline constexpr std::size_t kDefaultProjectorDim = 4;

/// r x N projector V^H X. Throws DimensionError if r > N.
CMatrix build_projector(const CMatrix& x, const UserStats& user, std::size_t r = kDefaultProjectorDim);

/// Per-stream MMSE SINR of `user` on one subcarrier after projection by g.
/// A zero projector yields zero SINR.
std::vector<double> post_beamforming_sinr(const CMatrix& g, const Scenario& sc, std::size_t user,
                                          std::size_t subcarrier);

/// Unprojected per-RE MMSE receiver, one value per stream.
std::vector<double> mmse_baseline_sinr(const Scenario& sc, std::size_t user, std::size_t subcarrier);

/// Values indexed by (user, stream, subcarrier), subcarrier fastest.
struct SINRReport {
    std::size_t users = 0, streams = 0, subcarriers = 0;
    std::vector<double> gamma;
    std::vector<double> gamma0;  // same layout, exact inverse
    double epsilon = 0.0;        // measured residual of the X used
    double capacity = 0.0;       // bits per RE, mean over users
    double capacity0 = 0.0;

    std::size_t index(std::size_t u, std::size_t s, std::size_t k) const { return (u * streams + s) * subcarriers + k; }
};

/// Mean over users of the summed per-stream log2(1 + gamma), averaged over
/// subcarriers.
double mean_capacity(std::span<const double> gamma, std::size_t users, std::size_t streams, std::size_t subcarriers);

/// All per-RE SINRs of every user for one X.
std::vector<double> sinr_all(const Scenario& sc, const CMatrix& x, std::size_t r = kDefaultProjectorDim);

/// gamma for x, gamma0 for x_exact (normally direct_inverse_oracle(Q)).
SINRReport evaluate(const Scenario& sc, const SystemMatrix& q, const CMatrix& x, const CMatrix& x_exact,
                    std::size_t r = kDefaultProjectorDim);

struct BoundRow {
    std::size_t user = 0, stream = 0, subcarrier = 0;
    double epsilon = 0.0, gamma = 0.0, bound_rhs = 0.0, margin = 0.0;
    bool holds = true;
};

/// gamma >= gamma0 (1 - e)^2 / ((1 + e)^2 + 4 e E[gamma0]) with e the
/// report's epsilon and E[gamma0] the subcarrier mean. Reports only.
std::vector<BoundRow> check_sinr_bound(const SINRReport& report);

struct CapacityRow {
    std::string config_id;
    std::size_t iters = 0;
    double capacity = 0.0;
};

/// Runs each config once with max_iters = largest budget and evaluates the
/// iterate after every budget. Budget 0 is X = 0. A run that stops early
/// keeps its final iterate for the remaining budgets.
std::vector<CapacityRow> capacity_vs_iterations(const Scenario& sc, std::span<const SolveConfig> configs,
                                                std::span<const std::size_t> budgets,
                                                std::size_t r = kDefaultProjectorDim);

struct CDFPoint {
    double gamma_db;
    double cdf;
};

/// Pooled samples in dB, ascending, with ordinates i/n. Zero SINR maps to
/// -inf. Throws ValidationError on an empty set.
std::vector<CDFPoint> sinr_cdf(std::span<const double> gamma);

/// First-order dominance of a over b: sorted(a)[k] >= sorted(b)[k] for all
/// k. Both sets must have the same size.
bool dominates(std::span<const double> a, std::span<const double> b);

void write_capacity_csv(std::ostream& os, std::span<const CapacityRow> rows);
void write_cdf_csv(std::ostream& os, std::span<const CDFPoint> pts, const std::string& config_id, bool header = true);
void write_bound_csv(std::ostream& os, std::span<const BoundRow> rows, const std::string& config_id,
                     bool header = true);

}  // namespace lrpcg
