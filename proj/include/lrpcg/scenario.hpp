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

/// @file scenario.hpp
/// Synthetic multi-user uplink scenarios for a T x T half-wavelength
/// planar array: geometric multipath users, their long-term spatial
/// covariances, per-subcarrier channels and the system matrix
/// Q = I + sum_i alpha_i R_i.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrpcg/cmatrix.hpp"
#include "lrpcg/system_matrix.hpp"

namespace lrpcg {

struct ConfigError : Error {
    ConfigError(std::string key, const std::string& what);
    std::string key;
};

struct ScenarioConfig {
    std::uint32_t side = 8;             // T; N = T^2 antennas
    std::uint32_t n_ue = 4;
    std::uint32_t n_s = 1;              // streams per user
    std::uint32_t paths_per_user = 4;
    double snr_db_low = -6.0;
    double snr_db_high = 14.0;
    double n0 = 1.0;                    // noise power spectral density
    std::uint32_t subcarriers = 64;
    std::uint64_t seed = 1;
    double delay_spread = 0.25;         // max path delay, in OFDM symbol durations
    double path_sigma_db = 4.0;         // lognormal spread of path powers

    std::size_t antennas() const noexcept { return std::size_t{side} * side; }
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys throw
/// ConfigError carrying the key name.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ScenarioConfig& cfg);

struct Path {
    double azimuth = 0.0;    // radians, front hemisphere (-pi/2, pi/2)
    double elevation = 0.0;  // radians, (-pi/2, pi/2)
    cplx gain;               // |gain|^2 sums to one per user
    double delay = 0.0;      // OFDM symbol durations
};

struct UserStats {
    CMatrix r_bar;       // N x N, Hermitian PSD, trace N
    double alpha = 0.0;  // E_x / (N0 N_s)
    double energy = 0.0; // per-symbol transmit energy E_x
};

struct InstantChannel {
    std::vector<Path> paths;
    std::vector<CMatrix> h;  // one N x N_s matrix per subcarrier
};

struct Scenario {
    ScenarioConfig config;
    std::vector<UserStats> users;
    std::vector<InstantChannel> channels;

    std::size_t antennas() const noexcept { return config.antennas(); }
};

/// Half-wavelength UPA response; element (a, b) sits at index a*T + b.
/// The squared norm is N.
CMatrix steering_vector(std::size_t side, double azimuth, double elevation);

/// Target SNRs (dB) spaced uniformly over [low, high] across users.
std::vector<double> user_snr_db(const ScenarioConfig& cfg);

/**
 * Draws a scenario as a pure function of cfg (including cfg.seed).
 *
 * Paths have uniform azimuth/elevation over the front hemisphere,
 * lognormal powers and uniform delays. Per-user SNR targets are spread
 * uniformly in dB and refer to the single-user SNR after beamforming, so
 * alpha_i = 10^(snr_i/10) / (N_s N). A user whose paths are all colinear
 * is redrawn (five attempts at most).
 */
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Q = I + sum_i alpha_i R_i for N antennas. Checks the trace and PSD
/// invariants of every R_i.
SystemMatrix assemble_q(std::span<const UserStats> users, std::size_t n);
inline SystemMatrix assemble_q(const Scenario& s) { return assemble_q(s.users, s.antennas()); }

/// Throws ValidationError if R_i is not Hermitian PSD with trace N or
/// alpha/energy are not positive.
void validate_user(const UserStats& u, std::size_t n);

/// Validates every invariant of a loaded or generated scenario.
void validate_scenario(const Scenario& s);

}  // namespace lrpcg
