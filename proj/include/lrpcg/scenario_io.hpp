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

/// @file scenario_io.hpp
/// Binary persistence for scenarios and matrix lists.
///
/// Layout, all little-endian:
///
///     "BSLV"  u16 version  u16 kind  u32 payload_bytes  payload  u32 crc32(payload)
///
/// A matrix is u32 rows, u32 cols and rows*cols (re, im) f64 pairs in
/// row-major order. kind 1 holds a scenario, kind 2 a u32 count followed by
/// that many matrices. The scenario payload is
///
///     u32 T, u32 n_ue, u32 n_s, u32 paths_per_user, f64 snr_db_low,
///     f64 snr_db_high, f64 n0, u32 subcarriers, u64 seed, f64 delay_spread,
///     f64 path_sigma_db
///     per user:   f64 alpha, f64 energy, matrix R (N x N)
///     per user:   u32 path_count, per path f64 azimuth, elevation,
///                 gain_re, gain_im, delay; then one N x N_s matrix per
///                 subcarrier

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrpcg/cmatrix.hpp"
#include "lrpcg/scenario.hpp"

namespace lrpcg {

// Bad magic, truncated header or payload that does not parse.
struct FormatError : Error {
    using Error::Error;
};

struct ChecksumError : FormatError {
    using FormatError::FormatError;
};

struct VersionError : FormatError {
    using FormatError::FormatError;
};

inline constexpr std::uint16_t kFormatVersion = 1;

enum class PayloadKind : std::uint16_t { scenario = 1, matrices = 2 };

std::string encode_scenario(const Scenario& s);
/// Parses and validates every scenario invariant.
Scenario decode_scenario(std::string_view bytes);

std::string encode_matrices(std::span<const CMatrix> ms);
std::vector<CMatrix> decode_matrices(std::string_view bytes);

// File wrappers; failures to open or write throw std::ios_base::failure.
void save_scenario(const std::string& path, const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_matrices(const std::string& path, std::span<const CMatrix> ms);
std::vector<CMatrix> load_matrices(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace lrpcg
