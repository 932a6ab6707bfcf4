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

#include "lrpcg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "lrpcg/format.hpp"
#include "lrpcg/linalg.hpp"

namespace lrpcg {

ConfigError::ConfigError(std::string k, const std::string& what) : Error(what), key(std::move(k)) {}

void ScenarioConfig::validate() const {
    auto need = [](bool ok, const char* key, const std::string& msg) {
        if (!ok) throw ConfigError(key, std::string("config: ") + key + " " + msg);
    };
    need(side >= 1, "T", "must be >= 1");
    need(n_ue >= 1, "n_ue", "must be >= 1");
    need(n_s >= 1, "n_s", "must be >= 1");
    need(paths_per_user >= 1, "paths_per_user", "must be >= 1");
    need(subcarriers >= 1, "subcarriers", "must be >= 1");
    need(std::isfinite(snr_db_low) && std::isfinite(snr_db_high) && snr_db_low <= snr_db_high, "snr_db_low",
         "must be finite and not above snr_db_high");
    need(n0 > 0.0 && std::isfinite(n0), "n0", "must be positive");
    need(delay_spread >= 0.0 && std::isfinite(delay_spread), "delay_spread", "must be non-negative");
    need(path_sigma_db >= 0.0 && std::isfinite(path_sigma_db), "path_sigma_db", "must be non-negative");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    T out{};
    is >> out;
    if (!is || !(is >> std::ws).eof()) throw ConfigError(key, "config: bad value '" + value + "' for key " + key);
    return out;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "config: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "T") cfg.side = parse_number<std::uint32_t>(key, value);
        else if (key == "n_ue") cfg.n_ue = parse_number<std::uint32_t>(key, value);
        else if (key == "n_s") cfg.n_s = parse_number<std::uint32_t>(key, value);
        else if (key == "paths_per_user") cfg.paths_per_user = parse_number<std::uint32_t>(key, value);
        else if (key == "snr_db_low") cfg.snr_db_low = parse_number<double>(key, value);
        else if (key == "snr_db_high") cfg.snr_db_high = parse_number<double>(key, value);
        else if (key == "n0") cfg.n0 = parse_number<double>(key, value);
        else if (key == "subcarriers") cfg.subcarriers = parse_number<std::uint32_t>(key, value);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "delay_spread") cfg.delay_spread = parse_number<double>(key, value);
        else if (key == "path_sigma_db") cfg.path_sigma_db = parse_number<double>(key, value);
        else throw ConfigError(key, "config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const ScenarioConfig& cfg) {
    out << "T = " << cfg.side << '\n'
        << "n_ue = " << cfg.n_ue << '\n'
        << "n_s = " << cfg.n_s << '\n'
        << "paths_per_user = " << cfg.paths_per_user << '\n'
        << "snr_db_low = " << fmt_double(cfg.snr_db_low) << '\n'
        << "snr_db_high = " << fmt_double(cfg.snr_db_high) << '\n'
        << "n0 = " << fmt_double(cfg.n0) << '\n'
        << "subcarriers = " << cfg.subcarriers << '\n'
        << "seed = " << cfg.seed << '\n'
        << "delay_spread = " << fmt_double(cfg.delay_spread) << '\n'
        << "path_sigma_db = " << fmt_double(cfg.path_sigma_db) << '\n';
}

CMatrix steering_vector(std::size_t side, double azimuth, double elevation) {
    const double u = std::sin(azimuth) * std::cos(elevation);
    const double v = std::sin(elevation);
    CMatrix a(side * side, 1);
    for (std::size_t ix = 0; ix < side; ++ix)
        for (std::size_t iy = 0; iy < side; ++iy) {
            const double ph = std::numbers::pi * (static_cast<double>(ix) * u + static_cast<double>(iy) * v);
            a(ix * side + iy, 0) = cplx(std::cos(ph), std::sin(ph));
        }
    return a;
}

std::vector<double> user_snr_db(const ScenarioConfig& cfg) {
    std::vector<double> out(cfg.n_ue, cfg.snr_db_low);
    if (cfg.n_ue > 1)
        for (std::uint32_t i = 0; i < cfg.n_ue; ++i)
            out[i] = cfg.snr_db_low + (cfg.snr_db_high - cfg.snr_db_low) * i / (cfg.n_ue - 1);
    return out;
}

namespace {

std::vector<Path> draw_paths(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> delay(0.0, cfg.delay_spread);
    std::normal_distribution<double> shadow(0.0, cfg.path_sigma_db);

    std::vector<Path> paths(cfg.paths_per_user);
    std::vector<double> power(paths.size());
    double total = 0.0;
    for (std::size_t l = 0; l < paths.size(); ++l) {
        paths[l].azimuth = angle(rng);
        paths[l].elevation = angle(rng);
        paths[l].delay = delay(rng);
        power[l] = std::pow(10.0, shadow(rng) / 10.0);
        total += power[l];
        const double ph = phase(rng);
        paths[l].gain = cplx(std::cos(ph), std::sin(ph));
    }
    for (std::size_t l = 0; l < paths.size(); ++l) paths[l].gain *= std::sqrt(power[l] / total);
    return paths;
}

bool all_colinear(const std::vector<CMatrix>& steer) {
    if (steer.size() < 2) return false;
    const double n = static_cast<double>(steer.front().rows());
    for (std::size_t l = 1; l < steer.size(); ++l) {
        cplx ip = 0.0;
        for (std::size_t k = 0; k < steer[l].rows(); ++k) ip += std::conj(steer[0](k, 0)) * steer[l](k, 0);
        if (std::abs(ip) < (1.0 - 1e-9) * n) return false;
    }
    return true;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.antennas();
    const auto snr_db = user_snr_db(cfg);

    Scenario sc;
    sc.config = cfg;
    for (std::uint32_t i = 0; i < cfg.n_ue; ++i) {
        std::vector<Path> paths;
        std::vector<CMatrix> steer;
        std::mt19937_64 rng;
        for (std::uint32_t attempt = 0;; ++attempt) {
            if (attempt == 5) throw ValidationError("generate_scenario: user " + std::to_string(i) + " stays degenerate");
            std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32), i,
                              attempt};
            rng.seed(seq);
            paths = draw_paths(cfg, rng);
            steer.clear();
            for (const auto& p : paths) steer.push_back(steering_vector(cfg.side, p.azimuth, p.elevation));
            if (!all_colinear(steer)) break;
        }

        UserStats u;
        u.r_bar = CMatrix(n, n);
        for (std::size_t l = 0; l < paths.size(); ++l) {
            const double pw = std::norm(paths[l].gain);
            for (std::size_t r = 0; r < n; ++r) {
                const cplx ar = pw * steer[l](r, 0);
                auto row = u.r_bar.row(r);
                for (std::size_t c = 0; c < n; ++c) row[c] += ar * std::conj(steer[l](c, 0));
            }
        }
        u.r_bar = hermitian_part(u.r_bar);
        // Exact trace normalization against round-off in the power sums.
        u.r_bar *= static_cast<double>(n) / trace(u.r_bar).real();
        u.alpha = std::pow(10.0, snr_db[i] / 10.0) / (static_cast<double>(cfg.n_s) * static_cast<double>(n));
        u.energy = u.alpha * cfg.n0 * cfg.n_s;

        // Stream 0 carries the path gains as drawn; further streams see
        // independent path phases.
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        std::vector<std::vector<cplx>> stream_phase(cfg.n_s, std::vector<cplx>(paths.size(), 1.0));
        for (std::uint32_t s = 1; s < cfg.n_s; ++s)
            for (auto& z : stream_phase[s]) {
                const double ph = phase(rng);
                z = cplx(std::cos(ph), std::sin(ph));
            }

        InstantChannel ch;
        ch.paths = paths;
        ch.h.reserve(cfg.subcarriers);
        for (std::uint32_t sc_idx = 0; sc_idx < cfg.subcarriers; ++sc_idx) {
            CMatrix h(n, cfg.n_s);
            for (std::size_t l = 0; l < paths.size(); ++l) {
                const double ph = -2.0 * std::numbers::pi * static_cast<double>(sc_idx) * paths[l].delay;
                const cplx coeff = paths[l].gain * cplx(std::cos(ph), std::sin(ph));
                for (std::uint32_t s = 0; s < cfg.n_s; ++s) {
                    const cplx c = coeff * stream_phase[s][l];
                    for (std::size_t r = 0; r < n; ++r) h(r, s) += c * steer[l](r, 0);
                }
            }
            ch.h.push_back(std::move(h));
        }
        sc.users.push_back(std::move(u));
        sc.channels.push_back(std::move(ch));
    }
    return sc;
}

void validate_user(const UserStats& u, std::size_t n) {
    if (u.r_bar.rows() != n || u.r_bar.cols() != n)
        throw ValidationError("user covariance is " + shape_string(u.r_bar) + ", expected " + std::to_string(n) + "x" +
                              std::to_string(n));
    require_hermitian(u.r_bar, 1e-12, "user covariance");
    const double tr = trace(u.r_bar).real();
    if (std::abs(tr - static_cast<double>(n)) > 1e-9 * static_cast<double>(n))
        throw ValidationError("user covariance trace " + std::to_string(tr) + " differs from N = " + std::to_string(n));
    const auto ev = hermitian_evd(u.r_bar);
    if (ev.values.back() < -1e-10) throw ValidationError("user covariance is not positive semidefinite");
    if (!(u.alpha > 0.0) || !(u.energy > 0.0)) throw ValidationError("user alpha and energy must be positive");
}

SystemMatrix assemble_q(std::span<const UserStats> users, std::size_t n) {
    CMatrix q = CMatrix::identity(n);
    for (const auto& u : users) {
        validate_user(u, n);
        CMatrix term = u.r_bar;
        term *= u.alpha;
        q += term;
    }
    return SystemMatrix(hermitian_part(q), Domain::antenna);
}

void validate_scenario(const Scenario& s) {
    s.config.validate();
    const std::size_t n = s.antennas();
    if (s.users.size() != s.config.n_ue || s.channels.size() != s.config.n_ue)
        throw ValidationError("scenario: user count does not match config");
    for (const auto& u : s.users) validate_user(u, n);
    for (const auto& ch : s.channels) {
        if (ch.h.size() != s.config.subcarriers) throw ValidationError("scenario: subcarrier count mismatch");
        for (const auto& h : ch.h)
            if (h.rows() != n || h.cols() != s.config.n_s) throw ValidationError("scenario: channel shape mismatch");
    }
}

}  // namespace lrpcg
