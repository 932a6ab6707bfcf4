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


#include "lrpcg/scenario_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lrpcg {

static_assert(std::endian::native == std::endian::little, "the on-disk format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'B', 'S', 'L', 'V'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 4;

class Writer {
public:
    template <typename T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }

    void put_matrix(const CMatrix& m) {
        put(static_cast<std::uint32_t>(m.rows()));
        put(static_cast<std::uint32_t>(m.cols()));
        for (const auto& z : m.data()) {
            put(z.real());
            put(z.imag());
        }
    }

    std::string& bytes() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    template <typename T>
    T get() {
        if (in_.size() - pos_ < sizeof(T)) throw FormatError("scenario file: payload ends early");
        T v;
        std::memcpy(&v, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    CMatrix get_matrix() {
        const auto rows = get<std::uint32_t>();
        const auto cols = get<std::uint32_t>();
        const std::size_t count = std::size_t{rows} * cols;
        if ((in_.size() - pos_) / 16 < count) throw FormatError("scenario file: matrix data ends early");
        std::vector<cplx> data(count);
        for (auto& z : data) {
            const double re = get<double>();
            const double im = get<double>();
            z = cplx(re, im);
        }
        try {
            return CMatrix(rows, cols, std::move(data));
        } catch (const ValidationError& e) {
            throw FormatError(std::string("scenario file: ") + e.what());
        }
    }

    bool done() const { return pos_ == in_.size(); }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::string_view payload) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large payloads in pieces.
    std::size_t off = 0;
    while (off < payload.size()) {
        const std::size_t chunk = std::min<std::size_t>(payload.size() - off, 1u << 30);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data() + off), static_cast<uInt>(chunk));
        off += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::string frame(PayloadKind kind, const std::string& payload) {
    if (payload.size() > UINT32_MAX) throw FormatError("scenario file: payload exceeds 4 GiB");
    Writer w;
    w.bytes().append(kMagic, 4);
    w.put(kFormatVersion);
    w.put(static_cast<std::uint16_t>(kind));
    w.put(static_cast<std::uint32_t>(payload.size()));
    w.bytes() += payload;
    w.put(crc_of(payload));
    return std::move(w.bytes());
}

std::string_view unframe(std::string_view bytes, PayloadKind expected) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("scenario file: missing BSLV header");
    Reader hdr(bytes.substr(4, kHeaderBytes - 4));
    const auto version = hdr.get<std::uint16_t>();
    const auto kind = hdr.get<std::uint16_t>();
    const auto length = hdr.get<std::uint32_t>();
    if (version != kFormatVersion)
        throw VersionError("scenario file: version " + std::to_string(version) + ", expected " +
                           std::to_string(kFormatVersion));
    // A short file cannot carry a valid checksum, so truncation surfaces
    // as a checksum failure.
    if (bytes.size() != kHeaderBytes + std::size_t{length} + 4)
        throw ChecksumError("scenario file: length does not match header, file truncated or padded");
    const std::string_view payload = bytes.substr(kHeaderBytes, length);
    Reader tail(bytes.substr(kHeaderBytes + length));
    if (tail.get<std::uint32_t>() != crc_of(payload)) throw ChecksumError("scenario file: CRC-32 mismatch");
    if (kind != static_cast<std::uint16_t>(expected))
        throw FormatError("scenario file: payload kind " + std::to_string(kind) + ", expected " +
                          std::to_string(static_cast<std::uint16_t>(expected)));
    return payload;
}

}  // namespace

std::string encode_scenario(const Scenario& s) {
    const auto& c = s.config;
    Writer w;
    w.put(c.side);
    w.put(c.n_ue);
    w.put(c.n_s);
    w.put(c.paths_per_user);
    w.put(c.snr_db_low);
    w.put(c.snr_db_high);
    w.put(c.n0);
    w.put(c.subcarriers);
    w.put(c.seed);
    w.put(c.delay_spread);
    w.put(c.path_sigma_db);
    for (const auto& u : s.users) {
        w.put(u.alpha);
        w.put(u.energy);
        w.put_matrix(u.r_bar);
    }
    for (const auto& ch : s.channels) {
        w.put(static_cast<std::uint32_t>(ch.paths.size()));
        for (const auto& p : ch.paths) {
            w.put(p.azimuth);
            w.put(p.elevation);
            w.put(p.gain.real());
            w.put(p.gain.imag());
            w.put(p.delay);
        }
        for (const auto& h : ch.h) w.put_matrix(h);
    }
    return frame(PayloadKind::scenario, w.bytes());
}

Scenario decode_scenario(std::string_view bytes) {
    Reader r(unframe(bytes, PayloadKind::scenario));
    Scenario s;
    auto& c = s.config;
    c.side = r.get<std::uint32_t>();
    c.n_ue = r.get<std::uint32_t>();
    c.n_s = r.get<std::uint32_t>();
    c.paths_per_user = r.get<std::uint32_t>();
    c.snr_db_low = r.get<double>();
    c.snr_db_high = r.get<double>();
    c.n0 = r.get<double>();
    c.subcarriers = r.get<std::uint32_t>();
    c.seed = r.get<std::uint64_t>();
    c.delay_spread = r.get<double>();
    c.path_sigma_db = r.get<double>();
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("scenario file: ") + e.what());
    }
    for (std::uint32_t i = 0; i < c.n_ue; ++i) {
        UserStats u;
        u.alpha = r.get<double>();
        u.energy = r.get<double>();
        u.r_bar = r.get_matrix();
        s.users.push_back(std::move(u));
    }
    for (std::uint32_t i = 0; i < c.n_ue; ++i) {
        InstantChannel ch;
        const auto n_paths = r.get<std::uint32_t>();
        for (std::uint32_t l = 0; l < n_paths; ++l) {
            Path p;
            p.azimuth = r.get<double>();
            p.elevation = r.get<double>();
            const double re = r.get<double>();
            const double im = r.get<double>();
            p.gain = cplx(re, im);
            p.delay = r.get<double>();
            ch.paths.push_back(p);
        }
        for (std::uint32_t k = 0; k < c.subcarriers; ++k) ch.h.push_back(r.get_matrix());
        s.channels.push_back(std::move(ch));
    }
    if (!r.done()) throw FormatError("scenario file: trailing bytes after the last channel");
    validate_scenario(s);
    return s;
}

std::string encode_matrices(std::span<const CMatrix> ms) {
    Writer w;
    w.put(static_cast<std::uint32_t>(ms.size()));
    for (const auto& m : ms) w.put_matrix(m);
    return frame(PayloadKind::matrices, w.bytes());
}

std::vector<CMatrix> decode_matrices(std::string_view bytes) {
    Reader r(unframe(bytes, PayloadKind::matrices));
    const auto n = r.get<std::uint32_t>();
    std::vector<CMatrix> out;
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(r.get_matrix());
    if (!r.done()) throw FormatError("matrix file: trailing bytes");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::ios_base::failure("write to " + path + " failed");
}

void save_scenario(const std::string& path, const Scenario& s) { write_file(path, encode_scenario(s)); }
Scenario load_scenario(const std::string& path) { return decode_scenario(read_file(path)); }
void save_matrices(const std::string& path, std::span<const CMatrix> ms) { write_file(path, encode_matrices(ms)); }
std::vector<CMatrix> load_matrices(const std::string& path) { return decode_matrices(read_file(path)); }

}  // namespace lrpcg
