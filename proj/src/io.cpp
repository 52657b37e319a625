#include "ntnlab/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ntnlab::io {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for hashing");
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto n = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

namespace {

void put_le64(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    }
    out.write(b, 8);
}

double get_le64(std::istream& in) {
    char b[8];
    in.read(b, 8);
    if (!in) {
        throw std::runtime_error("truncated IQ stream");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
                << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_iq(std::ostream& out, const wave::IqBuffer& buffer) {
    out.write(kIqMagic, sizeof(kIqMagic));
    for (const auto& s : buffer.samples) {
        put_le64(out, s.real());
        put_le64(out, s.imag());
    }
}

wave::IqBuffer read_iq(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kIqMagic, 8) != 0) {
        throw std::runtime_error("not an IQ file (bad magic)");
    }
    wave::IqBuffer buf;
    while (true) {
        const int c = in.peek();
        if (c == std::char_traits<char>::eof()) break;
        const double re = get_le64(in);
        const double im = get_le64(in);
        buf.samples.emplace_back(re, im);
    }
    return buf;
}

void write_iq_file(const std::string& path, const wave::IqBuffer& buffer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_iq(out, buffer);
}

wave::IqBuffer read_iq_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return read_iq(in);
}

std::string manifest_to_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["scenario"] = m.scenario;
    j["seed"] = m.seed;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : m.artifacts) {
        char hash[24];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(e.fnv1a64));
        nlohmann::ordered_json je;
        je["file"] = e.file;
        je["bytes"] = e.bytes;
        je["fnv1a64"] = hash;
        arr.push_back(je);
    }
    j["artifacts"] = arr;
    return j.dump(2) + "\n";
}

void write_manifest(const std::string& out_dir, const std::string& scenario,
                    std::uint64_t seed, const std::vector<std::string>& files) {
    Manifest m;
    m.scenario = scenario;
    m.seed = seed;
    for (const auto& f : files) {
        const std::string full = out_dir + "/" + f;
        std::ifstream in(full, std::ios::binary | std::ios::ate);
        if (!in) {
            throw std::runtime_error("manifest: missing artifact '" + full + "'");
        }
        ManifestEntry e;
        e.file = f;
        e.bytes = static_cast<std::uint64_t>(in.tellg());
        in.close();
        e.fnv1a64 = fnv1a64_file(full);
        m.artifacts.push_back(e);
    }
    std::ofstream out(out_dir + "/manifest.json");
    if (!out) {
        throw std::runtime_error("cannot write manifest in '" + out_dir + "'");
    }
    out << manifest_to_json(m);
}

}  // namespace ntnlab::io
