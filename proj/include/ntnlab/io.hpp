#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::io {

// FNV-1a over a byte stream; used for the artifact manifest.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);

// Interleaved little-endian float64 I/Q with an 8-byte magic header.
inline constexpr char kIqMagic[8] = {'N', 'T', 'N', 'I', 'Q', 'F', '6', '4'};

void write_iq(std::ostream& out, const wave::IqBuffer& buffer);
wave::IqBuffer read_iq(std::istream& in);  // throws std::runtime_error on bad magic

void write_iq_file(const std::string& path, const wave::IqBuffer& buffer);
wave::IqBuffer read_iq_file(const std::string& path);

// Reproducibility manifest: scenario, seed, and a content hash per artifact.
struct ManifestEntry {
    std::string file;    // path relative to the output directory
    std::uint64_t bytes = 0;
    std::uint64_t fnv1a64 = 0;
};

struct Manifest {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> artifacts;
};

std::string manifest_to_json(const Manifest& m);

// Hashes every artifact under out_dir (paths relative to it) and writes
// manifest.json there.
void write_manifest(const std::string& out_dir, const std::string& scenario,
                    std::uint64_t seed, const std::vector<std::string>& files);

}  // namespace ntnlab::io
