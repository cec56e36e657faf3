#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ncgspectra/eigh.hpp"
#include "ncgspectra/matrix.hpp"

namespace ncg {

// One binary file per (n, convention hash):
//   header  { char magic[4] = "DPL1"; u64 n; u64 dim; u64 convention_hash;
//             u64 checksum }
//   payload { dim doubles eigenvalues ascending; dim*dim complex eigenvector
//             entries as re,im pairs, row-major }
// checksum is FNV-1a over the payload bytes; convention_hash is FNV-1a over
// the Dirac construction tag, so stale files from a different convention are
// never loaded. Writes go to a temp file in the same directory followed by an
// atomic rename.
struct CacheSettings {
    bool enabled = true;
    std::filesystem::path dir;  // resolved by the caller; env override included
};

struct CacheStats {
    bool hit = false;
    bool wrote = false;
    bool corrupt_rebuilt = false;
    std::string path;
    std::string warning;
};

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t dirac_convention_hash();
std::filesystem::path cache_file_path(const CacheSettings& cs, std::size_t n);

// Returns the decomposition of d, loading it from the cache when a valid file
// exists and writing it back after a miss. Corrupt or mismatched files are
// rebuilt and overwritten, with a warning in stats.
HermitianEigenDecomposition cached_eigh(std::size_t n, const ComplexMatrix& d,
                                        const CacheSettings& cs, CacheStats* stats = nullptr);

// Resolution order: NCGSPECTRA_CACHE_DIR, then configured_dir, then
// fallback_dir.
std::filesystem::path resolve_cache_dir(const std::string& configured_dir,
                                        const std::filesystem::path& fallback_dir);

}  // namespace ncg
