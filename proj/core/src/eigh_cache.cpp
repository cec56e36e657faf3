#include "ncgspectra/eigh_cache.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

namespace ncg {

namespace {
constexpr char kMagic[4] = {'D', 'P', 'L', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 * sizeof(std::uint64_t);

const char* const kDiracConventionTag =
    "dirac = (n/2pi) sum_i kron(I (x) X_i - X_i^T (x) I, gamma_i); "
    "X = (Re U, Im U, Re V, Im V); gamma_a = sigma2 (x) sigma_a, gamma_4 = sigma3 (x) I2; "
    "vec column-major; eigenvalues ascending";

struct Header {
    char magic[4];
    std::uint64_t n;
    std::uint64_t dim;
    std::uint64_t convention_hash;
    std::uint64_t checksum;
};

// fixed 36-byte layout, independent of struct padding
void pack_header(const Header& h, unsigned char* p) {
    std::memcpy(p, h.magic, 4);
    std::memcpy(p + 4, &h.n, 8);
    std::memcpy(p + 12, &h.dim, 8);
    std::memcpy(p + 20, &h.convention_hash, 8);
    std::memcpy(p + 28, &h.checksum, 8);
}

void unpack_header(const unsigned char* p, Header& h) {
    std::memcpy(h.magic, p, 4);
    std::memcpy(&h.n, p + 4, 8);
    std::memcpy(&h.dim, p + 12, 8);
    std::memcpy(&h.convention_hash, p + 20, 8);
    std::memcpy(&h.checksum, p + 28, 8);
}

std::vector<unsigned char> payload_bytes(const HermitianEigenDecomposition& e) {
    const std::size_t dim = e.eigenvalues.size();
    std::vector<unsigned char> buf(sizeof(double) * (dim + 2 * dim * dim));
    unsigned char* p = buf.data();
    std::memcpy(p, e.eigenvalues.data(), sizeof(double) * dim);
    p += sizeof(double) * dim;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const double re = e.eigenvectors(i, j).real();
            const double im = e.eigenvectors(i, j).imag();
            std::memcpy(p, &re, sizeof(double));
            p += sizeof(double);
            std::memcpy(p, &im, sizeof(double));
            p += sizeof(double);
        }
    return buf;
}

bool try_load(const std::filesystem::path& path, std::size_t n, std::size_t dim,
              HermitianEigenDecomposition& out, std::string& why) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        why = "absent";
        return false;
    }
    unsigned char hbuf[kHeaderBytes];
    if (!in.read(reinterpret_cast<char*>(hbuf), kHeaderBytes)) {
        why = "truncated header";
        return false;
    }
    Header h{};
    unpack_header(hbuf, h);
    if (std::memcmp(h.magic, kMagic, 4) != 0) {
        why = "bad magic";
        return false;
    }
    if (h.n != n || h.dim != dim) {
        why = "size mismatch";
        return false;
    }
    if (h.convention_hash != dirac_convention_hash()) {
        why = "convention mismatch";
        return false;
    }
    std::vector<unsigned char> buf(sizeof(double) * (dim + 2 * dim * dim));
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
        why = "truncated payload";
        return false;
    }
    if (fnv1a(buf.data(), buf.size()) != h.checksum) {
        why = "checksum mismatch";
        return false;
    }
    out.eigenvalues.resize(dim);
    std::memcpy(out.eigenvalues.data(), buf.data(), sizeof(double) * dim);
    out.eigenvectors = ComplexMatrix(dim);
    const unsigned char* p = buf.data() + sizeof(double) * dim;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            double re, im;
            std::memcpy(&re, p, sizeof(double));
            p += sizeof(double);
            std::memcpy(&im, p, sizeof(double));
            p += sizeof(double);
            out.eigenvectors(i, j) = cplx{re, im};
        }
    return true;
}

bool write_atomic(const std::filesystem::path& path, std::size_t n,
                  const HermitianEigenDecomposition& e, std::string& why) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    const std::vector<unsigned char> buf = payload_bytes(e);
    Header h{};
    std::memcpy(h.magic, kMagic, 4);
    h.n = n;
    h.dim = e.eigenvalues.size();
    h.convention_hash = dirac_convention_hash();
    h.checksum = fnv1a(buf.data(), buf.size());

    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(static_cast<unsigned long>(::getpid()));
    {
        std::ofstream outf(tmp, std::ios::binary | std::ios::trunc);
        if (!outf) {
            why = "cannot open temp file " + tmp.string();
            return false;
        }
        unsigned char hbuf[kHeaderBytes];
        pack_header(h, hbuf);
        outf.write(reinterpret_cast<const char*>(hbuf), kHeaderBytes);
        outf.write(reinterpret_cast<const char*>(buf.data()),
                   static_cast<std::streamsize>(buf.size()));
        if (!outf) {
            why = "short write to " + tmp.string();
            return false;
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        why = "rename failed: " + ec.message();
        std::filesystem::remove(tmp, ec);
        return false;
    }
    return true;
}
}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t dirac_convention_hash() {
    return fnv1a(kDiracConventionTag, std::strlen(kDiracConventionTag));
}

std::filesystem::path cache_file_path(const CacheSettings& cs, std::size_t n) {
    char name[64];
    std::snprintf(name, sizeof(name), "dpl_n%zu_%016llx.bin", n,
                  static_cast<unsigned long long>(dirac_convention_hash()));
    return cs.dir / name;
}

HermitianEigenDecomposition cached_eigh(std::size_t n, const ComplexMatrix& d,
                                        const CacheSettings& cs, CacheStats* stats) {
    CacheStats local;
    CacheStats& st = stats ? *stats : local;
    const std::filesystem::path path = cache_file_path(cs, n);
    st.path = path.string();

    if (cs.enabled) {
        HermitianEigenDecomposition loaded;
        std::string why;
        if (try_load(path, n, d.dim(), loaded, why)) {
            st.hit = true;
            return loaded;
        }
        if (why != "absent") {
            st.corrupt_rebuilt = true;
            st.warning = "cache file " + path.string() + " rejected (" + why + "); rebuilding";
        }
    }

    HermitianEigenDecomposition e = eigh(d);
    if (cs.enabled) {
        std::string why;
        if (write_atomic(path, n, e, why)) {
            st.wrote = true;
        } else if (st.warning.empty()) {
            st.warning = "cache write skipped: " + why;
        }
    }
    return e;
}

std::filesystem::path resolve_cache_dir(const std::string& configured_dir,
                                        const std::filesystem::path& fallback_dir) {
    if (const char* env = std::getenv("NCGSPECTRA_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    if (!configured_dir.empty()) return std::filesystem::path(configured_dir);
    return fallback_dir;
}

}  // namespace ncg
