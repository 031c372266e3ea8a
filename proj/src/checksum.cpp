#include "fairify/checksum.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "fairify/errors.hpp"

namespace fairify {

namespace {

struct DigestContext {
    EVP_MD_CTX* ctx;

    DigestContext() : ctx(EVP_MD_CTX_new()) {
        if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
            EVP_MD_CTX_free(ctx);
            throw Error(Errc::io, "SHA-256 digest initialization failed");
        }
    }
    ~DigestContext() { EVP_MD_CTX_free(ctx); }
    DigestContext(const DigestContext&) = delete;
    DigestContext& operator=(const DigestContext&) = delete;

    void update(const char* data, std::size_t size) {
        if (EVP_DigestUpdate(ctx, data, size) != 1) {
            throw Error(Errc::io, "SHA-256 digest update failed");
        }
    }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
        unsigned int length = 0;
        if (EVP_DigestFinal_ex(ctx, digest.data(), &length) != 1) {
            throw Error(Errc::io, "SHA-256 digest finalization failed");
        }
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * length);
        for (unsigned int i = 0; i < length; ++i) {
            out.push_back(kHex[digest[i] >> 4]);
            out.push_back(kHex[digest[i] & 0x0f]);
        }
        return out;
    }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    DigestContext ctx;
    ctx.update(data.data(), data.size());
    return ctx.hex();
}

std::string sha256_hex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "' for hashing");
    DigestContext ctx;
    std::array<char, 65536> buffer{};
    while (in.read(buffer.data(), buffer.size()) || in.gcount() > 0) {
        ctx.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    return ctx.hex();
}

}  // namespace fairify
