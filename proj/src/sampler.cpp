#include "fairify/sampler.hpp"

#include <unordered_set>
#include <utility>

namespace fairify {

namespace {

constexpr std::uint32_t kMatrixA = 0x9908b0df;
constexpr std::uint32_t kUpperMask = 0x80000000;
constexpr std::uint32_t kLowerMask = 0x7fffffff;
constexpr std::size_t kShift = 397;

}  // namespace

void Mt19937::reseed(std::uint32_t seed) {
    state_[0] = seed;
    for (std::size_t i = 1; i < kStateSize; ++i) {
        state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                    static_cast<std::uint32_t>(i);
    }
    index_ = kStateSize;
}

void Mt19937::twist() {
    for (std::size_t i = 0; i < kStateSize; ++i) {
        const std::uint32_t y = (state_[i] & kUpperMask) |
                                (state_[(i + 1) % kStateSize] & kLowerMask);
        std::uint32_t next = state_[(i + kShift) % kStateSize] ^ (y >> 1);
        if (y & 1u) next ^= kMatrixA;
        state_[i] = next;
    }
    index_ = 0;
}

std::uint32_t Mt19937::next_u32() {
    if (index_ >= kStateSize) twist();
    std::uint32_t y = state_[index_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
}

std::uint64_t Mt19937::bounded(std::uint64_t k) {
    if (k < 1 || k > (1ull << 32)) {
        throw Error(Errc::range, "bounded() requires 1 <= k <= 2^32");
    }
    const std::uint64_t limit = ((1ull << 32) / k) * k;
    for (;;) {
        const std::uint64_t draw = next_u32();
        if (draw < limit) return draw % k;
    }
}

CorpusSample sample_records(const std::vector<std::string>& ids, std::size_t n,
                            std::uint32_t seed) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(Errc::duplicate_ids, "duplicate record id '" + id + "'");
        }
    }

    std::vector<std::string> pool = ids;
    const std::size_t take = std::min(n, pool.size());
    Mt19937 gen(seed);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(gen.bounded(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);

    return CorpusSample{seed, n, std::move(pool)};
}

}  // namespace fairify
