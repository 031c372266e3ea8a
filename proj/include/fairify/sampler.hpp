#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fairify/errors.hpp"

namespace fairify {

/// MT19937 with the canonical 1998 parameters and the 1812433253 integer
/// seeding. State is single-owner and sequential.
class Mt19937 {
public:
    static constexpr std::size_t kStateSize = 624;

    explicit Mt19937(std::uint32_t seed) { reseed(seed); }

    void reseed(std::uint32_t seed);
    std::uint32_t next_u32();

    /// Uniform index in [0, k) via rejection sampling; exact, no modulo bias.
    /// k must be in [1, 2^32].
    std::uint64_t bounded(std::uint64_t k);

    const std::array<std::uint32_t, kStateSize>& words() const noexcept { return state_; }
    std::size_t index() const noexcept { return index_; }

private:
    void twist();

    std::array<std::uint32_t, kStateSize> state_{};
    std::size_t index_ = kStateSize;
};

struct CorpusSample {
    std::uint32_t seed = 0;
    std::size_t requested_n = 0;
    std::vector<std::string> selected_ids;  // selection order; duplicate-free
};

/// Partial Fisher-Yates over a copy of ids: deterministic for a fixed
/// (ids order, n, seed). Selects min(n, |ids|) entries.
CorpusSample sample_records(const std::vector<std::string>& ids, std::size_t n,
                            std::uint32_t seed);

}  // namespace fairify
