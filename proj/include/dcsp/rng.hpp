#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dcsp::rng {

// splitmix64 finalizer: cheap, well-mixed 64-bit hash used to derive
// independent named substreams from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fold one more component into a running hash (order sensitive).
inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Purpose tags for the per-node substreams of a problem instance.
enum class Stream : std::uint64_t {
    support = 1,
    dictionary = 2,
    signal = 3,
    noise = 4,
    vote_model = 5,
};

// Substream seed for (base seed, purpose, node index [, extra]).
inline std::uint64_t derive(std::uint64_t base, Stream s, std::uint64_t node = 0,
                            std::uint64_t extra = 0) {
    std::uint64_t h = splitmix64(base);
    h = mix(h, static_cast<std::uint64_t>(s));
    h = mix(h, node);
    h = mix(h, extra);
    return h;
}

inline std::mt19937_64 engine(std::uint64_t derived_seed) {
    return std::mt19937_64(derived_seed);
}

// Per-trial seed for the experiment harness: hash of
// (base seed, subcommand tag, M, Q, trial index).  Trials are therefore
// reproducible individually and independent of sweep order and of g.
inline std::uint64_t trial_seed(std::uint64_t base, std::string_view tag, int m, int q_count,
                                int trial) {
    std::uint64_t h = splitmix64(base);
    h = mix(h, fnv1a(tag));
    h = mix(h, static_cast<std::uint64_t>(m));
    h = mix(h, static_cast<std::uint64_t>(q_count));
    h = mix(h, static_cast<std::uint64_t>(trial));
    return h;
}

}  // namespace dcsp::rng
