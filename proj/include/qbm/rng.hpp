#ifndef QBM_RNG_HPP
#define QBM_RNG_HPP

#include <cstdint>
#include <random>

namespace qbm {

// splitmix64: used to expand (seed, counter) pairs into well-mixed seed
// material for per-realization generators. Realization i always sees the
// same stream no matter how work is split across threads.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + counter * 0x9e3779b97f4a7c15ULL);
    std::seed_seq seq{static_cast<unsigned>(splitmix64(s) >> 32), static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32), static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32), static_cast<unsigned>(splitmix64(s))};
    return std::mt19937_64(seq);
}

} // namespace qbm

#endif
