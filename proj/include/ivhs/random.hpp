#ifndef IVHS_RANDOM_HPP
#define IVHS_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace ivhs {

// mt19937_64's output sequence is fixed by the standard; the distributions
// in <random> are not, so everything below draws from the raw engine.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound)
{
    if (bound <= 1)
        return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent child seed from a parent seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag)
{
    return splitmix64(splitmix64(seed) ^ (tag * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t tag2)
{
    return derive_seed(derive_seed(seed, tag), tag2);
}

} // namespace ivhs

#endif
