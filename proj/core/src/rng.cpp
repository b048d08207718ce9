#include "cfmimo/rng.hpp"

namespace cfmimo {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream purpose) noexcept
{
    return mix64(mix64(mix64(master) ^ trial) ^ static_cast<std::uint64_t>(purpose));
}

}  // namespace cfmimo
