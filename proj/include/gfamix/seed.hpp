#pragma once

#include <cstdint>
#include <initializer_list>

namespace gfamix {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a tuple of indices.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = mix64(base);
    for (auto p : parts)
        h = mix64(h ^ mix64(p));
    return h;
}

} // namespace gfamix
