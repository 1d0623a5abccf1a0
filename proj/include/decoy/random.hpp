#pragma once

#include <concepts>
#include <cstdint>
#include <random>

namespace decoy {

/// Anything that yields uniformly distributed 64-bit words.
template <class G>
concept BitSource = requires(G& g) {
    { g() } -> std::convertible_to<std::uint64_t>;
};

/// Combines two values into a well-spread seed (splitmix64 finaliser).
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator. mt19937_64 output is fixed by the standard, so streams are
/// reproducible across toolchains as long as the draw mapping below is ours.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t operator()() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Uniform integer in [0, bound). Exactly one draw; bias is below 2^-40 for
/// the bounds used here.
template <BitSource G>
std::uint64_t draw_below(G& gen, std::uint64_t bound) {
    const auto wide = static_cast<unsigned __int128>(static_cast<std::uint64_t>(gen())) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

/// Uniform real in [0, 1). Exactly one draw.
template <BitSource G>
double draw_unit(G& gen) {
    return static_cast<double>(static_cast<std::uint64_t>(gen()) >> 11) * 0x1.0p-53;
}

}  // namespace decoy
