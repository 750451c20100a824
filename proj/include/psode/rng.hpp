#ifndef PSODE_RNG_HPP
#define PSODE_RNG_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string_view>

namespace psode {

/// Anything the stochastic operators draw from. Tests substitute scripted
/// stubs to pin individual draws.
template <typename R>
concept RandomSource = requires(R& r, double a, double b, std::size_t n) {
    { r.uniform01() } -> std::convertible_to<double>;
    { r.uniform(a, b) } -> std::convertible_to<double>;
    { r.uniform_int(n) } -> std::convertible_to<std::size_t>;
    { r.normal(a, b) } -> std::convertible_to<double>;
    { r.cauchy(a, b) } -> std::convertible_to<double>;
};

/// Seeded random stream: identical seed and call sequence give an identical
/// draw sequence. The distribution transforms are spelled out here instead of
/// using <random>'s distributions, whose output differs between standard
/// library implementations.
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    /// uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// uniform integer in [0, n), unbiased via rejection
    std::size_t uniform_int(std::size_t n)
    {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t rem = (max % n + 1) % n; // 2^64 mod n
        std::uint64_t v = gen_();
        while (rem != 0 && v >= max - rem + 1)
            v = gen_();
        return static_cast<std::size_t>(v % n);
    }

    /// Gaussian via Box-Muller; consumes exactly two uniforms per call
    double normal(double mean, double stddev)
    {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps the log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    double cauchy(double location, double scale)
    {
        return location + scale * std::tan(std::numbers::pi * (uniform01() - 0.5));
    }

private:
    std::mt19937_64 gen_;
};

static_assert(RandomSource<RngStream>);

/// FNV-1a over a byte string; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::uint64_t value, std::uint64_t h)
{
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Per-run seed derived from the sweep coordinates, so results do not depend
/// on worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view instance,
                                 int function_id, std::size_t dim, std::size_t run_index)
{
    std::uint64_t h = fnv1a64(instance);
    h = fnv1a64(master_seed, h);
    h = fnv1a64(static_cast<std::uint64_t>(function_id), h);
    h = fnv1a64(static_cast<std::uint64_t>(dim), h);
    h = fnv1a64(static_cast<std::uint64_t>(run_index), h);
    return h;
}

} // namespace psode

#endif
