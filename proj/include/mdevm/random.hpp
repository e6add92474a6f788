#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mdevm {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed for run `run_index` of cell `cell_id`. Integer hashing only
/// (FNV-1a over the bytes of `cell_id`, then splitmix64), so the same inputs
/// give the same seed on every platform.
std::uint64_t derive_seed(std::uint64_t master, std::string_view cell_id,
                          std::uint64_t run_index) noexcept;

/// Random stream used by every stochastic operation in the library.
///
/// All draws are built on `unit()`, a uniform double on (0, 1] taken from
/// the top 53 bits of a 64-bit Mersenne twister. Nothing here goes through
/// `std::uniform_*_distribution`, whose output is implementation-defined.
///
/// A stream can optionally append every `unit()` value to a tape; tests use
/// the tape to replay a generation by hand.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    /// Uniform on (0, 1]. Both `u <= 0` and `u <= 1` are therefore exact
    /// never/always events.
    double unit()
    {
        const double u = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        if (tape_ != nullptr)
            tape_->push_back(u);
        return u;
    }

    /// Uniform on (lo, hi].
    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

    /// Uniform integer in [0, n). Consumes exactly one `unit()`.
    std::size_t index(std::size_t n);

    /// Standard normal via Box-Muller. Consumes two `unit()` values.
    double normal();

    /// Independent child stream; children with distinct ids never share state.
    RandomStream substream(std::uint64_t stream_id) const
    {
        return RandomStream(mix64(seed_ ^ mix64(stream_id + 0x5851f42d4c957f2dULL)));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    void record_to(std::vector<double>* tape) noexcept { tape_ = tape; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::vector<double>* tape_ = nullptr;
};

/// Index drawn from a unit value the same way `RandomStream::index` does.
std::size_t index_from_unit(double u, std::size_t n) noexcept;

} // namespace mdevm
