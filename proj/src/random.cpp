#include "mdevm/random.hpp"

#include <cmath>
#include <numbers>

namespace mdevm {

std::uint64_t derive_seed(std::uint64_t master, std::string_view cell_id,
                          std::uint64_t run_index) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : cell_id) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(mix64(master) ^ mix64(h) ^ mix64(run_index * 0x9e3779b97f4a7c15ULL + 1));
}

std::size_t index_from_unit(double u, std::size_t n) noexcept
{
    // u in (0, 1] so ceil(u * n) is in [1, n].
    auto k = static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
    if (k == 0)
        k = 1;
    if (k > n)
        k = n;
    return k - 1;
}

std::size_t RandomStream::index(std::size_t n)
{
    return index_from_unit(unit(), n);
}

double RandomStream::normal()
{
    const double u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace mdevm
