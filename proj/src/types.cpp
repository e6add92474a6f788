#include "mdevm/types.hpp"

#include <cmath>

namespace mdevm {

Bounds::Bounds(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty())
        throw InvalidConfiguration("bounds: dimension must be at least 1");
    if (lower_.size() != upper_.size())
        throw InvalidConfiguration("bounds: lower and upper have different lengths");
    for (std::size_t d = 0; d < lower_.size(); ++d) {
        if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) || !(lower_[d] < upper_[d]))
            throw InvalidConfiguration("bounds: need finite min < max in dimension "
                                       + std::to_string(d));
    }
}

Bounds Bounds::uniform(std::size_t dimension, double lower, double upper)
{
    return Bounds(std::vector<double>(dimension, lower), std::vector<double>(dimension, upper));
}

bool Bounds::contains(std::span<const double> x) const noexcept
{
    if (x.size() != lower_.size())
        return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (!(x[d] >= lower_[d] && x[d] <= upper_[d]))
            return false;
    return true;
}

std::size_t Population::best_index() const
{
    if (members.empty())
        throw std::logic_error("best_index: empty population");
    std::size_t best = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!members[i].fitness)
            throw std::logic_error("best_index: member " + std::to_string(i) + " not evaluated");
        if (*members[i].fitness < *members[best].fitness)
            best = i;
    }
    return best;
}

PointCloud to_cloud(const Population& pop)
{
    PointCloud cloud(pop.dimension());
    cloud.coords.reserve(pop.size() * pop.dimension());
    for (const auto& m : pop.members)
        cloud.push_back(m.position);
    return cloud;
}

} // namespace mdevm
