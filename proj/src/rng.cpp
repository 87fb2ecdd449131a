#include "otfs/rng.hpp"

#include <cmath>

namespace otfs {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t frame_seed(std::uint64_t master, std::uint64_t snr_index,
                         std::uint64_t frame_index) {
    std::uint64_t z = splitmix64(master);
    z = splitmix64(z ^ (snr_index * 0xd1342543de82ef95ULL));
    z = splitmix64(z ^ (frame_index * 0xaf251af3b0f025b5ULL));
    return z;
}

namespace {

// Box-Muller on raw 53-bit uniforms. std::normal_distribution is
// implementation-defined; this keeps draws identical across standard
// libraries and therefore keeps run manifests portable.
double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

cplx complex_gaussian(Rng& rng, double var) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-var * std::log(u1));
    const double ph = 2.0 * M_PI * u2;
    return cplx(r * std::cos(ph), r * std::sin(ph));
}

CVector complex_gaussian_vector(Rng& rng, std::size_t n, double var) {
    CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = complex_gaussian(rng, var);
    return v;
}

}  // namespace otfs
