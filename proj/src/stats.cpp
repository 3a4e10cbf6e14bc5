#include "rocq/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "rocq/core_types.hpp"
#include "rocq/errors.hpp"
#include "rocq/hash.hpp"

namespace rocq {

namespace {

void require_valid_dist(const TriangleDist& dist) {
    if (!(dist.min_usd >= 0.0) || !(dist.mode_usd >= dist.min_usd) ||
        !(dist.max_usd >= dist.mode_usd)) {
        throw std::invalid_argument(
            "triangle distribution requires 0 <= min <= mode <= max");
    }
}

}  // namespace

RngState::RngState(std::uint64_t seed, std::uint64_t stream_index) {
    // splitmix64 expansion of seed ^ hash(stream_index).
    std::uint64_t sm = seed ^ mix64(stream_index);
    for (auto& word : s_) {
        sm += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = sm;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        word = z ^ (z >> 31);
    }
    // The all-zero state is a fixed point of xoshiro256++.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
        s_[0] = 0x9e3779b97f4a7c15ULL;
    }
}

std::uint64_t RngState::next_u64() {
    // xoshiro256++
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double RngState::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double laplace_success(std::uint64_t failures, std::uint64_t trials) {
    if (failures > trials) {
        throw std::invalid_argument("laplace_success: failures exceeds trials");
    }
    return (static_cast<double>(failures) + 1.0) /
           (static_cast<double>(trials) + 2.0);
}

double triangle_mean(const TriangleDist& dist) {
    require_valid_dist(dist);
    return (dist.min_usd + dist.mode_usd + dist.max_usd) / 3.0;
}

double triangle_cdf(const TriangleDist& dist, double x) {
    require_valid_dist(dist);
    const double a = dist.min_usd;
    const double m = dist.mode_usd;
    const double b = dist.max_usd;
    if (b == a) {
        return x < a ? 0.0 : 1.0;  // point mass
    }
    if (x <= a) {
        return 0.0;
    }
    if (x >= b) {
        return 1.0;
    }
    if (x <= m) {
        return (x - a) * (x - a) / ((b - a) * (m - a));
    }
    return 1.0 - (b - x) * (b - x) / ((b - a) * (b - m));
}

double triangle_inverse_cdf(const TriangleDist& dist, double u) {
    require_valid_dist(dist);
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::invalid_argument("triangle_inverse_cdf: u outside [0, 1]");
    }
    const double a = dist.min_usd;
    const double m = dist.mode_usd;
    const double b = dist.max_usd;
    const double range = b - a;
    if (range == 0.0) {
        return a;  // constant loss
    }
    const double f_mode = (m - a) / range;
    double x;
    if (u <= f_mode) {
        x = a + std::sqrt(u * range * (m - a));
    } else {
        x = b - std::sqrt((1.0 - u) * range * (b - m));
    }
    return std::clamp(x, a, b);
}

}  // namespace rocq
