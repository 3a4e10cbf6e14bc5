#pragma once

#include <cstdint>

#include "rocq/core_types.hpp"

namespace rocq {

// xoshiro256++ state, constructed deterministically from (seed, stream
// index): the stream index is hashed, xor-folded into the seed, and the
// result expanded through splitmix64 into the four state words. The same
// (seed, stream) pair yields the same sequence on every platform. State
// advances by value; copies replay the sequence from the copy point.
class RngState {
public:
    RngState() : RngState(0, 0) {}
    RngState(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform();

    bool operator==(const RngState&) const = default;

private:
    std::uint64_t s_[4];
};

inline RngState rng_for_stream(std::uint64_t seed, std::uint64_t stream_index) {
    return RngState(seed, stream_index);
}

inline double next_uniform(RngState& state) { return state.next_uniform(); }

// Laplace's Rule of Succession: (failures + 1) / (trials + 2). Conservative
// success-probability estimate that is never exactly 0 or 1, even with no
// observed data (0, 0) -> 0.5.
double laplace_success(std::uint64_t failures, std::uint64_t trials);

// (min + mode + max) / 3.
double triangle_mean(const TriangleDist& dist);

// P(X <= x) for the triangle distribution.
double triangle_cdf(const TriangleDist& dist, double x);

// Inverse CDF: for u <= F(mode) returns
//   min + sqrt(u * (max - min) * (mode - min)),
// otherwise
//   max - sqrt((1 - u) * (max - min) * (max - mode)).
// A degenerate distribution returns the constant. Output always lies in
// [min, max].
double triangle_inverse_cdf(const TriangleDist& dist, double u);

}  // namespace rocq
