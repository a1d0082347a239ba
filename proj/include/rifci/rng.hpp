#pragma once

#include <cstdint>
#include <random>

namespace rifci {

using RngStream = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream for bootstrap iteration `iteration`, redraw `attempt`.
// Depends only on its arguments, so iterations can run in any order or on
// any thread.
RngStream iteration_stream(std::uint64_t master_seed, std::uint64_t iteration,
                           std::uint64_t attempt = 0);

// Uniform integer in [0, bound) by multiply-shift with rejection. Unlike
// std::uniform_int_distribution the output sequence is fixed across
// standard library implementations. bound must be positive.
std::uint64_t uniform_index(RngStream& rng, std::uint64_t bound);

}  // namespace rifci
