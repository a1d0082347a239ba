#include "rifci/rng.hpp"

namespace rifci {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream iteration_stream(std::uint64_t master_seed, std::uint64_t iteration,
                           std::uint64_t attempt) {
  std::uint64_t key = splitmix64(master_seed);
  key = splitmix64(key ^ iteration);
  key = splitmix64(key ^ (attempt * 0xD1B54A32D192ED03ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return RngStream(seq);
}

std::uint64_t uniform_index(RngStream& rng, std::uint64_t bound) {
  // Lemire, "Fast random integer generation in an interval" (2019).
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace rifci
