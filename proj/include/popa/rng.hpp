#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace popa {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based stream derivation: chunk k of a sweep draws from
/// derive_seed(master, k), so partial results never depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xD1B54A32D192ED03ull * (stream + 1));
  splitmix64_next(s);
  return splitmix64_next(s);
}

/// Deterministic generator wrapper. Distributions are implemented by hand:
/// std::uniform_real_distribution is not pinned by the standard, and reports
/// must be byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Inclusive integer range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

 private:
  std::mt19937_64 eng_;
};

/// Splits [0, total) into fixed-size chunks, evaluates each chunk with its
/// own derived seed (possibly on worker threads), and combines partials in
/// chunk order. Results are bit-identical for any thread count.
template <class Partial, class PerChunk, class Combine>
Partial chunked_reduce(std::uint64_t seed, std::size_t total, std::size_t chunk_size,
                       Partial init, PerChunk per_chunk, Combine combine) {
  if (total == 0) return init;
  const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(n_chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(total, begin + chunk_size);
    Rng rng(derive_seed(seed, c));
    partials[c] = per_chunk(begin, end, rng);
  };

  unsigned workers = std::thread::hardware_concurrency();
  if (workers > 8) workers = 8;
  if (workers > 1 && n_chunks > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n_workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_chunks));
    for (unsigned w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  }

  Partial acc = init;
  for (std::size_t c = 0; c < n_chunks; ++c) acc = combine(acc, partials[c]);
  return acc;
}

}  // namespace popa
