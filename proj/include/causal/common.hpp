#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Error taxonomy. The command-line front end maps these onto exit codes:
// ConfigError -> 1, DataError -> 2, anything else -> 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Parses an ISO-8601 UTC instant such as "2013-05-01T00:00:00Z".
/// Accepts a trailing "Z", "+00:00" or no zone designator; fractional seconds
/// are truncated. Throws DataError on anything else.
Timestamp parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

/// Floor of t to a multiple of width (also for instants before the epoch).
Timestamp truncate_to_bin(Timestamp t, std::int64_t width);

/// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string to_hex(std::uint64_t value);

/// Locale-independent shortest round-trip formatting; NaN prints as "NA".
std::string format_number(double value);

// ---------------------------------------------------------------------------
// Random numbers. std::mt19937_64 is fully specified by the standard, but the
// distributions are not, so bounded draws are done here to keep seeded output
// identical across standard libraries.

using Rng = std::mt19937_64;

/// Derives a generator from a base seed and any number of stream keys.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Uniform integer in [0, bound). bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

// ---------------------------------------------------------------------------
// Sharding. Splits [0, n) into at most `threads` contiguous shards and runs
// fn(begin, end, shard) for each, concurrently when threads > 1. Callers
// merge per-shard results in shard order so output never depends on the
// thread count.

std::size_t shard_count(std::size_t n, std::size_t threads);

void for_each_shard(std::size_t n, std::size_t threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace causal
