#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace linpat {

/// Purposes that own disjoint generator streams under one user seed.
enum class StreamTag : std::uint32_t {
  restricted_phases = 1,
  full_phases = 2,
  odd_witness = 3,
  separation = 4,
  clt = 5,
  test = 99,
};

/// Generator for sample `stream` of purpose `tag` under `seed`. mt19937_64 and seed_seq are
/// fully specified by the standard, so a (seed, tag, stream) triple reproduces the same
/// sequence on every platform. Within one stream, values are consumed in a documented order
/// (for phase spectra: positive frequencies in increasing signed order).
inline std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

/// Uniform point of the unit circle.
inline std::complex<double> unit_phase(std::mt19937_64& gen) {
  return std::polar(1.0, 2.0 * std::numbers::pi * unit_uniform(gen));
}

}  // namespace linpat
