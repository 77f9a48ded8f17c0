#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "pulseforge/rng.hpp"
#include "pulseforge/waveform.hpp"

namespace pulseforge {

enum class BaselineKind { NonCoded, Random, Newman };

BaselineKind parse_baseline(std::string_view name);
std::string_view to_string(BaselineKind kind);

// phi_n = pi n^2 / N for n = 0..N-1 (0-based form of pi (n-1)^2 / N), single symbol.
PhaseCodeMatrix newman_phases(std::size_t n);

PhaseCodeMatrix noncoded_phases(std::size_t n, std::size_t k);

// Discrete alphabet of `levels` phases {2 pi i / levels}; std::nullopt draws
// continuously from [0, 2pi).
PhaseCodeMatrix random_phases(std::size_t n, std::size_t k, std::optional<std::uint64_t> levels, Rng& rng);

}  // namespace pulseforge
