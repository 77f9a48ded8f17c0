#include "pulseforge/phasing.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pulseforge/error.hpp"

namespace pulseforge {

BaselineKind parse_baseline(std::string_view name) {
    if (name == "noncoded") return BaselineKind::NonCoded;
    if (name == "random") return BaselineKind::Random;
    if (name == "newman") return BaselineKind::Newman;
    fail(ErrorKind::InvalidConfig, "unknown baseline '" + std::string(name) + "' (noncoded|random|newman)");
}

std::string_view to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::NonCoded: return "noncoded";
        case BaselineKind::Random: return "random";
        case BaselineKind::Newman: return "newman";
    }
    return "?";
}

PhaseCodeMatrix newman_phases(std::size_t n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "newman sequence needs n >= 1");
    PhaseCodeMatrix codes(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        // Reduce i^2 mod 2N in integers to keep the phase exact for large N.
        const auto r = static_cast<double>((i * i) % (2 * n));
        codes(i, 0) = std::numbers::pi * r / static_cast<double>(n);
    }
    return codes;
}

PhaseCodeMatrix noncoded_phases(std::size_t n, std::size_t k) {
    if (n < 1 || k < 1) fail(ErrorKind::InvalidArgument, "phase matrix needs n, k >= 1");
    return PhaseCodeMatrix(n, k, 0.0);
}

PhaseCodeMatrix random_phases(std::size_t n, std::size_t k, std::optional<std::uint64_t> levels, Rng& rng) {
    if (n < 1 || k < 1) fail(ErrorKind::InvalidArgument, "phase matrix needs n, k >= 1");
    if (levels && *levels < 2) fail(ErrorKind::InvalidArgument, "discrete alphabet needs at least 2 phases");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PhaseCodeMatrix codes(n, k);
    for (double& phi : codes.values()) {
        if (levels) {
            const auto i = std::uniform_int_distribution<std::uint64_t>(0, *levels - 1)(rng);
            phi = two_pi * static_cast<double>(i) / static_cast<double>(*levels);
        } else {
            phi = uniform(rng, 0.0, two_pi);
        }
    }
    return codes;
}

}  // namespace pulseforge
