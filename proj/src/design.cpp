#include "pulseforge/design.hpp"

#include <cmath>
#include <string>

#include "pulseforge/error.hpp"

namespace pulseforge::design {

void ScenarioSpec::validate() const {
    if (!std::isfinite(target_extent_m) || target_extent_m <= 0.0)
        fail(ErrorKind::InvalidScenario, "target extent must be finite and > 0");
    if (!std::isfinite(margin_m) || margin_m < 0.0)
        fail(ErrorKind::InvalidScenario, "margin must be finite and >= 0");
    if (!std::isfinite(min_range_m) || min_range_m <= 0.0)
        fail(ErrorKind::InvalidScenario, "minimum range must be finite and > 0");
}

double bandwidth_for_target(const ScenarioSpec& scenario) {
    const double span = scenario.target_extent_m + scenario.margin_m;
    if (!std::isfinite(span) || span <= 0.0)
        fail(ErrorKind::InvalidScenario, "target extent + margin must be > 0");
    return speed_of_light / (2.0 * span);
}

double max_pulse_length(double min_range_m) {
    if (!std::isfinite(min_range_m) || min_range_m <= 0.0)
        fail(ErrorKind::InvalidScenario, "minimum range must be > 0");
    return 2.0 * min_range_m / speed_of_light;
}

long max_subcarriers(double bandwidth_hz, double min_range_m) {
    if (!(bandwidth_hz > 0.0) || !(min_range_m > 0.0))
        fail(ErrorKind::InvalidScenario, "bandwidth and minimum range must be > 0");
    const double n = std::floor(2.0 * bandwidth_hz * min_range_m / speed_of_light);
    if (!(n >= 1.0))
        fail(ErrorKind::InvalidScenario,
             "pulse too short for a single subcarrier (2BR/c = " +
                 std::to_string(2.0 * bandwidth_hz * min_range_m / speed_of_light) + ")");
    return static_cast<long>(n);
}

PulseDimensions dimension(const ScenarioSpec& scenario) {
    scenario.validate();
    PulseDimensions d;
    d.bandwidth_hz = bandwidth_for_target(scenario);
    d.max_pulse_len_s = max_pulse_length(scenario.min_range_m);
    d.max_subcarriers = max_subcarriers(d.bandwidth_hz, scenario.min_range_m);
    return d;
}

}  // namespace pulseforge::design
