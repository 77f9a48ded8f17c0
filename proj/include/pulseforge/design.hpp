#pragma once

// Pulse dimensioning from the scenario: the range cell must contain the whole
// target (plus margin), and the pulse must end before echoes from the minimum
// range arrive.

namespace pulseforge::design {

inline constexpr double speed_of_light = 2.99792458e8;  // m/s

struct ScenarioSpec {
    double target_extent_m = 0.0;
    double margin_m = 0.0;
    double min_range_m = 0.0;

    void validate() const;
};

struct PulseDimensions {
    double bandwidth_hz = 0.0;
    double max_pulse_len_s = 0.0;
    long max_subcarriers = 0;
};

// c / (2 (extent + margin)).
double bandwidth_for_target(const ScenarioSpec& scenario);

// 2 R_min / c.
double max_pulse_length(double min_range_m);

// floor(2 B R_min / c); throws when fewer than one subcarrier fits.
long max_subcarriers(double bandwidth_hz, double min_range_m);

PulseDimensions dimension(const ScenarioSpec& scenario);

}  // namespace pulseforge::design
