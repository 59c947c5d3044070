#include "rafr/radar.hpp"

#include <cmath>

namespace rafr {

static bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void RadarConfig::validate() const {
    if (bandwidth <= 0.0 || f_max <= f_min)
        throw std::invalid_argument("RadarConfig: bandwidth must be positive");
    if (std::abs(bandwidth - (f_max - f_min)) > 1e-3)
        throw std::invalid_argument("RadarConfig: bandwidth != f_max - f_min");
    if (std::abs(f_center - 0.5 * (f_min + f_max)) > 1e-3)
        throw std::invalid_argument("RadarConfig: f_center != (f_min + f_max)/2");
    if (n_samples < 1 || n_chirps < 1 || n_antennas < 1 || n_frames < 1)
        throw std::invalid_argument("RadarConfig: counts must be >= 1");
    if (!is_power_of_two(n_samples))
        throw std::invalid_argument("RadarConfig: n_samples must be a power of two");
    if (t_chirp <= 0.0 || t_frame <= 0.0 || f_sample <= 0.0)
        throw std::invalid_argument("RadarConfig: timing parameters must be positive");
    if (antenna_spacing_wavelengths <= 0.0)
        throw std::invalid_argument("RadarConfig: antenna spacing must be positive");
}

const char* gesture_name(GestureClass g) {
    switch (g) {
        case GestureClass::Background: return "Background";
        case GestureClass::SwipeLeft: return "SwipeLeft";
        case GestureClass::SwipeRight: return "SwipeRight";
        case GestureClass::SwipeUp: return "SwipeUp";
        case GestureClass::SwipeDown: return "SwipeDown";
        case GestureClass::Push: return "Push";
    }
    return "Unknown";
}

}  // namespace rafr
