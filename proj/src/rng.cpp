#include "lumitact/rng.hpp"

#include <cmath>

namespace lumitact {

double Rng::normal()
{
    if (spare_) {
        const double value = *spare_;
        spare_.reset();
        return antithetic_ ? -value : value;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * raw_uniform() - 1.0;
        v = 2.0 * raw_uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    return antithetic_ ? -u * scale : u * scale;
}

}  // namespace lumitact
