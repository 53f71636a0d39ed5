#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/netsim/netsim.hpp"

namespace drlids::netsim {

double RadioParams::d0() const { return std::sqrt(eps_fs / eps_mp); }

void RadioParams::validate() const {
    if (!(e_elec > 0 && eps_fs > 0 && eps_mp > 0 && e_da > 0 && alpha > 0 && xi > 0)) {
        throw ConfigError("radio parameters must all be positive");
    }
}

double tx_energy(std::size_t bits, double distance, const RadioParams& radio) {
    const double l = static_cast<double>(bits);
    if (distance < radio.d0()) return l * radio.e_elec + l * radio.eps_fs * std::pow(distance, radio.alpha);
    return l * radio.e_elec + l * radio.eps_mp * std::pow(distance, radio.xi);
}

double rx_energy(std::size_t bits, const RadioParams& radio) { return static_cast<double>(bits) * radio.e_elec; }

double agg_energy(std::size_t bits, const RadioParams& radio) { return static_cast<double>(bits) * radio.e_da; }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace drlids::netsim
