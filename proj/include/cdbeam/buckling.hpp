#pragma once

#include "cdbeam/model.hpp"

namespace cdbeam {

struct CriticalLoad {
    double rayleigh = 0.0;  ///< smallest Lambda of K_bend v = Lambda K_geo v
    double scaled = 0.0;    ///< (1 + mu)(1 - mu^2) * rayleigh, the load-parameter convention of the examples
};

/// Euler critical load of the discretized beam on the boundary-reduced space.
CriticalLoad critical_load(const BeamProperties& props, const SupportSpec& support, const Mesh& mesh);

}  // namespace cdbeam
