#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dqw/lattice.hpp"

namespace dqw {

enum class Scenario {
    line1d_free,
    line1d_electric,
    square2d_free,
    square2d_em,
    cubic3d_free,
    cubic3d_em,
    tri_isosceles,
    tri_equilateral,
    parallelepiped,
    rhombohedral,
};

inline std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::line1d_free: return "line1d_free";
        case Scenario::line1d_electric: return "line1d_electric";
        case Scenario::square2d_free: return "square2d_free";
        case Scenario::square2d_em: return "square2d_em";
        case Scenario::cubic3d_free: return "cubic3d_free";
        case Scenario::cubic3d_em: return "cubic3d_em";
        case Scenario::tri_isosceles: return "tri_isosceles";
        case Scenario::tri_equilateral: return "tri_equilateral";
        case Scenario::parallelepiped: return "parallelepiped";
        case Scenario::rhombohedral: return "rhombohedral";
    }
    return "?";
}

inline std::optional<Scenario> scenario_from_string(const std::string& s) {
    for (Scenario sc : {Scenario::line1d_free, Scenario::line1d_electric, Scenario::square2d_free,
                        Scenario::square2d_em, Scenario::cubic3d_free, Scenario::cubic3d_em,
                        Scenario::tri_isosceles, Scenario::tri_equilateral,
                        Scenario::parallelepiped, Scenario::rhombohedral})
        if (to_string(sc) == s) return sc;
    return std::nullopt;
}

inline int spatial_dim(Scenario s) {
    switch (s) {
        case Scenario::line1d_free:
        case Scenario::line1d_electric: return 1;
        case Scenario::square2d_free:
        case Scenario::square2d_em:
        case Scenario::tri_isosceles:
        case Scenario::tri_equilateral: return 2;
        default: return 3;
    }
}

inline int spinor_dimension(Scenario s) { return spatial_dim(s) == 3 ? 4 : 2; }

inline bool has_em_fields(Scenario s) {
    return s == Scenario::line1d_electric || s == Scenario::square2d_em ||
           s == Scenario::cubic3d_em;
}

inline LatticeName default_lattice(Scenario s) {
    switch (s) {
        case Scenario::line1d_free:
        case Scenario::line1d_electric: return LatticeName::line;
        case Scenario::square2d_free:
        case Scenario::square2d_em: return LatticeName::square;
        case Scenario::cubic3d_free:
        case Scenario::cubic3d_em: return LatticeName::cubic;
        case Scenario::tri_isosceles: return LatticeName::tri_isosceles;
        case Scenario::tri_equilateral: return LatticeName::tri_equilateral;
        case Scenario::parallelepiped: return LatticeName::parallelepiped;
        case Scenario::rhombohedral: return LatticeName::rhombohedral;
    }
    throw std::invalid_argument("default_lattice: unknown scenario");
}

}  // namespace dqw
