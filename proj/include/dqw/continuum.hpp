#pragma once

// Continuum Dirac Hamiltonian symbols H(k) per scenario, with constant
// electromagnetic potentials folded in by minimal coupling. Derivatives are
// substituted as d_j -> i k_j.

#include <array>
#include <vector>

#include "dqw/complex_matrix.hpp"
#include "dqw/scenario.hpp"

namespace dqw {

struct ContinuumScenario {
    Scenario scenario = Scenario::line1d_free;
    int dim = 1;         // spatial dimension
    int spinor_dim = 2;
    double mass = 0.0;
    std::vector<double> potentials;  // A_0..A_dim; empty means free

    double potential(int mu) const {
        if (mu < static_cast<int>(potentials.size())) return potentials[mu];
        return 0.0;
    }
};

inline ContinuumScenario continuum_for(Scenario s, double mass,
                                       const std::vector<double>& potentials = {}) {
    ContinuumScenario c;
    c.scenario = s;
    c.dim = spatial_dim(s);
    c.spinor_dim = spinor_dimension(s);
    c.mass = mass;
    c.potentials = potentials;
    return c;
}

inline ComplexMatrix hamiltonian_symbol(const ContinuumScenario& c,
                                        const std::array<double, 3>& k) {
    const double a0 = c.potential(0);
    if (c.dim == 1) {
        // H = -A0 + sigma3 A1 + sigma1 m + i sigma3 d1
        return cplx(-a0) * pauli(0) + cplx(c.potential(1) - k[0]) * pauli(3) +
               cplx(c.mass) * pauli(1);
    }
    if (c.dim == 2) {
        // H = -A0 + i sigma3 d1 + sigma3 A1 - i sigma2 d2 - sigma2 A2 + sigma1 m
        return cplx(-a0) * pauli(0) + cplx(c.potential(1) - k[0]) * pauli(3) +
               cplx(k[1] - c.potential(2)) * pauli(2) + cplx(c.mass) * pauli(1);
    }
    // H = -I4 A0 - i (sigma1 x sigma_j) d_j - (sigma1 x sigma_j) A_j + (sigma3 x I2) m
    ComplexMatrix h = cplx(-a0) * ComplexMatrix::identity(4) +
                      cplx(c.mass) * kron(pauli(3), pauli(0));
    for (int j = 0; j < 3; ++j)
        h = h + cplx(k[j] - c.potential(j + 1)) * kron(pauli(1), pauli(j + 1));
    return h;
}

}  // namespace dqw
