#pragma once

// Continuum Dirac oracles: exact spectral evolution on the periodic grid
// (discrete Fourier transform per axis, e^{-iH(k)T} per mode) and the
// convergence-study harness that measures the walk's discretization order
// against it.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include "dqw/continuum.hpp"
#include "dqw/engine.hpp"
#include "dqw/walk.hpp"

namespace dqw {

namespace detail {

inline void fft_component(std::vector<cplx>& data, const std::array<int, 3>& dims,
                          int spatial_dim, int sign) {
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = nullptr;
    switch (spatial_dim) {
        case 1: plan = fftw_plan_dft_1d(dims[0], buf, buf, sign, FFTW_ESTIMATE); break;
        case 2: plan = fftw_plan_dft_2d(dims[0], dims[1], buf, buf, sign, FFTW_ESTIMATE); break;
        default:
            plan = fftw_plan_dft_3d(dims[0], dims[1], dims[2], buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

inline double signed_frequency(int f, int n) { return f < (n + 1) / 2 ? f : f - n; }

}  // namespace detail

/// Exact evolution under the continuum Hamiltonian for time T: Fourier
/// transform per axis, multiply each mode by e^{-iH(k)T}, transform back.
inline SpinorField dirac_exact_evolve(const SpinorField& state, const ContinuumScenario& c,
                                      double T) {
    if (state.spinor_dim != c.spinor_dim || state.spatial_dim != c.dim)
        throw std::invalid_argument("dirac_exact_evolve: state does not match scenario");
    const int S = state.spinor_dim;
    const long nsites = state.sites();

    // Transform each spinor component.
    std::vector<std::vector<cplx>> comp(S, std::vector<cplx>(static_cast<size_t>(nsites)));
    for (int cc = 0; cc < S; ++cc) {
        for (long s = 0; s < nsites; ++s)
            comp[cc][static_cast<size_t>(s)] = state.amp[static_cast<size_t>(s) * S + cc];
        detail::fft_component(comp[cc], state.dims, state.spatial_dim, FFTW_FORWARD);
    }

    const auto& d = state.dims;
    Eigen::MatrixXcd h(S, S), u(S, S);
    Eigen::VectorXcd v(S);
    for (int x = 0; x < d[0]; ++x)
        for (int y = 0; y < d[1]; ++y)
            for (int z = 0; z < d[2]; ++z) {
                const std::array<double, 3> k = {
                    2.0 * M_PI * detail::signed_frequency(x, d[0]) / (d[0] * state.spacing[0]),
                    2.0 * M_PI * detail::signed_frequency(y, d[1]) / (d[1] * state.spacing[1]),
                    2.0 * M_PI * detail::signed_frequency(z, d[2]) / (d[2] * state.spacing[2])};
                const ComplexMatrix hk = hamiltonian_symbol(c, k);
                for (int r = 0; r < S; ++r)
                    for (int cc = 0; cc < S; ++cc) h(r, cc) = hk.at(r, cc);
                const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
                u = es.eigenvectors() *
                    (cplx(0.0, -T) * es.eigenvalues().array().cast<cplx>()).exp().matrix().asDiagonal() *
                    es.eigenvectors().adjoint();
                const long s = state.site_index(x, y, z);
                for (int cc = 0; cc < S; ++cc) v(cc) = comp[cc][static_cast<size_t>(s)];
                v = u * v;
                for (int cc = 0; cc < S; ++cc) comp[cc][static_cast<size_t>(s)] = v(cc);
            }

    SpinorField out = state;
    const double inv = 1.0 / static_cast<double>(nsites);
    for (int cc = 0; cc < S; ++cc) {
        detail::fft_component(comp[cc], state.dims, state.spatial_dim, FFTW_BACKWARD);
        for (long s = 0; s < nsites; ++s)
            out.amp[static_cast<size_t>(s) * S + cc] = comp[cc][static_cast<size_t>(s)] * inv;
    }
    return out;
}

struct ConvergenceReport {
    std::vector<double> epsilons;
    std::vector<long> steps;
    std::vector<double> errors;       // L2 state error at fixed physical time T
    std::vector<double> pair_orders;  // NaN for the first row
    double fitted_order = 0.0;        // least-squares slope of log error vs log eps
};

struct ConvergenceSetup {
    std::array<int, 3> base_dims{16, 1, 1};  // grid at epsilons.front()
    InitParams profile;                      // physical profile, resampled per grid
};

using WalkBuilderFn = std::function<WalkOperator(double)>;

inline ConvergenceReport convergence_study(const ContinuumScenario& c,
                                           const WalkBuilderFn& builder,
                                           const std::vector<double>& epsilons, double T,
                                           const ConvergenceSetup& setup) {
    if (epsilons.size() < 2) throw std::invalid_argument("convergence_study: need >= 2 epsilons");
    for (size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("convergence_study: epsilons must strictly decrease");

    ConvergenceReport rep;
    const WalkOperator coarse = builder(epsilons.front());
    std::array<double, 3> domain{1.0, 1.0, 1.0};
    for (int a = 0; a < coarse.lattice.dim; ++a)
        domain[a] = setup.base_dims[a] * coarse.lattice.grid_spacing[a];

    for (double eps : epsilons) {
        const WalkOperator w = builder(eps);
        std::array<int, 3> dims{1, 1, 1};
        for (int a = 0; a < w.lattice.dim; ++a) {
            const double want = domain[a] / w.lattice.grid_spacing[a];
            dims[a] = static_cast<int>(std::lround(want));
            if (std::abs(dims[a] - want) > 1e-9 * want)
                throw std::invalid_argument(
                    "convergence_study: domain is not an integer grid at this epsilon");
        }
        const double steps_exact = T / w.dt;
        const long n = std::lround(steps_exact);
        if (std::abs(steps_exact - n) > 1e-9)
            throw std::invalid_argument("convergence_study: T must be a multiple of alpha*epsilon");

        const SpinorField initial = init_state(dims, w, setup.profile);
        const SpinorField walked = evolve(initial, w, static_cast<int>(n));
        const SpinorField exact = dirac_exact_evolve(initial, c, T);

        std::vector<double> sq(walked.amp.size());
        for (size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(walked.amp[i] - exact.amp[i]);
        const double err =
            std::sqrt(detail::pairwise_sum(sq.data(), static_cast<long>(sq.size())));

        rep.epsilons.push_back(eps);
        rep.steps.push_back(n);
        rep.errors.push_back(err);
    }

    rep.pair_orders.assign(rep.errors.size(), std::nan(""));
    for (size_t i = 1; i < rep.errors.size(); ++i)
        rep.pair_orders[i] = std::log(rep.errors[i - 1] / rep.errors[i]) /
                             std::log(rep.epsilons[i - 1] / rep.epsilons[i]);

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double npts = static_cast<double>(rep.errors.size());
    for (size_t i = 0; i < rep.errors.size(); ++i) {
        const double lx = std::log(rep.epsilons[i]);
        const double ly = std::log(rep.errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.fitted_order = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    return rep;
}

/// Scenario-driven overload: canonical lattice per epsilon, constant fields.
inline ConvergenceReport convergence_study(Scenario scenario, double mass,
                                           const std::vector<double>& potentials,
                                           const std::vector<double>& epsilons, double T,
                                           const ConvergenceSetup& setup) {
    const ContinuumScenario c = continuum_for(scenario, mass, potentials);
    const WalkBuilderFn builder = [scenario, mass, &potentials](double eps) {
        const LatticeSpec lat = make_lattice(default_lattice(scenario), eps);
        std::optional<EMFieldSpec> f;
        if (has_em_fields(scenario)) f = EMFieldSpec::constants(potentials);
        return build_walk(scenario, lat, mass, f);
    };
    return convergence_study(c, builder, epsilons, T, setup);
}

}  // namespace dqw
