#pragma once

// Periodic-grid spinor fields, walk-step application and observables.
// Stepping is double buffered: every WalkStep reads one buffer and writes a
// fresh one, so site updates parallelize with bitwise-deterministic results.
// Norm reductions use a fixed pairwise order independent of the worker count.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dqw/walk.hpp"

namespace dqw {

struct SpinorField {
    std::array<int, 3> dims{1, 1, 1};
    int spatial_dim = 1;
    int spinor_dim = 2;
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<cplx> amp;  // site-major, row-major dims, spinor interleaved

    long sites() const { return static_cast<long>(dims[0]) * dims[1] * dims[2]; }
    long site_index(int x, int y, int z) const {
        return (static_cast<long>(x) * dims[1] + y) * dims[2] + z;
    }
};

namespace detail {

inline int worker_count() {
    static const int n = [] {
        if (const char* env = std::getenv("DQW_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return std::min(v, 256);
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }();
    return n;
}

template <class F>
void parallel_for(long n, F&& body) {
    const int workers = worker_count();
    if (workers <= 1 || n < 8192) {
        body(0L, n);
        return;
    }
    const long chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

inline double pairwise_sum(const double* v, long n) {
    if (n <= 32) {
        double s = 0.0;
        for (long i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const long half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace detail

enum class Profile { point, gaussian, plane_wave };

struct InitParams {
    Profile profile = Profile::point;
    // point
    std::array<int, 3> site{0, 0, 0};
    int component = 0;
    // gaussian
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 1.0;
    std::array<double, 3> momentum{0.0, 0.0, 0.0};  // also plane_wave momentum
    // gaussian / plane_wave spinor (defaults to unit component 0)
    std::vector<cplx> spinor;
};

inline SpinorField init_state(const std::array<int, 3>& dims, int spatial_dim, int spinor_dim,
                              const std::array<double, 3>& spacing, const InitParams& p) {
    SpinorField f;
    f.dims = dims;
    f.spatial_dim = spatial_dim;
    f.spinor_dim = spinor_dim;
    f.spacing = spacing;
    for (int a = 0; a < spatial_dim; ++a)
        if (dims[a] < 4) throw std::invalid_argument("init_state: grid dims must be >= 4 per axis");
    for (int a = spatial_dim; a < 3; ++a)
        if (dims[a] != 1) throw std::invalid_argument("init_state: trailing dims must be 1");
    f.amp.assign(static_cast<size_t>(f.sites()) * spinor_dim, cplx(0.0));

    std::vector<cplx> spinor = p.spinor;
    if (spinor.empty()) {
        spinor.assign(spinor_dim, cplx(0.0));
        spinor[0] = 1.0;
    }
    if (static_cast<int>(spinor.size()) != spinor_dim)
        throw std::invalid_argument("init_state: spinor size mismatch");

    const cplx i(0.0, 1.0);
    switch (p.profile) {
        case Profile::point: {
            for (int a = 0; a < spatial_dim; ++a)
                if (p.site[a] < 0 || p.site[a] >= dims[a])
                    throw std::invalid_argument("init_state: point site outside grid");
            if (p.component < 0 || p.component >= spinor_dim)
                throw std::invalid_argument("init_state: point component out of range");
            f.amp[static_cast<size_t>(f.site_index(p.site[0], p.site[1], p.site[2])) * spinor_dim +
                  p.component] = 1.0;
            return f;
        }
        case Profile::gaussian: {
            if (!(p.width > 0.0)) throw std::invalid_argument("init_state: gaussian width > 0");
            double norm2 = 0.0;
            for (int x = 0; x < dims[0]; ++x)
                for (int y = 0; y < dims[1]; ++y)
                    for (int z = 0; z < dims[2]; ++z) {
                        const double pos[3] = {x * spacing[0], y * spacing[1], z * spacing[2]};
                        double r2 = 0.0, phase = 0.0;
                        for (int a = 0; a < spatial_dim; ++a) {
                            const double len = dims[a] * spacing[a];
                            double d = pos[a] - p.center[a];
                            d -= len * std::round(d / len);  // minimal image
                            r2 += d * d;
                            phase += p.momentum[a] * pos[a];
                        }
                        const cplx v = std::exp(-r2 / (4.0 * p.width * p.width)) *
                                       std::exp(i * phase);
                        const long s = f.site_index(x, y, z);
                        for (int c = 0; c < spinor_dim; ++c) {
                            f.amp[static_cast<size_t>(s) * spinor_dim + c] = v * spinor[c];
                            norm2 += std::norm(v * spinor[c]);
                        }
                    }
            const double inv = 1.0 / std::sqrt(norm2);
            for (cplx& a : f.amp) a *= inv;
            return f;
        }
        case Profile::plane_wave: {
            for (int a = 0; a < spatial_dim; ++a) {
                const double cycles = p.momentum[a] * dims[a] * spacing[a] / (2.0 * M_PI);
                if (std::abs(cycles - std::round(cycles)) > 1e-9)
                    throw std::invalid_argument(
                        "init_state: plane-wave momentum incommensurate with the periodic grid");
            }
            double sn = 0.0;
            for (const cplx& c : spinor) sn += std::norm(c);
            const double inv = 1.0 / std::sqrt(sn * static_cast<double>(f.sites()));
            for (int x = 0; x < dims[0]; ++x)
                for (int y = 0; y < dims[1]; ++y)
                    for (int z = 0; z < dims[2]; ++z) {
                        const double phase = p.momentum[0] * x * spacing[0] +
                                             p.momentum[1] * y * spacing[1] +
                                             p.momentum[2] * z * spacing[2];
                        const cplx v = inv * std::exp(i * phase);
                        const long s = f.site_index(x, y, z);
                        for (int c = 0; c < spinor_dim; ++c)
                            f.amp[static_cast<size_t>(s) * spinor_dim + c] = v * spinor[c];
                    }
            return f;
        }
    }
    throw std::invalid_argument("init_state: unknown profile");
}

/// Convenience: a state on the walk's lattice spacing.
inline SpinorField init_state(const std::array<int, 3>& dims, const WalkOperator& w,
                              const InitParams& p) {
    return init_state(dims, w.lattice.dim, w.spinor_dim, w.lattice.grid_spacing, p);
}

inline SpinorField step(const SpinorField& state, const WalkOperator& w) {
    if (state.spinor_dim != w.spinor_dim || state.spatial_dim != w.lattice.dim)
        throw std::invalid_argument("step: state does not match walk dimensions");
    const int S = state.spinor_dim;
    const long nsites = state.sites();
    const std::array<int, 3>& d = state.dims;

    SpinorField cur = state;
    SpinorField next = state;

    for (const WalkStep& ws : w.steps) {
        switch (ws.kind) {
            case WalkStep::Kind::uniform_coin: {
                const ComplexMatrix& m = ws.matrix;
                detail::parallel_for(nsites, [&](long lo, long hi) {
                    for (long s = lo; s < hi; ++s)
                        m.apply(cur.amp.data() + s * S, next.amp.data() + s * S);
                });
                break;
            }
            case WalkStep::Kind::site_coin: {
                const EMFieldSpec& fields = *ws.fields;
                if (fields.any_sampled())
                    for (int a = 0; a < state.spatial_dim; ++a)
                        if (fields.grid_dims[a] != d[a])
                            throw std::invalid_argument("step: field grid does not match state");
                const int mu = ws.field_component;
                const Scenario sc = w.scenario;
                const double eps = w.lattice.epsilon;
                detail::parallel_for(nsites, [&](long lo, long hi) {
                    for (long s = lo; s < hi; ++s) {
                        const ComplexMatrix m = em_component_coin(sc, mu, fields.value(mu, s), eps);
                        m.apply(cur.amp.data() + s * S, next.amp.data() + s * S);
                    }
                });
                break;
            }
            case WalkStep::Kind::shift: {
                // Component c reads from site + sign_c * step: psi'_c(x) =
                // psi_c(x + s_c dx), the e^{eps sigma3 d} convention.
                detail::parallel_for(nsites, [&](long lo, long hi) {
                    const long plane = static_cast<long>(d[1]) * d[2];
                    for (long s = lo; s < hi; ++s) {
                        const int x = static_cast<int>(s / plane);
                        const int y = static_cast<int>((s / d[2]) % d[1]);
                        const int z = static_cast<int>(s % d[2]);
                        for (int c = 0; c < S; ++c) {
                            const int sg = ws.signs[c];
                            const int sx = detail::wrap(x + sg * ws.step[0], d[0]);
                            const int sy = detail::wrap(y + sg * ws.step[1], d[1]);
                            const int sz = detail::wrap(z + sg * ws.step[2], d[2]);
                            next.amp[static_cast<size_t>(s) * S + c] =
                                cur.amp[static_cast<size_t>(state.site_index(sx, sy, sz)) * S + c];
                        }
                    }
                });
                break;
            }
        }
        std::swap(cur.amp, next.amp);
    }
    return cur;
}

inline SpinorField evolve(SpinorField state, const WalkOperator& w, int n_steps) {
    if (n_steps < 0) throw std::invalid_argument("evolve: n_steps must be nonnegative");
    for (int n = 0; n < n_steps; ++n) state = step(state, w);
    return state;
}

/// Sum of |psi|^2 over all sites and components (1 for normalized states).
inline double total_norm(const SpinorField& f) {
    std::vector<double> sq(f.amp.size());
    for (size_t i = 0; i < f.amp.size(); ++i) sq[i] = std::norm(f.amp[i]);
    return detail::pairwise_sum(sq.data(), static_cast<long>(sq.size()));
}

inline std::vector<double> site_probability(const SpinorField& f) {
    std::vector<double> p(static_cast<size_t>(f.sites()), 0.0);
    for (long s = 0; s < f.sites(); ++s)
        for (int c = 0; c < f.spinor_dim; ++c)
            p[static_cast<size_t>(s)] += std::norm(f.amp[static_cast<size_t>(s) * f.spinor_dim + c]);
    return p;
}

inline std::array<double, 3> mean_position(const SpinorField& f) {
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    double total = 0.0;
    for (int x = 0; x < f.dims[0]; ++x)
        for (int y = 0; y < f.dims[1]; ++y)
            for (int z = 0; z < f.dims[2]; ++z) {
                const long s = f.site_index(x, y, z);
                double p = 0.0;
                for (int c = 0; c < f.spinor_dim; ++c)
                    p += std::norm(f.amp[static_cast<size_t>(s) * f.spinor_dim + c]);
                mean[0] += p * x * f.spacing[0];
                mean[1] += p * y * f.spacing[1];
                mean[2] += p * z * f.spacing[2];
                total += p;
            }
    if (total == 0.0) throw std::invalid_argument("mean_position: zero-norm state");
    for (double& m : mean) m /= total;
    return mean;
}

/// Quasi-energies E_b = -arg(lambda_b)/dt of the one-step symbol, mapped to
/// (-pi/dt, pi/dt] and sorted ascending.
inline std::vector<double> dispersion(const WalkOperator& w, const std::array<double, 3>& k) {
    const ComplexMatrix m = symbol(w, k);
    const int n = m.dim();
    Eigen::MatrixXcd em(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) em(r, c) = m.at(r, c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(em, false);
    std::vector<double> energies;
    const double window = M_PI / w.dt;
    for (int b = 0; b < n; ++b) {
        double e = -std::arg(solver.eigenvalues()[b]) / w.dt;
        if (e <= -window) e += 2.0 * window;
        energies.push_back(e);
    }
    std::sort(energies.begin(), energies.end());
    return energies;
}

}  // namespace dqw
