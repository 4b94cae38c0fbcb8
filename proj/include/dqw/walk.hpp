#pragma once

// Walk-operator intermediate representation (coins and shifts in application
// order) and the builders for every lattice scenario, including
// electromagnetic coupling. Step order is frozen: shifts (with their
// conjugating wrap coins), then gauge coins A_j ascending, then the A_0
// phase, then the mass coin. Identity coins are elided.

#include <array>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqw/coin_solver.hpp"
#include "dqw/complex_matrix.hpp"
#include "dqw/continuum.hpp"
#include "dqw/lattice.hpp"
#include "dqw/scenario.hpp"

namespace dqw {

struct EMFieldSpec {
    struct Component {
        bool sampled = false;
        double constant = 0.0;
        std::shared_ptr<const std::vector<double>> samples;  // row-major over grid
    };
    std::vector<Component> components;  // A_0 .. A_D
    std::array<int, 3> grid_dims{0, 0, 0};

    static EMFieldSpec constants(const std::vector<double>& a) {
        EMFieldSpec f;
        for (double v : a) f.components.push_back({false, v, nullptr});
        return f;
    }

    bool any_sampled() const {
        for (const auto& c : components)
            if (c.sampled) return true;
        return false;
    }

    double value(int mu, long site) const {
        const auto& c = components.at(static_cast<size_t>(mu));
        if (!c.sampled) return c.constant;
        return (*c.samples)[static_cast<size_t>(site)];
    }
};

struct WalkStep {
    enum class Kind { uniform_coin, site_coin, shift };
    Kind kind = Kind::uniform_coin;

    ComplexMatrix matrix;  // uniform_coin

    // shift
    std::string direction_label;
    std::array<int, 3> step{};
    std::array<double, 3> displacement{};  // physical edge of the + sense
    std::vector<int> signs;                // per-component roll sense

    // site_coin: which A_mu this coin samples
    int field_component = -1;
    std::shared_ptr<const EMFieldSpec> fields;
};

struct WalkOperator {
    Scenario scenario = Scenario::line1d_free;
    std::vector<WalkStep> steps;  // application order, first applied first
    int spinor_dim = 2;
    LatticeSpec lattice;
    double dt = 0.0;
    double mass = 0.0;
    bool constant_fields = true;
    std::vector<double> field_constants;  // A_0..A_D when constant_fields
};

struct InfeasibleLatticeError : std::runtime_error {
    explicit InfeasibleLatticeError(FeasibilityReport r)
        : std::runtime_error("walk construction infeasible on this lattice"),
          report(std::move(r)) {}
    FeasibilityReport report;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<int> shift_signs(int spinor_dim) {
    // sigma3 for 2 components, sigma3 x sigma3 for 4.
    if (spinor_dim == 2) return {+1, -1};
    return {+1, -1, -1, +1};
}

inline bool is_identity(const ComplexMatrix& m) {
    return max_abs(m - ComplexMatrix::identity(m.dim())) < 1e-15;
}

}  // namespace detail

/// Gauge coin for a single potential component with value a.
inline ComplexMatrix em_component_coin(Scenario scenario, int mu, double a, double epsilon) {
    const int dim = spatial_dim(scenario);
    const int n = spinor_dimension(scenario);
    const cplx i(0.0, 1.0);
    const double t = epsilon * a;
    if (mu == 0) return std::exp(i * t) * ComplexMatrix::identity(n);
    if (dim <= 2 && mu == 1)
        return ComplexMatrix(2, {std::exp(-i * t), 0, 0, std::exp(i * t)});
    if (dim == 2 && mu == 2)
        return ComplexMatrix(2, {std::cos(t), std::sin(t), -std::sin(t), std::cos(t)});
    if (dim == 3 && mu >= 1 && mu <= 3)
        return cplx(std::cos(t)) * ComplexMatrix::identity(4) +
               i * cplx(std::sin(t)) * kron(pauli(1), pauli(mu));
    throw std::invalid_argument("em_component_coin: component out of range for scenario");
}

/// Product of the scenario's gauge coins with the potentials sampled at one
/// site (application order A_1..A_D then A_0).
inline ComplexMatrix em_coin_at_site(const EMFieldSpec& fields, const std::array<int, 3>& site,
                                     Scenario scenario, double epsilon) {
    const int dim = spatial_dim(scenario);
    if (static_cast<int>(fields.components.size()) < dim + 1)
        throw std::invalid_argument("em_coin_at_site: missing field component for scenario");
    long linear = 0;
    if (fields.any_sampled()) {
        const auto& g = fields.grid_dims;
        for (int a = 0; a < 3; ++a)
            if (g[a] > 0 && (site[a] < 0 || site[a] >= g[a]))
                throw std::invalid_argument("em_coin_at_site: site outside grid");
        linear = (static_cast<long>(site[0]) * std::max(g[1], 1) + site[1]) * std::max(g[2], 1) +
                 site[2];
    }
    ComplexMatrix m = ComplexMatrix::identity(spinor_dimension(scenario));
    for (int mu = 1; mu <= dim; ++mu)
        m = em_component_coin(scenario, mu, fields.value(mu, linear), epsilon) * m;
    m = em_component_coin(scenario, 0, fields.value(0, linear), epsilon) * m;
    return m;
}

namespace detail {

struct WalkBuilder {
    WalkOperator w;
    std::shared_ptr<const EMFieldSpec> fields;

    void coin(const ComplexMatrix& m) {
        if (is_identity(m)) return;
        WalkStep s;
        s.kind = WalkStep::Kind::uniform_coin;
        s.matrix = m;
        w.steps.push_back(std::move(s));
    }

    void shift(const std::string& label) {
        const int d = w.lattice.direction_index(label);
        WalkStep s;
        s.kind = WalkStep::Kind::shift;
        s.direction_label = label;
        s.step = w.lattice.directions[d].step;
        s.displacement = w.lattice.edge(d);
        s.signs = shift_signs(w.spinor_dim);
        w.steps.push_back(std::move(s));
    }

    // One gauge coin step per component: uniform when the component is a
    // constant (elided at zero), per-site otherwise.
    void gauge_coin(int mu) {
        const auto& c = fields->components.at(static_cast<size_t>(mu));
        if (!c.sampled) {
            if (c.constant == 0.0) return;
            coin(em_component_coin(w.scenario, mu, c.constant, w.lattice.epsilon));
            return;
        }
        WalkStep s;
        s.kind = WalkStep::Kind::site_coin;
        s.field_component = mu;
        s.fields = fields;
        w.steps.push_back(std::move(s));
    }

    void mass_coin() {
        const double m = w.mass;
        if (m == 0.0) return;
        const cplx i(0.0, 1.0);
        if (w.spinor_dim == 2) {
            const double th = w.lattice.alpha * m * w.lattice.epsilon;
            coin(ComplexMatrix(2, {std::cos(th), -i * std::sin(th), -i * std::sin(th),
                                   std::cos(th)}));
        } else {
            const cplx ph = std::exp(-i * m * w.lattice.epsilon);
            coin(ComplexMatrix(4, {ph, 0, 0, 0, 0, ph, 0, 0, 0, 0, std::conj(ph), 0, 0, 0, 0,
                                   std::conj(ph)}));
        }
    }

    // Solve U sigma3 U^dag = target, or raise the lattice's combined
    // infeasibility report.
    ComplexMatrix solved_coin(const ComplexMatrix& target) const {
        const auto res = solve_sigma3_conjugation(target);
        if (!std::holds_alternative<ConjugationSolution>(res))
            throw InfeasibleLatticeError(
                analyze_feasibility(w.lattice, FeasibilityStrategy::auto_strategy));
        return std::get<ConjugationSolution>(res).u;
    }

    // (U1 sigma1 x Usecond) S_d (sigma1 U1^dag x Usecond^dag)
    void wrapped_shift4(const std::string& label, const ComplexMatrix& u_second) {
        const ComplexMatrix u1 = solved_coin(pauli(1));
        const ComplexMatrix pre = kron(pauli(1) * dagger(u1), dagger(u_second));
        const ComplexMatrix post = kron(u1 * pauli(1), u_second);
        coin(pre);
        shift(label);
        coin(post);
    }
};

}  // namespace detail

inline WalkOperator build_walk(Scenario scenario, const LatticeSpec& lattice, double mass,
                               const std::optional<EMFieldSpec>& fields = std::nullopt) {
    if (lattice.name != default_lattice(scenario))
        throw std::invalid_argument("build_walk: lattice kind does not match scenario");
    if (mass < 0.0) throw std::invalid_argument("build_walk: mass must be nonnegative");
    if (fields && !has_em_fields(scenario))
        throw std::invalid_argument("build_walk: fields supplied for a free scenario");
    if (scenario == Scenario::rhombohedral)
        throw InfeasibleLatticeError(
            analyze_feasibility(lattice, FeasibilityStrategy::auto_strategy));

    detail::WalkBuilder b;
    b.w.scenario = scenario;
    b.w.spinor_dim = spinor_dimension(scenario);
    b.w.lattice = lattice;
    b.w.dt = lattice.alpha * lattice.epsilon;
    b.w.mass = mass;

    const int dim = spatial_dim(scenario);
    EMFieldSpec f = fields.value_or(EMFieldSpec::constants(std::vector<double>(dim + 1, 0.0)));
    if (static_cast<int>(f.components.size()) < dim + 1)
        throw std::invalid_argument("build_walk: missing field component for scenario");
    b.fields = std::make_shared<const EMFieldSpec>(std::move(f));
    b.w.constant_fields = !b.fields->any_sampled();
    if (b.w.constant_fields) {
        for (int mu = 0; mu <= dim; ++mu) b.w.field_constants.push_back(b.fields->value(mu, 0));
    }

    const auto dec = cartesian_decomposition(lattice);
    const auto norms = normalization_constants(lattice);
    auto prefactor = [&](const char* label, int axis) {
        const int d = lattice.direction_index(label);
        return dec.coeff[axis][d] * norms[d];
    };

    switch (scenario) {
        case Scenario::line1d_free:
        case Scenario::line1d_electric: {
            b.shift("x");
            break;
        }
        case Scenario::square2d_free:
        case Scenario::square2d_em: {
            const ComplexMatrix u =
                b.solved_coin(cplx(-prefactor("y", 1)) * pauli(2));
            b.shift("x");
            b.coin(dagger(u));
            b.shift("y");
            b.coin(u);
            break;
        }
        case Scenario::cubic3d_free:
        case Scenario::cubic3d_em: {
            const char* labels[3] = {"x", "y", "z"};
            for (int j = 0; j < 3; ++j) {
                const ComplexMatrix uj =
                    b.solved_coin(cplx(prefactor(labels[j], j)) * pauli(j + 1));
                b.wrapped_shift4(labels[j], uj);
            }
            break;
        }
        case Scenario::tri_isosceles: {
            // One U (.) U^dag wrap around the composite S_v S_u replacing S_2.
            const ComplexMatrix u = b.solved_coin(cplx(-prefactor("u", 1)) * pauli(2));
            b.shift("x");
            b.coin(dagger(u));
            b.shift("u");
            b.shift("v");
            b.coin(u);
            break;
        }
        case Scenario::tri_equilateral: {
            const double al = lattice.alpha;
            const double q = al * prefactor("u", 1);
            const ComplexMatrix tu =
                cplx(al - 1.0) * pauli(3) - cplx(q) * pauli(2);
            const ComplexMatrix tv =
                cplx(1.0 - al) * pauli(3) - cplx(q) * pauli(2);
            const ComplexMatrix uu = b.solved_coin(tu);
            const ComplexMatrix uv = b.solved_coin(tv);
            b.shift("x");
            b.coin(dagger(uu));
            b.shift("u");
            b.coin(uu);
            b.coin(dagger(uv));
            b.shift("v");
            b.coin(uv);
            break;
        }
        case Scenario::parallelepiped: {
            const std::pair<const char*, int> dirs[6] = {{"x", 0}, {"a", 2}, {"b", 2},
                                                         {"c", 1}, {"d", 1}, {"e", 2}};
            for (const auto& [label, axis] : dirs) {
                const ComplexMatrix us =
                    b.solved_coin(cplx(prefactor(label, axis)) * pauli(axis + 1));
                b.wrapped_shift4(label, us);
            }
            break;
        }
        case Scenario::rhombohedral:
            break;  // unreachable
    }

    if (has_em_fields(scenario))
        for (int mu = 1; mu <= dim; ++mu) b.gauge_coin(mu);
    if (has_em_fields(scenario)) b.gauge_coin(0);
    b.mass_coin();
    return std::move(b.w);
}

/// One-step operator on the plane wave e^{i k.x}: coins verbatim, each shift
/// contributing diag phases e^{i s_c k.dx}.
inline ComplexMatrix symbol(const WalkOperator& w, const std::array<double, 3>& k) {
    ComplexMatrix m = ComplexMatrix::identity(w.spinor_dim);
    const cplx i(0.0, 1.0);
    for (const WalkStep& s : w.steps) {
        switch (s.kind) {
            case WalkStep::Kind::uniform_coin:
                m = s.matrix * m;
                break;
            case WalkStep::Kind::shift: {
                const double phase =
                    k[0] * s.displacement[0] + k[1] * s.displacement[1] + k[2] * s.displacement[2];
                ComplexMatrix d(w.spinor_dim);
                for (int c = 0; c < w.spinor_dim; ++c)
                    d.at(c, c) = std::exp(i * cplx(s.signs[c] * phase));
                m = d * m;
                break;
            }
            case WalkStep::Kind::site_coin:
                throw UnsupportedError("symbol: site-dependent fields are not translation invariant");
        }
    }
    return m;
}

/// max-norm(symbol - (I - i dt H(k))) against the scenario's continuum
/// Hamiltonian symbol; O(eps^2) for every builder.
inline double consistency_residual(const WalkOperator& w, const std::array<double, 3>& k) {
    if (!w.constant_fields)
        throw UnsupportedError("consistency_residual: requires constant fields");
    const ContinuumScenario c = continuum_for(w.scenario, w.mass, w.field_constants);
    const ComplexMatrix h = hamiltonian_symbol(c, k);
    const ComplexMatrix target =
        ComplexMatrix::identity(w.spinor_dim) - cplx(0.0, w.dt) * h;
    return max_abs(symbol(w, k) - target);
}

/// W' = U~ W U~^dag: a leading coin U~^dag and a trailing coin U~.
inline WalkOperator representation_transform(const WalkOperator& w,
                                             const ComplexMatrix& u_tilde) {
    if (u_tilde.dim() != w.spinor_dim)
        throw std::invalid_argument("representation_transform: dimension mismatch");
    if (unitarity_residual(u_tilde) > 1e-10)
        throw std::invalid_argument("representation_transform: u_tilde is not unitary");
    WalkOperator out = w;
    out.steps.clear();
    WalkStep lead;
    lead.kind = WalkStep::Kind::uniform_coin;
    lead.matrix = dagger(u_tilde);
    out.steps.push_back(std::move(lead));
    for (const auto& s : w.steps) out.steps.push_back(s);
    WalkStep trail;
    trail.kind = WalkStep::Kind::uniform_coin;
    trail.matrix = u_tilde;
    out.steps.push_back(std::move(trail));
    return out;
}

}  // namespace dqw
