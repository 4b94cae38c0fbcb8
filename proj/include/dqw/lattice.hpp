#pragma once

// Lattice geometries, directional-derivative decompositions of the Cartesian
// derivatives, and the two feasibility strategies (spatial rescaling, time
// dilation). States live on a rectangular integer index grid with per-axis
// spacings chosen so every lattice edge is an exact integer step.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dqw/coin_solver.hpp"
#include "dqw/complex_matrix.hpp"

namespace dqw {

enum class LatticeName {
    line,
    square,
    cubic,
    tri_equilateral,
    tri_isosceles,
    parallelepiped,
    rhombohedral,
};

inline std::string to_string(LatticeName n) {
    switch (n) {
        case LatticeName::line: return "line";
        case LatticeName::square: return "square";
        case LatticeName::cubic: return "cubic";
        case LatticeName::tri_equilateral: return "tri_equilateral";
        case LatticeName::tri_isosceles: return "tri_isosceles";
        case LatticeName::parallelepiped: return "parallelepiped";
        case LatticeName::rhombohedral: return "rhombohedral";
    }
    return "?";
}

inline std::optional<LatticeName> lattice_name_from_string(const std::string& s) {
    for (LatticeName n : {LatticeName::line, LatticeName::square, LatticeName::cubic,
                          LatticeName::tri_equilateral, LatticeName::tri_isosceles,
                          LatticeName::parallelepiped, LatticeName::rhombohedral})
        if (to_string(n) == s) return n;
    return std::nullopt;
}

struct LatticeDirection {
    std::string label;
    std::array<double, 3> unit{};   // unit vector (padded with zeros)
    std::array<int, 3> step{};      // index step of the + sense
};

struct LatticeSpec {
    LatticeName name = LatticeName::line;
    int dim = 1;
    double epsilon = 1.0;
    double upsilon = 1.0;
    double zeta = 1.0;
    double alpha = 1.0;
    std::vector<LatticeDirection> directions;
    std::array<double, 3> grid_spacing{1.0, 1.0, 1.0};

    // Physical edge displacement of direction d (+ sense): step (.) spacing.
    std::array<double, 3> edge(int d) const {
        std::array<double, 3> e{};
        for (int i = 0; i < 3; ++i) e[i] = directions[d].step[i] * grid_spacing[i];
        return e;
    }
    int direction_index(const std::string& label) const {
        for (size_t i = 0; i < directions.size(); ++i)
            if (directions[i].label == label) return static_cast<int>(i);
        throw std::invalid_argument("unknown lattice direction " + label);
    }
};

struct LatticeOverrides {
    std::optional<double> upsilon;
    std::optional<double> zeta;
    std::optional<double> alpha;
};

namespace detail {

struct FamilyTraits {
    int dim;
    bool upsilon_free;  // the rescale strategy may solve for it
    bool zeta_free;
    double def_upsilon;
    double def_zeta;
    double def_alpha;
};

inline FamilyTraits family_traits(LatticeName name) {
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    switch (name) {
        case LatticeName::line: return {1, false, false, 1.0, 1.0, 1.0};
        case LatticeName::square: return {2, false, false, 1.0, 1.0, 1.0};
        case LatticeName::cubic: return {3, false, false, 1.0, 1.0, 1.0};
        case LatticeName::tri_isosceles: return {2, true, false, inv_sqrt3, 1.0, 1.0};
        case LatticeName::tri_equilateral: return {2, false, false, 1.0, 1.0, 1.5};
        case LatticeName::parallelepiped: return {3, true, true, inv_sqrt3, inv_sqrt6, 1.0};
        case LatticeName::rhombohedral: return {3, false, false, 1.0, 1.0, 1.0};
    }
    throw std::invalid_argument("unknown lattice name");
}

inline LatticeDirection make_direction(const std::string& label, std::array<int, 3> step,
                                       const std::array<double, 3>& spacing) {
    LatticeDirection d;
    d.label = label;
    d.step = step;
    double n2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        d.unit[i] = step[i] * spacing[i];
        n2 += d.unit[i] * d.unit[i];
    }
    const double n = std::sqrt(n2);
    if (n == 0.0) throw std::invalid_argument("zero-length lattice direction " + label);
    for (int i = 0; i < 3; ++i) d.unit[i] /= n;
    return d;
}

}  // namespace detail

inline LatticeSpec make_lattice(LatticeName name, double epsilon,
                                const LatticeOverrides& overrides = {}) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("make_lattice: epsilon must be positive");
    const auto t = detail::family_traits(name);

    LatticeSpec s;
    s.name = name;
    s.dim = t.dim;
    s.epsilon = epsilon;
    s.upsilon = overrides.upsilon.value_or(t.def_upsilon);
    s.zeta = overrides.zeta.value_or(t.def_zeta);
    s.alpha = overrides.alpha.value_or(t.def_alpha);
    if (!(s.upsilon > 0.0) || !(s.zeta > 0.0) || !(s.alpha > 0.0))
        throw std::invalid_argument("make_lattice: parameters must be positive");

    const double sqrt3 = std::sqrt(3.0);
    const double sqrt6 = std::sqrt(6.0);

    switch (name) {
        case LatticeName::line:
            s.grid_spacing = {epsilon, 1.0, 1.0};
            s.directions = {detail::make_direction("x", {1, 0, 0}, s.grid_spacing)};
            break;
        case LatticeName::square:
            s.grid_spacing = {epsilon, epsilon, 1.0};
            s.directions = {detail::make_direction("x", {1, 0, 0}, s.grid_spacing),
                            detail::make_direction("y", {0, 1, 0}, s.grid_spacing)};
            break;
        case LatticeName::cubic:
            s.grid_spacing = {epsilon, epsilon, epsilon};
            s.directions = {detail::make_direction("x", {1, 0, 0}, s.grid_spacing),
                            detail::make_direction("y", {0, 1, 0}, s.grid_spacing),
                            detail::make_direction("z", {0, 0, 1}, s.grid_spacing)};
            break;
        case LatticeName::tri_isosceles:
        case LatticeName::tri_equilateral:
            s.grid_spacing = {epsilon / 2.0, epsilon * s.upsilon * sqrt3 / 2.0, 1.0};
            s.directions = {detail::make_direction("x", {2, 0, 0}, s.grid_spacing),
                            detail::make_direction("u", {1, 1, 0}, s.grid_spacing),
                            detail::make_direction("v", {-1, 1, 0}, s.grid_spacing)};
            break;
        case LatticeName::parallelepiped:
        case LatticeName::rhombohedral:
            s.grid_spacing = {epsilon / 2.0, epsilon * s.upsilon * sqrt3 / 6.0,
                              epsilon * s.zeta * sqrt6 / 3.0};
            s.directions = {detail::make_direction("x", {2, 0, 0}, s.grid_spacing),
                            detail::make_direction("a", {1, 1, 1}, s.grid_spacing),
                            detail::make_direction("b", {-1, 1, 1}, s.grid_spacing),
                            detail::make_direction("c", {1, 3, 0}, s.grid_spacing),
                            detail::make_direction("d", {-1, 3, 0}, s.grid_spacing),
                            detail::make_direction("e", {0, -2, 1}, s.grid_spacing)};
            break;
    }
    return s;
}

/// Per-direction normalization constant: the prefactor making the dilated
/// direction vector unit length, N_d = epsilon / |edge_d|.
inline std::vector<double> normalization_constants(const LatticeSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.directions.size());
    for (size_t d = 0; d < spec.directions.size(); ++d) {
        const auto e = spec.edge(static_cast<int>(d));
        const double len = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        if (len == 0.0)
            throw std::invalid_argument("normalization_constants: zero-length direction");
        out.push_back(spec.epsilon / len);
    }
    return out;
}

struct DerivativeDecomposition {
    // coeff[i][d]: Cartesian derivative i = sum_d coeff[i][d] * directional d.
    std::vector<std::vector<double>> coeff;
    std::vector<double> normalizers;
    // For triangular/parallelepiped lattices: d/dx = sum_d x_difference[d] * d_d
    // (the subtraction identity the time-dilation strategy redistributes into).
    std::vector<double> x_difference;
};

inline DerivativeDecomposition cartesian_decomposition(const LatticeSpec& spec) {
    const size_t nd = spec.directions.size();
    DerivativeDecomposition dec;
    dec.coeff.assign(spec.dim, std::vector<double>(nd, 0.0));
    dec.normalizers = normalization_constants(spec);
    const double sqrt3 = std::sqrt(3.0);
    const double sqrt6 = std::sqrt(6.0);

    switch (spec.name) {
        case LatticeName::line:
        case LatticeName::square:
        case LatticeName::cubic:
            for (int i = 0; i < spec.dim; ++i) dec.coeff[i][i] = 1.0;
            break;
        case LatticeName::tri_isosceles:
        case LatticeName::tri_equilateral: {
            const int x = spec.direction_index("x");
            const int u = spec.direction_index("u");
            const int v = spec.direction_index("v");
            const double n = dec.normalizers[u];
            dec.coeff[0][x] = 1.0;
            dec.coeff[1][u] = dec.coeff[1][v] = 1.0 / (n * spec.upsilon * sqrt3);
            dec.x_difference.assign(nd, 0.0);
            dec.x_difference[u] = 1.0 / n;
            dec.x_difference[v] = -1.0 / n;
            break;
        }
        case LatticeName::parallelepiped:
        case LatticeName::rhombohedral: {
            const int x = spec.direction_index("x");
            const int a = spec.direction_index("a");
            const int b = spec.direction_index("b");
            const int c = spec.direction_index("c");
            const int d = spec.direction_index("d");
            const int e = spec.direction_index("e");
            const double na = dec.normalizers[a];
            const double nc = dec.normalizers[c];
            const double ne = dec.normalizers[e];
            dec.coeff[0][x] = 1.0;
            dec.coeff[1][c] = dec.coeff[1][d] = 1.0 / (nc * spec.upsilon * sqrt3);
            dec.coeff[2][a] = dec.coeff[2][b] = 1.0 / (spec.zeta * sqrt6 * na);
            dec.coeff[2][e] = 1.0 / (spec.zeta * sqrt6 * ne);
            dec.x_difference.assign(nd, 0.0);
            dec.x_difference[c] = 1.0 / nc;
            dec.x_difference[d] = -1.0 / nc;
            break;
        }
    }

    // Reconstruction identity: sum_d coeff[i][d] * unit_d == e_i.
    for (int i = 0; i < spec.dim; ++i) {
        std::array<double, 3> acc{};
        for (size_t d = 0; d < nd; ++d)
            for (int j = 0; j < 3; ++j) acc[j] += dec.coeff[i][d] * spec.directions[d].unit[j];
        for (int j = 0; j < spec.dim; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(acc[j] - want) > 1e-12)
                throw std::runtime_error("cartesian_decomposition: directions do not span space");
        }
    }
    return dec;
}

enum class FeasibilityStrategy { rescale_space, dilate_time, auto_strategy };
enum class FeasibilityStatus { feasible_rescaled, feasible_time_dilated, infeasible };

inline std::string to_string(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::feasible_rescaled: return "feasible_rescaled";
        case FeasibilityStatus::feasible_time_dilated: return "feasible_time_dilated";
        case FeasibilityStatus::infeasible: return "infeasible";
    }
    return "?";
}

struct DirectionCoin {
    std::string label;
    ComplexMatrix target;  // 2x2 Hermitian tensor factor the coin conjugates to
    ComplexMatrix u;
    double residual = 0.0;
};

struct FeasibilityReport {
    FeasibilityStatus status = FeasibilityStatus::infeasible;
    double upsilon = 1.0;
    double zeta = 1.0;
    double alpha = 1.0;
    std::vector<DirectionCoin> coins;
    // Infeasibility witnesses: offending eigenvalue pairs (rescale strategy)
    // and per-factor root sets (time-dilation strategy).
    std::vector<std::pair<std::string, std::pair<double, double>>> eigen_witness;
    std::vector<std::pair<std::string, std::vector<double>>> root_witness;
};

namespace detail {

// Pauli structure the walk factorization assigns to Cartesian axis i.
// 2-component walks carry the full matrix (+sigma3 for x, -sigma2 for y);
// 4-component walks carry sigma_{i+1} in the second tensor slot (the first
// slot's sigma1 machinery absorbs the sign).
inline ComplexMatrix axis_pauli(int axis, int dim) {
    if (dim <= 2) {
        if (axis == 0) return pauli(3);
        return cplx(-1.0) * pauli(2);
    }
    return pauli(axis + 1);
}

inline FeasibilityReport rescale_space_analysis(const LatticeSpec& spec) {
    const auto t = family_traits(spec.name);
    LatticeOverrides solved;
    // The prefactor equations are monomial: upsilon*sqrt(3) = 1 and
    // zeta*sqrt(6) = 1 wherever the dilation is free to move.
    solved.upsilon = t.upsilon_free ? 1.0 / std::sqrt(3.0) : spec.upsilon;
    solved.zeta = t.zeta_free ? 1.0 / std::sqrt(6.0) : spec.zeta;
    solved.alpha = spec.alpha;
    const LatticeSpec rs = make_lattice(spec.name, spec.epsilon, solved);
    const auto dec = cartesian_decomposition(rs);

    FeasibilityReport rep;
    rep.upsilon = rs.upsilon;
    rep.zeta = rs.zeta;
    rep.alpha = rs.alpha;
    bool ok = true;
    for (size_t d = 0; d < rs.directions.size(); ++d) {
        int axis = -1;
        for (int i = 0; i < rs.dim; ++i)
            if (dec.coeff[i][d] != 0.0) axis = i;
        if (axis < 0) continue;
        const double prefactor = dec.coeff[axis][d] * dec.normalizers[d];
        const ComplexMatrix target = cplx(prefactor) * axis_pauli(axis, rs.dim == 3 ? 4 : 2);
        const auto res = solve_sigma3_conjugation(target);
        if (std::holds_alternative<ConjugationSolution>(res)) {
            const auto& sol = std::get<ConjugationSolution>(res);
            rep.coins.push_back({rs.directions[d].label, sol.target, sol.u, sol.residual});
        } else {
            const auto& inf = std::get<ConjugationInfeasible>(res);
            rep.eigen_witness.emplace_back(rs.directions[d].label,
                                           std::make_pair(inf.lambda_plus, inf.lambda_minus));
            ok = false;
        }
    }
    rep.status = ok ? FeasibilityStatus::feasible_rescaled : FeasibilityStatus::infeasible;
    if (!ok) rep.coins.clear();
    return rep;
}

// The time-dilation factor system: every Hamiltonian term keeps its alpha,
// except the x term which is split into a unit share plus an (alpha-1) share
// redistributed through the subtraction identity d1 = sum x_difference[d] d_d.
// Factors are stated as the 2x2 tensor block the shift must conjugate to.
inline std::vector<AffinePauliFactor> time_dilation_factors(const LatticeSpec& spec) {
    const auto dec = cartesian_decomposition(spec);
    const double sqrt3 = std::sqrt(3.0);
    const double sqrt6 = std::sqrt(6.0);
    std::vector<AffinePauliFactor> factors;

    auto factor = [&](const std::string& label) -> AffinePauliFactor& {
        factors.push_back({});
        factors.back().label = label;
        return factors.back();
    };

    switch (spec.name) {
        case LatticeName::line: {
            auto& x = factor("x");
            x.slope[2] = 1.0;  // alpha * sigma3
            break;
        }
        case LatticeName::square: {
            auto& x = factor("x");
            x.slope[2] = 1.0;
            auto& y = factor("y");
            y.slope[1] = -1.0;  // -alpha * sigma2
            break;
        }
        case LatticeName::cubic: {
            for (int j = 0; j < 3; ++j) {
                auto& f = factor(std::string(1, "xyz"[j]));
                f.slope[j] = -1.0;  // second slot -alpha * sigma_{j+1}
            }
            break;
        }
        case LatticeName::tri_isosceles:
        case LatticeName::tri_equilateral: {
            auto& x = factor("x");
            x.constant[2] = 1.0;  // unit share, sigma3
            const double q = 1.0 / (spec.upsilon * sqrt3);
            auto& u = factor("u");
            u.slope[1] = -q;      // -(alpha/(upsilon sqrt3)) sigma2
            u.constant[2] = -1.0;
            u.slope[2] = 1.0;     // +(alpha-1) sigma3
            auto& v = factor("v");
            v.slope[1] = -q;
            v.constant[2] = 1.0;
            v.slope[2] = -1.0;    // -(alpha-1) sigma3
            break;
        }
        case LatticeName::parallelepiped:
        case LatticeName::rhombohedral: {
            auto& x = factor("x");
            x.constant[0] = -1.0;  // unit share, second slot -sigma1
            const double q2 = 1.0 / (spec.upsilon * sqrt3);
            const double q3 = 1.0 / (spec.zeta * sqrt6);
            auto& c = factor("c");
            c.slope[1] = -q2;
            c.constant[0] = 1.0;
            c.slope[0] = -1.0;  // -(alpha-1) sigma1
            auto& d = factor("d");
            d.slope[1] = -q2;
            d.constant[0] = -1.0;
            d.slope[0] = 1.0;   // +(alpha-1) sigma1
            for (const char* lbl : {"a", "b", "e"}) {
                auto& f = factor(lbl);
                f.slope[2] = -q3;  // -(alpha/(zeta sqrt6)) sigma3
            }
            break;
        }
    }
    return factors;
}

inline FeasibilityReport dilate_time_analysis(const LatticeSpec& spec) {
    const auto factors = time_dilation_factors(spec);
    const auto result = solve_time_dilation(factors);

    FeasibilityReport rep;
    rep.upsilon = spec.upsilon;
    rep.zeta = spec.zeta;
    rep.root_witness = result.factor_roots;

    if (result.status == TimeDilationResult::Status::infeasible) {
        rep.status = FeasibilityStatus::infeasible;
        rep.alpha = spec.alpha;
        return rep;
    }
    rep.alpha = (result.status == TimeDilationResult::Status::roots) ? result.alphas.front()
                                                                     : spec.alpha;
    const bool four_comp = spec.dim == 3;
    for (const auto& f : factors) {
        ComplexMatrix target = f.at(rep.alpha);
        if (four_comp) target = cplx(-1.0) * target;
        const auto res = solve_sigma3_conjugation(target);
        if (!std::holds_alternative<ConjugationSolution>(res)) {
            // Cannot happen for roots returned by the solver; keep the report honest.
            const auto& inf = std::get<ConjugationInfeasible>(res);
            rep.eigen_witness.emplace_back(f.label,
                                           std::make_pair(inf.lambda_plus, inf.lambda_minus));
            rep.status = FeasibilityStatus::infeasible;
            rep.coins.clear();
            return rep;
        }
        const auto& sol = std::get<ConjugationSolution>(res);
        rep.coins.push_back({f.label, sol.target, sol.u, sol.residual});
    }
    rep.status = FeasibilityStatus::feasible_time_dilated;
    return rep;
}

}  // namespace detail

inline FeasibilityReport analyze_feasibility(const LatticeSpec& spec,
                                             FeasibilityStrategy strategy) {
    switch (strategy) {
        case FeasibilityStrategy::rescale_space:
            return detail::rescale_space_analysis(spec);
        case FeasibilityStrategy::dilate_time:
            return detail::dilate_time_analysis(spec);
        case FeasibilityStrategy::auto_strategy: {
            FeasibilityReport r = detail::rescale_space_analysis(spec);
            if (r.status != FeasibilityStatus::infeasible) return r;
            FeasibilityReport t = detail::dilate_time_analysis(spec);
            if (t.status != FeasibilityStatus::infeasible) return t;
            t.eigen_witness = r.eigen_witness;  // combined witness from both strategies
            return t;
        }
    }
    throw std::invalid_argument("analyze_feasibility: unknown strategy");
}

}  // namespace dqw
