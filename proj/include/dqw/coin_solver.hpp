#pragma once

// Unitary-conjugation solver U sigma3 U^dag = M and the time-dilation
// feasibility system. A traceless Hermitian target is conjugate to sigma3
// exactly when its eigenvalues are {+1, -1}; the solver reports the
// offending eigenvalues as the infeasibility witness otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "dqw/complex_matrix.hpp"

namespace dqw {

struct ConjugationSolution {
    ComplexMatrix target;
    ComplexMatrix u;
    double residual = 0.0;
};

struct ConjugationInfeasible {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};

using ConjugationResult = std::variant<ConjugationSolution, ConjugationInfeasible>;

inline ConjugationResult solve_sigma3_conjugation(const ComplexMatrix& m) {
    const Eigen2 e = hermitian_eigen2(m);
    const double tol = 1e-9;
    if (std::abs(e.lambda_plus - 1.0) > tol || std::abs(e.lambda_minus + 1.0) > tol)
        return ConjugationInfeasible{e.lambda_plus, e.lambda_minus};
    ComplexMatrix u(2);
    u.at(0, 0) = e.v_plus[0];
    u.at(1, 0) = e.v_plus[1];
    u.at(0, 1) = e.v_minus[0];
    u.at(1, 1) = e.v_minus[1];
    ConjugationSolution s;
    s.target = m;
    s.u = u;
    s.residual = max_abs(u * pauli(3) * dagger(u) - m);
    return s;
}

/// Real affine Pauli combination p1(a) s1 + p2(a) s2 + p3(a) s3 with
/// p_k(a) = c_k + l_k a.
struct AffinePauliFactor {
    std::array<double, 3> constant{};
    std::array<double, 3> slope{};
    std::string label;

    ComplexMatrix at(double alpha) const {
        ComplexMatrix m = ComplexMatrix::zero(2);
        for (int k = 0; k < 3; ++k)
            m = m + cplx(constant[k] + slope[k] * alpha) * pauli(k + 1);
        return m;
    }
};

struct TimeDilationResult {
    enum class Status { roots, unconstrained, infeasible };
    Status status = Status::infeasible;
    std::vector<double> alphas;  // admissible roots, ascending (status == roots)
    // Per-factor real root sets of p1^2 + p2^2 + p3^2 = 1 (the witness).
    std::vector<std::pair<std::string, std::vector<double>>> factor_roots;
};

namespace detail {

// Real roots of (sum l^2) a^2 + 2 (sum c l) a + (sum c^2 - 1) = 0.
// nullopt-like flag when the condition holds identically.
inline bool factor_condition_roots(const AffinePauliFactor& f, std::vector<double>& roots) {
    double a2 = 0.0, a1 = 0.0, a0 = -1.0;
    for (int k = 0; k < 3; ++k) {
        a2 += f.slope[k] * f.slope[k];
        a1 += 2.0 * f.constant[k] * f.slope[k];
        a0 += f.constant[k] * f.constant[k];
    }
    const double tol = 1e-14;
    roots.clear();
    if (std::abs(a2) < tol && std::abs(a1) < tol) {
        if (std::abs(a0) < 1e-9) return false;  // identically satisfied
        return true;                            // never satisfied: empty root set
    }
    if (std::abs(a2) < tol) {
        roots.push_back(-a0 / a1);
        return true;
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < -1e-12) return true;  // complex roots only
    const double sq = std::sqrt(std::max(disc, 0.0));
    roots.push_back((-a1 - sq) / (2.0 * a2));
    roots.push_back((-a1 + sq) / (2.0 * a2));
    std::sort(roots.begin(), roots.end());
    return true;
}

}  // namespace detail

/// All alpha > 0 with alpha not in {0, 1} making every factor's squared
/// Pauli norm equal 1 (the eigenvalue +-1 condition). Root sets are
/// intersected with absolute tolerance 1e-9.
inline TimeDilationResult solve_time_dilation(const std::vector<AffinePauliFactor>& factors) {
    if (factors.empty()) throw std::invalid_argument("solve_time_dilation: no factors");
    const double tol = 1e-9;

    TimeDilationResult res;
    bool any_constrained = false;
    std::vector<double> candidates;
    bool first = true;

    for (const auto& f : factors) {
        bool degenerate = true;
        for (int k = 0; k < 3; ++k)
            if (f.constant[k] != 0.0 || f.slope[k] != 0.0) degenerate = false;
        if (degenerate)
            throw std::invalid_argument("solve_time_dilation: degenerate factor " + f.label);

        std::vector<double> roots;
        const bool constrains = detail::factor_condition_roots(f, roots);
        if (!constrains) continue;  // factor holds for every alpha
        any_constrained = true;
        res.factor_roots.emplace_back(f.label, roots);
        if (first) {
            candidates = roots;
            first = false;
        } else {
            std::vector<double> kept;
            for (double c : candidates)
                for (double r : roots)
                    if (std::abs(c - r) <= tol) {
                        kept.push_back(c);
                        break;
                    }
            candidates = kept;
        }
    }

    if (!any_constrained) {
        res.status = TimeDilationResult::Status::unconstrained;
        return res;
    }

    std::vector<double> admissible;
    for (double a : candidates) {
        if (!(a > tol)) continue;            // alpha > 0, alpha != 0
        if (std::abs(a - 1.0) <= tol) continue;  // alpha != 1
        admissible.push_back(a);
    }
    std::sort(admissible.begin(), admissible.end());
    admissible.erase(std::unique(admissible.begin(), admissible.end(),
                                 [tol](double x, double y) { return std::abs(x - y) <= tol; }),
                     admissible.end());

    if (admissible.empty()) {
        res.status = TimeDilationResult::Status::infeasible;
        return res;
    }
    res.status = TimeDilationResult::Status::roots;
    res.alphas = admissible;
    return res;
}

}  // namespace dqw
