#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <catch2/catch_amalgamated.hpp>

#include "dqw/reference.hpp"
#include "test_util.hpp"

using namespace dqw;
using dqw_test::rng;

namespace {

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::MatrixXcd em(m.dim(), m.dim());
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) em(r, c) = m.at(r, c);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(em);
    std::vector<double> out;
    for (int i = 0; i < m.dim(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

}  // namespace

TEST_CASE("hamiltonian symbol fixtures") {
    SECTION("1+1D free matrix and eigenvalues") {
        const double m = 1.3, k = 0.7;
        const ContinuumScenario c = continuum_for(Scenario::line1d_free, m);
        const ComplexMatrix h = hamiltonian_symbol(c, {k, 0, 0});
        const ComplexMatrix want = cplx(-k) * pauli(3) + cplx(m) * pauli(1);
        CHECK(max_abs(h - want) < 1e-15);
        // Characteristic polynomial: lambda^2 = m^2 + k^2.
        const auto eig = hermitian_eigenvalues(h);
        CHECK(std::abs(eig[1] - std::sqrt(m * m + k * k)) < 1e-12);
        CHECK(std::abs(eig[0] + std::sqrt(m * m + k * k)) < 1e-12);
    }
    SECTION("zero mass zero momentum") {
        const ContinuumScenario c = continuum_for(Scenario::line1d_free, 0.0);
        CHECK(max_abs(hamiltonian_symbol(c, {0, 0, 0})) == 0.0);
    }
    SECTION("3+1D free: doubly degenerate +-sqrt(m^2+k^2)") {
        const ContinuumScenario c = continuum_for(Scenario::cubic3d_free, 0.8);
        const std::array<double, 3> k{0.3, -0.4, 0.6};
        const double e = std::sqrt(0.8 * 0.8 + 0.09 + 0.16 + 0.36);
        const auto eig = hermitian_eigenvalues(hamiltonian_symbol(c, k));
        CHECK(std::abs(eig[0] + e) < 1e-12);
        CHECK(std::abs(eig[1] + e) < 1e-12);
        CHECK(std::abs(eig[2] - e) < 1e-12);
        CHECK(std::abs(eig[3] - e) < 1e-12);
    }
    SECTION("minimal coupling shifts momentum and energy") {
        auto g = rng(2020);
        for (Scenario s : {Scenario::line1d_electric, Scenario::square2d_em,
                           Scenario::cubic3d_em}) {
            const int dim = spatial_dim(s);
            std::vector<double> a = {0.5, -0.3, 0.2, 0.4};
            a.resize(dim + 1);
            const ContinuumScenario c = continuum_for(s, 1.1, a);
            for (int t = 0; t < 5; ++t) {
                const auto k = dqw_test::random_momentum(dim, g);
                double q2 = 0.0;
                for (int ax = 0; ax < dim; ++ax) {
                    const double q = k[ax] - a[ax + 1];
                    q2 += q * q;
                }
                const double e = std::sqrt(1.1 * 1.1 + q2);
                const auto eig = hermitian_eigenvalues(hamiltonian_symbol(c, k));
                CHECK(std::abs(eig.front() - (-e - a[0])) <= 1e-12);
                CHECK(std::abs(eig.back() - (e - a[0])) <= 1e-12);
            }
        }
    }
    SECTION("hermitian at random momenta") {
        auto g = rng(2121);
        const ContinuumScenario c = continuum_for(Scenario::cubic3d_em, 1.0,
                                                  {0.2, 0.3, -0.1, 0.5});
        for (int t = 0; t < 20; ++t)
            CHECK(hermiticity_residual(hamiltonian_symbol(c, dqw_test::random_momentum(3, g))) <=
                  1e-12);
    }
}

TEST_CASE("dirac_exact_evolve basics") {
    const ContinuumScenario c = continuum_for(Scenario::line1d_free, 1.0);
    auto g = rng(2222);
    const SpinorField psi = dqw_test::random_state({64, 1, 1}, 1, 2, {0.1, 1, 1}, g);

    SECTION("T = 0 is the identity") {
        const SpinorField out = dirac_exact_evolve(psi, c, 0.0);
        CHECK(dqw_test::state_distance(out, psi) < 1e-13);
    }
    SECTION("norm conserved") {
        const SpinorField out = dirac_exact_evolve(psi, c, 3.7);
        CHECK(std::abs(total_norm(out) - 1.0) <= 1e-12);
    }
    SECTION("group property") {
        const SpinorField one = dirac_exact_evolve(psi, c, 1.9);
        const SpinorField two = dirac_exact_evolve(dirac_exact_evolve(psi, c, 0.9), c, 1.0);
        CHECK(dqw_test::state_distance(one, two) <= 1e-12);
    }
}

TEST_CASE("massless continuum transport is an exact grid translation") {
    const ContinuumScenario c = continuum_for(Scenario::line1d_free, 0.0);
    const int n = 64;
    const double eps = 0.1;
    auto g = rng(2323);
    // Left component only: rigid motion by T, exactly representable as a roll.
    SpinorField psi;
    psi.dims = {n, 1, 1};
    psi.spatial_dim = 1;
    psi.spinor_dim = 2;
    psi.spacing = {eps, 1, 1};
    psi.amp.assign(n * 2, cplx(0.0));
    for (int x = 0; x < n; ++x) psi.amp[x * 2] = dqw_test::random_cplx(g);

    const int shift_steps = 5;
    const SpinorField out = dirac_exact_evolve(psi, c, shift_steps * eps);
    double diff = 0.0;
    for (int x = 0; x < n; ++x) {
        const cplx want = psi.amp[((x + shift_steps) % n) * 2];
        diff = std::max(diff, std::abs(out.amp[x * 2] - want));
    }
    CHECK(diff <= 1e-12);
}

TEST_CASE("plane-wave eigenmode evolves by a scalar phase") {
    const double eps = 0.1;
    const int n = 64;
    const double m = 1.0;
    const ContinuumScenario c = continuum_for(Scenario::line1d_free, m);
    const double k = 2.0 * M_PI * 5.0 / (n * eps);
    const double e = std::sqrt(m * m + k * k);

    // Positive-energy eigenvector of H(k) = -k sigma3 + m sigma1.
    const ComplexMatrix h = hamiltonian_symbol(c, {k, 0, 0});
    const Eigen2 eg = hermitian_eigen2(h);

    InitParams p;
    p.profile = Profile::plane_wave;
    p.momentum = {k, 0, 0};
    p.spinor = {eg.v_plus[0], eg.v_plus[1]};
    const SpinorField psi = init_state({n, 1, 1}, 1, 2, {eps, 1, 1}, p);
    const double T = 2.5;
    const SpinorField out = dirac_exact_evolve(psi, c, T);

    const cplx phase = std::exp(cplx(0.0, -e * T));
    double diff = 0.0;
    for (size_t i = 0; i < psi.amp.size(); ++i)
        diff = std::max(diff, std::abs(out.amp[i] - phase * psi.amp[i]));
    CHECK(diff <= 1e-12);
}

TEST_CASE("convergence study: 1+1D free mass 1 is first order") {
    ConvergenceSetup setup;
    setup.base_dims = {128, 1, 1};
    setup.profile.profile = Profile::gaussian;
    setup.profile.center = {6.4, 0, 0};
    setup.profile.width = 0.35;
    setup.profile.momentum = {0.5, 0, 0};
    const ConvergenceReport rep = convergence_study(
        Scenario::line1d_free, 1.0, {}, {0.1, 0.05, 0.025, 0.0125}, 1.0, setup);
    REQUIRE(rep.errors.size() == 4);
    CHECK(rep.steps == std::vector<long>{10, 20, 40, 80});
    for (size_t i = 1; i < rep.errors.size(); ++i) CHECK(rep.errors[i] < rep.errors[i - 1]);
    CHECK(rep.fitted_order > 0.7);
    CHECK(rep.fitted_order < 1.3);
}

TEST_CASE("convergence study: massless transport is exact") {
    ConvergenceSetup setup;
    setup.base_dims = {64, 1, 1};
    setup.profile.profile = Profile::gaussian;
    setup.profile.center = {3.2, 0, 0};
    setup.profile.width = 0.3;
    setup.profile.spinor = {cplx(1.0), cplx(0.0)};
    const ConvergenceReport rep =
        convergence_study(Scenario::line1d_free, 0.0, {}, {0.1, 0.05}, 1.0, setup);
    for (double e : rep.errors) CHECK(e <= 1e-12);
}

TEST_CASE("convergence study: equilateral step counts use dt = 1.5 eps") {
    ConvergenceSetup setup;
    setup.base_dims = {32, 20, 1};
    setup.profile.profile = Profile::gaussian;
    setup.profile.center = {0.8, 0.85, 0};
    setup.profile.width = 0.25;
    const ConvergenceReport rep = convergence_study(Scenario::tri_equilateral, 1.0, {},
                                                    {0.1, 0.05}, 0.9, setup);
    CHECK(rep.steps == std::vector<long>{6, 12});
}

TEST_CASE("convergence study rejects a non-multiple horizon") {
    ConvergenceSetup setup;
    setup.base_dims = {32, 1, 1};
    setup.profile.profile = Profile::gaussian;
    setup.profile.center = {1.6, 0, 0};
    setup.profile.width = 0.3;
    CHECK_THROWS_AS(
        convergence_study(Scenario::line1d_free, 1.0, {}, {0.1, 0.07}, 1.0, setup),
        std::invalid_argument);
}
