#include <catch2/catch_amalgamated.hpp>

#include "dqw/engine.hpp"
#include "dqw/walk.hpp"
#include "test_util.hpp"

using namespace dqw;
using dqw_test::rng;

namespace {

const cplx I(0.0, 1.0);

const std::vector<Scenario> kBuildable = {
    Scenario::line1d_free,    Scenario::line1d_electric, Scenario::square2d_free,
    Scenario::square2d_em,    Scenario::cubic3d_free,    Scenario::cubic3d_em,
    Scenario::tri_isosceles,  Scenario::tri_equilateral, Scenario::parallelepiped};

std::optional<EMFieldSpec> default_fields(Scenario s) {
    if (!has_em_fields(s)) return std::nullopt;
    std::vector<double> a = {0.3, -0.2, 0.25, 0.15};
    a.resize(spatial_dim(s) + 1);
    return EMFieldSpec::constants(a);
}

WalkOperator canonical_walk(Scenario s, double eps, double mass) {
    return build_walk(s, make_lattice(default_lattice(s), eps), mass, default_fields(s));
}

}  // namespace

TEST_CASE("line1d_free builder fixture") {
    const WalkOperator w = canonical_walk(Scenario::line1d_free, 0.1, 1.0);
    REQUIRE(w.steps.size() == 2);
    CHECK(w.steps[0].kind == WalkStep::Kind::shift);
    CHECK(w.steps[0].direction_label == "x");
    CHECK(w.steps[0].signs == std::vector<int>{1, -1});
    CHECK(std::abs(w.steps[0].displacement[0] - 0.1) < 1e-15);
    CHECK(w.steps[1].kind == WalkStep::Kind::uniform_coin);
    const ComplexMatrix& m = w.steps[1].matrix;
    CHECK(std::abs(m.at(0, 0) - cplx(std::cos(0.1))) < 1e-15);
    CHECK(std::abs(m.at(0, 1) - (-I * std::sin(0.1))) < 1e-15);
    CHECK(std::abs(m.at(1, 0) - (-I * std::sin(0.1))) < 1e-15);
    CHECK(w.dt == 0.1);
}

TEST_CASE("line1d_free with zero mass is a pure shift") {
    const WalkOperator w = canonical_walk(Scenario::line1d_free, 0.1, 0.0);
    REQUIRE(w.steps.size() == 1);
    CHECK(w.steps[0].kind == WalkStep::Kind::shift);
}

TEST_CASE("tri_equilateral builder uses the dilated time step") {
    const WalkOperator w = canonical_walk(Scenario::tri_equilateral, 0.1, 1.0);
    CHECK(std::abs(w.dt - 0.15) < 1e-15);
    // Mass coin argument (3/2) m eps.
    const ComplexMatrix& m = w.steps.back().matrix;
    CHECK(std::abs(m.at(0, 0) - cplx(std::cos(0.15))) < 1e-15);
    CHECK(std::abs(m.at(0, 1) - (-I * std::sin(0.15))) < 1e-15);
}

TEST_CASE("em_coin_at_site fixtures") {
    SECTION("constant A0 phase in 1+1D") {
        const EMFieldSpec f = EMFieldSpec::constants({1.0, 0.0});
        const ComplexMatrix c = em_coin_at_site(f, {0, 0, 0}, Scenario::line1d_electric, 0.1);
        CHECK(max_abs(c - std::exp(I * 0.1) * ComplexMatrix::identity(2)) < 1e-15);
    }
    SECTION("zero field gives the identity") {
        const EMFieldSpec f = EMFieldSpec::constants({0.0, 0.0, 0.0, 0.0});
        const ComplexMatrix c = em_coin_at_site(f, {0, 0, 0}, Scenario::cubic3d_em, 0.1);
        CHECK(max_abs(c - ComplexMatrix::identity(4)) == 0.0);
    }
    SECTION("3+1D A1 = pi/(2 eps) gives the off-diagonal block form") {
        const double eps = 0.1;
        const EMFieldSpec f = EMFieldSpec::constants({0.0, M_PI / (2.0 * eps), 0.0, 0.0});
        const ComplexMatrix c = em_coin_at_site(f, {0, 0, 0}, Scenario::cubic3d_em, eps);
        const ComplexMatrix want = I * kron(pauli(1), pauli(1));
        CHECK(max_abs(c - want) < 1e-14);
    }
    SECTION("missing component rejected") {
        const EMFieldSpec f = EMFieldSpec::constants({0.0, 0.0});
        CHECK_THROWS_AS(em_coin_at_site(f, {0, 0, 0}, Scenario::cubic3d_em, 0.1),
                        std::invalid_argument);
    }
}

TEST_CASE("symbol fixtures") {
    SECTION("massless line: pure shift phases") {
        const WalkOperator w = canonical_walk(Scenario::line1d_free, 0.1, 0.0);
        const double k = 0.7;
        const ComplexMatrix s = symbol(w, {k, 0, 0});
        CHECK(std::abs(s.at(0, 0) - std::exp(I * (k * 0.1))) < 1e-15);
        CHECK(std::abs(s.at(1, 1) - std::exp(-I * (k * 0.1))) < 1e-15);
        CHECK(std::abs(s.at(0, 1)) == 0.0);
    }
    SECTION("zero momentum: the mass coin itself") {
        const WalkOperator w = canonical_walk(Scenario::line1d_free, 0.1, 1.0);
        CHECK(max_abs(symbol(w, {0, 0, 0}) - w.steps[1].matrix) == 0.0);
    }
    SECTION("electric phase absorption is an exact matrix identity") {
        const double a0 = 0.7, a1 = 0.3, eps = 0.1;
        const LatticeSpec lat = make_lattice(LatticeName::line, eps);
        const WalkOperator wem = build_walk(Scenario::line1d_electric, lat, 1.0,
                                            EMFieldSpec::constants({a0, a1}));
        const WalkOperator wfree = build_walk(Scenario::line1d_free, lat, 1.0);
        for (double k : {-0.9, 0.0, 0.4, 1.3}) {
            const ComplexMatrix lhs = symbol(wem, {k, 0, 0});
            const ComplexMatrix rhs =
                std::exp(I * (eps * a0)) * symbol(wfree, {k - a1, 0, 0});
            CHECK(max_abs(lhs - rhs) < 1e-14);
        }
    }
}

TEST_CASE("symbol is unitary at random momenta for every scenario") {
    auto g = rng(808);
    for (Scenario s : kBuildable) {
        const WalkOperator w = canonical_walk(s, 0.1, 1.0);
        for (int i = 0; i < 50; ++i) {
            const auto k = dqw_test::random_momentum(spatial_dim(s), g);
            CHECK(unitarity_residual(symbol(w, k)) <= 1e-12);
        }
    }
}

TEST_CASE("consistency residual scales as O(eps^2)") {
    SECTION("line Richardson ratio near 4") {
        std::vector<double> res;
        for (double eps : {0.1, 0.05, 0.025}) {
            const WalkOperator w = canonical_walk(Scenario::line1d_free, eps, 1.0);
            res.push_back(consistency_residual(w, {0.5, 0, 0}));
        }
        CHECK(res[0] / res[1] == Catch::Approx(4.0).margin(0.6));
        CHECK(res[1] / res[2] == Catch::Approx(4.0).margin(0.3));
    }
    SECTION("cubic EM order at random momenta") {
        auto g = rng(909);
        for (int i = 0; i < 5; ++i) {
            const auto k = dqw_test::random_momentum(3, g);
            std::vector<double> res;
            for (double eps : {0.1, 0.05}) {
                const WalkOperator w = canonical_walk(Scenario::cubic3d_em, eps, 1.0);
                res.push_back(consistency_residual(w, k));
            }
            CHECK(std::log2(res[0] / res[1]) >= 1.9);
        }
    }
    SECTION("every scenario stays in the window") {
        auto g = rng(1010);
        for (Scenario s : kBuildable) {
            for (int i = 0; i < 5; ++i) {
                const auto k = dqw_test::random_momentum(spatial_dim(s), g);
                std::vector<double> res;
                for (double eps : {0.1, 0.05, 0.025}) res.push_back(
                    consistency_residual(canonical_walk(s, eps, 1.0), k));
                CHECK(std::log2(res[0] / res[1]) == Catch::Approx(2.0).margin(0.3));
                CHECK(std::log2(res[1] / res[2]) == Catch::Approx(2.0).margin(0.3));
            }
        }
    }
}

TEST_CASE("isosceles walk equals the square walk with S2 -> Sv Su") {
    const double eps = 0.1;
    const LatticeSpec iso = make_lattice(LatticeName::tri_isosceles, eps);
    const WalkOperator walk_iso = build_walk(Scenario::tri_isosceles, iso, 1.0);
    const WalkOperator walk_sq =
        build_walk(Scenario::square2d_free, make_lattice(LatticeName::square, eps), 1.0);

    // Rebuild the square walk's step list on the isosceles grid, composing
    // S_v S_u where the square walk shifts along y.
    WalkOperator composite = walk_iso;
    composite.steps.clear();
    for (const WalkStep& s : walk_sq.steps) {
        if (s.kind == WalkStep::Kind::shift) {
            std::vector<std::string> labels =
                s.direction_label == "y" ? std::vector<std::string>{"u", "v"}
                                         : std::vector<std::string>{"x"};
            for (const auto& lbl : labels) {
                WalkStep t;
                t.kind = WalkStep::Kind::shift;
                t.direction_label = lbl;
                const int d = iso.direction_index(lbl);
                t.step = iso.directions[d].step;
                t.displacement = iso.edge(d);
                t.signs = s.signs;
                composite.steps.push_back(std::move(t));
            }
        } else {
            composite.steps.push_back(s);
        }
    }

    auto g = rng(1111);
    for (int trial = 0; trial < 10; ++trial) {
        const SpinorField psi =
            dqw_test::random_state({32, 32, 1}, 2, 2, iso.grid_spacing, g);
        const SpinorField a = step(psi, walk_iso);
        const SpinorField b = step(psi, composite);
        CHECK(dqw_test::state_distance(a, b) <= 1e-12);
    }
}

TEST_CASE("zero EM fields reduce to the free builder step for step") {
    const std::tuple<Scenario, Scenario> pairs[] = {
        {Scenario::line1d_electric, Scenario::line1d_free},
        {Scenario::square2d_em, Scenario::square2d_free},
        {Scenario::cubic3d_em, Scenario::cubic3d_free}};
    for (const auto& [em, free] : pairs) {
        const LatticeSpec lat = make_lattice(default_lattice(em), 0.1);
        const EMFieldSpec zero =
            EMFieldSpec::constants(std::vector<double>(spatial_dim(em) + 1, 0.0));
        const WalkOperator wem = build_walk(em, lat, 1.0, zero);
        const WalkOperator wfree = build_walk(free, lat, 1.0);
        REQUIRE(wem.steps.size() == wfree.steps.size());
        for (size_t i = 0; i < wem.steps.size(); ++i) {
            CHECK(wem.steps[i].kind == wfree.steps[i].kind);
            if (wem.steps[i].kind == WalkStep::Kind::uniform_coin)
                CHECK(max_abs(wem.steps[i].matrix - wfree.steps[i].matrix) == 0.0);
            else
                CHECK(wem.steps[i].direction_label == wfree.steps[i].direction_label);
        }
    }
}

TEST_CASE("sampled fields match constant fields when uniform") {
    const double eps = 0.1;
    const LatticeSpec lat = make_lattice(LatticeName::line, eps);

    EMFieldSpec sampled;
    sampled.grid_dims = {32, 1, 1};
    for (double value : {0.7, 0.3}) {
        auto arr = std::make_shared<std::vector<double>>(32, value);
        sampled.components.push_back({true, 0.0, arr});
    }
    const WalkOperator ws = build_walk(Scenario::line1d_electric, lat, 1.0, sampled);
    const WalkOperator wc = build_walk(Scenario::line1d_electric, lat, 1.0,
                                       EMFieldSpec::constants({0.7, 0.3}));
    CHECK(!ws.constant_fields);
    CHECK_THROWS_AS(symbol(ws, {0.1, 0, 0}), UnsupportedError);

    auto g = rng(1212);
    const SpinorField psi = dqw_test::random_state({32, 1, 1}, 1, 2, lat.grid_spacing, g);
    CHECK(dqw_test::state_distance(step(psi, ws), step(psi, wc)) == 0.0);
}

TEST_CASE("builder argument errors") {
    const LatticeSpec line = make_lattice(LatticeName::line, 0.1);
    CHECK_THROWS_AS(build_walk(Scenario::square2d_free, line, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_walk(Scenario::line1d_free, line, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(
        build_walk(Scenario::line1d_free, line, 1.0, EMFieldSpec::constants({0.1, 0.0})),
        std::invalid_argument);

    const LatticeSpec rho = make_lattice(LatticeName::rhombohedral, 0.1);
    CHECK_THROWS_AS(build_walk(Scenario::rhombohedral, rho, 1.0), InfeasibleLatticeError);
    try {
        build_walk(Scenario::rhombohedral, rho, 1.0);
    } catch (const InfeasibleLatticeError& e) {
        CHECK(e.report.status == FeasibilityStatus::infeasible);
        CHECK(!e.report.root_witness.empty());
    }

    // A dilation override away from the feasible point is rejected the same way.
    LatticeOverrides off;
    off.upsilon = 0.8;
    const LatticeSpec bad_iso = make_lattice(LatticeName::tri_isosceles, 0.1, off);
    CHECK_THROWS_AS(build_walk(Scenario::tri_isosceles, bad_iso, 1.0), InfeasibleLatticeError);
}
