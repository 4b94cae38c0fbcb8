#pragma once

// Command implementations behind the dqw CLI: build, evolve, dispersion,
// converge, feasibility. Each takes the parsed config document and returns
// an exit code plus the machine-readable payload. Exit-code contract:
// 0 success, 1 usage/config error, 2 mathematical infeasibility.

#include <fstream>
#include <sstream>
#include <string>

#include "dqw/engine.hpp"
#include "dqw/reference.hpp"
#include "dqw/serialize.hpp"

namespace dqw {

struct CmdResult {
    int exit_code = 0;
    std::string output;  // payload for stdout / --out
    std::string error;   // diagnostic for stderr
};

namespace cli_detail {

inline Scenario parse_scenario(const json& cfg) {
    if (!cfg.contains("scenario"))
        throw std::invalid_argument("config: missing required key 'scenario'");
    const auto s = scenario_from_string(cfg["scenario"].get<std::string>());
    if (!s) throw std::invalid_argument("config: unknown scenario");
    return *s;
}

inline LatticeSpec parse_lattice(const json& cfg, Scenario scenario) {
    LatticeName name = default_lattice(scenario);
    if (cfg.contains("lattice")) {
        const auto n = lattice_name_from_string(cfg["lattice"].get<std::string>());
        if (!n) throw std::invalid_argument("config: unknown lattice");
        name = *n;
    }
    LatticeOverrides ov;
    if (cfg.contains("upsilon")) ov.upsilon = cfg["upsilon"].get<double>();
    if (cfg.contains("zeta")) ov.zeta = cfg["zeta"].get<double>();
    if (cfg.contains("alpha")) ov.alpha = cfg["alpha"].get<double>();
    return make_lattice(name, cfg.value("epsilon", 0.1), ov);
}

// Sampled-field file: "D n1..nD C" header then C row-major value blocks.
inline EMFieldSpec load_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("fields: cannot open " + path);
    int dim = 0;
    in >> dim;
    if (dim < 1 || dim > 3) throw std::invalid_argument("fields: bad dimension in " + path);
    std::array<int, 3> dims{1, 1, 1};
    long nsites = 1;
    for (int a = 0; a < dim; ++a) {
        in >> dims[a];
        if (dims[a] < 1) throw std::invalid_argument("fields: bad grid size in " + path);
        nsites *= dims[a];
    }
    int ncomp = 0;
    in >> ncomp;
    if (ncomp != dim + 1) throw std::invalid_argument("fields: component count must be D+1");
    EMFieldSpec f;
    f.grid_dims = dims;
    for (int c = 0; c < ncomp; ++c) {
        auto samples = std::make_shared<std::vector<double>>(static_cast<size_t>(nsites));
        for (long s = 0; s < nsites; ++s)
            if (!(in >> (*samples)[static_cast<size_t>(s)]))
                throw std::invalid_argument("fields: truncated value block in " + path);
        f.components.push_back({true, 0.0, samples});
    }
    return f;
}

inline std::optional<EMFieldSpec> parse_fields(const json& cfg, Scenario scenario) {
    if (!has_em_fields(scenario)) {
        if (cfg.contains("fields"))
            throw std::invalid_argument("config: fields supplied for a free scenario");
        return std::nullopt;
    }
    if (!cfg.contains("fields"))
        return EMFieldSpec::constants(std::vector<double>(spatial_dim(scenario) + 1, 0.0));
    const json& f = cfg["fields"];
    if (f.is_string()) return load_field_file(f.get<std::string>());
    if (f.is_array()) {
        std::vector<double> a;
        for (const auto& v : f) a.push_back(v.get<double>());
        if (static_cast<int>(a.size()) != spatial_dim(scenario) + 1)
            throw std::invalid_argument("config: fields must list A_0..A_D");
        return EMFieldSpec::constants(a);
    }
    throw std::invalid_argument("config: fields must be an array or a file path");
}

inline WalkOperator walk_from_config(const json& cfg) {
    const Scenario scenario = parse_scenario(cfg);
    const LatticeSpec lattice = parse_lattice(cfg, scenario);
    const double mass = cfg.value("mass", 1.0);
    return build_walk(scenario, lattice, mass, parse_fields(cfg, scenario));
}

inline std::array<int, 3> parse_grid(const json& cfg, int dim) {
    std::array<int, 3> dims{1, 1, 1};
    if (cfg.contains("grid")) {
        const json& g = cfg["grid"];
        if (!g.is_array() || static_cast<int>(g.size()) != dim)
            throw std::invalid_argument("config: grid must list one count per axis");
        for (int a = 0; a < dim; ++a) dims[a] = g[a].get<int>();
    } else {
        const int def = dim == 1 ? 256 : dim == 2 ? 64 : 16;
        for (int a = 0; a < dim; ++a) dims[a] = def;
    }
    return dims;
}

inline InitParams parse_initial(const json& cfg, const WalkOperator& w,
                                const std::array<int, 3>& dims) {
    InitParams p;
    p.profile = Profile::gaussian;
    p.width = 5.0 * w.lattice.epsilon;
    for (int a = 0; a < w.lattice.dim; ++a)
        p.center[a] = 0.5 * dims[a] * w.lattice.grid_spacing[a];
    if (!cfg.contains("initial")) return p;
    const json& ini = cfg["initial"];
    const std::string type = ini.value("type", "gaussian");
    if (type == "point")
        p.profile = Profile::point;
    else if (type == "gaussian")
        p.profile = Profile::gaussian;
    else if (type == "plane_wave")
        p.profile = Profile::plane_wave;
    else
        throw std::invalid_argument("config: unknown initial profile type");
    if (ini.contains("site"))
        for (size_t a = 0; a < ini["site"].size() && a < 3; ++a)
            p.site[a] = ini["site"][a].get<int>();
    p.component = ini.value("component", 0);
    if (ini.contains("center"))
        for (size_t a = 0; a < ini["center"].size() && a < 3; ++a)
            p.center[a] = ini["center"][a].get<double>();
    p.width = ini.value("width", p.width);
    if (ini.contains("momentum"))
        for (size_t a = 0; a < ini["momentum"].size() && a < 3; ++a)
            p.momentum[a] = ini["momentum"][a].get<double>();
    if (ini.contains("spinor")) {
        p.spinor.clear();
        for (const auto& v : ini["spinor"]) {
            if (v.is_array())
                p.spinor.emplace_back(v[0].get<double>(), v[1].get<double>());
            else
                p.spinor.emplace_back(v.get<double>(), 0.0);
        }
    }
    return p;
}

}  // namespace cli_detail

inline CmdResult cmd_build(const json& cfg) {
    try {
        const WalkOperator w = cli_detail::walk_from_config(cfg);
        return {0, walk_to_json(w).dump() + "\n", ""};
    } catch (const InfeasibleLatticeError& e) {
        return {2, feasibility_to_json(e.report).dump() + "\n", ""};
    }
}

inline CmdResult cmd_evolve(const json& cfg) {
    WalkOperator w;
    try {
        w = cli_detail::walk_from_config(cfg);
    } catch (const InfeasibleLatticeError& e) {
        return {2, feasibility_to_json(e.report).dump() + "\n", ""};
    }
    const auto dims = cli_detail::parse_grid(cfg, w.lattice.dim);
    const int steps = cfg.value("steps", 100);
    if (steps < 0) throw std::invalid_argument("config: steps must be nonnegative");
    int every = cfg.value("snapshot_every", steps > 0 ? steps : 1);
    if (every < 1) throw std::invalid_argument("config: snapshot_every must be positive");

    SpinorField state = init_state(dims, w, cli_detail::parse_initial(cfg, w, dims));

    std::ostringstream out;
    out << "step,t";
    for (int a = 0; a < w.lattice.dim; ++a) out << ',' << "xyz"[a];
    out << ",prob\n";
    auto emit = [&](int s, const SpinorField& f) {
        const auto prob = site_probability(f);
        for (int x = 0; x < dims[0]; ++x)
            for (int y = 0; y < dims[1]; ++y)
                for (int z = 0; z < dims[2]; ++z) {
                    out << s << ',' << fmt17(s * w.dt);
                    const int idx[3] = {x, y, z};
                    for (int a = 0; a < w.lattice.dim; ++a)
                        out << ',' << fmt17(idx[a] * w.lattice.grid_spacing[a]);
                    out << ',' << fmt17(prob[static_cast<size_t>(f.site_index(x, y, z))]) << '\n';
                }
    };
    emit(0, state);
    for (int s = 1; s <= steps; ++s) {
        state = step(state, w);
        if (s % every == 0 || s == steps) emit(s, state);
    }
    out << "# norm=" << fmt17(total_norm(state)) << '\n';
    return {0, out.str(), ""};
}

inline CmdResult cmd_dispersion(const json& cfg) {
    WalkOperator w;
    try {
        w = cli_detail::walk_from_config(cfg);
    } catch (const InfeasibleLatticeError& e) {
        return {2, feasibility_to_json(e.report).dump() + "\n", ""};
    }
    if (!w.constant_fields)
        throw std::invalid_argument("dispersion: requires constant fields");
    int count = 9;
    double kmax = 1.0;
    if (cfg.contains("kgrid")) {
        count = cfg["kgrid"].value("count", count);
        kmax = cfg["kgrid"].value("kmax", kmax);
    }
    if (count < 1) throw std::invalid_argument("config: kgrid.count must be positive");

    const ContinuumScenario c = continuum_for(w.scenario, w.mass, w.field_constants);
    const int dim = w.lattice.dim;
    std::ostringstream out;
    for (int a = 0; a < dim; ++a) out << (a ? "," : "") << 'k' << a + 1;
    out << ",branch,e_walk,e_continuum,abs_err\n";

    std::array<int, 3> idx{0, 0, 0};
    const long total = static_cast<long>(std::pow(count, dim));
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        std::array<double, 3> k{0.0, 0.0, 0.0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % count);
            rem /= count;
        }
        for (int a = 0; a < dim; ++a)
            k[a] = count == 1 ? 0.0 : -kmax + 2.0 * kmax * idx[a] / (count - 1);

        const std::vector<double> e_walk = dispersion(w, k);
        const ComplexMatrix hk = hamiltonian_symbol(c, k);
        Eigen::MatrixXcd h(hk.dim(), hk.dim());
        for (int r = 0; r < hk.dim(); ++r)
            for (int cc = 0; cc < hk.dim(); ++cc) h(r, cc) = hk.at(r, cc);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);

        for (size_t b = 0; b < e_walk.size(); ++b) {
            out << fmt17(k[0]);
            for (int a = 1; a < dim; ++a) out << ',' << fmt17(k[a]);
            const double ec = es.eigenvalues()[static_cast<int>(b)];
            out << ',' << b << ',' << fmt17(e_walk[b]) << ',' << fmt17(ec) << ','
                << fmt17(std::abs(e_walk[b] - ec)) << '\n';
        }
    }
    return {0, out.str(), ""};
}

inline CmdResult cmd_converge(const json& cfg) {
    const Scenario scenario = cli_detail::parse_scenario(cfg);
    if (!cfg.contains("epsilons"))
        throw std::invalid_argument("config: converge requires an 'epsilons' list");
    std::vector<double> epsilons;
    for (const auto& v : cfg["epsilons"]) epsilons.push_back(v.get<double>());
    const double T = cfg.value("time", 1.0);
    const double mass = cfg.value("mass", 1.0);
    std::vector<double> potentials;
    if (cfg.contains("fields"))
        for (const auto& v : cfg["fields"]) potentials.push_back(v.get<double>());

    ConvergenceSetup setup;
    json coarse_cfg = cfg;
    coarse_cfg["epsilon"] = epsilons.front();
    const WalkOperator coarse = cli_detail::walk_from_config(coarse_cfg);
    setup.base_dims = cli_detail::parse_grid(cfg, coarse.lattice.dim);
    setup.profile = cli_detail::parse_initial(cfg, coarse, setup.base_dims);

    const ConvergenceReport rep = convergence_study(scenario, mass, potentials, epsilons, T, setup);

    std::ostringstream out;
    out << "epsilon,steps,l2_error,pair_order\n";
    for (size_t i = 0; i < rep.epsilons.size(); ++i) {
        out << fmt17(rep.epsilons[i]) << ',' << rep.steps[i] << ',' << fmt17(rep.errors[i]) << ','
            << (std::isnan(rep.pair_orders[i]) ? std::string("nan") : fmt17(rep.pair_orders[i]))
            << '\n';
    }
    out << "# fitted_order=" << fmt17(rep.fitted_order) << '\n';
    return {0, out.str(), ""};
}

inline CmdResult cmd_feasibility(const json& cfg) {
    LatticeSpec lattice;
    if (cfg.contains("name")) {
        lattice = lattice_from_json(cfg);  // the config is itself a lattice document
    } else if (cfg.contains("input")) {
        std::ifstream in(cfg["input"].get<std::string>());
        if (!in) throw std::invalid_argument("feasibility: cannot open input file");
        json doc;
        in >> doc;
        lattice = lattice_from_json(doc);
    } else if (cfg.contains("lattice")) {
        const auto n = lattice_name_from_string(cfg["lattice"].get<std::string>());
        if (!n) throw std::invalid_argument("feasibility: unknown lattice name");
        LatticeOverrides ov;
        if (cfg.contains("upsilon")) ov.upsilon = cfg["upsilon"].get<double>();
        if (cfg.contains("zeta")) ov.zeta = cfg["zeta"].get<double>();
        if (cfg.contains("alpha")) ov.alpha = cfg["alpha"].get<double>();
        lattice = make_lattice(*n, cfg.value("epsilon", 0.1), ov);
    } else {
        throw std::invalid_argument("feasibility: provide a lattice name or direction-set JSON");
    }

    FeasibilityStrategy strategy = FeasibilityStrategy::auto_strategy;
    const std::string s = cfg.value("strategy", "auto");
    if (s == "rescale_space")
        strategy = FeasibilityStrategy::rescale_space;
    else if (s == "dilate_time")
        strategy = FeasibilityStrategy::dilate_time;
    else if (s != "auto")
        throw std::invalid_argument("feasibility: unknown strategy");

    const FeasibilityReport rep = analyze_feasibility(lattice, strategy);
    const int code = rep.status == FeasibilityStatus::infeasible ? 2 : 0;
    return {code, feasibility_to_json(rep).dump() + "\n", ""};
}

/// Dispatch with the exit-code contract; config errors land on exit 1.
inline CmdResult run_command(const std::string& name, const json& cfg) {
    try {
        if (name == "build") return cmd_build(cfg);
        if (name == "evolve") return cmd_evolve(cfg);
        if (name == "dispersion") return cmd_dispersion(cfg);
        if (name == "converge") return cmd_converge(cfg);
        if (name == "feasibility") return cmd_feasibility(cfg);
        return {1, "", "unknown subcommand: " + name};
    } catch (const InfeasibleLatticeError& e) {
        return {2, feasibility_to_json(e.report).dump() + "\n", ""};
    } catch (const std::exception& e) {
        return {1, "", std::string("error: ") + e.what()};
    }
}

}  // namespace dqw
