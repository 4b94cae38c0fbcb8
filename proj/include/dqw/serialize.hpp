#pragma once

// JSON schemas for lattice specs, walk operators and feasibility reports,
// plus the fixed-format CSV helpers (17 significant digits, '.' decimal).

#include <cstdio>
#include <string>

#include <json.hpp>

#include "dqw/lattice.hpp"
#include "dqw/walk.hpp"

namespace dqw {

using json = nlohmann::json;

inline std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (const cplx& v : m.entries()) entries.push_back({v.real(), v.imag()});
    return json{{"dim", m.dim()}, {"entries", entries}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    ComplexMatrix m(dim);
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != dim * dim)
        throw std::invalid_argument("matrix_from_json: entry count mismatch");
    for (int i = 0; i < dim * dim; ++i)
        m.entries()[static_cast<size_t>(i)] =
            cplx(entries[i][0].get<double>(), entries[i][1].get<double>());
    return m;
}

inline json lattice_to_json(const LatticeSpec& s) {
    json dirs = json::array();
    for (const auto& d : s.directions) {
        json unit = json::array(), step = json::array();
        for (int i = 0; i < s.dim; ++i) {
            unit.push_back(d.unit[i]);
            step.push_back(d.step[i]);
        }
        dirs.push_back({{"label", d.label}, {"unit", unit}, {"step", step}});
    }
    json spacing = json::array();
    for (int i = 0; i < s.dim; ++i) spacing.push_back(s.grid_spacing[i]);
    return json{{"name", to_string(s.name)}, {"dim", s.dim},       {"epsilon", s.epsilon},
                {"upsilon", s.upsilon},      {"zeta", s.zeta},     {"alpha", s.alpha},
                {"directions", dirs},        {"grid_spacing", spacing}};
}

/// Rebuilds the family lattice from a serialized document (name, epsilon and
/// any dilation overrides). Custom direction lists are accepted but analysis
/// only attempts the paper families, keyed by name.
inline LatticeSpec lattice_from_json(const json& j) {
    const auto name = lattice_name_from_string(j.at("name").get<std::string>());
    if (!name) throw std::invalid_argument("lattice_from_json: unknown lattice name");
    LatticeOverrides ov;
    if (j.contains("upsilon")) ov.upsilon = j["upsilon"].get<double>();
    if (j.contains("zeta")) ov.zeta = j["zeta"].get<double>();
    if (j.contains("alpha")) ov.alpha = j["alpha"].get<double>();
    const double eps = j.value("epsilon", 1.0);
    return make_lattice(*name, eps, ov);
}

inline json walk_to_json(const WalkOperator& w) {
    json steps = json::array();
    for (const auto& s : w.steps) {
        switch (s.kind) {
            case WalkStep::Kind::uniform_coin:
                steps.push_back({{"kind", "uniform_coin"}, {"matrix", matrix_to_json(s.matrix)}});
                break;
            case WalkStep::Kind::shift: {
                json step = json::array(), disp = json::array();
                for (int i = 0; i < w.lattice.dim; ++i) {
                    step.push_back(s.step[i]);
                    disp.push_back(s.displacement[i]);
                }
                steps.push_back({{"kind", "shift"},
                                 {"direction", s.direction_label},
                                 {"step", step},
                                 {"displacement", disp},
                                 {"signs", s.signs}});
                break;
            }
            case WalkStep::Kind::site_coin:
                steps.push_back({{"kind", "site_coin"}, {"component", s.field_component}});
                break;
        }
    }
    json out{{"scenario", to_string(w.scenario)},
             {"spinor_dim", w.spinor_dim},
             {"dt", w.dt},
             {"mass", w.mass},
             {"lattice", lattice_to_json(w.lattice)},
             {"steps", steps}};
    if (w.constant_fields && !w.field_constants.empty()) out["fields"] = w.field_constants;
    return out;
}

inline json feasibility_to_json(const FeasibilityReport& r) {
    json coins = json::array();
    for (const auto& c : r.coins)
        coins.push_back({{"direction", c.label},
                         {"target", matrix_to_json(c.target)},
                         {"u", matrix_to_json(c.u)},
                         {"residual", c.residual}});
    json witness;
    if (!r.eigen_witness.empty()) {
        json ew = json::array();
        for (const auto& [label, lam] : r.eigen_witness)
            ew.push_back(
                {{"direction", label}, {"lambda_plus", lam.first}, {"lambda_minus", lam.second}});
        witness["eigenvalues"] = ew;
    }
    if (!r.root_witness.empty()) {
        json rw = json::array();
        for (const auto& [label, roots] : r.root_witness)
            rw.push_back({{"factor", label}, {"roots", roots}});
        witness["factor_roots"] = rw;
    }
    json out{{"status", to_string(r.status)},
             {"parameters",
              {{"upsilon", r.upsilon}, {"zeta", r.zeta}, {"alpha", r.alpha}}},
             {"coins", coins}};
    if (!witness.is_null()) out["witness"] = witness;
    return out;
}

}  // namespace dqw
