// dqw: build, inspect and simulate Dirac quantum walks on cubic, triangular
// and parallelepiped lattices.
//
//   dqw <build|evolve|dispersion|converge|feasibility>
//       [--config PATH|-] [--out PATH] [--seed N] [NAME]
//       [--<dotted.key> VALUE ...]
//
// The config is a single JSON document (path or stdin); every other --flag
// is a dotted key path overriding the corresponding config entry. Exit
// codes: 0 success, 1 usage/config error, 2 mathematical infeasibility.

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dqw/cli.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: dqw <build|evolve|dispersion|converge|feasibility>\n"
          "           [--config PATH|-] [--out PATH] [--seed N] [NAME]\n"
          "           [--<dotted.key> VALUE ...]\n";
}

// Set cfg[dotted.path] = value, creating intermediate objects.
void apply_override(dqw::json& cfg, const std::string& key, const std::string& value) {
    dqw::json* node = &cfg;
    size_t start = 0;
    while (true) {
        const size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw std::invalid_argument("empty key segment in --" + key);
        if (dot == std::string::npos) {
            dqw::json parsed = dqw::json::parse(value, nullptr, false);
            (*node)[part] = parsed.is_discarded() ? dqw::json(value) : parsed;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 1;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        usage(std::cout);
        return 0;
    }

    std::string config_path;
    std::string out_path;
    std::string positional;
    std::vector<std::pair<std::string, std::string>> overrides;

    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--", 0) == 0) {
            if (i + 1 >= argc) {
                std::cerr << "error: flag " << arg << " needs a value\n";
                return 1;
            }
            const std::string key = arg.substr(2);
            const std::string value = argv[++i];
            if (key == "config")
                config_path = value;
            else if (key == "out")
                out_path = value;
            else
                overrides.emplace_back(key, value);  // --seed included: plain config key
        } else if (positional.empty()) {
            positional = arg;
        } else {
            std::cerr << "error: unexpected argument " << arg << "\n";
            return 1;
        }
    }

    dqw::json cfg = dqw::json::object();
    try {
        if (!config_path.empty() && config_path != "-") {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config " << config_path << "\n";
                return 1;
            }
            in >> cfg;
        } else if (config_path == "-" || (command != "feasibility" && !isatty(STDIN_FILENO) &&
                                          config_path.empty() && positional.empty())) {
            std::stringstream buf;
            buf << std::cin.rdbuf();
            const std::string text = buf.str();
            if (!text.empty()) cfg = dqw::json::parse(text);
        }

        if (!positional.empty()) {
            // feasibility takes a lattice name or a direction-set JSON path;
            // other commands accept a scenario name for convenience.
            if (command == "feasibility") {
                if (dqw::lattice_name_from_string(positional))
                    cfg["lattice"] = positional;
                else
                    cfg["input"] = positional;
            } else {
                cfg["scenario"] = positional;
            }
        }
        for (const auto& [key, value] : overrides) apply_override(cfg, key, value);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const dqw::CmdResult result = dqw::run_command(command, cfg);
    if (!result.error.empty()) std::cerr << result.error << "\n";

    if (!result.output.empty()) {
        std::string target = out_path;
        if (target.empty() && cfg.contains("output") && cfg["output"].is_string())
            target = cfg["output"].get<std::string>();
        if (target.empty()) {
            std::cout << result.output;
        } else {
            std::ofstream out(target, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << target << "\n";
                return 1;
            }
            out << result.output;
        }
    }
    return result.exit_code;
}
