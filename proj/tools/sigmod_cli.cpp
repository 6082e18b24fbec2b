// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigmod/sigmod.h"

namespace {

constexpr int kInputError = 2;

struct ConfigHandle {
    sigmod_config* ptr = nullptr;
    ConfigHandle() {
        if (sigmod_config_new(&ptr) != SIGMOD_OK) ptr = nullptr;
    }
    ~ConfigHandle() { sigmod_config_free(ptr); }
};

bool read_input(const std::string& path, std::string& out) {
    if (path == "-") {
        out.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return true;
}

// CRLF and lone CR both become LF.
std::string normalize_newlines(const std::string& s) {
    std::string r;
    r.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            r.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            r.push_back(s[i]);
        }
    }
    return r;
}

std::string describe(const std::string& command) {
    static const std::map<std::string, std::string> text = {
        {"check-module", "check the commutation relation and ring membership of a module"},
        {"factor", "factor a matrix as Y Z (mode gamma or robba)"},
        {"check-product", "check that Y Z equals the given matrix"},
        {"descend", "move a module to the bounded ring along a change of basis"},
        {"glue", "glue two modules along a matrix into one lattice"},
        {"horizontal", "horizontal sections of a connection"},
        {"probe-nilpotence", "probe whether the connection is quasi-nilpotent"},
        {"slopes", "Newton slopes of a constant Frobenius"},
        {"average-projector", "average a projector over a Frobenius or a finite group"},
        {"companion", "iterate of the induced Frobenius on a companion module"},
        {"lfunction", "truncated Euler product at one place"},
        {"trace-check", "compare the Euler product with a cohomological quotient"},
        {"compat", "compare characteristic polynomials across places"},
        {"purity", "check that reciprocal roots have the expected weight"},
        {"pole-order", "order of the pole at q^-d"},
    };
    const auto it = text.find(command);
    return it == text.end() ? std::string() : it->second;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sigma-nabla modules, Frobenius structures and L-function checks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(sigmod_version()));

    std::string p, f, prec, window, kmax, nmax, tol, out_path;
    app.add_option("--p", p, "prime p");
    app.add_option("--f", f, "residue degree f, q = p^f (default 1)");
    app.add_option("--prec", prec, "relative precision N_rel (default 12)");
    app.add_option("--window", window, "maximal series window width (default 256, env SIGMA_NABLA_MAX_WINDOW)");
    app.add_option("--kmax", kmax, "degree bound for horizontal sections (default 32)");
    app.add_option("--nmax", nmax, "step bound for the nilpotence probe (default 30)");
    app.add_option("--tol", tol, "relative tolerance for purity (default 1e-6)");
    app.add_option("--out", out_path, "write the report here instead of stdout");

    std::string input_path = "-";
    std::string mode;
    for (const auto& name : split_words(sigmod_commands())) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        if (name == "factor") sub->add_option("mode", mode, "gamma or robba")->required()->check(CLI::IsMember({"gamma", "robba"}));
        sub->add_option("input", input_path, "input document (default: stdin)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    ConfigHandle config;
    if (!config.ptr) {
        std::cerr << "error: cannot create configuration\n";
        return kInputError;
    }
    auto set = [&](const char* key, const std::string& value, const char* origin) {
        if (value.empty()) return true;
        if (sigmod_config_set(config.ptr, key, value.c_str()) == SIGMOD_OK) return true;
        std::cerr << "error: " << origin << ": " << sigmod_last_error() << "\n";
        return false;
    };
    // the environment sets the window cap first so that --window wins
    if (const char* env = std::getenv("SIGMA_NABLA_MAX_WINDOW"); env && *env)
        if (!set("window", env, "SIGMA_NABLA_MAX_WINDOW")) return kInputError;
    if (!set("p", p, "--p") || !set("f", f, "--f") || !set("prec", prec, "--prec") || !set("window", window, "--window") ||
        !set("kmax", kmax, "--kmax") || !set("nmax", nmax, "--nmax") || !set("tol", tol, "--tol") || !set("mode", mode, "mode"))
        return kInputError;

    std::string input;
    if (!read_input(input_path, input)) {
        std::cerr << "error: cannot read " << input_path << "\n";
        return kInputError;
    }
    input = normalize_newlines(input);

    sigmod_report* report = nullptr;
    const sigmod_status status = sigmod_run(config.ptr, command.c_str(), input.data(), input.size(), &report);
    if (!report) {
        std::cerr << "error: " << sigmod_status_name(status) << ": " << sigmod_last_error() << "\n";
        return kInputError;
    }
    const int rc = sigmod_report_exit_code(report);
    if (status != SIGMOD_OK) std::cerr << "error: " << sigmod_status_name(status) << ": " << sigmod_last_error() << "\n";

    if (out_path.empty()) {
        std::cout << sigmod_report_text(report);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << sigmod_report_text(report);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            sigmod_report_free(report);
            return kInputError;
        }
    }
    std::cerr << sigmod_report_verdict(report) << "\n";
    sigmod_report_free(report);
    return rc;
}
