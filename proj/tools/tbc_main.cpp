#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbc/tbc.h"

namespace {

int fail(int code) {
    std::fprintf(stderr, "error: %s\n", tbc_last_error());
    return code;
}

void print_report(char* report) {
    if (report) {
        std::fputs(report, stdout);
        tbc_string_free(report);
    }
}

struct ConfigGuard {
    tbc_config* c = nullptr;
    ~ConfigGuard() { tbc_config_free(c); }
};

bool parse_domain(const std::string& s, double& lo, double& hi) {
    size_t comma = s.find(',');
    if (comma == std::string::npos) return false;
    try {
        size_t p1 = 0, p2 = 0;
        lo = std::stod(s.substr(0, comma), &p1);
        hi = std::stod(s.substr(comma + 1), &p2);
        return p1 == comma && p2 == s.size() - comma - 1;
    } catch (...) {
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D Schrodinger solver with exact transparent boundary conditions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tbc_version()));

    std::string config_path, out_path, ops_path, mode, kind = "analytic", domain, curve_csv;
    std::string n_spec;
    double half_width = 0.0;
    std::vector<std::string> compare_paths;

    auto* pre = app.add_subcommand("precompute", "build and save the boundary operator");
    pre->add_option("--config", config_path, "config file")->required();
    pre->add_option("--out", out_path, "operator output file")->required();

    auto* run = app.add_subcommand("run", "march the configured problem");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--ops", ops_path, "operator file (overrides config)");
    run->add_option("--mode", mode, "tbc_butterfly | tbc_direct | dirichlet");

    auto* ref = app.add_subcommand("reference", "emit a reference trajectory");
    ref->add_option("--config", config_path, "config file")->required();
    ref->add_option("--kind", kind, "analytic | dirichlet")->required();
    ref->add_option("--L", half_width, "enlarged half-width for dirichlet kind");

    auto* cmp = app.add_subcommand("compare", "max-L2 distance between trajectories");
    cmp->add_option("files", compare_paths, "two trajectories, or a series plus reference")
        ->expected(2, -1);
    cmp->add_option("--domain", domain, "restrict to lo,hi");
    cmp->add_option("--curve", curve_csv, "write per-time error curve CSV");

    auto* ben = app.add_subcommand("bench", "timing benchmark over a list of N");
    ben->add_option("--config", config_path, "config file")->required();
    ben->add_option("--N", n_spec, "comma-separated step counts")->required();

    CLI11_PARSE(app, argc, argv);

    int rc = TBC_OK;
    char* report = nullptr;

    if (pre->parsed() || run->parsed() || ref->parsed() || ben->parsed()) {
        ConfigGuard cfg;
        rc = tbc_config_parse_file(config_path.c_str(), &cfg.c);
        if (rc != TBC_OK) return fail(rc);

        if (pre->parsed()) {
            rc = tbc_precompute(cfg.c, out_path.c_str(), &report);
        } else if (run->parsed()) {
            rc = tbc_run(cfg.c, ops_path.empty() ? nullptr : ops_path.c_str(),
                         mode.empty() ? nullptr : mode.c_str(), &report);
        } else if (ref->parsed()) {
            rc = tbc_reference(cfg.c, kind.c_str(), half_width, &report);
        } else {
            std::vector<int> ns;
            size_t pos = 0;
            try {
                while (pos < n_spec.size()) {
                    size_t used = 0;
                    ns.push_back(std::stoi(n_spec.substr(pos), &used));
                    pos += used;
                    if (pos < n_spec.size() && n_spec[pos] == ',') ++pos;
                }
            } catch (...) {
                std::fprintf(stderr, "error: bad --N list '%s'\n", n_spec.c_str());
                return TBC_ERR_CONFIG;
            }
            rc = tbc_bench(cfg.c, ns.data(), int(ns.size()), &report);
        }
        print_report(report);
        return rc == TBC_OK ? 0 : fail(rc);
    }

    // compare
    double lo = 0.0, hi = 0.0;
    if (!domain.empty() && !parse_domain(domain, lo, hi)) {
        std::fprintf(stderr, "error: bad --domain '%s' (expected lo,hi)\n", domain.c_str());
        return TBC_ERR_CONFIG;
    }
    if (compare_paths.size() == 2) {
        double max_l2 = 0.0;
        rc = tbc_compare(compare_paths[0].c_str(), compare_paths[1].c_str(), lo, hi,
                         curve_csv.empty() ? nullptr : curve_csv.c_str(), &max_l2, &report);
    } else {
        std::vector<const char*> ps;
        for (const auto& p : compare_paths) ps.push_back(p.c_str());
        rc = tbc_compare_series(ps.data(), int(ps.size()), lo, hi, &report);
    }
    print_report(report);
    return rc == TBC_OK ? 0 : fail(rc);
}
