#include "tbc/tbc.h"

#include <cstring>
#include <string>
#include <vector>

#include "tbc/config.hpp"
#include "tbc/driver.hpp"
#include "tbc/operator_io.hpp"
#include "tbc/quadrature.hpp"

namespace {

thread_local std::string g_last_error;

struct ConfigHandle {
    tbc::SimulationConfig cfg;
    std::string canonical;
};

char* dup_string(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void set_report(char** report, const std::string& text) {
    if (report) *report = dup_string(text);
}

template <typename F>
int guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const tbc::ConfigError& e) {
        g_last_error = e.what();
        return TBC_ERR_CONFIG;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return TBC_ERR_CONFIG;
    } catch (const tbc::OperatorMismatchError& e) {
        g_last_error = e.what();
        return TBC_ERR_OPERATOR;
    } catch (const tbc::OperatorIOError& e) {
        g_last_error = e.what();
        return TBC_ERR_OPERATOR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TBC_ERR_NUMERIC;
    }
}

const ConfigHandle* unwrap(const tbc_config* c) {
    return reinterpret_cast<const ConfigHandle*>(c);
}

}  // namespace

extern "C" {

const char* tbc_version(void) { return "1.0.0"; }

const char* tbc_last_error(void) { return g_last_error.c_str(); }

void tbc_string_free(char* s) { delete[] s; }

int tbc_config_parse_file(const char* path, tbc_config** out) {
    return guarded([&] {
        if (!path || !out) throw tbc::ConfigError("config: null argument");
        auto* h = new ConfigHandle{tbc::SimulationConfig::parse_file(path), ""};
        h->canonical = h->cfg.canonical();
        *out = reinterpret_cast<tbc_config*>(h);
        return TBC_OK;
    });
}

int tbc_config_parse_string(const char* text, tbc_config** out) {
    return guarded([&] {
        if (!text || !out) throw tbc::ConfigError("config: null argument");
        auto* h = new ConfigHandle{tbc::SimulationConfig::parse_string(text), ""};
        h->canonical = h->cfg.canonical();
        *out = reinterpret_cast<tbc_config*>(h);
        return TBC_OK;
    });
}

const char* tbc_config_canonical(const tbc_config* c) {
    return c ? unwrap(c)->canonical.c_str() : "";
}

void tbc_config_free(tbc_config* c) { delete reinterpret_cast<ConfigHandle*>(c); }

int tbc_precompute(const tbc_config* c, const char* out_path, char** report) {
    return guarded([&] {
        if (!c || !out_path) throw tbc::ConfigError("precompute: null argument");
        set_report(report, tbc::cmd_precompute(unwrap(c)->cfg, out_path));
        return TBC_OK;
    });
}

int tbc_run(const tbc_config* c, const char* ops_path, const char* mode, char** report) {
    return guarded([&] {
        if (!c) throw tbc::ConfigError("run: null config");
        set_report(report, tbc::cmd_run(unwrap(c)->cfg, ops_path ? ops_path : "",
                                        mode ? mode : ""));
        return TBC_OK;
    });
}

int tbc_reference(const tbc_config* c, const char* kind, double L, char** report) {
    return guarded([&] {
        if (!c || !kind) throw tbc::ConfigError("reference: null argument");
        set_report(report, tbc::cmd_reference(unwrap(c)->cfg, kind, L));
        return TBC_OK;
    });
}

int tbc_compare(const char* path_a, const char* path_b, double lo, double hi,
                const char* curve_csv, double* max_l2, char** report) {
    return guarded([&] {
        if (!path_a || !path_b) throw tbc::ConfigError("compare: null path");
        tbc::CompareReport rep =
            tbc::cmd_compare(path_a, path_b, lo, hi, curve_csv ? curve_csv : "");
        if (max_l2) *max_l2 = rep.max_l2;
        set_report(report, rep.text);
        return TBC_OK;
    });
}

int tbc_compare_series(const char* const* paths, int n, double lo, double hi, char** report) {
    return guarded([&] {
        if (!paths || n < 1) throw tbc::ConfigError("compare: empty series");
        std::vector<std::string> ps(paths, paths + n);
        set_report(report, tbc::cmd_compare_series(ps, lo, hi).text);
        return TBC_OK;
    });
}

int tbc_bench(const tbc_config* c, const int* n_list, int n, char** report) {
    return guarded([&] {
        if (!c || !n_list || n < 1) throw tbc::ConfigError("bench: null argument");
        tbc::BenchSummary s = tbc::cmd_bench(unwrap(c)->cfg, std::vector<int>(n_list, n_list + n));
        set_report(report, s.text);
        if (!s.butterfly_ok) {
            g_last_error = "bench: butterfly growth factor exceeds 2.6 per doubling";
            return TBC_ERR_NUMERIC;
        }
        return TBC_OK;
    });
}

}  // extern "C"
