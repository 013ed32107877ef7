#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ttlift/ttlift.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

int exit_code(ttl_status st) {
    if (st == TTL_OK) return kExitPass;
    return st == TTL_ERR_INTERNAL ? kExitInternal : kExitConfig;
}

int report_error(ttl_status st) {
    std::cerr << "ttlift: " << ttl_last_error() << "\n";
    return exit_code(st);
}

struct Owned {
    char* p = nullptr;
    ~Owned() { ttl_string_free(p); }
};

struct Common {
    std::string model;
    std::optional<int> nmax, dmax, imax;
    std::optional<double> tol;
    std::optional<std::string> mode, normalization;
    std::optional<unsigned long long> seed;
    std::string out;

    void add_to(CLI::App* app) {
        app->add_option("--model", model, "built-in name, config path, or name under $TTLIFT_MODEL_DIR")->required();
        app->add_option("--nmax", nmax, "descendant level truncation");
        app->add_option("--dmax", dmax, "total degree truncation");
        app->add_option("--imax", imax, "deformed flat coordinate depth (>= nmax)");
        app->add_option("--tol", tol, "tolerance in float mode");
        app->add_option("--mode", mode, "rational | float")->check(CLI::IsMember({"rational", "float"}));
        app->add_option("--seed", seed, "sampling seed");
        app->add_option("--normalization", normalization, "liu | dw-rescaled")->check(CLI::IsMember({"liu", "dw-rescaled"}));
        app->add_option("--out", out, "output file (default stdout)");
    }

    std::string overrides() const {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        if (nmax) o["n_max"] = *nmax;
        if (dmax) o["d_max"] = *dmax;
        if (imax) o["i_max"] = *imax;
        if (tol) o["tolerance"] = *tol;
        if (mode) o["scalar_mode"] = *mode;
        if (seed) o["seed"] = *seed;
        if (normalization) o["normalization"] = *normalization;
        return o.dump();
    }
};

bool write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "ttlift: cannot write '" << path << "'\n";
        return false;
    }
    f << text;
    return bool(f);
}

int cmd_verify(const Common& c, const std::string& checks, bool json_stdout) {
    ttl_context* ctx = nullptr;
    ttl_status st = ttl_context_create(c.model.c_str(), c.overrides().c_str(), &ctx);
    if (st != TTL_OK) return report_error(st);
    Owned report, table;
    int pass = 0;
    st = ttl_verify(ctx, checks.c_str(), &report.p, &table.p, &pass);
    ttl_context_free(ctx);
    if (st != TTL_OK) return report_error(st);
    if (json_stdout) {
        std::cout << report.p;
    } else {
        std::cout << table.p;
        if (!c.out.empty() && !write_out(c.out, report.p)) return kExitConfig;
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_lift(const Common& c, const std::string& target) {
    ttl_context* ctx = nullptr;
    ttl_status st = ttl_context_create(c.model.c_str(), c.overrides().c_str(), &ctx);
    if (st != TTL_OK) return report_error(st);
    Owned dump;
    st = ttl_lift(ctx, target.c_str(), &dump.p);
    ttl_context_free(ctx);
    if (st != TTL_OK) return report_error(st);
    return write_out(c.out, dump.p) ? kExitPass : kExitConfig;
}

int cmd_models(bool json, const std::string& show) {
    Owned text;
    ttl_status st = show.empty() ? ttl_models_list(&text.p) : ttl_model_config_builtin(show.c_str(), &text.p);
    if (st != TTL_OK) return report_error(st);
    if (json || !show.empty()) {
        std::cout << text.p;
        if (show.empty()) std::cout << "\n";
        return kExitPass;
    }
    for (const auto& m : nlohmann::json::parse(text.p))
        std::printf("%-10s %s\n", m["name"].get<std::string>().c_str(), m["summary"].get<std::string>().c_str());
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ttlift: lift Frobenius / tt* structures to the truncated big phase space and verify them"};
    app.set_version_flag("--version", std::string(ttl_version()));
    app.require_subcommand(1);

    Common vc, lc;
    std::string checks = "all";
    bool json_stdout = false;
    auto* verify = app.add_subcommand("verify", "run identity checks; exit 0 all pass, 1 failure, 2 bad model or config");
    vc.add_to(verify);
    verify->add_option("--check", checks, "comma list of model,lift,frame,aux,metric,saito_hat,ttstar_hat,lax or all");
    verify->add_flag("--json", json_stdout, "print the JSON report instead of the table");

    std::string target;
    auto* lift = app.add_subcommand("lift", "dump a lifted object");
    lc.add_to(lift);
    lift->add_option("--target", target, "u, M, t_frame, eta_hat, h_hat, higgs_hat, chern_hat, curvature_hat")->required();

    bool models_json = false;
    std::string show;
    auto* models = app.add_subcommand("models", "list built-in models");
    models->add_flag("--json", models_json, "JSON listing");
    models->add_option("--show", show, "print the canonical config of a built-in model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    if (verify->parsed()) return cmd_verify(vc, checks, json_stdout);
    if (lift->parsed()) return cmd_lift(lc, target);
    return cmd_models(models_json, show);
}
