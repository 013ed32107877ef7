#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "io/report.hpp"
#include "ttlift/ttlift.h"

struct ttl_context {
    ttlift::io::ModelConfig cfg;
    std::unique_ptr<ttlift::big::BigContext> ctx;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

ttl_status fail(ttl_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <class F>
ttl_status guarded(F&& f) {
    using namespace ttlift;
    g_last_error.clear();
    try {
        return f();
    } catch (const io::ConfigError& e) {
        return fail(TTL_ERR_CONFIG, e.what());
    } catch (const small::InvalidModel& e) {
        return fail(TTL_ERR_MODEL, std::string("invalid model: ") + e.what());
    } catch (const small::IntegrabilityError& e) {
        return fail(TTL_ERR_MODEL, std::string("integrability: ") + e.what());
    } catch (const big::TruncationError& e) {
        return fail(TTL_ERR_TRUNCATION, std::string("truncation: ") + e.what());
    } catch (const std::out_of_range& e) {
        return fail(TTL_ERR_UNKNOWN_TARGET, e.what());
    } catch (const ContextError& e) {
        return fail(TTL_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TTL_ERR_INVALID_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(TTL_ERR_INTERNAL, std::string("internal error: ") + e.what());
    }
}

void apply_overrides(ttlift::io::ModelConfig& c, const nlohmann::ordered_json& o) {
    using ttlift::io::ConfigError;
    if (!o.is_object()) throw ConfigError("/", "overrides must be an object");
    bool imax_given = o.contains("i_max");
    for (auto it = o.begin(); it != o.end(); ++it) {
        const std::string& k = it.key();
        const auto& v = it.value();
        std::string p = "/" + k;
        auto integer = [&]() {
            if (!v.is_number_integer()) throw ConfigError(p, "expected an integer");
            return v.get<int>();
        };
        if (k == "n_max") c.truncation.n_max = integer();
        else if (k == "d_max") c.truncation.d_max = integer();
        else if (k == "i_max") c.truncation.i_max = integer();
        else if (k == "tolerance") {
            if (!v.is_number() || v.get<double>() < 0) throw ConfigError(p, "expected a nonnegative number");
            c.tolerance = v.get<double>();
        } else if (k == "seed") {
            if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(p, "expected a nonnegative integer");
            c.seed = v.get<std::uint64_t>();
        } else if (k == "scalar_mode") {
            std::string m = v.is_string() ? v.get<std::string>() : "";
            if (m == "rational") c.scalar_mode = ttlift::ScalarMode::rational;
            else if (m == "float") c.scalar_mode = ttlift::ScalarMode::floating;
            else throw ConfigError(p, "expected \"rational\" or \"float\"");
        } else if (k == "normalization") {
            std::string m = v.is_string() ? v.get<std::string>() : "";
            if (m == "liu") c.normalization = ttlift::big::Normalization::liu;
            else if (m == "dw-rescaled") c.normalization = ttlift::big::Normalization::dw_rescaled;
            else throw ConfigError(p, "expected \"liu\" or \"dw-rescaled\"");
        } else {
            throw ConfigError(p, "unknown override");
        }
    }
    // raising n_max alone drags i_max along
    if (!imax_given && c.truncation.i_max < c.truncation.n_max) c.truncation.i_max = c.truncation.n_max;
    ttlift::io::check_truncation(c.truncation);
}

}  // namespace

extern "C" {

const char* ttl_version(void) { return ttlift::io::kToolVersion; }

const char* ttl_last_error(void) { return g_last_error.c_str(); }

void ttl_string_free(char* s) { std::free(s); }

ttl_status ttl_models_list(char** out_json) {
    return guarded([&]() {
        if (!out_json) return fail(TTL_ERR_INVALID_ARG, "out_json is NULL");
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& m : ttlift::io::builtin_models()) a.push_back({{"name", m.name}, {"summary", m.summary}});
        *out_json = dup_string(a.dump(2));
        return TTL_OK;
    });
}

ttl_status ttl_model_config_builtin(const char* name, char** out_json) {
    return guarded([&]() {
        if (!name || !out_json) return fail(TTL_ERR_INVALID_ARG, "NULL argument");
        *out_json = dup_string(ttlift::io::serialize(ttlift::io::builtin_config(name)));
        return TTL_OK;
    });
}

ttl_status ttl_context_create(const char* model, const char* overrides_json, ttl_context** out) {
    return guarded([&]() {
        if (!model || !out) return fail(TTL_ERR_INVALID_ARG, "NULL argument");
        *out = nullptr;
        auto h = std::make_unique<ttl_context>();
        std::string spec(model);
        size_t first = spec.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && spec[first] == '{') {
            nlohmann::ordered_json j;
            try {
                j = nlohmann::ordered_json::parse(spec);
            } catch (const nlohmann::json::parse_error& e) {
                throw ttlift::io::ConfigError("/", std::string("malformed JSON: ") + e.what());
            }
            h->cfg = ttlift::io::parse_config(j);
        } else {
            const char* dir = std::getenv("TTLIFT_MODEL_DIR");
            h->cfg = ttlift::io::resolve_model(spec, dir ? dir : "");
        }
        if (overrides_json && *overrides_json) {
            nlohmann::ordered_json o;
            try {
                o = nlohmann::ordered_json::parse(overrides_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw ttlift::io::ConfigError("/", std::string("malformed overrides: ") + e.what());
            }
            apply_overrides(h->cfg, o);
        }
        h->ctx = std::make_unique<ttlift::big::BigContext>(ttlift::io::to_model(h->cfg), h->cfg.truncation,
                                                           h->cfg.normalization);
        *out = h.release();
        return TTL_OK;
    });
}

void ttl_context_free(ttl_context* ctx) { delete ctx; }

ttl_status ttl_context_config(const ttl_context* ctx, char** out_json) {
    return guarded([&]() {
        if (!ctx || !out_json) return fail(TTL_ERR_INVALID_ARG, "NULL argument");
        *out_json = dup_string(ttlift::io::serialize(ctx->cfg));
        return TTL_OK;
    });
}

ttl_status ttl_verify(ttl_context* ctx, const char* checks_csv, char** report_json, char** table, int* all_pass) {
    return guarded([&]() {
        if (!ctx) return fail(TTL_ERR_INVALID_ARG, "ctx is NULL");
        ttlift::verify::Options opt;
        opt.groups = ttlift::verify::parse_groups(checks_csv ? checks_csv : "");
        opt.seed = ctx->cfg.seed;
        opt.tolerance = ctx->cfg.tolerance;
        auto entries = ttlift::verify::run_checks(*ctx->ctx, opt);
        if (report_json) *report_json = dup_string(ttlift::io::build_report(ctx->cfg, opt.groups, entries).dump(2) + "\n");
        if (table) *table = dup_string(ttlift::verify::table(entries));
        if (all_pass) *all_pass = ttlift::verify::all_pass(entries) ? 1 : 0;
        return TTL_OK;
    });
}

ttl_status ttl_lift(ttl_context* ctx, const char* target, char** out_json) {
    return guarded([&]() {
        if (!ctx || !target || !out_json) return fail(TTL_ERR_INVALID_ARG, "NULL argument");
        *out_json = dup_string(ttlift::io::lift_dump(*ctx->ctx, ctx->cfg, target).dump(2) + "\n");
        return TTL_OK;
    });
}

}  // extern "C"
