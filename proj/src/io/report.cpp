#include "io/report.hpp"

namespace ttlift::io {

using nlohmann::ordered_json;

ordered_json build_report(const ModelConfig& cfg, const std::vector<std::string>& groups,
                          const std::vector<verify::Entry>& entries) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["config"] = to_json(cfg);
    j["checks"] = groups.empty() ? verify::check_groups() : groups;
    j["entries"] = verify::entries_json(entries);
    int pass = 0, fail = 0, skipped = 0, info_fail = 0;
    for (const auto& e : entries) {
        if (e.status == verify::Status::skipped) ++skipped;
        else if (e.status == verify::Status::pass) ++pass;
        else if (e.asserted) ++fail;
        else ++info_fail;
    }
    j["overall"] = {{"status", verify::all_pass(entries) ? "pass" : "fail"},
                    {"passed", pass},
                    {"failed", fail},
                    {"informational_nonzero", info_fail},
                    {"skipped", skipped}};
    return j;
}

ordered_json series_json(const Series& s) {
    const auto& ring = s.ring();
    ordered_json terms = ordered_json::array();
    for (const auto& t : s.terms()) {
        ordered_json mono = ordered_json::array();
        for (int v = 0; v < ring->num_vars(); ++v) {
            int e = mono_exp(t.mono, v);
            if (e == 0) continue;
            VarId id = ring->var(v);
            mono.push_back({int(id.sector), id.level, id.flavor + 1, e});
        }
        ordered_json o;
        o["re"] = t.coeff.re_string();
        if (!t.coeff.is_real()) o["im"] = t.coeff.im_string();
        o["mono"] = mono;
        terms.push_back(o);
    }
    return {{"valid_degree", s.valid_degree()}, {"text", s.to_string()}, {"terms", terms}};
}

ordered_json matrix_json(const SeriesMatrix& m) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json r = ordered_json::array();
        for (int k = 0; k < m.cols(); ++k) r.push_back(series_json(m(i, k)));
        a.push_back(r);
    }
    return a;
}

const std::vector<std::string>& lift_targets() {
    static const std::vector<std::string> t = {"u", "M", "t_frame", "eta_hat", "h_hat", "higgs_hat", "chern_hat", "curvature_hat"};
    return t;
}

ordered_json lift_dump(const big::BigContext& ctx, const ModelConfig& cfg, const std::string& target) {
    using big::Frame;
    const int N = ctx.N();
    const bool dw = ctx.normalization() == big::Normalization::dw_rescaled;
    ordered_json j;
    j["target"] = target;
    j["model"] = cfg.name;
    j["normalization"] = normalization_name(ctx.normalization());
    j["truncation"] = {{"n_max", ctx.n_max()}, {"d_max", ctx.d_max()}, {"i_max", ctx.i_max()}};
    j["index"] = "component index = level * N + (flavor - 1)";
    if (target == "u") {
        auto up = dw ? ctx.dw_rescaled(ctx.u()) : ctx.u();
        auto low = dw ? ctx.dw_rescaled(ctx.u_lower()) : ctx.u_lower();
        ordered_json a = ordered_json::array(), b = ordered_json::array();
        for (int s = 0; s < N; ++s) {
            a.push_back(series_json(up[s]));
            b.push_back(series_json(low[s]));
        }
        j["u"] = a;
        j["u_lower"] = b;
        j["fixed_point_iterations"] = ctx.fixed_point_iterations();
    } else if (target == "M") {
        SeriesMatrix m = ctx.M();
        if (dw)
            for (int s = 0; s < N; ++s)
                for (int a = 0; a < N; ++a) m(s, a) = ctx.dw_rescaled(m(s, a));
        j["M"] = matrix_json(m);
    } else if (target == "t_frame") {
        ordered_json a = ordered_json::array();
        for (int n = 0; n <= ctx.n_max(); ++n)
            for (int al = 0; al < N; ++al) {
                auto v = ctx.to_coord(ctx.basis(Frame::tframe, n, al));
                ordered_json comps = ordered_json::array();
                for (const auto& c : v.c) comps.push_back(series_json(c));
                a.push_back({{"level", n}, {"flavor", al + 1}, {"coordinates", comps}});
            }
        j["t_frame"] = a;
    } else if (target == "eta_hat") {
        j["eta_hat"] = matrix_json(ctx.eta_hat());
    } else if (target == "h_hat") {
        j["h_hat"] = matrix_json(ctx.h_hat());
    } else if (target == "higgs_hat" || target == "chern_hat") {
        ordered_json a = ordered_json::array();
        for (int al = 0; al < N; ++al) {
            auto x = ctx.basis(Frame::tframe, 0, al);
            a.push_back({{"direction", al + 1}, {"matrix", matrix_json(target == "higgs_hat" ? ctx.C_hat(x) : ctx.Gamma_hat(x))}});
        }
        j[target] = a;
        j["note"] = "T-frame matrices along tau_{0,a}; every descendant direction gives zero";
    } else if (target == "curvature_hat") {
        ordered_json a = ordered_json::array();
        for (int al = 0; al < N; ++al)
            for (int be = 0; be < N; ++be) {
                auto x = ctx.basis(Frame::tframe, 0, al);
                auto y = ctx.basis(Frame::tframe, 0, be).conj();
                a.push_back({{"direction", al + 1}, {"conj_direction", be + 1}, {"matrix", matrix_json(-ctx.apply(y, ctx.Gamma_hat(x)))}});
            }
        j["curvature_hat"] = a;
    } else {
        throw std::out_of_range("unknown lift target '" + target + "'");
    }
    return j;
}

}  // namespace ttlift::io
