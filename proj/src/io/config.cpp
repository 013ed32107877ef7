#include "io/config.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ttlift::io {

using nlohmann::ordered_json;

std::string mode_name(ScalarMode m) { return m == ScalarMode::rational ? "rational" : "float"; }
std::string normalization_name(big::Normalization n) { return n == big::Normalization::liu ? "liu" : "dw-rescaled"; }

namespace {

std::string child(const std::string& p, const std::string& key) { return p + "/" + key; }
std::string child(const std::string& p, size_t i) { return p + "/" + std::to_string(i); }

void expect_keys(const ordered_json& j, const std::string& p, const std::set<std::string>& allowed,
                 const std::set<std::string>& required) {
    if (!j.is_object()) throw ConfigError(p.empty() ? "/" : p, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(child(p, it.key()), "unknown key");
    for (const auto& k : required)
        if (!j.contains(k)) throw ConfigError(child(p, k), "missing required key");
}

int get_int(const ordered_json& j, const std::string& p) {
    if (!j.is_number_integer()) throw ConfigError(p, "expected an integer");
    return j.get<int>();
}

std::string get_string(const ordered_json& j, const std::string& p) {
    if (!j.is_string()) throw ConfigError(p, "expected a string");
    return j.get<std::string>();
}

// Exact "p/q" in rational mode; decimals also allowed in float mode. Canonicalised.
std::string get_number(const ordered_json& j, const std::string& p, ScalarMode mode) {
    std::string s;
    if (j.is_number_integer()) s = std::to_string(j.get<long long>());
    else if (j.is_string()) s = j.get<std::string>();
    else if (j.is_number_float() && mode == ScalarMode::floating) return j.dump();
    else throw ConfigError(p, "expected a rational string \"p/q\"");
    try {
        return parse_rational(s).get_str();
    } catch (const std::invalid_argument& e) {
        if (mode == ScalarMode::floating) {
            try {
                Scalar::parse(s, "0", mode);
                return s;
            } catch (const std::exception&) {
            }
        }
        throw ConfigError(p, e.what());
    }
}

RationalMatrix get_rmatrix(const ordered_json& j, const std::string& p, ScalarMode mode, int rows, int cols) {
    if (!j.is_array() || (rows >= 0 && int(j.size()) != rows)) throw ConfigError(p, "expected " + std::to_string(rows) + " rows");
    RationalMatrix m;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        if (!row.is_array() || (cols >= 0 && int(row.size()) != cols))
            throw ConfigError(child(p, i), "expected " + std::to_string(cols) + " entries");
        std::vector<std::string> r;
        for (size_t k = 0; k < row.size(); ++k) r.push_back(get_number(row[k], child(child(p, i), k), mode));
        m.push_back(r);
    }
    return m;
}

RawSeries get_series(const ordered_json& j, const std::string& p, ScalarMode mode, int N) {
    if (!j.is_array()) throw ConfigError(p, "expected a term list");
    RawSeries out;
    for (size_t i = 0; i < j.size(); ++i) {
        std::string tp = child(p, i);
        expect_keys(j[i], tp, {"re", "im", "mono"}, {});
        RawTerm t;
        if (j[i].contains("re")) t.re = get_number(j[i]["re"], child(tp, "re"), mode);
        if (j[i].contains("im")) t.im = get_number(j[i]["im"], child(tp, "im"), mode);
        if (j[i].contains("mono")) {
            const auto& mj = j[i]["mono"];
            std::string mp = child(tp, "mono");
            if (!mj.is_array()) throw ConfigError(mp, "expected a list of [sector, level, flavor, exponent]");
            for (size_t k = 0; k < mj.size(); ++k) {
                std::string ep = child(mp, k);
                if (!mj[k].is_array() || mj[k].size() != 4) throw ConfigError(ep, "expected [sector, level, flavor, exponent]");
                std::array<int, 4> e{};
                for (int q = 0; q < 4; ++q) e[q] = get_int(mj[k][q], child(ep, q));
                if (e[0] != 0 && e[0] != 1) throw ConfigError(child(ep, 0), "sector must be 0 or 1");
                if (e[1] != 0) throw ConfigError(child(ep, 1), "model data lives on level 0");
                if (e[2] < 1 || e[2] > N) throw ConfigError(child(ep, 2), "flavor out of range");
                if (e[3] < 1 || e[3] > kMaxExponent) throw ConfigError(child(ep, 3), "exponent out of range");
                t.mono.push_back(e);
            }
        }
        out.push_back(t);
    }
    return out;
}

RawMatrix get_smatrix(const ordered_json& j, const std::string& p, ScalarMode mode, int N) {
    if (!j.is_array() || int(j.size()) != N) throw ConfigError(p, "expected " + std::to_string(N) + " rows");
    RawMatrix m;
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || int(j[i].size()) != N) throw ConfigError(child(p, i), "expected " + std::to_string(N) + " entries");
        std::vector<RawSeries> row;
        for (size_t k = 0; k < j[i].size(); ++k) row.push_back(get_series(j[i][k], child(child(p, i), k), mode, N));
        m.push_back(row);
    }
    return m;
}

ordered_json series_json(const RawSeries& s) {
    ordered_json a = ordered_json::array();
    for (const auto& t : s) {
        ordered_json o;
        o["re"] = t.re;
        if (t.im != "0") o["im"] = t.im;
        ordered_json m = ordered_json::array();
        for (const auto& e : t.mono) m.push_back({e[0], e[1], e[2], e[3]});
        o["mono"] = m;
        a.push_back(o);
    }
    return a;
}

ordered_json smatrix_json(const RawMatrix& m) {
    ordered_json a = ordered_json::array();
    for (const auto& row : m) {
        ordered_json r = ordered_json::array();
        for (const auto& s : row) r.push_back(series_json(s));
        a.push_back(r);
    }
    return a;
}

ordered_json rmatrix_json(const RationalMatrix& m) {
    ordered_json a = ordered_json::array();
    for (const auto& row : m) a.push_back(row);
    return a;
}

}  // namespace

void check_truncation(const big::Truncation& t) {
    if (t.n_max < 0 || t.n_max > 4) throw ConfigError("/truncation/n_max", "must be in 0..4");
    if (t.d_max < 1 || t.d_max > kMaxExponent) throw ConfigError("/truncation/d_max", "must be in 1..15");
    if (t.i_max < t.n_max) throw ConfigError("/truncation/i_max", "must be at least n_max");
}

ModelConfig parse_config(const ordered_json& j) {
    expect_keys(j, "",
                {"name", "note", "N", "eta", "unit_index", "prepotential", "euler", "real_structure", "potential_A", "cv",
                 "truncation", "scalar_mode", "tolerance", "seed", "theta_constants", "normalization"},
                {"name", "N", "eta", "unit_index", "prepotential", "euler"});
    ModelConfig c;
    if (j.contains("scalar_mode")) {
        std::string m = get_string(j["scalar_mode"], "/scalar_mode");
        if (m == "rational") c.scalar_mode = ScalarMode::rational;
        else if (m == "float") c.scalar_mode = ScalarMode::floating;
        else throw ConfigError("/scalar_mode", "expected \"rational\" or \"float\"");
    }
    const ScalarMode mode = c.scalar_mode;
    c.name = get_string(j["name"], "/name");
    if (j.contains("note")) c.note = get_string(j["note"], "/note");
    c.N = get_int(j["N"], "/N");
    if (c.N < 1 || c.N > 4) throw ConfigError("/N", "must be in 1..4");
    const int N = c.N;
    c.eta = get_rmatrix(j["eta"], "/eta", mode, N, N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < a; ++b)
            if (parse_rational(c.eta[a][b]) != parse_rational(c.eta[b][a]) && mode == ScalarMode::rational)
                throw ConfigError("/eta/" + std::to_string(a) + "/" + std::to_string(b), "eta is not symmetric");
    c.unit_index = get_int(j["unit_index"], "/unit_index");
    if (c.unit_index < 1 || c.unit_index > N) throw ConfigError("/unit_index", "out of range 1..N");
    c.prepotential = get_series(j["prepotential"], "/prepotential", mode, N);
    for (const auto& t : c.prepotential)
        for (const auto& e : t.mono)
            if (e[0] != 0) throw ConfigError("/prepotential", "prepotential must be holomorphic");
    expect_keys(j["euler"], "/euler", {"Q", "r", "weight_d"}, {"Q", "r", "weight_d"});
    c.euler_Q = get_rmatrix(j["euler"]["Q"], "/euler/Q", mode, N, N);
    {
        const auto& r = j["euler"]["r"];
        if (!r.is_array() || int(r.size()) != N) throw ConfigError("/euler/r", "expected N entries");
        for (size_t i = 0; i < r.size(); ++i) c.euler_r.push_back(get_number(r[i], child("/euler/r", i), mode));
    }
    c.weight_d = get_number(j["euler"]["weight_d"], "/euler/weight_d", mode);
    if (j.contains("real_structure")) {
        const auto& rj = j["real_structure"];
        expect_keys(rj, "/real_structure", {"kind", "matrix", "a"}, {"kind"});
        RawReal r;
        r.kind = get_string(rj["kind"], "/real_structure/kind");
        if (r.kind == "abs_a") {
            if (N != 1) throw ConfigError("/real_structure/kind", "abs_a needs N = 1");
            if (!rj.contains("a")) throw ConfigError("/real_structure/a", "missing required key");
            if (rj.contains("matrix")) throw ConfigError("/real_structure/matrix", "not allowed with abs_a");
            r.a = get_series(rj["a"], "/real_structure/a", mode, N);
        } else if (r.kind == "K" || r.kind == "H") {
            if (!rj.contains("matrix")) throw ConfigError("/real_structure/matrix", "missing required key");
            if (rj.contains("a")) throw ConfigError("/real_structure/a", "only allowed with abs_a");
            r.matrix = get_smatrix(rj["matrix"], "/real_structure/matrix", mode, N);
        } else {
            throw ConfigError("/real_structure/kind", "expected \"K\", \"H\" or \"abs_a\"");
        }
        c.real_structure = r;
    }
    if (j.contains("potential_A")) c.potential_A = get_smatrix(j["potential_A"], "/potential_A", mode, N);
    if (j.contains("cv")) {
        expect_keys(j["cv"], "/cv", {"U", "Q"}, {"U", "Q"});
        RawCV cv;
        cv.U = get_smatrix(j["cv"]["U"], "/cv/U", mode, N);
        cv.Q = get_smatrix(j["cv"]["Q"], "/cv/Q", mode, N);
        c.cv = cv;
    }
    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        expect_keys(t, "/truncation", {"n_max", "d_max", "i_max"}, {"n_max", "d_max", "i_max"});
        c.truncation.n_max = get_int(t["n_max"], "/truncation/n_max");
        c.truncation.d_max = get_int(t["d_max"], "/truncation/d_max");
        c.truncation.i_max = get_int(t["i_max"], "/truncation/i_max");
    }
    check_truncation(c.truncation);
    if (j.contains("tolerance")) {
        if (!j["tolerance"].is_number() || j["tolerance"].get<double>() < 0) throw ConfigError("/tolerance", "expected a nonnegative number");
        c.tolerance = j["tolerance"].get<double>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            throw ConfigError("/seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("theta_constants")) c.theta_constants = get_rmatrix(j["theta_constants"], "/theta_constants", mode, N, -1);
    if (j.contains("normalization")) {
        std::string n = get_string(j["normalization"], "/normalization");
        if (n == "liu") c.normalization = big::Normalization::liu;
        else if (n == "dw-rescaled") c.normalization = big::Normalization::dw_rescaled;
        else throw ConfigError("/normalization", "expected \"liu\" or \"dw-rescaled\"");
    }
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("/", "cannot open '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("/", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

ordered_json to_json(const ModelConfig& c) {
    ordered_json j;
    j["name"] = c.name;
    if (!c.note.empty()) j["note"] = c.note;
    j["N"] = c.N;
    j["eta"] = rmatrix_json(c.eta);
    j["unit_index"] = c.unit_index;
    j["prepotential"] = series_json(c.prepotential);
    j["euler"]["Q"] = rmatrix_json(c.euler_Q);
    j["euler"]["r"] = c.euler_r;
    j["euler"]["weight_d"] = c.weight_d;
    if (c.real_structure) {
        ordered_json r;
        r["kind"] = c.real_structure->kind;
        if (c.real_structure->kind == "abs_a") r["a"] = series_json(c.real_structure->a);
        else r["matrix"] = smatrix_json(c.real_structure->matrix);
        j["real_structure"] = r;
    }
    if (c.potential_A) j["potential_A"] = smatrix_json(*c.potential_A);
    if (c.cv) {
        j["cv"]["U"] = smatrix_json(c.cv->U);
        j["cv"]["Q"] = smatrix_json(c.cv->Q);
    }
    j["truncation"] = {{"n_max", c.truncation.n_max}, {"d_max", c.truncation.d_max}, {"i_max", c.truncation.i_max}};
    j["scalar_mode"] = mode_name(c.scalar_mode);
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    if (c.theta_constants) j["theta_constants"] = rmatrix_json(*c.theta_constants);
    j["normalization"] = normalization_name(c.normalization);
    return j;
}

std::string serialize(const ModelConfig& c) { return to_json(c).dump(2) + "\n"; }

namespace {

Series build_series(const RingPtr& ring, const RawSeries& s) {
    Series out(ring);
    for (const auto& t : s) {
        std::vector<std::pair<VarId, int>> exps;
        for (const auto& e : t.mono) exps.push_back({VarId{Sector(e[0]), e[1], e[2] - 1}, e[3]});
        out += Series::monomial(ring, exps, Scalar::parse(t.re, t.im, ring->mode()));
    }
    return out;
}

SeriesMatrix build_matrix(const RingPtr& ring, const RawMatrix& m) {
    SeriesMatrix out(ring, int(m.size()), int(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t k = 0; k < m[i].size(); ++k) out(int(i), int(k)) = build_series(ring, m[i][k]);
    return out;
}

small::ScalarMatrix build_scalars(const RationalMatrix& m, ScalarMode mode) {
    small::ScalarMatrix out;
    for (const auto& row : m) {
        std::vector<Scalar> r;
        for (const auto& s : row) r.push_back(Scalar::parse(s, "0", mode));
        out.push_back(r);
    }
    return out;
}

}  // namespace

small::FrobeniusModel to_model(const ModelConfig& c) {
    check_truncation(c.truncation);
    small::FrobeniusModel m;
    m.name = c.name;
    m.N = c.N;
    m.ring = make_ring(c.N, 0, c.truncation.d_max + 4, c.scalar_mode);
    m.eta = build_scalars(c.eta, c.scalar_mode);
    m.unit = c.unit_index - 1;
    m.F = build_series(m.ring, c.prepotential);
    m.euler.Q = build_scalars(c.euler_Q, c.scalar_mode);
    for (const auto& r : c.euler_r) m.euler.r.push_back(Scalar::parse(r, "0", c.scalar_mode));
    m.euler.weight_d = Scalar::parse(c.weight_d, "0", c.scalar_mode);
    if (c.real_structure) {
        small::RealStructure r;
        const auto& k = c.real_structure->kind;
        r.kind = k == "K" ? small::RealKind::K : k == "H" ? small::RealKind::H : small::RealKind::abs_a;
        if (r.kind == small::RealKind::abs_a) r.a = build_series(m.ring, c.real_structure->a);
        else r.matrix = build_matrix(m.ring, c.real_structure->matrix);
        m.real = r;
    }
    if (c.potential_A) m.A = build_matrix(m.ring, *c.potential_A);
    if (c.cv) m.cv = small::CVData{build_matrix(m.ring, c.cv->U), build_matrix(m.ring, c.cv->Q)};
    if (c.theta_constants) m.theta_constants = build_scalars(*c.theta_constants, c.scalar_mode);
    return m;
}

// ---- built-in models ----

namespace {

RawTerm term(const std::string& re, std::vector<std::array<int, 4>> mono, const std::string& im = "0") {
    return RawTerm{re, im, std::move(mono)};
}

std::array<int, 4> t(int flavor, int e = 1) { return {0, 0, flavor, e}; }
std::array<int, 4> tb(int flavor, int e = 1) { return {1, 0, flavor, e}; }

std::string negate(const std::string& s) {
    if (s == "0") return s;
    return s[0] == '-' ? s.substr(1) : "-" + s;
}

RawSeries conj_raw(const RawSeries& s) {
    RawSeries out;
    for (auto x : s) {
        x.im = negate(x.im);
        for (auto& e : x.mono) e[0] = 1 - e[0];
        out.push_back(x);
    }
    return out;
}

ModelConfig gravity1d() {
    ModelConfig c;
    c.name = "gravity1d";
    c.note = "one-dimensional pure gravity: eta = 1, F = t^3/6, E = t d/dt, real structure h = |1 + t0| (flat tt* solution)";
    c.N = 1;
    c.eta = {{"1"}};
    c.unit_index = 1;
    c.prepotential = {term("1/6", {t(1, 3)})};
    c.euler_Q = {{"1"}};
    c.euler_r = {"0"};
    c.weight_d = "-2";
    c.real_structure = RawReal{"abs_a", {}, {term("1", {}), term("1", {t(1)})}};
    c.truncation = {3, 6, 3};
    return c;
}

ModelConfig a2() {
    ModelConfig c;
    c.name = "a2";
    c.note = "A2 singularity: F = t1^2 t2 / 2 + t2^4 / 72, charges (1, 2/3), generic non-tt* Hermitian metric";
    c.N = 2;
    c.eta = {{"0", "1"}, {"1", "0"}};
    c.unit_index = 1;
    c.prepotential = {term("1/2", {t(1, 2), t(2)}), term("1/72", {t(2, 4)})};
    c.euler_Q = {{"1", "0"}, {"0", "2/3"}};
    c.euler_r = {"0", "0"};
    c.weight_d = "-5/3";
    RawSeries h11 = {term("2", {}), term("1", {t(1), tb(1)}), term("1", {t(2)}), term("1", {tb(2)})};
    RawSeries h12 = {term("1", {}), term("1", {t(1)}), term("2", {tb(2)}), term("0", {t(2), tb(1)}, "1")};
    RawSeries h22 = {term("3", {}), term("1", {t(2), tb(2)})};
    c.real_structure = RawReal{"H", {{h11, h12}, {conj_raw(h12), h22}}, {}};
    c.truncation = {2, 5, 2};
    return c;
}

}  // namespace

ModelConfig rand2d_config(std::uint64_t model_seed) {
    std::mt19937_64 rng(model_seed);
    // small nonzero integers in [-3, 3] drawn directly from the engine output
    auto small_int = [&]() {
        for (;;) {
            int v = int(rng() % 7) - 3;
            if (v != 0) return v;
        }
    };
    auto frac = [&]() { return std::to_string(small_int()) + "/" + std::to_string(2 + rng() % 5); };
    ModelConfig c;
    c.name = "rand2d";
    c.note = "random cubic + quartic prepotential and generic Hermitian metric, model seed " + std::to_string(model_seed);
    c.N = 2;
    c.eta = {{"0", "1"}, {"1", "0"}};
    c.unit_index = 1;
    c.prepotential = {term("1/2", {t(1, 2), t(2)}), term(frac(), {t(2, 3)}), term(frac(), {t(2, 4)})};
    for (auto& x : c.prepotential) x.re = parse_rational(x.re).get_str();
    c.euler_Q = {{"1", "0"}, {"0", "1/2"}};
    c.euler_r = {"0", "0"};
    c.weight_d = "-3/2";
    auto canon = [](std::string s) { return parse_rational(s).get_str(); };
    auto hermitian_diag = [&](const std::string& c0, int f) {
        std::string re = canon(frac()), im = canon(frac());
        return RawSeries{term(c0, {}), term(re, {t(f)}, im), term(re, {tb(f)}, negate(im)),
                         term(std::to_string(1 + rng() % 3), {t(1), tb(1)}), term(std::to_string(1 + rng() % 3), {t(2), tb(2)})};
    };
    RawSeries h11 = hermitian_diag("4", 2), h22 = hermitian_diag("5", 1);
    RawSeries h12 = {term("1", {}), term(canon(frac()), {t(1)}, canon(frac())), term(canon(frac()), {tb(2)}),
                     term(canon(frac()), {t(2), tb(1)}, canon(frac()))};
    c.real_structure = RawReal{"H", {{h11, h12}, {conj_raw(h12), h22}}, {}};
    c.truncation = {2, 4, 2};
    return c;
}

std::vector<BuiltinInfo> builtin_models() {
    return {{"gravity1d", gravity1d().note},
            {"a2", a2().note},
            {"rand2d", rand2d_config(2024).note}};
}

bool is_builtin(const std::string& name) { return name == "gravity1d" || name == "a2" || name == "rand2d"; }

ModelConfig builtin_config(const std::string& name) {
    if (name == "gravity1d") return gravity1d();
    if (name == "a2") return a2();
    if (name == "rand2d") return rand2d_config(2024);
    throw ConfigError("/name", "unknown built-in model '" + name + "'");
}

ModelConfig resolve_model(const std::string& spec, const std::string& model_dir) {
    if (is_builtin(spec)) return builtin_config(spec);
    namespace fs = std::filesystem;
    if (fs::is_regular_file(spec)) return load_config(spec);
    if (!model_dir.empty()) {
        for (const auto& cand : {fs::path(model_dir) / spec, fs::path(model_dir) / (spec + ".json")})
            if (fs::is_regular_file(cand)) return load_config(cand.string());
    }
    throw ConfigError("/", "unknown model '" + spec + "' (not a built-in or readable file)");
}

}  // namespace ttlift::io
