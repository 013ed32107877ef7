#pragma once

// Independent reference computations for tests. Nothing here uses the
// library's series arithmetic: polynomials are plain maps from exponent
// vectors to GMP rationals.

#include <gmpxx.h>

#include <map>
#include <vector>

#include "core/series.hpp"

namespace oracle {

using Exps = std::vector<int>;
using Poly = std::map<Exps, mpq_class>;

inline int degree(const Exps& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

inline Poly mul(const Poly& a, const Poly& b, int dmax) {
    Poly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (degree(e) > dmax) continue;
            r[e] += ca * cb;
        }
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
}

inline void add_to(Poly& a, const Poly& b, const mpq_class& s = 1) {
    for (const auto& [e, c] : b) a[e] += s * c;
    std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
}

inline Poly var(int nvars, int i) {
    Exps e(nvars, 0);
    e[i] = 1;
    return {{e, 1}};
}

inline Poly derivative(const Poly& p, int i) {
    Poly r;
    for (const auto& [e, c] : p)
        if (e[i] > 0) {
            Exps f = e;
            --f[i];
            r[f] += c * e[i];
        }
    return r;
}

// Pure gravity, one flavor, variables t_0..t_{n_max}:
// u = t_0 + sum_{i>=0} t_{i+1} u^{i+1} / (i+1)!, iterated from u = t_0 until stable.
inline Poly gravity_u(int n_max, int dmax) {
    const int nv = n_max + 1;
    Poly u = var(nv, 0);
    for (int iter = 0; iter < 4 * dmax + 4; ++iter) {
        Poly next = var(nv, 0);
        Poly power = u;
        mpq_class fact = 1;
        for (int i = 0; i + 1 <= n_max; ++i) {
            fact *= (i + 1);
            add_to(next, mul(var(nv, i + 1), power, dmax), mpq_class(1) / fact);
            power = mul(power, u, dmax);
        }
        if (next == u) return u;
        u = next;
    }
    return u;
}

// Coefficients of a holomorphic series in one flavor, variable index = level.
inline Poly from_series(const ttlift::Series& s) {
    const auto& ring = s.ring();
    Poly p;
    for (const auto& t : s.terms()) {
        Exps e(ring->n_max() + 1, 0);
        for (int v = 0; v < ring->num_vars(); ++v) {
            int x = ttlift::mono_exp(t.mono, v);
            if (x == 0) continue;
            auto id = ring->var(v);
            if (id.sector != ttlift::Sector::hol || id.flavor != 0) return {};
            e[id.level] += x;
        }
        p[e] = t.coeff.q().re;
    }
    return p;
}

inline Poly truncate(const Poly& p, int dmax) {
    Poly r;
    for (const auto& [e, c] : p)
        if (degree(e) <= dmax) r[e] = c;
    return r;
}

}  // namespace oracle
