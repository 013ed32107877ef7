#pragma once

#include <algorithm>
#include <climits>
#include <string>

#include "core/matrix.hpp"

namespace ttlift {

/// Aggregated size of a quantity that should vanish.
struct Residual {
    double max = 0.0;
    bool exact_zero = true;
    int window = INT_MAX;  // smallest valid degree seen
    int terms = 0;         // number of quantities folded in

    void add(const Series& s) {
        ++terms;
        window = std::min(window, s.valid_degree());
        if (!s.is_zero()) {
            exact_zero = false;
            max = std::max(max, s.max_magnitude());
        }
    }
    void add(const SeriesMatrix& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) add(m(i, j));
    }
    void merge(const Residual& o) {
        terms += o.terms;
        window = std::min(window, o.window);
        exact_zero = exact_zero && o.exact_zero;
        max = std::max(max, o.max);
    }
    // rational mode: exact zero; float mode: below tolerance
    bool vanishes(ScalarMode mode, double tol) const {
        return mode == ScalarMode::rational ? exact_zero : max <= tol;
    }
    int window_or(int fallback) const { return window == INT_MAX ? fallback : window; }
};

struct NamedResidual {
    std::string id;
    Residual residual;
    bool asserted = true;
    std::string note;
};

}  // namespace ttlift
