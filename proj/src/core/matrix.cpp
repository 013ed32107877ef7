#include "core/matrix.hpp"

#include <algorithm>

namespace ttlift {

SeriesMatrix::SeriesMatrix(RingPtr ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), a_(size_t(rows) * cols, Series(ring_)) {}

SeriesMatrix SeriesMatrix::identity(RingPtr ring, int n) {
    SeriesMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Series::constant(ring, ring->one());
    return m;
}

SeriesMatrix SeriesMatrix::constant(RingPtr ring, const std::vector<std::vector<Scalar>>& c) {
    int r = int(c.size()), k = r ? int(c[0].size()) : 0;
    SeriesMatrix m(ring, r, k);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = Series::constant(ring, c[i][j]);
    return m;
}

static void check_shape(bool ok) {
    if (!ok) throw ContextError("matrix shape mismatch");
}

SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
    check_shape(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    SeriesMatrix r(a.ring_, a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
    check_shape(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    SeriesMatrix r(a.ring_, a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    check_shape(a.cols_ == b.rows_);
    SeriesMatrix r(a.ring_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            Series acc(a.ring_);
            for (int k = 0; k < a.cols_; ++k) {
                const Series& x = a(i, k);
                const Series& y = b(k, j);
                if (x.is_zero() || y.is_zero()) continue;
                acc += x * y;
            }
            r(i, j) = std::move(acc);
        }
    return r;
}

SeriesMatrix SeriesMatrix::operator-() const {
    SeriesMatrix r = *this;
    for (auto& s : r.a_) s = -s;
    return r;
}

SeriesMatrix SeriesMatrix::scaled(const Series& s) const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.is_zero() ? x : x * s;
    return r;
}

SeriesMatrix SeriesMatrix::scaled(const Scalar& s) const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.scaled(s);
    return r;
}

SeriesMatrix SeriesMatrix::transpose() const {
    SeriesMatrix r(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

SeriesMatrix SeriesMatrix::conjugate() const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.conjugate();
    return r;
}

SeriesMatrix SeriesMatrix::derivative(int var) const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.derivative(var);
    return r;
}

SeriesMatrix SeriesMatrix::restrict_small() const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.restrict_small();
    return r;
}

SeriesMatrix SeriesMatrix::truncated(int valid) const {
    SeriesMatrix r = *this;
    for (auto& x : r.a_) x = x.truncated(valid);
    return r;
}

SeriesMatrix SeriesMatrix::transfer(const RingPtr& target) const {
    SeriesMatrix r(target, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].transfer(target);
    return r;
}

std::vector<std::vector<Scalar>> invert_scalar_matrix(std::vector<std::vector<Scalar>> m, ScalarMode mode) {
    int n = int(m.size());
    std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar::zero(mode)));
    for (int i = 0; i < n; ++i) inv[i][i] = Scalar::one(mode);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        double best = 0;
        for (int r = c; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            double mag = m[r][c].magnitude();
            // exact mode: first nonzero pivot keeps results deterministic
            if (piv < 0 || (mode == ScalarMode::floating && mag > best)) {
                piv = r;
                best = mag;
            }
        }
        if (piv < 0) throw DomainError("singular matrix");
        std::swap(m[c], m[piv]);
        std::swap(inv[c], inv[piv]);
        Scalar p = m[c][c].inverse();
        for (int j = 0; j < n; ++j) {
            m[c][j] *= p;
            inv[c][j] *= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m[r][c].is_zero()) continue;
            Scalar f = m[r][c];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

SeriesMatrix SeriesMatrix::inverse() const {
    check_shape(rows_ == cols_);
    int n = rows_;
    std::vector<std::vector<Scalar>> c0(n, std::vector<Scalar>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c0[i][j] = (*this)(i, j).constant_term();
    auto inv0 = constant(ring_, invert_scalar_matrix(c0, ring_->mode()));
    // A = A0 (1 + X), X = A0^{-1} A - 1; A^{-1} = sum (-X)^k A0^{-1}
    SeriesMatrix x = inv0 * *this - identity(ring_, n);
    SeriesMatrix negx = -x;
    SeriesMatrix term = identity(ring_, n);
    SeriesMatrix sum = term;
    int v = valid_degree();
    for (int k = 1; k <= v; ++k) {
        term = term * negx;
        if (term.is_zero()) break;
        sum += term;
    }
    return (sum * inv0).truncated(v);
}

bool SeriesMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Series& s) { return s.is_zero(); });
}

double SeriesMatrix::max_magnitude() const {
    double m = 0;
    for (const auto& s : a_) m = std::max(m, s.max_magnitude());
    return m;
}

int SeriesMatrix::valid_degree() const {
    int v = ring_ ? ring_->d_max() : 0;
    for (const auto& s : a_) v = std::min(v, s.valid_degree());
    return v;
}

SeriesMatrix commutator(const SeriesMatrix& a, const SeriesMatrix& b) { return a * b - b * a; }

}  // namespace ttlift
