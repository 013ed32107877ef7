#pragma once

#include <vector>

#include "core/series.hpp"

namespace ttlift {

/// Dense matrix of series. Zero entries are empty series, so sparse block
/// structure costs little.
class SeriesMatrix {
public:
    SeriesMatrix() = default;
    SeriesMatrix(RingPtr ring, int rows, int cols);
    static SeriesMatrix identity(RingPtr ring, int n);
    static SeriesMatrix constant(RingPtr ring, const std::vector<std::vector<Scalar>>& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RingPtr& ring() const { return ring_; }
    Series& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Series& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b);
    friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
    friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
    SeriesMatrix operator-() const;
    SeriesMatrix& operator+=(const SeriesMatrix& b) { return *this = *this + b; }
    SeriesMatrix& operator-=(const SeriesMatrix& b) { return *this = *this - b; }
    SeriesMatrix scaled(const Series& s) const;
    SeriesMatrix scaled(const Scalar& s) const;

    SeriesMatrix transpose() const;
    SeriesMatrix conjugate() const;
    SeriesMatrix derivative(int var) const;
    SeriesMatrix derivative(const VarId& v) const { return derivative(ring_->index(v)); }
    SeriesMatrix restrict_small() const;
    SeriesMatrix truncated(int valid) const;
    SeriesMatrix transfer(const RingPtr& target) const;
    // Inverse over series; the constant part must be invertible.
    SeriesMatrix inverse() const;

    bool is_zero() const;
    double max_magnitude() const;
    int valid_degree() const;

private:
    RingPtr ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<Series> a_;
};

SeriesMatrix commutator(const SeriesMatrix& a, const SeriesMatrix& b);

// Gauss-Jordan over scalars; throws DomainError when singular.
std::vector<std::vector<Scalar>> invert_scalar_matrix(std::vector<std::vector<Scalar>> m, ScalarMode mode);

}  // namespace ttlift
