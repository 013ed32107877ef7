#pragma once

#include <complex>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace ttlift {

enum class ScalarMode { rational, floating };

// Gaussian rational with exact arithmetic.
struct QComplex {
    mpq_class re;
    mpq_class im;
};

/// Complex coefficient. Exact (Gaussian rational) or binary float.
/// Mixed arithmetic promotes to float.
class Scalar {
public:
    Scalar() : v_(QComplex{}) {}
    Scalar(QComplex q) : v_(std::move(q)) {}
    Scalar(std::complex<double> z) : v_(z) {}

    static Scalar zero(ScalarMode m);
    static Scalar one(ScalarMode m) { return integer(1, m); }
    static Scalar integer(long v, ScalarMode m);
    static Scalar rational(const mpq_class& q, ScalarMode m);
    static Scalar gaussian(const mpq_class& re, const mpq_class& im, ScalarMode m);
    static Scalar imag_unit(ScalarMode m);

    bool exact() const { return v_.index() == 0; }
    ScalarMode mode() const { return exact() ? ScalarMode::rational : ScalarMode::floating; }
    const QComplex& q() const { return std::get<0>(v_); }
    std::complex<double> to_complex() const;

    bool is_zero() const;
    bool is_one() const;
    bool is_real() const;
    double magnitude() const;

    Scalar conj() const;
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    // this += a*b without temporaries where possible
    void add_product(const Scalar& a, const Scalar& b);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    Scalar operator-() const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar to_mode(ScalarMode m) const;

    // "p/q" strings; float mode uses round-trip decimal text.
    std::string re_string() const;
    std::string im_string() const;
    static Scalar parse(const std::string& re, const std::string& im, ScalarMode m);
    std::string to_string() const;

    // canonical-form epsilon for float coefficients
    static constexpr double float_eps = 1e-14;

private:
    std::variant<QComplex, std::complex<double>> v_;
};

mpq_class parse_rational(const std::string& s);

}  // namespace ttlift
