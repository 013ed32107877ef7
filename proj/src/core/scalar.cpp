#include "core/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <stdexcept>

namespace ttlift {

namespace {

double to_double(const mpq_class& q) { return q.get_d(); }

std::string format_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

}  // namespace

mpq_class parse_rational(const std::string& s) {
    static const std::regex re(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
    if (!std::regex_match(s, re)) throw std::invalid_argument("malformed rational '" + s + "'");
    std::string t = s[0] == '+' ? s.substr(1) : s;
    auto slash = t.find('/');
    if (slash != std::string::npos && mpz_class(t.substr(slash + 1)) == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    mpq_class q(t, 10);
    q.canonicalize();
    return q;
}

Scalar Scalar::zero(ScalarMode m) {
    if (m == ScalarMode::rational) return Scalar(QComplex{});
    return Scalar(std::complex<double>(0.0, 0.0));
}

Scalar Scalar::integer(long v, ScalarMode m) {
    if (m == ScalarMode::rational) return Scalar(QComplex{mpq_class(v), mpq_class(0)});
    return Scalar(std::complex<double>(double(v), 0.0));
}

Scalar Scalar::rational(const mpq_class& q, ScalarMode m) { return gaussian(q, mpq_class(0), m); }

Scalar Scalar::gaussian(const mpq_class& re, const mpq_class& im, ScalarMode m) {
    if (m == ScalarMode::rational) return Scalar(QComplex{re, im});
    return Scalar(std::complex<double>(to_double(re), to_double(im)));
}

Scalar Scalar::imag_unit(ScalarMode m) { return gaussian(0, 1, m); }

std::complex<double> Scalar::to_complex() const {
    if (exact()) return {to_double(q().re), to_double(q().im)};
    return std::get<1>(v_);
}

Scalar Scalar::to_mode(ScalarMode m) const {
    if (m == mode()) return *this;
    if (m == ScalarMode::floating) return Scalar(to_complex());
    throw std::logic_error("cannot convert a float scalar to exact mode");
}

bool Scalar::is_zero() const {
    if (exact()) return sgn(q().re) == 0 && sgn(q().im) == 0;
    return std::abs(std::get<1>(v_)) <= float_eps;
}

bool Scalar::is_one() const {
    if (exact()) return q().re == 1 && sgn(q().im) == 0;
    return std::abs(std::get<1>(v_) - 1.0) <= float_eps;
}

bool Scalar::is_real() const {
    if (exact()) return sgn(q().im) == 0;
    return std::abs(std::get<1>(v_).imag()) <= float_eps;
}

double Scalar::magnitude() const { return std::abs(to_complex()); }

Scalar Scalar::conj() const {
    if (exact()) return Scalar(QComplex{q().re, -q().im});
    return Scalar(std::conj(std::get<1>(v_)));
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero scalar");
    if (exact()) {
        mpq_class n = q().re * q().re + q().im * q().im;
        return Scalar(QComplex{q().re / n, -q().im / n});
    }
    return Scalar(1.0 / std::get<1>(v_));
}

Scalar Scalar::operator-() const {
    if (exact()) return Scalar(QComplex{-q().re, -q().im});
    return Scalar(-std::get<1>(v_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    if (exact() && o.exact()) {
        auto& a = std::get<0>(v_);
        a.re += o.q().re;
        if (sgn(o.q().im) != 0) a.im += o.q().im;
        return *this;
    }
    v_ = to_complex() + o.to_complex();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    if (exact() && o.exact()) {
        auto& a = std::get<0>(v_);
        a.re -= o.q().re;
        if (sgn(o.q().im) != 0) a.im -= o.q().im;
        return *this;
    }
    v_ = to_complex() - o.to_complex();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (exact() && o.exact()) {
        auto& a = std::get<0>(v_);
        const auto& b = o.q();
        if (sgn(a.im) == 0 && sgn(b.im) == 0) {
            a.re *= b.re;
        } else {
            mpq_class re = a.re * b.re - a.im * b.im;
            mpq_class im = a.re * b.im + a.im * b.re;
            a.re = std::move(re);
            a.im = std::move(im);
        }
        return *this;
    }
    v_ = to_complex() * o.to_complex();
    return *this;
}

void Scalar::add_product(const Scalar& x, const Scalar& y) {
    if (exact() && x.exact() && y.exact()) {
        thread_local mpq_class tmp;
        auto& a = std::get<0>(v_);
        const auto& p = x.q();
        const auto& r = y.q();
        bool pim = sgn(p.im) != 0, rim = sgn(r.im) != 0;
        mpq_mul(tmp.get_mpq_t(), p.re.get_mpq_t(), r.re.get_mpq_t());
        mpq_add(a.re.get_mpq_t(), a.re.get_mpq_t(), tmp.get_mpq_t());
        if (pim && rim) {
            mpq_mul(tmp.get_mpq_t(), p.im.get_mpq_t(), r.im.get_mpq_t());
            mpq_sub(a.re.get_mpq_t(), a.re.get_mpq_t(), tmp.get_mpq_t());
        }
        if (rim) {
            mpq_mul(tmp.get_mpq_t(), p.re.get_mpq_t(), r.im.get_mpq_t());
            mpq_add(a.im.get_mpq_t(), a.im.get_mpq_t(), tmp.get_mpq_t());
        }
        if (pim) {
            mpq_mul(tmp.get_mpq_t(), p.im.get_mpq_t(), r.re.get_mpq_t());
            mpq_add(a.im.get_mpq_t(), a.im.get_mpq_t(), tmp.get_mpq_t());
        }
        return;
    }
    v_ = to_complex() + x.to_complex() * y.to_complex();
}

bool Scalar::operator==(const Scalar& o) const {
    if (exact() && o.exact()) return q().re == o.q().re && q().im == o.q().im;
    return std::abs(to_complex() - o.to_complex()) <= float_eps;
}

std::string Scalar::re_string() const {
    if (exact()) return q().re.get_str();
    return format_double(std::get<1>(v_).real());
}

std::string Scalar::im_string() const {
    if (exact()) return q().im.get_str();
    return format_double(std::get<1>(v_).imag());
}

Scalar Scalar::parse(const std::string& re, const std::string& im, ScalarMode m) {
    if (m == ScalarMode::rational) return Scalar(QComplex{parse_rational(re), parse_rational(im)});
    auto one = [](const std::string& s) {
        try {
            return parse_rational(s).get_d();
        } catch (const std::invalid_argument&) {
            size_t pos = 0;
            double d = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
            return d;
        }
    };
    return Scalar(std::complex<double>(one(re), one(im)));
}

std::string Scalar::to_string() const {
    if (is_real()) return re_string();
    if (exact() && sgn(q().re) == 0) return q().im.get_str() + "i";
    return "(" + re_string() + (exact() ? (sgn(q().im) < 0 ? "" : "+") : "+") + im_string() + "i)";
}

}  // namespace ttlift
