#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/scalar.hpp"

namespace ttlift {

enum class Sector : int { hol = 0, antihol = 1 };

/// Coordinate t^flavor_level (hol) or its conjugate (antihol). Flavor is 0-based.
struct VarId {
    Sector sector = Sector::hol;
    int level = 0;
    int flavor = 0;
    bool operator==(const VarId&) const = default;
    auto operator<=>(const VarId&) const = default;
};

class ContextError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CompositionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DomainError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using MonoBits = unsigned __int128;

constexpr int kMaxVars = 32;
constexpr int kMaxExponent = 15;

/// Ring of truncated series in t^a_n, tbar^a_n (n <= n_max, a < N), total degree <= d_max.
class Ring {
public:
    Ring(int n_flavors, int n_max, int d_max, ScalarMode mode);

    int n_flavors() const { return n_; }
    int n_max() const { return n_max_; }
    int d_max() const { return d_max_; }
    ScalarMode mode() const { return mode_; }
    int num_vars() const { return 2 * half_; }
    int half() const { return half_; }

    int index(const VarId& v) const;
    VarId var(int index) const;
    bool contains(const VarId& v) const;

    // bit masks over packed monomials
    MonoBits hol_mask() const { return hol_mask_; }
    MonoBits descendant_mask() const { return desc_mask_; }

    bool operator==(const Ring& o) const {
        return n_ == o.n_ && n_max_ == o.n_max_ && d_max_ == o.d_max_ && mode_ == o.mode_;
    }

    Scalar zero() const { return Scalar::zero(mode_); }
    Scalar one() const { return Scalar::one(mode_); }
    Scalar integer(long v) const { return Scalar::integer(v, mode_); }
    Scalar rational(const mpq_class& q) const { return Scalar::rational(q, mode_); }

private:
    int n_, n_max_, d_max_;
    ScalarMode mode_;
    int half_;
    MonoBits hol_mask_ = 0, desc_mask_ = 0;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(int n_flavors, int n_max, int d_max, ScalarMode mode);

inline int mono_exp(MonoBits b, int var) { return int((b >> (4 * var)) & 0xF); }
inline MonoBits mono_unit(int var) { return MonoBits(1) << (4 * var); }
int mono_degree(MonoBits b);
// graded-lex: lower degree first, then larger exponent on lower variable index first
bool mono_less(MonoBits a, int da, MonoBits b, int db);

struct Term {
    MonoBits mono;
    int degree;
    Scalar coeff;
};

/// Truncated multivariate power series. Immutable value semantics.
class Series {
public:
    Series() = default;
    explicit Series(RingPtr ring);  // exact zero
    static Series constant(RingPtr ring, const Scalar& c);
    static Series integer(RingPtr ring, long v) { return constant(ring, ring->integer(v)); }
    static Series variable(RingPtr ring, const VarId& v);
    static Series monomial(RingPtr ring, const std::vector<std::pair<VarId, int>>& exps, const Scalar& c);
    // Terms need not be sorted or unique; zero coefficients dropped.
    static Series from_terms(RingPtr ring, std::vector<Term> terms, int valid_degree);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    int valid_degree() const { return valid_; }
    bool is_zero() const { return terms_.empty(); }
    Scalar constant_term() const;
    Scalar coefficient(MonoBits m) const;
    int max_degree() const { return terms_.empty() ? -1 : terms_.back().degree; }

    Series operator-() const;
    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    Series& operator+=(const Series& b) { return *this = *this + b; }
    Series& operator-=(const Series& b) { return *this = *this - b; }
    Series& operator*=(const Series& b) { return *this = *this * b; }
    Series scaled(const Scalar& c) const;

    Series derivative(const VarId& v) const;
    Series derivative(int var) const;
    Series conjugate() const;
    Series restrict_small() const;
    Series truncated(int valid_degree) const;
    // Multiply the coefficient of each degree-k monomial by 1/(k+shift).
    Series radial_scaled(int shift) const;

    // Re-embed into another ring; variables matched by VarId.
    Series transfer(const RingPtr& target) const;

    Series inverse() const;
    Series sqrt_unit() const;
    Series pow(int k) const;

    // Largest coefficient modulus.
    double max_magnitude() const;
    bool depends_only_on_level0() const { return depends_on_mask(ring_->descendant_mask()) == false; }
    bool depends_on_mask(MonoBits mask) const;
    bool is_holomorphic() const { return !depends_on_mask(~ring_->hol_mask() & full_mask()); }

    std::string to_string() const;

private:
    MonoBits full_mask() const;
    void check_ring(const Series& o) const;

    RingPtr ring_;
    std::vector<Term> terms_;
    int valid_ = 0;
};

/// Simultaneous substitution of variables of `f`'s ring by series of `target`.
/// Unmapped variables are carried over by VarId. Images with a nonzero
/// constant term need allow_constant_terms (composition is then exact only
/// when f is polynomial within the window).
class Substitution {
public:
    explicit Substitution(RingPtr target) : target_(std::move(target)) {}
    void set(const VarId& v, Series image);
    Series apply(const Series& f, bool allow_constant_terms = false) const;
    const RingPtr& target() const { return target_; }

private:
    const Series& power(const VarId& v, int k, const Series& base) const;
    RingPtr target_;
    std::map<VarId, Series> images_;
    mutable std::map<std::pair<VarId, int>, Series> powers_;
    mutable std::mutex mu_;
};

}  // namespace ttlift
