#include "core/series.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace ttlift {

namespace {

struct MonoHash {
    size_t operator()(MonoBits b) const {
        uint64_t lo = uint64_t(b), hi = uint64_t(b >> 64);
        uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x7F4A7C159E3779B9ULL + (lo << 6) + (lo >> 2));
        return size_t(h ^ (h >> 29));
    }
};

void sort_terms(std::vector<Term>& t) {
    std::sort(t.begin(), t.end(),
              [](const Term& a, const Term& b) { return mono_less(a.mono, a.degree, b.mono, b.degree); });
}

// Merge duplicates and drop zeros; input sorted.
void compact(std::vector<Term>& t) {
    size_t w = 0;
    for (size_t r = 0; r < t.size();) {
        Term acc = std::move(t[r]);
        size_t s = r + 1;
        while (s < t.size() && t[s].mono == acc.mono) acc.coeff += t[s++].coeff;
        if (!acc.coeff.is_zero()) t[w++] = std::move(acc);
        r = s;
    }
    t.resize(w);
}

}  // namespace

int mono_degree(MonoBits b) {
    int d = 0;
    while (b) {
        d += int(b & 0xF);
        b >>= 4;
    }
    return d;
}

bool mono_less(MonoBits a, int da, MonoBits b, int db) {
    if (da != db) return da < db;
    if (a == b) return false;
    MonoBits x = a ^ b;
    int var = 0;
    while ((x & 0xF) == 0) {
        x >>= 4;
        ++var;
    }
    return mono_exp(a, var) > mono_exp(b, var);
}

Ring::Ring(int n_flavors, int n_max, int d_max, ScalarMode mode)
    : n_(n_flavors), n_max_(n_max), d_max_(d_max), mode_(mode), half_(n_flavors * (n_max + 1)) {
    if (n_flavors < 1) throw ContextError("ring needs at least one flavor");
    if (n_max < 0 || d_max < 0) throw ContextError("negative truncation");
    if (2 * half_ > kMaxVars)
        throw ContextError("too many variables: 2*N*(n_max+1) = " + std::to_string(2 * half_) + " exceeds " +
                           std::to_string(kMaxVars));
    if (d_max > kMaxExponent) throw ContextError("d_max exceeds " + std::to_string(kMaxExponent));
    for (int i = 0; i < 2 * half_; ++i) {
        MonoBits nib = MonoBits(0xF) << (4 * i);
        if (i < half_) hol_mask_ |= nib;
        if (var(i).level > 0) desc_mask_ |= nib;
    }
}

int Ring::index(const VarId& v) const {
    if (!contains(v)) throw ContextError("variable outside ring");
    return int(v.sector) * half_ + v.level * n_ + v.flavor;
}

VarId Ring::var(int index) const {
    VarId v;
    v.sector = index >= half_ ? Sector::antihol : Sector::hol;
    int r = index % half_;
    v.level = r / n_;
    v.flavor = r % n_;
    return v;
}

bool Ring::contains(const VarId& v) const {
    return v.level >= 0 && v.level <= n_max_ && v.flavor >= 0 && v.flavor < n_;
}

RingPtr make_ring(int n_flavors, int n_max, int d_max, ScalarMode mode) {
    return std::make_shared<const Ring>(n_flavors, n_max, d_max, mode);
}

Series::Series(RingPtr ring) : ring_(std::move(ring)), valid_(ring_->d_max()) {}

Series Series::constant(RingPtr ring, const Scalar& c) {
    Series s(std::move(ring));
    if (!c.is_zero()) s.terms_.push_back(Term{0, 0, c.to_mode(s.ring_->mode())});
    return s;
}

Series Series::variable(RingPtr ring, const VarId& v) { return monomial(std::move(ring), {{v, 1}}, Scalar::one(ScalarMode::rational)); }

Series Series::monomial(RingPtr ring, const std::vector<std::pair<VarId, int>>& exps, const Scalar& c) {
    MonoBits m = 0;
    int deg = 0;
    for (auto& [v, e] : exps) {
        if (e < 0) throw ContextError("negative exponent");
        int idx = ring->index(v);
        int cur = mono_exp(m, idx);
        if (cur + e > kMaxExponent) throw ContextError("exponent overflow");
        m += MonoBits(e) << (4 * idx);
        deg += e;
    }
    Series s(std::move(ring));
    if (deg <= s.ring_->d_max() && !c.is_zero()) s.terms_.push_back(Term{m, deg, c.to_mode(s.ring_->mode())});
    return s;
}

Series Series::from_terms(RingPtr ring, std::vector<Term> terms, int valid_degree) {
    Series s(std::move(ring));
    s.valid_ = std::clamp(valid_degree, 0, s.ring_->d_max());
    for (auto& t : terms) {
        t.degree = mono_degree(t.mono);
        t.coeff = t.coeff.to_mode(s.ring_->mode());
    }
    std::erase_if(terms, [&](const Term& t) { return t.degree > s.valid_; });
    sort_terms(terms);
    compact(terms);
    s.terms_ = std::move(terms);
    return s;
}

Scalar Series::constant_term() const {
    if (!terms_.empty() && terms_.front().degree == 0) return terms_.front().coeff;
    return ring_->zero();
}

Scalar Series::coefficient(MonoBits m) const {
    int d = mono_degree(m);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [&](const Term& t, MonoBits key) {
        return mono_less(t.mono, t.degree, key, d);
    });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return ring_->zero();
}

void Series::check_ring(const Series& o) const {
    if (!ring_ || !o.ring_) throw ContextError("uninitialised series");
    if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw ContextError("mismatched ring contexts");
}

Series Series::operator-() const {
    Series r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

Series merge(const Series& a, const Series& b, bool subtract, int valid) {
    std::vector<Term> out;
    out.reserve(a.terms().size() + b.terms().size());
    auto ia = a.terms().begin(), ea = a.terms().end();
    auto ib = b.terms().begin(), eb = b.terms().end();
    auto push_b = [&](const Term& t) {
        if (t.degree > valid) return;
        out.push_back(subtract ? Term{t.mono, t.degree, -t.coeff} : t);
    };
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && mono_less(ia->mono, ia->degree, ib->mono, ib->degree))) {
            if (ia->degree <= valid) out.push_back(*ia);
            ++ia;
        } else if (ia == ea || mono_less(ib->mono, ib->degree, ia->mono, ia->degree)) {
            push_b(*ib);
            ++ib;
        } else {
            Term t = *ia;
            if (subtract)
                t.coeff -= ib->coeff;
            else
                t.coeff += ib->coeff;
            if (!t.coeff.is_zero() && t.degree <= valid) out.push_back(std::move(t));
            ++ia;
            ++ib;
        }
    }
    return Series::from_terms(a.ring(), std::move(out), valid);
}

}  // namespace

Series operator+(const Series& a, const Series& b) {
    a.check_ring(b);
    if (b.terms_.empty() && b.valid_ >= a.valid_) return a;
    if (a.terms_.empty() && a.valid_ >= b.valid_) return b;
    return merge(a, b, false, std::min(a.valid_, b.valid_));
}

Series operator-(const Series& a, const Series& b) {
    a.check_ring(b);
    if (b.terms_.empty() && b.valid_ >= a.valid_) return a;
    return merge(a, b, true, std::min(a.valid_, b.valid_));
}

Series operator*(const Series& a, const Series& b) {
    a.check_ring(b);
    int cap = std::min(a.valid_, b.valid_);
    Series r(a.ring_);
    r.valid_ = cap;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    // constant shortcuts
    if (a.terms_.size() == 1 && a.terms_[0].degree == 0) {
        r = b.scaled(a.terms_[0].coeff);
        return r.truncated(cap);
    }
    if (b.terms_.size() == 1 && b.terms_[0].degree == 0) {
        r = a.scaled(b.terms_[0].coeff);
        return r.truncated(cap);
    }
    std::unordered_map<MonoBits, size_t, MonoHash> slot;
    slot.reserve(a.terms_.size() * 2 + b.terms_.size() * 2);
    std::vector<Term> acc;
    for (const auto& ta : a.terms_) {
        int room = cap - ta.degree;
        if (room < 0) break;
        for (const auto& tb : b.terms_) {
            if (tb.degree > room) break;
            MonoBits m = ta.mono + tb.mono;
            auto [it, fresh] = slot.try_emplace(m, acc.size());
            if (fresh) {
                acc.push_back(Term{m, ta.degree + tb.degree, a.ring_->zero()});
            }
            acc[it->second].coeff.add_product(ta.coeff, tb.coeff);
        }
    }
    std::erase_if(acc, [](const Term& t) { return t.coeff.is_zero(); });
    sort_terms(acc);
    r.terms_ = std::move(acc);
    return r;
}

Series Series::scaled(const Scalar& c) const {
    Series r(ring_);
    r.valid_ = valid_;
    if (c.is_zero()) return r;
    r.terms_ = terms_;
    if (c.is_one()) return r;
    for (auto& t : r.terms_) t.coeff *= c;
    std::erase_if(r.terms_, [](const Term& t) { return t.coeff.is_zero(); });
    return r;
}

Series Series::derivative(const VarId& v) const { return derivative(ring_->index(v)); }

Series Series::derivative(int var) const {
    Series r(ring_);
    r.valid_ = std::max(valid_ - 1, 0);
    MonoBits unit = mono_unit(var);
    for (const auto& t : terms_) {
        int e = mono_exp(t.mono, var);
        if (e == 0 || t.degree - 1 > r.valid_) continue;
        r.terms_.push_back(Term{t.mono - unit, t.degree - 1, t.coeff * ring_->integer(e)});
    }
    sort_terms(r.terms_);
    return r;
}

MonoBits Series::full_mask() const {
    int n = ring_->num_vars();
    return n >= 32 ? ~MonoBits(0) : (MonoBits(1) << (4 * n)) - 1;
}

Series Series::conjugate() const {
    Series r(ring_);
    r.valid_ = valid_;
    int shift = 4 * ring_->half();
    MonoBits lo = ring_->hol_mask();
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        MonoBits m = ((t.mono & lo) << shift) | (t.mono >> shift);
        r.terms_.push_back(Term{m, t.degree, t.coeff.conj()});
    }
    sort_terms(r.terms_);
    return r;
}

Series Series::restrict_small() const {
    Series r(ring_);
    r.valid_ = valid_;
    MonoBits mask = ring_->descendant_mask();
    for (const auto& t : terms_)
        if ((t.mono & mask) == 0) r.terms_.push_back(t);
    return r;
}

Series Series::truncated(int valid_degree) const {
    Series r(ring_);
    r.valid_ = std::clamp(std::min(valid_degree, valid_), 0, ring_->d_max());
    for (const auto& t : terms_)
        if (t.degree <= r.valid_) r.terms_.push_back(t);
    return r;
}

Series Series::radial_scaled(int shift) const {
    Series r(ring_);
    r.valid_ = valid_;
    for (const auto& t : terms_) {
        mpq_class f(1, t.degree + shift);
        r.terms_.push_back(Term{t.mono, t.degree, t.coeff * ring_->rational(f)});
    }
    return r;
}

Series Series::transfer(const RingPtr& target) const {
    if (*target == *ring_) {
        Series r = *this;
        r.ring_ = target;
        return r;
    }
    if (target->mode() != ring_->mode()) throw ContextError("scalar mode mismatch in transfer");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.degree > target->d_max()) continue;
        MonoBits m = 0;
        for (int i = 0; i < ring_->num_vars(); ++i) {
            int e = mono_exp(t.mono, i);
            if (e == 0) continue;
            VarId v = ring_->var(i);
            if (!target->contains(v)) throw ContextError("variable not present in target ring");
            m += MonoBits(e) << (4 * target->index(v));
        }
        out.push_back(Term{m, t.degree, t.coeff});
    }
    return from_terms(target, std::move(out), std::min(valid_, target->d_max()));
}

Series Series::inverse() const {
    Scalar c0 = constant_term();
    if (c0.is_zero()) throw DomainError("series inverse needs a nonzero constant term");
    // 1/(c0 (1 + x)) = c0^{-1} sum (-x)^k
    Scalar inv0 = c0.inverse();
    Series x = scaled(inv0) - Series::constant(ring_, ring_->one());
    Series term = Series::constant(ring_, ring_->one());
    Series sum = term;
    Series negx = -x;
    for (int k = 1; k <= valid_; ++k) {
        term = term * negx;
        if (term.is_zero()) break;
        sum += term;
    }
    sum.valid_ = std::min(sum.valid_, valid_);
    return sum.scaled(inv0).truncated(valid_);
}

Series Series::sqrt_unit() const {
    if (!constant_term().is_one()) throw DomainError("sqrt_unit needs constant term 1");
    // binomial series (1+x)^{1/2}
    Series x = *this - Series::constant(ring_, ring_->one());
    Series sum = Series::constant(ring_, ring_->one());
    Series power = sum;
    mpq_class binom(1);
    for (int k = 1; k <= valid_; ++k) {
        power = power * x;
        if (power.is_zero()) break;
        binom = binom * (mpq_class(1, 2) - (k - 1)) / k;
        sum += power.scaled(ring_->rational(binom));
    }
    return sum.truncated(valid_);
}

Series Series::pow(int k) const {
    Series r = Series::constant(ring_, ring_->one());
    r.valid_ = valid_;
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

double Series::max_magnitude() const {
    double m = 0;
    for (const auto& t : terms_) m = std::max(m, t.coeff.magnitude());
    return m;
}

bool Series::depends_on_mask(MonoBits mask) const {
    for (const auto& t : terms_)
        if (t.mono & mask) return true;
    return false;
}

std::string Series::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        std::string c = t.coeff.to_string();
        bool neg = c[0] == '-';
        if (neg) c = c.substr(1);
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        std::vector<std::string> parts;
        if (c != "1" || t.degree == 0) parts.push_back(c);
        for (int i = 0; i < ring_->num_vars(); ++i) {
            int e = mono_exp(t.mono, i);
            if (!e) continue;
            VarId v = ring_->var(i);
            std::string name = (v.sector == Sector::hol ? "t" : "tb") + std::to_string(v.flavor + 1) + "_" +
                               std::to_string(v.level);
            if (e > 1) name += "^" + std::to_string(e);
            parts.push_back(name);
        }
        for (size_t k = 0; k < parts.size(); ++k) os << (k ? "*" : "") << parts[k];
        first = false;
    }
    return os.str();
}

void Substitution::set(const VarId& v, Series image) {
    if (!(*image.ring() == *target_)) throw ContextError("substitution image lives in another ring");
    std::lock_guard lock(mu_);
    images_[v] = std::move(image);
    std::erase_if(powers_, [&](const auto& kv) { return kv.first.first == v; });
}

const Series& Substitution::power(const VarId& v, int k, const Series& base) const {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(v, k);
    auto it = powers_.find(key);
    if (it != powers_.end()) return it->second;
    // build incrementally
    int have = 1;
    Series cur = base;
    for (int j = k - 1; j >= 2; --j) {
        auto f = powers_.find({v, j});
        if (f != powers_.end()) {
            have = j;
            cur = f->second;
            break;
        }
    }
    for (int j = have + 1; j <= k; ++j) {
        cur = cur * base;
        powers_.emplace(std::make_pair(v, j), cur);
    }
    if (k == 1) powers_.emplace(key, base);
    return powers_.at(key);
}

Series Substitution::apply(const Series& f, bool allow_constant_terms) const {
    const Ring& src = *f.ring();
    if (src.mode() != target_->mode()) throw ContextError("scalar mode mismatch in substitution");
    int valid = std::min(f.valid_degree(), target_->d_max());
    std::vector<const Series*> image(src.num_vars(), nullptr);
    std::vector<Series> carried(src.num_vars());
    for (int i = 0; i < src.num_vars(); ++i) {
        VarId v = src.var(i);
        auto it = images_.find(v);
        if (it != images_.end()) {
            if (!allow_constant_terms && !it->second.constant_term().is_zero())
                throw CompositionError("substitution image has a nonzero constant term");
            image[i] = &it->second;
        }
    }
    // valid degree only drops for variables actually used
    MonoBits used = 0;
    for (const auto& t : f.terms()) used |= t.mono;
    for (int i = 0; i < src.num_vars(); ++i) {
        if ((used >> (4 * i)) & 0xF) {
            if (image[i]) {
                valid = std::min(valid, image[i]->valid_degree());
            } else {
                VarId v = src.var(i);
                if (!target_->contains(v)) throw ContextError("unmapped variable missing from target ring");
                carried[i] = Series::variable(target_, v);
                image[i] = &carried[i];
            }
        }
    }
    Series sum(target_);
    std::vector<Series> bucket;
    for (const auto& t : f.terms()) {
        Series prod = Series::constant(target_, t.coeff);
        for (int i = 0; i < src.num_vars() && !prod.is_zero(); ++i) {
            int e = mono_exp(t.mono, i);
            if (!e) continue;
            VarId v = src.var(i);
            if (images_.count(v))
                prod = prod * power(v, e, *image[i]);
            else
                prod = prod * image[i]->pow(e);
        }
        bucket.push_back(std::move(prod));
    }
    // pairwise summation keeps merges cheap
    while (bucket.size() > 1) {
        std::vector<Series> next;
        for (size_t i = 0; i + 1 < bucket.size(); i += 2) next.push_back(bucket[i] + bucket[i + 1]);
        if (bucket.size() % 2) next.push_back(bucket.back());
        bucket = std::move(next);
    }
    if (!bucket.empty()) sum = bucket[0];
    return sum.truncated(valid);
}

}  // namespace ttlift
