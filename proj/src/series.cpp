#include "sigmod/series.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace sigmod {

namespace {

constexpr int64_t kInf = PadicNumber::kInf;

int64_t add_sat(int64_t a, int64_t b) {
    if (a >= kInf || b >= kInf) return kInf;
    return a + b;
}

// Lower bound for the valuation of the true coefficient.
int64_t vlow(const PadicNumber& x) { return x.is_exact_zero() ? kInf : x.valuation(); }

PadicNumber tail_value(int64_t p, int64_t bound) { return bound >= kInf ? PadicNumber::exact_zero(p) : PadicNumber::zero_at(p, bound); }

PadicNumber exact_one(int64_t p) { return PadicNumber::from_int(p, 1, PadicNumber::max_rel(p)); }

struct PowerTable {
    std::array<uint64_t, 63> pw{};
    int count = 0;
    explicit PowerTable(int64_t p) {
        pw[0] = 1;
        count = 1;
        while (count < 63 && pw[size_t(count - 1)] <= ((uint64_t(1) << 62) / uint64_t(p))) {
            pw[size_t(count)] = pw[size_t(count - 1)] * uint64_t(p);
            ++count;
        }
    }
};

}  // namespace

// ---------------------------------------------------------------- basics

LaurentSeries LaurentSeries::zero(int64_t p, int64_t max_width) {
    LaurentSeries s;
    s.p_ = p;
    s.max_width_ = max_width;
    return s;
}

LaurentSeries LaurentSeries::constant(const PadicNumber& c, int64_t max_width) { return monomial(c, 0, max_width); }

LaurentSeries LaurentSeries::monomial(const PadicNumber& c, int64_t exponent, int64_t max_width) {
    return from_coeffs(c.p(), exponent, {c}, kInf, kInf, max_width);
}

LaurentSeries LaurentSeries::from_coeffs(int64_t p, int64_t lo, std::vector<PadicNumber> coeffs, int64_t below, int64_t above, int64_t max_width) {
    LaurentSeries s;
    s.p_ = p;
    s.lo_ = lo;
    s.c_ = std::move(coeffs);
    s.below_ = std::min(below, kInf);
    s.above_ = std::min(above, kInf);
    s.max_width_ = max_width;
    for (const auto& x : s.c_)
        if (x.p() != p && x.p() != 0) fail(ErrorCode::InvalidArgument, "series coefficient has the wrong prime");
    s.check_width(s.lo(), s.hi(), max_width, "construction");
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::with_max_width(int64_t w) const {
    LaurentSeries r = *this;
    r.max_width_ = w;
    return r;
}

void LaurentSeries::check_width(int64_t lo, int64_t hi, int64_t cap, const char* what) const {
    if (hi - lo + 1 > cap)
        fail(ErrorCode::WindowOverflow, std::string(what) + " needs window [" + std::to_string(lo) + ", " + std::to_string(hi) + "], width " +
                                            std::to_string(hi - lo + 1) + " exceeds " + std::to_string(cap));
}

void LaurentSeries::normalize() {
    auto removable = [](const PadicNumber& x, int64_t tail) {
        // only when the tail says exactly as much as the coefficient did
        return (x.is_exact_zero() && tail >= kInf) || (x.is_inexact_zero() && x.abs_prec() == tail);
    };
    size_t first = 0, last = c_.size();
    while (last - first > 1 && removable(c_[first], below_)) ++first;
    while (last - first > 1 && removable(c_[last - 1], above_)) --last;
    if (last - first == 1 && c_[first].is_exact_zero() && tails_exact()) first = last;
    if (first > 0 || last < c_.size()) {
        std::vector<PadicNumber> kept(c_.begin() + long(first), c_.begin() + long(last));
        lo_ += int64_t(first);
        c_ = std::move(kept);
    }
    if (c_.empty()) {
        if (tails_exact()) {
            lo_ = 0;
        } else {
            c_.push_back(PadicNumber::zero_at(p_, std::min(below_, above_)));
        }
    }
}

PadicNumber LaurentSeries::coeff(int64_t e) const {
    if (c_.empty()) return PadicNumber::exact_zero(p_);
    if (e < lo_) return tail_value(p_, below_);
    if (e > hi()) return tail_value(p_, above_);
    return c_[size_t(e - lo_)];
}

bool LaurentSeries::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

int64_t LaurentSeries::precision_floor() const {
    int64_t f = kInf;
    for (const auto& x : c_) f = std::min(f, x.abs_prec());
    return f;
}

int64_t LaurentSeries::val_lower() const {
    int64_t v = std::min(below_, above_);
    for (const auto& x : c_) v = std::min(v, vlow(x));
    return v;
}

std::pair<int64_t, bool> LaurentSeries::valuation_info() const {
    int64_t v = std::min(below_, above_);
    bool det = false;
    for (const auto& x : c_) {
        int64_t w = vlow(x);
        if (w < v) {
            v = w;
            det = x.is_nonzero();
        } else if (w == v && x.is_nonzero()) {
            det = true;
        }
    }
    if (v >= kInf) return {kInf, false};
    return {v, det};
}

std::optional<int64_t> LaurentSeries::lowest_nonzero() const {
    for (size_t k = 0; k < c_.size(); ++k)
        if (c_[k].is_nonzero()) return lo_ + int64_t(k);
    return std::nullopt;
}

// ---------------------------------------------------------------- ring operations

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.p_ != b.p_ && a.p_ != 0 && b.p_ != 0) fail(ErrorCode::InvalidArgument, "series over different primes");
    const int64_t cap = std::max(a.max_width_, b.max_width_);
    if (a.is_exact_zero()) return b.with_max_width(cap);
    if (b.is_exact_zero()) return a.with_max_width(cap);
    const int64_t lo = std::min(a.lo_, b.lo_);
    const int64_t hi = std::max(a.hi(), b.hi());
    a.check_width(lo, hi, cap, "sum");
    std::vector<PadicNumber> c;
    c.reserve(size_t(hi - lo + 1));
    for (int64_t e = lo; e <= hi; ++e) c.push_back(a.coeff(e) + b.coeff(e));
    return LaurentSeries::from_coeffs(a.p_, lo, std::move(c), std::min(a.below_, b.below_), std::min(a.above_, b.above_), cap);
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    return LaurentSeries::multiply(a, b, std::max(a.max_width(), b.max_width()));
}

LaurentSeries LaurentSeries::multiply(const LaurentSeries& a, const LaurentSeries& b, int64_t width_cap) {
    if (a.p_ != b.p_ && a.p_ != 0 && b.p_ != 0) fail(ErrorCode::InvalidArgument, "series over different primes");
    const int64_t p = a.p_ != 0 ? a.p_ : b.p_;
    const int64_t keep_cap = std::max(a.max_width_, b.max_width_);
    if (a.is_exact_zero() || b.is_exact_zero()) return zero(p, keep_cap);

    const int64_t la = a.lo_, ha = a.hi(), lb = b.lo_, hb = b.hi();
    const int64_t lo = la + lb, hi = ha + hb;
    a.check_width(lo, hi, width_cap, "product");

    const size_t na = a.c_.size(), nb = b.c_.size();
    std::vector<int64_t> va(na), vb(nb), ea(na), eb(nb);
    for (size_t i = 0; i < na; ++i) {
        va[i] = vlow(a.c_[i]);
        ea[i] = a.c_[i].abs_prec();
    }
    for (size_t j = 0; j < nb; ++j) {
        vb[j] = vlow(b.c_[j]);
        eb[j] = b.c_[j].abs_prec();
    }
    auto prefix_min = [](const std::vector<int64_t>& v) {
        std::vector<int64_t> r(v.size());
        int64_t m = kInf;
        for (size_t i = 0; i < v.size(); ++i) r[i] = m = std::min(m, v[i]);
        return r;
    };
    auto suffix_min = [](const std::vector<int64_t>& v) {
        std::vector<int64_t> r(v.size());
        int64_t m = kInf;
        for (size_t i = v.size(); i-- > 0;) r[i] = m = std::min(m, v[i]);
        return r;
    };
    const auto pa = prefix_min(va), sa = suffix_min(va), pb = prefix_min(vb), sb = suffix_min(vb);
    // min over window exponents <= t (prefix) or >= t (suffix)
    auto pre = [](const std::vector<int64_t>& pm, int64_t lo_w, int64_t t) {
        if (t < lo_w) return kInf;
        size_t idx = size_t(std::min<int64_t>(t - lo_w, int64_t(pm.size()) - 1));
        return pm[idx];
    };
    auto suf = [](const std::vector<int64_t>& sm, int64_t lo_w, int64_t t) {
        int64_t idx = std::max<int64_t>(t - lo_w, 0);
        if (idx >= int64_t(sm.size())) return kInf;
        return sm[size_t(idx)];
    };
    const int64_t all_a = std::min({a.below_, a.above_, pa.back()});
    const int64_t all_b = std::min({b.below_, b.above_, pb.back()});

    const PowerTable pt(p);
    const int rel_cap = PadicNumber::max_rel(p);

    std::vector<PadicNumber> out;
    out.reserve(size_t(hi - lo + 1));
    for (int64_t k = lo; k <= hi; ++k) {
        const int64_t i0 = std::max(la, k - hb), i1 = std::min(ha, k - lb);
        int64_t err = kInf, vmin = kInf;
        for (int64_t i = i0; i <= i1; ++i) {
            const size_t ia = size_t(i - la), jb = size_t(k - i - lb);
            if (va[ia] >= kInf || vb[jb] >= kInf) continue;
            err = std::min(err, std::min(add_sat(ea[ia], vb[jb]), add_sat(eb[jb], va[ia])));
            if (a.c_[ia].is_nonzero() && b.c_[jb].is_nonzero()) vmin = std::min(vmin, va[ia] + vb[jb]);
        }
        err = std::min(err, add_sat(a.above_, std::min(b.below_, pre(pb, lb, k - ha - 1))));
        err = std::min(err, add_sat(a.below_, std::min(b.above_, suf(sb, lb, k - la + 1))));
        err = std::min(err, add_sat(b.above_, std::min(a.below_, pre(pa, la, k - hb - 1))));
        err = std::min(err, add_sat(b.below_, std::min(a.above_, suf(sa, la, k - lb + 1))));

        if (err <= vmin) {
            out.push_back(err >= kInf ? PadicNumber::exact_zero(p) : PadicNumber::zero_at(p, err));
            continue;
        }
        const int64_t L = std::min<int64_t>(err - vmin, rel_cap);
        const uint64_t M = pt.pw[size_t(L)];
        uint64_t acc = 0;
        for (int64_t i = i0; i <= i1; ++i) {
            const size_t ia = size_t(i - la), jb = size_t(k - i - lb);
            const PadicNumber& x = a.c_[ia];
            const PadicNumber& y = b.c_[jb];
            if (!x.is_nonzero() || !y.is_nonzero()) continue;
            const int64_t shift = va[ia] + vb[jb] - vmin;
            if (shift >= L) continue;
            uint64_t t = detail::mulmod(x.mantissa() % M, y.mantissa() % M, M);
            t = detail::mulmod(t, pt.pw[size_t(shift)], M);
            acc += t;
            if (acc >= M) acc -= M;
        }
        out.push_back(PadicNumber::from_parts(p, vmin, acc, int(L)));
    }
    const int64_t below = std::min(add_sat(a.below_, all_b), add_sat(b.below_, all_a));
    const int64_t above = std::min(add_sat(a.above_, all_b), add_sat(b.above_, all_a));
    return from_coeffs(p, lo, std::move(out), below, above, width_cap);
}

LaurentSeries LaurentSeries::scale(const PadicNumber& c) const {
    if (c.is_exact_zero()) return zero(p_, max_width_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = x * c;
    r.below_ = add_sat(below_, vlow(c));
    r.above_ = add_sat(above_, vlow(c));
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::mul_int(int64_t k) const {
    if (k == 0) return zero(p_, max_width_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = x.mul_int(k);
    const int64_t vk = detail::vp_i64(k, p_);
    r.below_ = add_sat(below_, vk);
    r.above_ = add_sat(above_, vk);
    return r;
}

LaurentSeries LaurentSeries::shift_exponent(int64_t k) const {
    LaurentSeries r = *this;
    if (!c_.empty()) r.lo_ += k;
    return r;
}

LaurentSeries LaurentSeries::sigma(int64_t q, int power) const {
    if (power < 0) fail(ErrorCode::InvalidArgument, "sigma power must be nonnegative");
    int64_t Q = 1;
    for (int i = 0; i < power; ++i) {
        if (Q > (int64_t(1) << 40) / q) fail(ErrorCode::WindowOverflow, "sigma exponent multiplier too large");
        Q *= q;
    }
    if (Q == 1 || c_.empty()) return *this;
    const int64_t lo = lo_ * Q, hi = this->hi() * Q;
    check_width(lo, hi, max_width_, "sigma");
    std::vector<PadicNumber> c(size_t(hi - lo + 1), PadicNumber::exact_zero(p_));
    for (size_t k = 0; k < c_.size(); ++k) c[k * size_t(Q)] = c_[k];
    return from_coeffs(p_, lo, std::move(c), below_, above_, max_width_);
}

LaurentSeries LaurentSeries::derivative() const {
    if (c_.empty()) return *this;
    std::vector<PadicNumber> c;
    c.reserve(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) c.push_back(c_[k].mul_int(lo_ + int64_t(k)));
    return from_coeffs(p_, lo_ - 1, std::move(c), below_, above_, max_width_);
}

LaurentSeries LaurentSeries::truncate(int64_t lo, int64_t hi) const {
    if (c_.empty() || lo > hi) return *this;
    if (lo <= lo_ && hi >= this->hi()) return *this;
    int64_t below = below_, above = above_;
    for (int64_t e = lo_; e < std::min(lo, this->hi() + 1); ++e) below = std::min(below, vlow(c_[size_t(e - lo_)]));
    for (int64_t e = std::max(hi + 1, lo_); e <= this->hi(); ++e) above = std::min(above, vlow(c_[size_t(e - lo_)]));
    const int64_t nlo = std::max(lo, lo_), nhi = std::min(hi, this->hi());
    if (nlo > nhi) {
        // nothing of the old window survives: keep a single slot at lo
        return from_coeffs(p_, lo, {PadicNumber::zero_at(p_, std::min(below, above))}, below, above, max_width_);
    }
    std::vector<PadicNumber> c(c_.begin() + long(nlo - lo_), c_.begin() + long(nhi - lo_ + 1));
    return from_coeffs(p_, nlo, std::move(c), below, above, max_width_);
}

LaurentSeries LaurentSeries::promoted() const {
    LaurentSeries r = *this;
    const int mr = PadicNumber::max_rel(p_);
    for (auto& x : r.c_) {
        if (x.is_nonzero()) x = PadicNumber::from_parts(p_, x.valuation(), x.mantissa(), mr);
        else x = PadicNumber::exact_zero(p_);
    }
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::with_abs(int64_t abs) const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = x.with_abs(abs);
    r.below_ = std::min(below_, abs);
    r.above_ = std::min(above_, abs);
    r.normalize();
    return r;
}

bool LaurentSeries::agrees(const LaurentSeries& o) const { return (*this - o).is_zero(); }

bool LaurentSeries::identical(const LaurentSeries& o) const {
    if (p_ != o.p_ || lo_ != o.lo_ || c_.size() != o.c_.size() || below_ != o.below_ || above_ != o.above_) return false;
    for (size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].identical(o.c_[k])) return false;
    return true;
}

std::string LaurentSeries::to_string() const {
    if (is_exact_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_exact_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[k].to_string() << ")*u^" << (lo_ + int64_t(k));
    }
    if (first) os << "0";
    if (below_ < kInf) os << " [below O(" << p_ << "^" << below_ << ")]";
    if (above_ < kInf) os << " [above O(" << p_ << "^" << above_ << ")]";
    return os.str();
}

// ---------------------------------------------------------------- differentials

OneForm derivation_d(const LaurentSeries& a) { return OneForm{a.derivative()}; }

OneForm d_sigma(const OneForm& w, int64_t q) {
    return OneForm{w.coefficient.sigma(q).mul_int(q).shift_exponent(q - 1)};
}

// ---------------------------------------------------------------- ring labels

std::string RingLabel::name() const {
    switch (kind) {
        case RingKind::GammaPlus: return "GammaPlus";
        case RingKind::Gamma: return "Gamma";
        case RingKind::GammaDagger: return "GammaDagger";
        case RingKind::EPlus: return "EPlus";
        case RingKind::E: return "E";
        case RingKind::EDagger: return "EDagger";
        case RingKind::RPlus: return "RPlus";
        case RingKind::R: return "R";
    }
    return "?";
}

RingLabel RingLabel::parse(const std::string& name) {
    static const std::pair<const char*, RingKind> table[] = {
        {"GammaPlus", RingKind::GammaPlus}, {"Gamma", RingKind::Gamma}, {"GammaDagger", RingKind::GammaDagger}, {"EPlus", RingKind::EPlus},
        {"E", RingKind::E},                 {"EDagger", RingKind::EDagger}, {"RPlus", RingKind::RPlus},       {"R", RingKind::R},
    };
    for (const auto& [n, k] : table)
        if (name == n) return RingLabel::of(k);
    fail(ErrorCode::ParseError, "unknown ring label '" + name + "'");
}

bool ring_contained(RingKind lower, RingKind upper) {
    auto up = [](RingKind k) -> std::vector<RingKind> {
        switch (k) {
            case RingKind::GammaPlus: return {RingKind::GammaDagger, RingKind::EPlus};
            case RingKind::GammaDagger: return {RingKind::Gamma, RingKind::EDagger};
            case RingKind::Gamma: return {RingKind::E};
            case RingKind::EPlus: return {RingKind::EDagger, RingKind::RPlus};
            case RingKind::EDagger: return {RingKind::E, RingKind::R};
            case RingKind::RPlus: return {RingKind::R};
            case RingKind::E:
            case RingKind::R: return {};
        }
        return {};
    };
    std::vector<RingKind> stack{lower};
    while (!stack.empty()) {
        RingKind k = stack.back();
        stack.pop_back();
        if (k == upper) return true;
        for (RingKind n : up(k)) stack.push_back(n);
    }
    return false;
}

Membership membership(const LaurentSeries& a, const RingLabel& label) {
    const RingKind k = label.kind;
    if (k == RingKind::E) return {};
    const bool integral = k == RingKind::GammaPlus || k == RingKind::Gamma || k == RingKind::GammaDagger;
    const bool no_negative = k == RingKind::GammaPlus || k == RingKind::EPlus || k == RingKind::RPlus;
    const bool certificate = label.has_certificate();
    for (size_t idx = 0; idx < a.coeffs().size(); ++idx) {
        const PadicNumber& x = a.coeffs()[idx];
        if (!x.is_nonzero()) continue;
        const int64_t e = a.lo() + int64_t(idx);
        if (integral && x.valuation() < 0) return {false, e};
        if (e < 0) {
            if (no_negative) return {false, e};
            if (certificate) {
                mpq_class lhs(static_cast<long>(x.valuation()));
                lhs += label.c;
                if (lhs < label.lambda * mpq_class(static_cast<long>(-e))) return {false, e};
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------- inversion

/*
 * Write a = c u^ord (1 + w) where c = a_ord has the minimal valuation k and
 * ord is the lowest exponent attaining it. Then w has integral coefficients,
 * and those at negative exponents are divisible by p. Newton's iteration
 * b <- b + b(1 - ab) converges in the weak topology; it is run on a finite
 * window and the result is certified afterwards:
 *
 *   if r = 1 - a b for the computed b (taken as exact), then the true
 *   inverse b* satisfies b* - b = b* r, and
 *     v(b*_m) >= -k + g(m + ord),
 *   with g(e) = 0 for e >= 0 and g(e) >= max(1, s(-e)) for e < 0, where s is
 *   the least ratio v(w_e)/(-e) over the negative part of w. Exactly vanishing
 *   negative or positive parts of w make the corresponding side of g infinite.
 */
LaurentSeries series_invert(const LaurentSeries& a, std::optional<std::pair<int64_t, int64_t>> target) {
    const int64_t p = a.p();
    if (a.is_zero()) fail(ErrorCode::NotAUnit, "series is zero at working precision");
    const auto [k, determined] = a.valuation_info();
    if (!determined) fail(ErrorCode::NotAUnit, "minimal coefficient valuation is not determined at working precision");

    int64_t ord = 0;
    bool found = false;
    for (size_t idx = 0; idx < a.coeffs().size(); ++idx) {
        const PadicNumber& x = a.coeffs()[idx];
        if (x.is_nonzero() && x.valuation() == k) {
            ord = a.lo() + int64_t(idx);
            found = true;
            break;
        }
    }
    if (!found) fail(ErrorCode::NotAUnit, "no coefficient of minimal valuation");
    if (a.below_bound() <= k) fail(ErrorCode::NotAUnit, "lower tail may hold a coefficient of minimal valuation");

    // slope data for g
    bool neg_exact = a.below_bound() >= kInf;
    mpq_class slope = -1;  // -1 means unset
    if (a.below_bound() < kInf) slope = 0;
    for (int64_t e = a.lo(); e < ord; ++e) {
        const PadicNumber& x = a.coeff(e);
        if (x.is_exact_zero()) continue;
        if (x.is_inexact_zero() && x.abs_prec() <= k)
            fail(ErrorCode::NotAUnit, "coefficient of u^" + std::to_string(e) + " may have minimal valuation");
        neg_exact = false;
        mpq_class ratio(mpz_class(static_cast<long>(vlow(x) - k)), mpz_class(static_cast<long>(ord - e)));
        ratio.canonicalize();
        if (slope < 0 || ratio < slope) slope = ratio;
    }
    bool pos_exact = a.above_bound() >= kInf;
    for (int64_t e = ord + 1; e <= a.hi(); ++e)
        if (!a.coeff(e).is_exact_zero()) pos_exact = false;

    auto g = [&](int64_t e) -> int64_t {
        if (e == 0) return 0;
        if (e > 0) return pos_exact ? kInf : 0;
        if (neg_exact) return kInf;
        mpz_class num = slope.get_num() * mpz_class(static_cast<long>(-e));
        mpz_class den = slope.get_den();
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return std::max<int64_t>(1, q.get_si());
    };
    // min of g over e <= t and over e >= t
    auto g_below = [&](int64_t t) -> int64_t { return t < 0 ? g(t) : 0; };
    auto g_above = [&](int64_t t) -> int64_t {
        if (t > 0) return g(t);
        return 0;
    };

    int rel = 1;
    for (const auto& x : a.coeffs())
        if (x.is_nonzero()) rel = std::max(rel, x.rel());

    const int64_t cap = a.max_width();
    int64_t lo_t, hi_t;
    if (target) {
        lo_t = target->first;
        hi_t = target->second;
        if (lo_t > hi_t) fail(ErrorCode::InvalidArgument, "empty target window");
        if (hi_t - lo_t + 1 > cap) fail(ErrorCode::WindowOverflow, "target window exceeds the width cap");
    } else {
        // stop where the terms drop below the relative precision: past rel / slope
        // when the coefficients decay away from ord, after rel times the span otherwise
        auto extent = [&](bool exact, const mpq_class& decay, int64_t span) -> int64_t {
            if (exact) return 0;
            if (decay > 0) {
                mpz_class q;
                const mpz_class num = mpz_class(rel) * decay.get_den();
                mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), decay.get_num().get_mpz_t());
                return std::max<int64_t>(q.get_si(), 1);
            }
            return std::max<int64_t>(span, 1) * rel;
        };
        mpq_class pos_decay = a.above_bound() < kInf ? mpq_class(0) : mpq_class(-1);
        for (int64_t e = ord + 1; e <= a.hi() && a.above_bound() >= kInf; ++e) {
            const PadicNumber& x = a.coeff(e);
            if (x.is_exact_zero()) continue;
            mpq_class ratio(mpz_class(static_cast<long>(vlow(x) - k)), mpz_class(static_cast<long>(e - ord)));
            ratio.canonicalize();
            if (pos_decay < 0 || ratio < pos_decay) pos_decay = ratio;
        }
        const int64_t left = extent(neg_exact, slope, ord - a.lo());
        const int64_t right = extent(pos_exact, pos_decay, a.hi() - ord);
        const int64_t half = std::max<int64_t>(cap / 2, 1) - 1;
        int64_t nl = left, nr = right;
        if (left + right > half) {
            nl = half * left / (left + right);
            nr = half - nl;
        }
        lo_t = -ord - nl;
        hi_t = -ord + nr;
    }
    const int64_t wl = std::min(lo_t, -ord), wh = std::max(hi_t, -ord);
    const int64_t big = 4 * cap + 4 * a.width();

    const LaurentSeries one = LaurentSeries::constant(exact_one(p), cap);
    LaurentSeries b = LaurentSeries::monomial(a.coeff(ord).inverse(), -ord, cap);
    auto finite = [&](const LaurentSeries& s) {
        LaurentSeries t = s.truncate(wl, wh).promoted();
        return LaurentSeries::from_coeffs(p, t.window_empty() ? wl : t.lo(), t.coeffs(), kInf, kInf, cap);
    };
    for (int it = 0; it < 64; ++it) {
        LaurentSeries bp = finite(b);
        LaurentSeries r = one - LaurentSeries::multiply(a, bp, big);
        if (!bp.window_empty()) r = r.truncate(wl - bp.hi(), wh - bp.lo());
        LaurentSeries next = (bp + LaurentSeries::multiply(bp, r, big).with_max_width(big)).truncate(wl, wh).with_max_width(cap);
        if (next.identical(b)) break;
        b = next;
    }

    // certification
    const LaurentSeries bp = finite(b);
    const LaurentSeries r = one - LaurentSeries::multiply(a, bp, big);
    std::vector<int64_t> rv(r.coeffs().size());
    for (size_t j = 0; j < rv.size(); ++j) rv[j] = vlow(r.coeffs()[j]);
    const int64_t rlo = r.window_empty() ? 0 : r.lo(), rhi = r.window_empty() ? -1 : r.hi();
    auto err_at = [&](int64_t i) {
        int64_t e = kInf;
        for (int64_t j = rlo; j <= rhi; ++j) e = std::min(e, add_sat(rv[size_t(j - rlo)], g(i - j + ord)));
        e = std::min(e, add_sat(r.below_bound(), g_above(i - rlo + 1 + ord)));
        e = std::min(e, add_sat(r.above_bound(), g_below(i - rhi - 1 + ord)));
        return add_sat(e, -k);
    };

    std::vector<PadicNumber> out;
    out.reserve(size_t(hi_t - lo_t + 1));
    for (int64_t i = lo_t; i <= hi_t; ++i) {
        const int64_t err = err_at(i);
        const PadicNumber x = bp.coeff(i);
        if (x.is_exact_zero() || vlow(x) >= err) out.push_back(err >= kInf ? PadicNumber::exact_zero(p) : PadicNumber::zero_at(p, err));
        else out.push_back(x.with_abs(err));
    }

    // tails: min over the tail of max(-k + g(i + ord), err(i)), bounded below by the max of the two minima
    int64_t err_below = kInf, err_above = kInf;
    for (int64_t j = rlo; j <= rhi; ++j) {
        err_below = std::min(err_below, add_sat(rv[size_t(j - rlo)], g_below(lo_t - 1 - j + ord)));
        err_above = std::min(err_above, add_sat(rv[size_t(j - rlo)], g_above(hi_t + 1 - j + ord)));
    }
    err_below = std::min(err_below, r.below_bound());
    err_below = std::min(err_below, add_sat(r.above_bound(), g_below(lo_t - rhi - 2 + ord)));
    err_above = std::min(err_above, add_sat(r.below_bound(), g_above(hi_t + 2 - rlo + ord)));
    err_above = std::min(err_above, r.above_bound());
    const int64_t below = std::max(add_sat(g_below(lo_t - 1 + ord), -k), add_sat(err_below, -k));
    const int64_t above = std::max(add_sat(g_above(hi_t + 1 + ord), -k), add_sat(err_above, -k));
    return LaurentSeries::from_coeffs(p, lo_t, std::move(out), below, above, cap);
}

// ---------------------------------------------------------------- matrices

SeriesMatrix series_identity(size_t n, int64_t p, int64_t max_width) {
    return SeriesMatrix::identity(n, LaurentSeries::zero(p, max_width), LaurentSeries::constant(exact_one(p), max_width));
}

SeriesMatrix series_zero_matrix(size_t rows, size_t cols, int64_t p, int64_t max_width) {
    return SeriesMatrix(rows, cols, LaurentSeries::zero(p, max_width));
}

SeriesMatrix constant_matrix(const Matrix<PadicNumber>& m, int64_t max_width) {
    return m.map([&](const PadicNumber& x) { return LaurentSeries::constant(x, max_width); });
}

SeriesMatrix sigma(const SeriesMatrix& m, int64_t q, int power) {
    return m.map([&](const LaurentSeries& s) { return s.sigma(q, power); });
}

SeriesMatrix derivative(const SeriesMatrix& m) {
    return m.map([](const LaurentSeries& s) { return s.derivative(); });
}

SeriesMatrix scale(const SeriesMatrix& m, const LaurentSeries& s) {
    return m.map([&](const LaurentSeries& x) { return x * s; });
}

SeriesMatrix truncate(const SeriesMatrix& m, int64_t lo, int64_t hi) {
    return m.map([&](const LaurentSeries& x) { return x.truncate(lo, hi); });
}

SeriesMatrix with_max_width(const SeriesMatrix& m, int64_t w) {
    return m.map([&](const LaurentSeries& x) { return x.with_max_width(w); });
}

namespace {

int64_t prime_of(const SeriesMatrix& m) {
    for (const auto& x : m.data())
        if (x.p() != 0) return x.p();
    fail(ErrorCode::InvalidArgument, "matrix carries no prime");
}

int64_t width_of(const SeriesMatrix& m) {
    int64_t w = LaurentSeries::kDefaultMaxWidth;
    for (const auto& x : m.data()) w = std::max(w, x.max_width());
    return w;
}

// determinant of the submatrix on the given rows and columns, by expansion over column subsets
LaurentSeries minor_det(const SeriesMatrix& m, const std::vector<size_t>& rows, const std::vector<size_t>& cols) {
    const size_t r = rows.size();
    const int64_t p = prime_of(m);
    const int64_t w = width_of(m);
    if (r == 0) return LaurentSeries::constant(exact_one(p), w);
    std::vector<LaurentSeries> dp(size_t(1) << r, LaurentSeries::zero(p, w));
    dp[0] = LaurentSeries::constant(exact_one(p), w);
    for (size_t mask = 1; mask < dp.size(); ++mask) {
        const int depth = __builtin_popcountll(mask);
        const size_t row = rows[size_t(depth - 1)];
        LaurentSeries acc = LaurentSeries::zero(p, w);
        int pos = 0;
        for (size_t c = 0; c < r; ++c) {
            if (!(mask & (size_t(1) << c))) continue;
            const LaurentSeries& entry = m(row, cols[c]);
            const LaurentSeries& sub = dp[mask & ~(size_t(1) << c)];
            if (!entry.is_exact_zero() && !sub.is_exact_zero()) {
                LaurentSeries term = entry * sub;
                acc = ((depth - 1 + pos) % 2 == 0) ? acc + term : acc - term;
            }
            ++pos;
        }
        dp[mask] = acc;
    }
    return dp.back();
}

}  // namespace

LaurentSeries determinant(const SeriesMatrix& m) {
    if (!m.square()) fail(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
    if (m.rows() > 8) fail(ErrorCode::InvalidArgument, "series determinants are limited to rank 8");
    std::vector<size_t> idx(m.rows());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return minor_det(m, idx, idx);
}

SeriesMatrix adjugate(const SeriesMatrix& m) {
    if (!m.square()) fail(ErrorCode::InvalidArgument, "adjugate of a non-square matrix");
    const size_t n = m.rows();
    const int64_t p = prime_of(m);
    const int64_t w = width_of(m);
    SeriesMatrix adj = series_zero_matrix(n, n, p, w);
    if (n == 1) {
        adj(0, 0) = LaurentSeries::constant(exact_one(p), w);
        return adj;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<size_t> rows, cols;
            for (size_t t = 0; t < n; ++t) {
                if (t != j) rows.push_back(t);
                if (t != i) cols.push_back(t);
            }
            LaurentSeries d = minor_det(m, rows, cols);
            adj(i, j) = ((i + j) % 2 == 0) ? d : -d;
        }
    return adj;
}

SeriesMatrix inverse(const SeriesMatrix& m, std::optional<std::pair<int64_t, int64_t>> target) {
    LaurentSeries det = determinant(m);
    if (det.is_zero()) fail(ErrorCode::SingularInput, "determinant is zero at working precision");
    LaurentSeries inv = series_invert(det, target);
    return scale(adjugate(m), inv);
}

bool matrix_is_zero(const SeriesMatrix& m) {
    for (const auto& x : m.data())
        if (!x.is_zero()) return false;
    return true;
}

int64_t matrix_precision_floor(const SeriesMatrix& m) {
    int64_t f = kInf;
    for (const auto& x : m.data()) f = std::min(f, x.precision_floor());
    return f;
}

bool matrices_agree(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).agrees(b(i, j))) return false;
    return true;
}

std::optional<std::pair<std::pair<size_t, size_t>, int64_t>> matrix_membership(const SeriesMatrix& m, const RingLabel& label) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            Membership r = membership(m(i, j), label);
            if (!r.consistent) return std::make_pair(std::make_pair(i, j), r.witness);
        }
    return std::nullopt;
}

}  // namespace sigmod
