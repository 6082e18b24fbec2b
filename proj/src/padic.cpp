#include "sigmod/padic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace sigmod {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorCode::AmbiguousValuation: return "AmbiguousValuation";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::WindowOverflow: return "WindowOverflow";
        case ErrorCode::NotAUnit: return "NotAUnit";
        case ErrorCode::MembershipViolated: return "MembershipViolated";
        case ErrorCode::SingularFrobenius: return "SingularFrobenius";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::NotFactorable: return "NotFactorable";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::NonUnitPivot: return "NonUnitPivot";
        case ErrorCode::NotHorizontal: return "NotHorizontal";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::CocycleViolated: return "CocycleViolated";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

namespace detail {

uint64_t pow_u64(int64_t p, int64_t k) {
    uint64_t r = 1;
    for (int64_t i = 0; i < k; ++i) {
        if (r > (uint64_t(1) << 62) / uint64_t(p)) fail(ErrorCode::InvalidArgument, "power of p exceeds 62 bits");
        r *= uint64_t(p);
    }
    return r;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

uint64_t invmod(uint64_t a, uint64_t m) {
    if (m == 1) return 0;
    __int128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) fail(ErrorCode::DivisionByZero, "mantissa is not invertible");
    if (t < 0) t += m;
    return uint64_t(t);
}

int64_t sat_add(int64_t a, int64_t b) {
    if (a >= PadicNumber::kInf || b >= PadicNumber::kInf) return PadicNumber::kInf;
    return a + b;
}

int64_t vp_i64(int64_t x, int64_t p) {
    if (x == 0) return PadicNumber::kInf;
    int64_t k = 0;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    return k;
}

bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace detail

using detail::invmod;
using detail::mulmod;
using detail::pow_u64;

namespace {

void check_same_prime(const PadicNumber& a, const PadicNumber& b) {
    if (a.p() != b.p() && a.p() != 0 && b.p() != 0)
        fail(ErrorCode::InvalidArgument, "mixed primes " + std::to_string(a.p()) + " and " + std::to_string(b.p()));
}

int64_t prime_of(const PadicNumber& a, const PadicNumber& b) { return a.p() != 0 ? a.p() : b.p(); }

uint64_t residue(const mpz_class& x, uint64_t m) {
    return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m));
}

int64_t vp_mpz(mpz_class& x, int64_t p) {
    int64_t k = 0;
    mpz_class q, r;
    mpz_class P(static_cast<long>(p));
    while (true) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), P.get_mpz_t());
        if (r != 0) break;
        x = q;
        ++k;
    }
    return k;
}

}  // namespace

int PadicNumber::max_rel(int64_t p) {
    int r = 0;
    unsigned __int128 v = 1;
    while (v * (unsigned __int128)p < ((unsigned __int128)1 << 62)) {
        v *= p;
        ++r;
    }
    return r;
}

PadicNumber PadicNumber::exact_zero(int64_t p) {
    PadicNumber z;
    z.p_ = p;
    return z;
}

PadicNumber PadicNumber::zero_at(int64_t p, int64_t abs_prec) {
    PadicNumber z;
    z.p_ = p;
    z.v_ = std::min(abs_prec, kInf);
    z.rel_ = 0;
    z.m_ = 0;
    z.mod_ = 1;
    return z;
}

PadicNumber PadicNumber::from_parts(int64_t p, int64_t val, uint64_t mantissa, int rel) {
    if (rel > max_rel(p)) fail(ErrorCode::InvalidArgument, "relative precision " + std::to_string(rel) + " too large for p=" + std::to_string(p));
    if (rel <= 0) return zero_at(p, val + std::max(rel, 0));
    uint64_t mod = pow_u64(p, rel);
    mantissa %= mod;
    if (mantissa == 0) return zero_at(p, val + rel);
    int k = 0;
    while (mantissa % uint64_t(p) == 0) {
        mantissa /= uint64_t(p);
        ++k;
    }
    PadicNumber x;
    x.p_ = p;
    x.v_ = val + k;
    x.rel_ = rel - k;
    x.mod_ = pow_u64(p, x.rel_);
    x.m_ = mantissa % x.mod_;
    return x;
}

PadicNumber PadicNumber::from_int(int64_t p, int64_t value, int rel) {
    return from_mpz(p, mpz_class(static_cast<long>(value)), rel);
}

PadicNumber PadicNumber::from_mpz(int64_t p, const mpz_class& value, int rel) {
    if (value == 0) return exact_zero(p);
    mpz_class x = value;
    int64_t v = vp_mpz(x, p);
    uint64_t mod = pow_u64(p, rel);
    return from_parts(p, v, residue(x, mod), rel);
}

PadicNumber PadicNumber::from_mpq(int64_t p, const mpq_class& value, int rel) {
    if (value == 0) return exact_zero(p);
    mpz_class num = value.get_num(), den = value.get_den();
    int64_t v = vp_mpz(num, p) - vp_mpz(den, p);
    uint64_t mod = pow_u64(p, rel);
    uint64_t m = mulmod(residue(num, mod), invmod(residue(den, mod), mod), mod);
    return from_parts(p, v, m, rel);
}

PadicNumber PadicNumber::from_rational(int64_t p, int64_t num, int64_t den, int rel) {
    if (den == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
    return from_mpq(p, mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))), rel);
}

PadicNumber PadicNumber::operator-() const {
    if (!is_nonzero()) return *this;
    PadicNumber r = *this;
    r.m_ = (mod_ - m_) % mod_;
    return r;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    const int64_t p = prime_of(a, b);
    const int64_t abs = std::min(a.abs_prec(), b.abs_prec());
    const int64_t vmin = std::min(a.v_, b.v_);
    if (abs <= vmin) return PadicNumber::zero_at(p, abs);
    const int64_t L = abs - vmin;
    const uint64_t M = pow_u64(p, L);
    uint64_t sum = 0;
    for (const PadicNumber* x : {&a, &b}) {
        if (!x->is_nonzero()) continue;
        const int64_t e = x->v_ - vmin;
        if (e >= L) continue;
        sum += (x->m_ % pow_u64(p, L - e)) * pow_u64(p, e);
        if (sum >= M) sum -= M;
    }
    return PadicNumber::from_parts(p, vmin, sum, int(L));
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    const int64_t p = prime_of(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::exact_zero(p);
    if (a.is_zero() || b.is_zero()) return PadicNumber::zero_at(p, detail::sat_add(a.v_, b.v_));
    PadicNumber r;
    r.p_ = p;
    r.v_ = a.v_ + b.v_;
    r.rel_ = std::min(a.rel_, b.rel_);
    r.mod_ = std::min(a.mod_, b.mod_);
    r.m_ = mulmod(a.m_ % r.mod_, b.m_ % r.mod_, r.mod_);
    return r;
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    const int64_t p = prime_of(a, b);
    if (b.is_zero()) fail(ErrorCode::DivisionByZero, "divisor is zero at working precision");
    if (a.is_exact_zero()) return PadicNumber::exact_zero(p);
    if (a.is_zero()) return PadicNumber::zero_at(p, a.v_ - b.v_);
    PadicNumber r;
    r.p_ = p;
    r.v_ = a.v_ - b.v_;
    r.rel_ = std::min(a.rel_, b.rel_);
    r.mod_ = std::min(a.mod_, b.mod_);
    r.m_ = mulmod(a.m_ % r.mod_, invmod(b.m_ % r.mod_, r.mod_), r.mod_);
    return r;
}

PadicNumber PadicNumber::mul_int(int64_t k) const {
    if (k == 0) return exact_zero(p_);
    if (is_exact_zero()) return *this;
    const int64_t vk = detail::vp_i64(k, p_);
    int64_t unit = k;
    for (int64_t i = 0; i < vk; ++i) unit /= p_;
    if (is_zero()) return zero_at(p_, v_ + vk);
    PadicNumber r = *this;
    r.v_ += vk;
    int64_t u = unit % int64_t(mod_);
    if (u < 0) u += int64_t(mod_);
    r.m_ = mulmod(m_, uint64_t(u), mod_);
    return r;
}

PadicNumber PadicNumber::div_int(int64_t k) const {
    if (k == 0) fail(ErrorCode::DivisionByZero, "division by the integer 0");
    if (is_exact_zero()) return *this;
    const int64_t vk = detail::vp_i64(k, p_);
    int64_t unit = k;
    for (int64_t i = 0; i < vk; ++i) unit /= p_;
    if (is_zero()) return zero_at(p_, v_ - vk);
    PadicNumber r = *this;
    r.v_ -= vk;
    int64_t u = unit % int64_t(mod_);
    if (u < 0) u += int64_t(mod_);
    r.m_ = mulmod(m_, invmod(uint64_t(u), mod_), mod_);
    return r;
}

PadicNumber PadicNumber::shift(int64_t k) const {
    if (is_exact_zero()) return *this;
    PadicNumber r = *this;
    r.v_ += k;
    return r;
}

PadicNumber PadicNumber::inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero at working precision");
    PadicNumber r = *this;
    r.v_ = -v_;
    r.m_ = invmod(m_, mod_);
    return r;
}

PadicNumber PadicNumber::with_rel(int rel) const {
    if (!is_nonzero() || rel >= rel_) return *this;
    if (rel <= 0) return zero_at(p_, v_);
    PadicNumber r = *this;
    r.rel_ = rel;
    r.mod_ = pow_u64(p_, rel);
    r.m_ = m_ % r.mod_;
    return r;
}

PadicNumber PadicNumber::with_abs(int64_t abs) const {
    if (is_exact_zero()) return abs >= kInf ? *this : zero_at(p_, abs);
    if (is_zero()) return zero_at(p_, std::min(v_, abs));
    if (abs <= v_) return zero_at(p_, abs);
    return with_rel(int(std::min<int64_t>(rel_, abs - v_)));
}

mpq_class PadicNumber::to_mpq() const {
    if (!is_nonzero()) return 0;
    mpz_class m(static_cast<unsigned long>(m_));
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(v_ >= 0 ? v_ : -v_));
    mpq_class r = v_ >= 0 ? mpq_class(m * pk) : mpq_class(m, pk);
    r.canonicalize();
    return r;
}

mpq_class PadicNumber::to_mpq_balanced() const {
    if (!is_nonzero()) return 0;
    mpz_class m(static_cast<unsigned long>(m_));
    if (m_ > mod_ / 2) m -= mpz_class(static_cast<unsigned long>(mod_));
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(v_ >= 0 ? v_ : -v_));
    mpq_class r = v_ >= 0 ? mpq_class(m * pk) : mpq_class(m, pk);
    r.canonicalize();
    return r;
}

std::string PadicNumber::to_string() const {
    const std::string P = std::to_string(p_);
    if (is_exact_zero()) return "0";
    if (is_zero()) return "0 mod " + P + "^" + std::to_string(v_);
    return P + "^" + std::to_string(v_) + " * " + std::to_string(m_) + " mod " + P + "^" + std::to_string(abs_prec());
}

namespace {

std::string strip_spaces(const std::string& s) {
    std::string r;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) r.push_back(c);
    return r;
}

bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

mpq_class parse_rational_literal(const std::string& s, const std::string& whole) {
    auto slash = s.find('/');
    std::string a = slash == std::string::npos ? s : s.substr(0, slash);
    std::string b = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer_literal(a) || !is_integer_literal(b)) fail(ErrorCode::ParseError, "bad scalar literal '" + whole + "'");
    if (b[0] == '+') b = b.substr(1);
    if (a[0] == '+') a = a.substr(1);
    mpz_class den(b);
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + whole + "'");
    mpq_class q(mpz_class(a), den);
    q.canonicalize();
    return q;
}

// Parses "P^E" and checks P against the expected prime.
int64_t parse_prime_power(const std::string& s, int64_t p, const std::string& whole) {
    auto caret = s.find('^');
    if (caret == std::string::npos) fail(ErrorCode::ParseError, "expected p^k in '" + whole + "'");
    std::string base = s.substr(0, caret), ex = s.substr(caret + 1);
    if (!is_integer_literal(base) || !is_integer_literal(ex)) fail(ErrorCode::ParseError, "expected p^k in '" + whole + "'");
    if (std::stoll(base) != p) fail(ErrorCode::ParseError, "prime mismatch in '" + whole + "' (working prime " + std::to_string(p) + ")");
    return std::stoll(ex);
}

}  // namespace

PadicNumber PadicNumber::parse(const std::string& text, int64_t p, int default_rel) {
    const std::string s = strip_spaces(text);
    if (s.empty()) fail(ErrorCode::ParseError, "empty scalar");
    if (s.rfind("O(", 0) == 0 && s.back() == ')') return zero_at(p, parse_prime_power(s.substr(2, s.size() - 3), p, text));

    std::string value_part = s;
    bool has_mod = false;
    int64_t abs = 0;
    auto mod_pos = s.find("mod");
    if (mod_pos != std::string::npos) {
        has_mod = true;
        value_part = s.substr(0, mod_pos);
        abs = parse_prime_power(s.substr(mod_pos + 3), p, text);
    }

    mpq_class value;
    auto star = value_part.find('*');
    if (star != std::string::npos) {
        int64_t v = parse_prime_power(value_part.substr(0, star), p, text);
        mpq_class m = parse_rational_literal(value_part.substr(star + 1), text);
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v >= 0 ? v : -v));
        value = v >= 0 ? mpq_class(m * pk) : mpq_class(m / pk);
    } else if (value_part.find('^') != std::string::npos) {
        int64_t v = parse_prime_power(value_part, p, text);
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v >= 0 ? v : -v));
        value = v >= 0 ? mpq_class(pk) : mpq_class(1, pk);
    } else {
        value = parse_rational_literal(value_part, text);
    }
    value.canonicalize();

    if (!has_mod) {
        if (value == 0) return exact_zero(p);
        return from_mpq(p, value, default_rel);
    }
    if (value == 0) return zero_at(p, abs);
    mpz_class num = value.get_num(), den = value.get_den();
    int64_t v = vp_mpz(num, p) - vp_mpz(den, p);
    if (abs <= v) return zero_at(p, abs);
    if (abs - v > max_rel(p)) fail(ErrorCode::ParseError, "precision in '" + text + "' exceeds the mantissa limit");
    return from_mpq(p, value, int(abs - v));
}

Cmp3 compare(const PadicNumber& a, const PadicNumber& b) {
    PadicNumber d = a - b;
    if (d.is_exact_zero()) return Cmp3::Equal;
    if (d.is_zero()) return Cmp3::Indistinguishable;
    return Cmp3::Unequal;
}

PadicNumber padic_arith(const PadicNumber& a, const PadicNumber& b, ArithOp op) {
    PadicNumber r;
    switch (op) {
        case ArithOp::Add: r = a + b; break;
        case ArithOp::Sub: r = a - b; break;
        case ArithOp::Mul: r = a * b; break;
        case ArithOp::Div: r = a / b; break;
    }
    if (r.is_inexact_zero()) fail(ErrorCode::PrecisionExhausted, "result has no provable digits (zero mod p^" + std::to_string(r.valuation()) + ")");
    return r;
}

}  // namespace sigmod
