#include "sigmod/unramified.hpp"

#include "sigmod/linalg.hpp"

namespace sigmod {

namespace {

using FpPoly = std::vector<int64_t>;  // lowest degree first, coefficients in [0, p)

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, int64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    // m is monic
    const size_t d = m.size() - 1;
    for (size_t k = r.size(); k-- > d;) {
        int64_t c = r[k];
        if (c == 0) continue;
        for (size_t i = 0; i <= d; ++i) r[k - d + i] = ((r[k - d + i] - c * m[i]) % p + p) % p;
    }
    fp_trim(r);
    return r;
}

FpPoly fp_mod(FpPoly a, const FpPoly& b, int64_t p) {
    fp_trim(a);
    const size_t d = b.size() - 1;
    int64_t lead_inv = int64_t(detail::invmod(uint64_t(b.back()), uint64_t(p)));
    while (a.size() > d) {
        int64_t c = a.back() * lead_inv % p;
        const size_t shift = a.size() - 1 - d;
        for (size_t i = 0; i <= d; ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        fp_trim(a);
    }
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, int64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Ben-Or: m is irreducible iff gcd(x^{p^i} - x, m) = 1 for i <= deg/2.
bool fp_irreducible(const FpPoly& m, int64_t p) {
    const size_t d = m.size() - 1;
    FpPoly x = {0, 1};
    FpPoly power = x;
    for (size_t i = 1; i <= d / 2; ++i) {
        FpPoly acc = {1};
        FpPoly base = power;
        for (int64_t e = p; e > 0; e >>= 1) {
            if (e & 1) acc = fp_mulmod(acc, base, m, p);
            base = fp_mulmod(base, base, m, p);
        }
        power = acc;
        FpPoly diff = power;
        diff.resize(std::max<size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] - 1 + p) % p;
        fp_trim(diff);
        if (diff.empty() || fp_gcd(m, diff, p).size() > 1) return false;
    }
    return true;
}

}  // namespace

std::shared_ptr<const UnramifiedField> UnramifiedField::create(int64_t p, int f, int rel) {
    if (!detail::is_prime(p)) fail(ErrorCode::InvalidArgument, "p=" + std::to_string(p) + " is not prime");
    if (f < 1) fail(ErrorCode::InvalidArgument, "extension degree must be positive");
    auto field = std::make_shared<UnramifiedField>();
    field->p_ = p;
    field->f_ = f;
    field->rel_ = rel;

    if (f == 1) {
        field->modulus_ = {0};
        field->frob_ = Matrix<PadicNumber>(1, 1, PadicNumber::from_int(p, 1, rel));
        return field;
    }

    // first monic irreducible in lexicographic order of (c_0, ..., c_{f-1})
    std::vector<int64_t> c(size_t(f), 0);
    while (true) {
        FpPoly m(c.begin(), c.end());
        m.push_back(1);
        if (m[0] != 0 && fp_irreducible(m, p)) break;
        size_t k = 0;
        while (k < c.size() && ++c[k] == p) c[k++] = 0;
        if (k == c.size()) fail(ErrorCode::InvalidArgument, "no irreducible polynomial found");
    }
    field->modulus_ = c;

    // the field is usable for arithmetic once the modulus is set
    FieldPtr fp = field;
    const UnramifiedScalar gen = UnramifiedScalar::generator(fp);
    UnramifiedScalar y = UnramifiedScalar::one(fp);
    for (int64_t i = 0; i < p; ++i) y = y * gen;

    auto eval_modulus = [&](const UnramifiedScalar& z, UnramifiedScalar& deriv) {
        UnramifiedScalar val = UnramifiedScalar::one(fp);
        deriv = UnramifiedScalar::from_padic(fp, PadicNumber::from_int(p, f, rel));
        for (int i = f - 1; i >= 0; --i) {
            val = val * z + UnramifiedScalar::from_padic(fp, PadicNumber::from_int(p, c[size_t(i)], rel));
            if (i >= 1) deriv = deriv * z + UnramifiedScalar::from_padic(fp, PadicNumber::from_int(p, c[size_t(i)] * i, rel));
        }
        return val;
    };
    for (int it = 0; it < 80; ++it) {
        UnramifiedScalar deriv;
        UnramifiedScalar val = eval_modulus(y, deriv);
        if (val.is_zero()) break;
        y = y - val / deriv;
    }

    Matrix<PadicNumber> frob{size_t(f), size_t(f), PadicNumber::exact_zero(p)};
    UnramifiedScalar power = UnramifiedScalar::one(fp);
    for (int j = 0; j < f; ++j) {
        for (int i = 0; i < f; ++i) frob(size_t(i), size_t(j)) = power.coords()[size_t(i)];
        power = power * y;
    }
    field->frob_ = std::move(frob);
    return field;
}

UnramifiedScalar::UnramifiedScalar(FieldPtr field, std::vector<PadicNumber> coords) : field_(std::move(field)), c_(std::move(coords)) {
    if (int(c_.size()) != field_->f()) fail(ErrorCode::InvalidArgument, "coordinate count does not match the extension degree");
}

UnramifiedScalar UnramifiedScalar::zero(const FieldPtr& field) {
    return UnramifiedScalar(field, std::vector<PadicNumber>(size_t(field->f()), PadicNumber::exact_zero(field->p())));
}

UnramifiedScalar UnramifiedScalar::one(const FieldPtr& field) {
    return from_padic(field, PadicNumber::from_int(field->p(), 1, field->rel()));
}

UnramifiedScalar UnramifiedScalar::from_padic(const FieldPtr& field, const PadicNumber& c) {
    UnramifiedScalar r = zero(field);
    r.c_[0] = c;
    return r;
}

UnramifiedScalar UnramifiedScalar::generator(const FieldPtr& field) {
    if (field->f() == 1) return zero(field);
    UnramifiedScalar r = zero(field);
    r.c_[1] = PadicNumber::from_int(field->p(), 1, field->rel());
    return r;
}

bool UnramifiedScalar::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

int64_t UnramifiedScalar::val_lower() const {
    int64_t v = PadicNumber::kInf;
    for (const auto& x : c_) v = std::min(v, x.val_lower());
    return v;
}

UnramifiedScalar operator+(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    UnramifiedScalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
}

UnramifiedScalar operator-(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    UnramifiedScalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
}

UnramifiedScalar UnramifiedScalar::operator-() const {
    UnramifiedScalar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

UnramifiedScalar operator*(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    const auto& field = a.field_;
    const size_t f = size_t(field->f());
    const int64_t p = field->p();
    std::vector<PadicNumber> prod(2 * f - 1, PadicNumber::exact_zero(p));
    for (size_t i = 0; i < f; ++i) {
        if (a.c_[i].is_exact_zero()) continue;
        for (size_t j = 0; j < f; ++j) prod[i + j] = prod[i + j] + a.c_[i] * b.c_[j];
    }
    // x^f = -sum c_i x^i
    const auto& m = field->modulus();
    for (size_t k = prod.size(); k-- > f;) {
        if (prod[k].is_exact_zero()) continue;
        PadicNumber lead = prod[k];
        for (size_t i = 0; i < f; ++i)
            if (m[i] != 0) prod[k - f + i] = prod[k - f + i] - lead.mul_int(m[i]);
    }
    prod.resize(f);
    return UnramifiedScalar(field, std::move(prod));
}

UnramifiedScalar UnramifiedScalar::scale(const PadicNumber& c) const {
    UnramifiedScalar r = *this;
    for (auto& x : r.c_) x = x * c;
    return r;
}

UnramifiedScalar UnramifiedScalar::inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero in the unramified extension");
    const size_t f = size_t(field_->f());
    const int64_t p = field_->p();
    if (f == 1) return from_padic(field_, c_[0].inverse());
    // multiplication-by-this matrix, columns are this * x^j
    Matrix<PadicNumber> mult(f, f, PadicNumber::exact_zero(p));
    UnramifiedScalar col = *this;
    const UnramifiedScalar gen = generator(field_);
    for (size_t j = 0; j < f; ++j) {
        for (size_t i = 0; i < f; ++i) mult(i, j) = col.c_[i];
        col = col * gen;
    }
    const PadicNumber one_p = PadicNumber::from_int(p, 1, field_->rel());
    Matrix<PadicNumber> inv = sigmod::inverse(mult, one_p);
    std::vector<PadicNumber> coords(f);
    for (size_t i = 0; i < f; ++i) coords[i] = inv(i, 0);
    return UnramifiedScalar(field_, std::move(coords));
}

UnramifiedScalar UnramifiedScalar::frobenius(int64_t k) const {
    const int64_t f = field_->f();
    int64_t e = ((k % f) + f) % f;
    UnramifiedScalar r = *this;
    const auto& S = field_->frobenius_matrix();
    for (int64_t step = 0; step < e; ++step) {
        std::vector<PadicNumber> next(size_t(f), PadicNumber::exact_zero(field_->p()));
        for (size_t i = 0; i < size_t(f); ++i)
            for (size_t j = 0; j < size_t(f); ++j) next[i] = next[i] + S(i, j) * r.c_[j];
        r.c_ = std::move(next);
    }
    return r;
}

bool UnramifiedScalar::agrees(const UnramifiedScalar& o) const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (!sigmod::agrees(c_[i], o.c_[i])) return false;
    return true;
}

}  // namespace sigmod
