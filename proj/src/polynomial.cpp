#include "sigmod/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace sigmod {

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
    for (long c : coeffs) c_.emplace_back(c);
    trim();
}

void IntPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(int(i)) + b.coeff(int(i));
    return IntPolynomial(std::move(r));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(int(i)) - b.coeff(int(i));
    return IntPolynomial(std::move(r));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::compose_power(int k) const {
    if (is_zero()) return {};
    std::vector<mpz_class> r(size_t(degree()) * size_t(k) + 1);
    for (size_t i = 0; i < c_.size(); ++i) r[i * size_t(k)] = c_[i];
    return IntPolynomial(std::move(r));
}

std::string IntPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        std::string term = c_[i].get_str();
        if (!s.empty()) s += (c_[i] < 0) ? " - " : " + ";
        if (!s.empty() && c_[i] < 0) term = term.substr(1);
        s += term;
        if (i >= 1) s += "*t";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
}

std::vector<mpq_class> NewtonPolygon::expanded() const {
    std::vector<mpq_class> r;
    for (const auto& s : slopes)
        for (int64_t k = 0; k < s.multiplicity; ++k) r.push_back(s.value);
    return r;
}

NewtonPolygon newton_polygon(const std::vector<PadicNumber>& coeffs) {
    std::vector<std::pair<int64_t, int64_t>> pts;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i].is_nonzero()) pts.emplace_back(int64_t(i), coeffs[i].valuation());
    if (pts.empty()) fail(ErrorCode::InvalidArgument, "newton_polygon of the zero polynomial");

    const int64_t first = pts.front().first, last = pts.back().first;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (!coeffs[i].is_inexact_zero()) continue;
        if (int64_t(i) < first || int64_t(i) > last)
            fail(ErrorCode::AmbiguousValuation, "coefficient of degree " + std::to_string(i) + " is zero only at working precision");
    }

    // lower hull, monotone chain
    std::vector<std::pair<int64_t, int64_t>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b when it lies on or above segment a -> pt
            __int128 cross = (__int128)(b.first - a.first) * (pt.second - a.second) - (__int128)(b.second - a.second) * (pt.first - a.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }

    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (!coeffs[i].is_inexact_zero()) continue;
        const int64_t x = int64_t(i);
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            const auto& a = hull[k];
            const auto& b = hull[k + 1];
            if (x < a.first || x > b.first) continue;
            // hull height at x is a.v + (b.v - a.v)(x - a.i)/(b.i - a.i)
            __int128 lhs = (__int128)coeffs[i].valuation() * (b.first - a.first);
            __int128 rhs = (__int128)a.second * (b.first - a.first) + (__int128)(b.second - a.second) * (x - a.first);
            if (lhs < rhs)
                fail(ErrorCode::AmbiguousValuation, "coefficient of degree " + std::to_string(i) + " may lie below the hull");
            break;
        }
    }

    NewtonPolygon np;
    np.zero_roots = first;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        const auto& a = hull[k];
        const auto& b = hull[k + 1];
        mpq_class s(mpz_class(static_cast<long>(a.second - b.second)), mpz_class(static_cast<long>(b.first - a.first)));
        s.canonicalize();
        np.slopes.push_back({s, b.first - a.first});
    }
    std::sort(np.slopes.begin(), np.slopes.end(), [](const Slope& x, const Slope& y) { return x.value < y.value; });
    std::vector<Slope> merged;
    for (const auto& s : np.slopes) {
        if (!merged.empty() && merged.back().value == s.value) merged.back().multiplicity += s.multiplicity;
        else merged.push_back(s);
    }
    np.slopes = std::move(merged);
    return np;
}

namespace {

using QPoly = std::vector<mpq_class>;  // lowest degree first, trimmed

void qtrim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly qderiv(const QPoly& a) {
    QPoly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * mpq_class(static_cast<long>(i)));
    qtrim(r);
    return r;
}

QPoly qsub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = (i < a.size() ? a[i] : mpq_class(0)) - (i < b.size() ? b[i] : mpq_class(0));
    qtrim(r);
    return r;
}

// quotient and remainder; b nonzero
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (!a.empty() && a.size() >= b.size()) {
        const size_t shift = a.size() - b.size();
        mpq_class c = a.back() / b.back();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a.pop_back();
        qtrim(a);
    }
    qtrim(q);
    return {q, a};
}

QPoly qmonic(QPoly a) {
    if (a.empty()) return a;
    mpq_class lc = a.back();
    for (auto& c : a) c /= lc;
    return a;
}

QPoly qgcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        auto r = qdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return qmonic(a);
}

// Yun's algorithm: returns (factor, multiplicity) with squarefree factors.
std::vector<std::pair<QPoly, int>> squarefree_parts(const QPoly& f) {
    std::vector<std::pair<QPoly, int>> out;
    QPoly a0 = qgcd(f, qderiv(f));
    QPoly b = qdivmod(f, a0).first;
    QPoly c = qdivmod(qderiv(f), a0).first;
    QPoly d = qsub(c, qderiv(b));
    int i = 1;
    while (b.size() > 1) {
        QPoly g = qgcd(b, d);
        if (g.size() > 1) out.emplace_back(g, i);
        b = qdivmod(b, g).first;
        c = qdivmod(d, g).first;
        d = qsub(c, qderiv(b));
        ++i;
    }
    return out;
}

using cld = std::complex<long double>;

long double to_ld(const mpq_class& q) {
    // split to keep the full double range for large numerators
    mpf_class f(q, 256);
    long exp = 0;
    double mant = mpf_get_d_2exp(&exp, f.get_mpf_t());
    return std::ldexp(static_cast<long double>(mant), int(exp));
}

std::vector<cld> aberth_roots(const QPoly& f) {
    const size_t n = f.size() - 1;
    std::vector<long double> a(n + 1);
    for (size_t i = 0; i <= n; ++i) a[i] = to_ld(f[i] / f[n]);
    auto eval = [&](cld z, cld& dp) {
        cld p = a[n];
        dp = 0;
        for (size_t i = n; i-- > 0;) {
            dp = dp * z + p;
            p = p * z + a[i];
        }
        return p;
    };
    std::vector<cld> z(n);
    long double radius = std::pow(std::fabs(a[0]), 1.0L / static_cast<long double>(n));
    if (!(radius > 0) || !std::isfinite(radius)) radius = 1;
    for (size_t k = 0; k < n; ++k) {
        long double ang = 2 * std::numbers::pi_v<long double> * static_cast<long double>(k) / static_cast<long double>(n) + 0.4L;
        z[k] = std::polar(radius, ang);
    }
    if (n == 1) {
        z[0] = -a[0];
        return z;
    }
    const int max_iter = 2000;
    for (int it = 0; it < max_iter; ++it) {
        long double worst = 0;
        for (size_t k = 0; k < n; ++k) {
            cld dp;
            cld p = eval(z[k], dp);
            if (p == cld(0)) continue;
            cld w = p / dp;
            cld s = 0;
            for (size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (z[k] - z[j]);
            cld delta = w / (1.0L - w * s);
            z[k] -= delta;
            long double scale = std::max(1.0L, std::abs(z[k]));
            worst = std::max(worst, std::abs(delta) / scale);
        }
        if (worst < 1e-17L) return z;
    }
    fail(ErrorCode::NumericalFailure, "root iteration did not converge for degree " + std::to_string(n));
}

}  // namespace

std::vector<double> complex_root_magnitudes(const IntPolynomial& poly) {
    if (poly.is_zero()) fail(ErrorCode::InvalidArgument, "complex_root_magnitudes of the zero polynomial");
    const auto& c = poly.coeffs();
    size_t low = 0;
    while (c[low] == 0) ++low;
    // reversed polynomial: its roots are the reciprocal roots of poly
    QPoly rev;
    for (size_t i = c.size(); i-- > low;) rev.emplace_back(c[i]);
    qtrim(rev);
    std::vector<double> mags;
    if (rev.size() <= 1) return mags;
    for (const auto& [factor, mult] : squarefree_parts(rev)) {
        for (const auto& root : aberth_roots(factor))
            for (int k = 0; k < mult; ++k) mags.push_back(static_cast<double>(std::abs(root)));
    }
    std::sort(mags.begin(), mags.end());
    return mags;
}

}  // namespace sigmod
