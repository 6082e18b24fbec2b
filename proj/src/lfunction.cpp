#include "sigmod/lfunction.hpp"

#include <algorithm>

namespace sigmod {

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<std::string> sorted_point_ids(const CharPolyTable& table) {
    std::vector<std::string> ids;
    for (const auto& x : table.points) ids.push_back(x.id);
    return sorted(std::move(ids));
}

// a * b mod t^{T+1}
TruncatedSeries truncated_product(const TruncatedSeries& a, const TruncatedSeries& b, int T) {
    TruncatedSeries out(size_t(T) + 1, 0);
    for (size_t i = 0; i < a.size() && i <= size_t(T); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= size_t(T); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

const IntPolynomial& CharPolyTable::poly(const std::string& place, const std::string& point) const {
    auto it = polys.find({place, point});
    if (it == polys.end()) fail(ErrorCode::InvalidArgument, "no local factor for place " + place + " at point " + point);
    return it->second;
}

int64_t CharPolyTable::rank() const {
    for (const auto& x : points)
        for (const auto& l : places) {
            auto it = polys.find({l, x.id});
            if (it != polys.end()) return it->second.degree() / x.degree;
        }
    return 0;
}

void CharPolyTable::validate() const {
    if (q < 2) fail(ErrorCode::InvalidArgument, "q must be a prime power");
    int64_t r = q;
    int64_t pr = 2;
    while (r % pr != 0) ++pr;
    while (r % pr == 0) r /= pr;
    if (r != 1) fail(ErrorCode::InvalidArgument, "q must be a prime power");
    if (places.empty()) fail(ErrorCode::InvalidArgument, "table needs at least one place");
    const int64_t rk = rank();
    std::vector<std::string> seen;
    for (const auto& x : points) {
        if (x.degree < 1) fail(ErrorCode::InvalidArgument, "point " + x.id + " has a nonpositive degree");
        seen.push_back(x.id);
        for (const auto& l : places) {
            const IntPolynomial& P = poly(l, x.id);
            if (P.coeff(0) != 1) fail(ErrorCode::InvalidArgument, "local factor at " + l + ", " + x.id + " does not have constant term 1");
            if (P.degree() != rk * x.degree)
                fail(ErrorCode::InvalidArgument, "local factor at " + l + ", " + x.id + " has degree " + std::to_string(P.degree()) +
                                                     ", expected " + std::to_string(rk * x.degree));
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) fail(ErrorCode::InvalidArgument, "duplicate point id");
    if (polys.size() != places.size() * points.size()) fail(ErrorCode::InvalidArgument, "table has entries for unknown places or points");
}

Compatibility check_compatible(const CharPolyTable& table) {
    table.validate();
    const auto places = sorted(table.places);
    for (const auto& id : sorted_point_ids(table))
        for (size_t k = 1; k < places.size(); ++k)
            if (!(table.poly(places[0], id) == table.poly(places[k], id))) return Compatibility{false, id, places[0], places[k]};
    return {};
}

TruncatedSeries series_quotient(const IntPolynomial& num, const IntPolynomial& den, int T) {
    if (T < 0) fail(ErrorCode::InvalidArgument, "truncation degree must be nonnegative");
    if (den.coeff(0) == 0) fail(ErrorCode::InvalidArgument, "denominator vanishes at t = 0");
    const mpq_class d0 = mpq_class(den.coeff(0));
    TruncatedSeries out(size_t(T) + 1, 0);
    for (int k = 0; k <= T; ++k) {
        mpq_class acc = mpq_class(num.coeff(k));
        for (int j = 1; j <= std::min(k, den.degree()); ++j) acc -= mpq_class(den.coeff(j)) * out[size_t(k - j)];
        out[size_t(k)] = acc / d0;
    }
    return out;
}

TruncatedSeries lfunction_truncated(const CharPolyTable& table, const std::string& place, int T) {
    table.validate();
    if (std::find(table.places.begin(), table.places.end(), place) == table.places.end())
        fail(ErrorCode::InvalidArgument, "unknown place " + place);
    TruncatedSeries acc = series_quotient(IntPolynomial::one(), IntPolynomial::one(), T);
    for (const auto& id : sorted_point_ids(table))
        acc = truncated_product(acc, series_quotient(IntPolynomial::one(), table.poly(place, id), T), T);
    return acc;
}

TraceCheck trace_formula_check(const CharPolyTable& table, const std::string& place, const IntPolynomial& P0, const IntPolynomial& P1,
                               const IntPolynomial& P2, int T) {
    TraceCheck out;
    out.euler = lfunction_truncated(table, place, T);
    out.cohomological = series_quotient(P1, P0 * P2, T);
    out.degree = T;
    for (int k = 0; k <= T; ++k)
        if (out.euler[size_t(k)] != out.cohomological[size_t(k)]) {
            out.consistent = false;
            out.degree = k;
            break;
        }
    return out;
}

int pole_order_at(const IntPolynomial& P, int64_t q, int64_t d) {
    if (P.is_zero()) fail(ErrorCode::InvalidArgument, "pole order of the zero polynomial");
    if (q < 2 || d < 0) fail(ErrorCode::InvalidArgument, "q must be at least 2 and d nonnegative");
    mpz_class qd;
    mpz_pow_ui(qd.get_mpz_t(), mpz_class(static_cast<long>(q)).get_mpz_t(), static_cast<unsigned long>(d));
    const mpq_class root(1, qd);
    std::vector<mpq_class> c;
    for (const auto& x : P.coeffs()) c.push_back(mpq_class(x));
    int order = 0;
    while (c.size() > 1) {
        // synthetic division by (t - root), highest degree first
        std::vector<mpq_class> quot(c.size() - 1);
        mpq_class carry = 0;
        for (size_t k = c.size(); k-- > 0;) {
            carry = carry * root + c[k];
            if (k > 0) quot[k - 1] = carry;
        }
        if (carry != 0) break;
        c = std::move(quot);
        ++order;
    }
    return order;
}

PuritySummary check_pure_system(const CharPolyTable& table, int64_t w, double tol) {
    table.validate();
    std::map<std::string, int64_t> degree;
    for (const auto& x : table.points) degree[x.id] = x.degree;
    PuritySummary out;
    for (const auto& l : sorted(table.places))
        for (const auto& id : sorted_point_ids(table)) {
            PurityEntry e{l, id, purity_check(table.poly(l, id), table.q, degree[id], w, tol)};
            out.all_pure = out.all_pure && e.report.pure;
            out.entries.push_back(std::move(e));
        }
    return out;
}

}  // namespace sigmod
