#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sigmod/frobenius.hpp"
#include "sigmod/polynomial.hpp"

namespace sigmod {

struct ClosedPoint {
    std::string id;
    int64_t degree = 1;
};

/// Local factors det(1 - t^deg Frob_x) per place and closed point, already written in t.
struct CharPolyTable {
    int64_t q = 0;
    std::vector<std::string> places;
    std::vector<ClosedPoint> points;
    std::map<std::pair<std::string, std::string>, IntPolynomial> polys;

    const IntPolynomial& poly(const std::string& place, const std::string& point) const;
    /// Constant terms 1, every (place, point) present, degree = rank * point degree with one rank.
    void validate() const;
    /// Rank shared by all entries (0 for an empty table).
    int64_t rank() const;
};

struct Compatibility {
    bool compatible = true;
    std::string point, place1, place2;
};

Compatibility check_compatible(const CharPolyTable& table);

/// Coefficients of t^0..t^T of a power series with rational coefficients.
using TruncatedSeries = std::vector<mpq_class>;

/// prod_x P_x(t)^{-1} mod t^{T+1} over the points of the table.
TruncatedSeries lfunction_truncated(const CharPolyTable& table, const std::string& place, int T);

/// num / den mod t^{T+1}; den needs a nonzero constant term.
TruncatedSeries series_quotient(const IntPolynomial& num, const IntPolynomial& den, int T);

struct TraceCheck {
    bool consistent = true;
    /// Truncation degree for Consistent, first differing degree otherwise.
    int degree = 0;
    TruncatedSeries euler, cohomological;
};

/// Compares the Euler product with P1 / (P0 P2) up to degree T.
TraceCheck trace_formula_check(const CharPolyTable& table, const std::string& place, const IntPolynomial& P0, const IntPolynomial& P1,
                               const IntPolynomial& P2, int T);

/// Multiplicity of t = q^{-d} as a root of P.
int pole_order_at(const IntPolynomial& P, int64_t q, int64_t d);

struct PurityEntry {
    std::string place, point;
    PurityReport report;
};

struct PuritySummary {
    bool all_pure = true;
    std::vector<PurityEntry> entries;
};

/// Purity of every entry, sorted by place then point id.
PuritySummary check_pure_system(const CharPolyTable& table, int64_t w, double tol = 1e-6);

}  // namespace sigmod
