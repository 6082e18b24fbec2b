#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmod/frobenius.hpp"
#include "sigmod/lfunction.hpp"
#include "sigmod/sigma_nabla.hpp"

namespace sigmod::io {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Parameters every value in a document is read against.
struct Context {
    int64_t p = 0;
    int f = 1;
    int rel = 12;
    int64_t max_width = LaurentSeries::kDefaultMaxWidth;
};

/// Parses one document; syntax errors carry line and column.
json parse_document(const std::string& text);
std::string dump(const json& doc);

/// Integers may be JSON numbers or decimal strings.
int64_t get_int(const json& j, const std::string& path);
mpz_class get_mpz(const json& j, const std::string& path);
/// Member lookup that raises a ParseError naming the path when absent.
const json& member(const json& j, const std::string& key, const std::string& path);

json emit_int(const mpz_class& v);

/// "p^v * m mod p^N", "O(p^N)" / "0 mod p^N", a plain rational, or a JSON integer.
PadicNumber parse_scalar(const json& j, const Context& ctx, const std::string& path);
json emit_scalar(const PadicNumber& x);

/*
 * {"terms": [[e, scalar], ...], "window": [lo, hi], "below": k|"inf", "above": k|"inf"}
 *
 * Exponents inside the window that have no term are exact zeros. Without a
 * window the span of the terms is used. A bare scalar is a constant series.
 */
LaurentSeries parse_series(const json& j, const Context& ctx, const std::string& path);
json emit_series(const LaurentSeries& s);

SeriesMatrix parse_series_matrix(const json& j, const Context& ctx, const std::string& path);
json emit_series_matrix(const SeriesMatrix& m);

Matrix<PadicNumber> parse_scalar_matrix(const json& j, const Context& ctx, const std::string& path);
json emit_scalar_matrix(const Matrix<PadicNumber>& m);

/// Entries are scalars (embedded from Q_p) or arrays of f coordinates.
PointMatrix parse_point_matrix(const json& j, const FieldPtr& field, const Context& ctx, const std::string& path);
json emit_point_matrix(const PointMatrix& m);

RingLabel parse_ring(const json& j, const std::string& path);
json emit_ring(const RingLabel& r);

/// {"ring", "q", "rank", "Phi", "N", "B"?}
SigmaNablaModule parse_module(const json& j, const Context& ctx, const std::string& path);
json emit_module(const SigmaNablaModule& m);

/// Lowest degree first.
IntPolynomial parse_poly(const json& j, const std::string& path);
json emit_poly(const IntPolynomial& poly);

/// {"q", "places": [...], "points": [{"id", "degree"}], "polys": {place: {point: poly}}}
CharPolyTable parse_table(const json& j, const std::string& path);
json emit_table(const CharPolyTable& t);

json emit_rational(const mpq_class& v);
json emit_valuation(int64_t v);
json emit_zero_check(const ZeroCheck& z, const char* ok = "Holds", const char* bad = "Fails");

}  // namespace sigmod::io
