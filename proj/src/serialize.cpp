#include "sigmod/serialize.hpp"

#include <algorithm>
#include <set>

namespace sigmod::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { fail(ErrorCode::ParseError, (path.empty() ? "/" : path) + ": " + what); }

std::string at(const std::string& path, size_t i) { return path + "/" + std::to_string(i); }
std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }

const json& array_of(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected a list");
    return j;
}

int64_t parse_bound(const json& j, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "inf") return PadicNumber::kInf;
    return get_int(j, path);
}

json emit_bound(int64_t v) { return v >= PadicNumber::kInf ? json("inf") : json(v); }

// Errors from the scalar layer are rethrown with the location prepended.
template <class F>
auto located(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument) bad(path, e.detail());
        throw;
    }
}

}  // namespace

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1, column = 1;
        const size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string msg = e.what();
        if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
    }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int64_t get_int(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        size_t used = 0;
        try {
            const long long v = std::stoll(s, &used, 10);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        bad(path, "'" + s + "' is not a machine-size decimal integer");
    }
    bad(path, "expected an integer");
}

mpz_class get_mpz(const json& j, const std::string& path) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<int64_t>()));
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
        mpz_class v;
        if (s.empty() || v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) bad(path, "'" + j.get<std::string>() + "' is not a decimal integer");
        return v;
    }
    bad(path, "expected an integer");
}

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(path, "missing field '" + key + "'");
    return *it;
}

json emit_int(const mpz_class& v) { return v.get_str(); }

// ---------------------------------------------------------------- scalars and series

PadicNumber parse_scalar(const json& j, const Context& ctx, const std::string& path) {
    if (j.is_number_integer()) return located(path, [&] { return PadicNumber::from_mpz(ctx.p, get_mpz(j, path), ctx.rel); });
    if (!j.is_string()) bad(path, "expected a scalar string");
    return located(path, [&] { return PadicNumber::parse(j.get<std::string>(), ctx.p, ctx.rel); });
}

json emit_scalar(const PadicNumber& x) { return x.to_string(); }

LaurentSeries parse_series(const json& j, const Context& ctx, const std::string& path) {
    if (!j.is_object()) return LaurentSeries::constant(parse_scalar(j, ctx, path), ctx.max_width);
    std::vector<std::pair<int64_t, PadicNumber>> terms;
    std::set<int64_t> seen;
    if (auto it = j.find("terms"); it != j.end()) {
        const std::string tp = at(path, "terms");
        for (size_t i = 0; i < array_of(*it, tp).size(); ++i) {
            const json& t = (*it)[i];
            if (!t.is_array() || t.size() != 2) bad(at(tp, i), "a term is an [exponent, scalar] pair");
            const int64_t e = get_int(t[0], at(at(tp, i), 0));
            if (!seen.insert(e).second) bad(at(tp, i), "exponent " + std::to_string(e) + " appears twice");
            terms.emplace_back(e, parse_scalar(t[1], ctx, at(at(tp, i), 1)));
        }
    }
    for (const auto& [key, value] : j.items())
        if (key != "terms" && key != "window" && key != "below" && key != "above") bad(path, "unknown series field '" + key + "'");
    const int64_t below = j.contains("below") ? parse_bound(j["below"], at(path, "below")) : PadicNumber::kInf;
    const int64_t above = j.contains("above") ? parse_bound(j["above"], at(path, "above")) : PadicNumber::kInf;

    int64_t lo = 0, hi = -1;
    if (auto it = j.find("window"); it != j.end()) {
        const std::string wp = at(path, "window");
        if (!it->is_array() || it->size() != 2) bad(wp, "a window is a [lo, hi] pair");
        lo = get_int((*it)[0], at(wp, 0));
        hi = get_int((*it)[1], at(wp, 1));
        if (hi < lo) bad(wp, "empty window");
        for (const auto& [e, c] : terms)
            if (e < lo || e > hi) bad(path, "exponent " + std::to_string(e) + " lies outside the window");
    } else if (!terms.empty()) {
        lo = hi = terms.front().first;
        for (const auto& [e, c] : terms) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    if (hi - lo + 1 > ctx.max_width)
        fail(ErrorCode::WindowOverflow, at(path, "window") + ": width " + std::to_string(hi - lo + 1) + " exceeds the cap " + std::to_string(ctx.max_width));
    std::vector<PadicNumber> coeffs(size_t(hi - lo + 1), PadicNumber::exact_zero(ctx.p));
    for (auto& [e, c] : terms) coeffs[size_t(e - lo)] = c;
    return LaurentSeries::from_coeffs(ctx.p, lo, std::move(coeffs), below, above, ctx.max_width);
}

json emit_series(const LaurentSeries& s) {
    json out = json::object();
    json terms = json::array();
    for (size_t i = 0; i < s.coeffs().size(); ++i)
        if (!s.coeffs()[i].is_exact_zero()) terms.push_back(json::array({s.lo() + int64_t(i), emit_scalar(s.coeffs()[i])}));
    out["terms"] = std::move(terms);
    if (!s.window_empty()) out["window"] = json::array({s.lo(), s.hi()});
    out["below"] = emit_bound(s.below_bound());
    out["above"] = emit_bound(s.above_bound());
    return out;
}

// ---------------------------------------------------------------- matrices

namespace {

template <class T, class F>
Matrix<T> parse_matrix(const json& j, const std::string& path, F&& entry) {
    array_of(j, path);
    if (j.empty()) bad(path, "a matrix needs at least one row");
    const size_t rows = j.size();
    const size_t cols = array_of(j[0], at(path, 0)).size();
    Matrix<T> m;
    m.reset(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        const std::string rp = at(path, i);
        if (array_of(j[i], rp).size() != cols) bad(rp, "rows have different lengths");
        for (size_t k = 0; k < cols; ++k) m(i, k) = entry(j[i][k], at(rp, k));
    }
    return m;
}

template <class T, class F>
json emit_matrix(const Matrix<T>& m, F&& entry) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(entry(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

SeriesMatrix parse_series_matrix(const json& j, const Context& ctx, const std::string& path) {
    return parse_matrix<LaurentSeries>(j, path, [&](const json& e, const std::string& p) { return parse_series(e, ctx, p); });
}

json emit_series_matrix(const SeriesMatrix& m) { return emit_matrix(m, emit_series); }

Matrix<PadicNumber> parse_scalar_matrix(const json& j, const Context& ctx, const std::string& path) {
    return parse_matrix<PadicNumber>(j, path, [&](const json& e, const std::string& p) { return parse_scalar(e, ctx, p); });
}

json emit_scalar_matrix(const Matrix<PadicNumber>& m) { return emit_matrix(m, emit_scalar); }

PointMatrix parse_point_matrix(const json& j, const FieldPtr& field, const Context& ctx, const std::string& path) {
    return parse_matrix<UnramifiedScalar>(j, path, [&](const json& e, const std::string& p) {
        if (!e.is_array()) return UnramifiedScalar::from_padic(field, parse_scalar(e, ctx, p));
        if (e.size() != size_t(field->f())) bad(p, "expected " + std::to_string(field->f()) + " coordinates");
        std::vector<PadicNumber> c;
        for (size_t i = 0; i < e.size(); ++i) c.push_back(parse_scalar(e[i], ctx, at(p, i)));
        return UnramifiedScalar(field, std::move(c));
    });
}

json emit_point_matrix(const PointMatrix& m) {
    return emit_matrix(m, [](const UnramifiedScalar& x) {
        if (x.coords().size() == 1) return emit_scalar(x.coords()[0]);
        json c = json::array();
        for (const auto& y : x.coords()) c.push_back(emit_scalar(y));
        return c;
    });
}

// ---------------------------------------------------------------- modules

RingLabel parse_ring(const json& j, const std::string& path) {
    if (j.is_string()) return located(path, [&] { return RingLabel::parse(j.get<std::string>()); });
    RingLabel r = located(path, [&] { return RingLabel::parse(member(j, "kind", path).get<std::string>()); });
    auto rational = [&](const char* key) {
        mpq_class v;
        const json& x = member(j, key, path);
        if (!x.is_string() || v.set_str(x.get<std::string>(), 10) != 0) bad(at(path, key), "expected a rational string");
        v.canonicalize();
        return v;
    };
    r.lambda = rational("lambda");
    r.c = rational("c");
    if (r.lambda <= 0) bad(at(path, "lambda"), "lambda must be positive");
    return r;
}

json emit_ring(const RingLabel& r) {
    if (r.lambda == mpq_class(1, 2) && r.c == 0) return r.name();
    return json{{"kind", r.name()}, {"lambda", r.lambda.get_str()}, {"c", r.c.get_str()}};
}

SigmaNablaModule parse_module(const json& j, const Context& ctx, const std::string& path) {
    SigmaNablaModule m;
    m.ring = parse_ring(member(j, "ring", path), at(path, "ring"));
    m.q = get_int(member(j, "q", path), at(path, "q"));
    m.Phi = parse_series_matrix(member(j, "Phi", path), ctx, at(path, "Phi"));
    m.N = parse_series_matrix(member(j, "N", path), ctx, at(path, "N"));
    if (j.contains("B") && !j["B"].is_null()) m.B = parse_series_matrix(j["B"], ctx, at(path, "B"));
    if (j.contains("rank") && size_t(get_int(j["rank"], at(path, "rank"))) != m.Phi.rows()) bad(at(path, "rank"), "rank does not match Phi");
    located(path, [&] {
        m.validate();
        return 0;
    });
    return m;
}

json emit_module(const SigmaNablaModule& m) {
    json out{{"ring", emit_ring(m.ring)}, {"q", emit_int(m.q)}, {"rank", m.rank()}, {"Phi", emit_series_matrix(m.Phi)}, {"N", emit_series_matrix(m.N)}};
    if (m.B) out["B"] = emit_series_matrix(*m.B);
    return out;
}

// ---------------------------------------------------------------- polynomials and tables

IntPolynomial parse_poly(const json& j, const std::string& path) {
    std::vector<mpz_class> c;
    for (size_t i = 0; i < array_of(j, path).size(); ++i) c.push_back(get_mpz(j[i], at(path, i)));
    return IntPolynomial(std::move(c));
}

json emit_poly(const IntPolynomial& poly) {
    json out = json::array();
    for (const auto& c : poly.coeffs()) out.push_back(c.get_str());
    return out;
}

CharPolyTable parse_table(const json& j, const std::string& path) {
    CharPolyTable t;
    t.q = get_int(member(j, "q", path), at(path, "q"));
    const std::string pp = at(path, "places");
    const json& places = array_of(member(j, "places", path), pp);
    for (size_t i = 0; i < places.size(); ++i) {
        if (!places[i].is_string()) bad(at(pp, i), "a place is a string");
        t.places.push_back(places[i].get<std::string>());
    }
    const std::string ptp = at(path, "points");
    const json& points = array_of(member(j, "points", path), ptp);
    for (size_t i = 0; i < points.size(); ++i) {
        const json& x = points[i];
        const json& id = member(x, "id", at(ptp, i));
        if (!id.is_string()) bad(at(at(ptp, i), "id"), "a point id is a string");
        t.points.push_back(ClosedPoint{id.get<std::string>(), get_int(member(x, "degree", at(ptp, i)), at(at(ptp, i), "degree"))});
    }
    const std::string yp = at(path, "polys");
    const json& polys = member(j, "polys", path);
    if (!polys.is_object()) bad(yp, "expected an object keyed by place");
    for (const auto& [place, per_point] : polys.items()) {
        if (!per_point.is_object()) bad(at(yp, place), "expected an object keyed by point id");
        for (const auto& [point, poly] : per_point.items()) t.polys[{place, point}] = parse_poly(poly, at(at(yp, place), point));
    }
    located(path, [&] {
        t.validate();
        return 0;
    });
    return t;
}

json emit_table(const CharPolyTable& t) {
    json places = json::array(), points = json::array(), polys = json::object();
    for (const auto& p : t.places) places.push_back(p);
    for (const auto& x : t.points) points.push_back(json{{"id", x.id}, {"degree", x.degree}});
    for (const auto& p : t.places) {
        json row = json::object();
        for (const auto& x : t.points)
            if (auto it = t.polys.find({p, x.id}); it != t.polys.end()) row[x.id] = emit_poly(it->second);
        polys[p] = std::move(row);
    }
    return json{{"q", emit_int(t.q)}, {"places", places}, {"points", points}, {"polys", polys}};
}

// ---------------------------------------------------------------- report pieces

json emit_rational(const mpq_class& v) { return v.get_str(); }

json emit_valuation(int64_t v) { return emit_bound(v); }

json emit_zero_check(const ZeroCheck& z, const char* ok, const char* bad_name) {
    json out{{"verdict", z.holds ? ok : bad_name}, {"floor", emit_valuation(z.floor)}};
    if (z.position) out["position"] = json::array({z.position->first + 1, z.position->second + 1});
    out["residual_valuation"] = emit_valuation(z.residual_valuation);
    out["residual"] = emit_series_matrix(z.residual);
    return out;
}

}  // namespace sigmod::io
