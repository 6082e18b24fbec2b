#include <doctest.h>

#include <string>

#include "oracle.hpp"
#include "sigmod/serialize.hpp"

using namespace sigmod;
using io::json;

namespace {

io::Context context(int64_t p, int64_t width = LaurentSeries::kDefaultMaxWidth) {
    io::Context ctx;
    ctx.p = p;
    ctx.max_width = width;
    return ctx;
}

/// Runs f and returns the error it raised; fails the test if none was raised.
template <class F>
Error raised(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    FAIL("no error raised");
    return Error(ErrorCode::InvalidArgument, "");
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("scalars round-trip through text") {
    const io::Context ctx = context(3);
    for (const char* text : {"3^-1 * 1 mod 3^11", "0 mod 3^5", "1/2", "-7", "O(3^4)"}) {
        CAPTURE(text);
        const PadicNumber x = io::parse_scalar(json(text), ctx, "/x");
        const PadicNumber y = io::parse_scalar(io::emit_scalar(x), ctx, "/x");
        CHECK(x.to_string() == y.to_string());
        CHECK(x.valuation() == y.valuation());
        CHECK(x.rel() == y.rel());
    }
    CHECK(oracle::matches(io::parse_scalar(json(18), ctx, "/x"), mpq_class(18)));
    CHECK(io::parse_scalar(json("O(3^4)"), ctx, "/x").is_inexact_zero());
    CHECK(io::parse_scalar(json("O(3^4)"), ctx, "/x").abs_prec() == 4);
    CHECK(raised([&] { io::parse_scalar(json(true), ctx, "/x"); }).code() == ErrorCode::ParseError);
}

TEST_CASE("random series round-trip exactly") {
    oracle::Rng rng(404);
    for (int64_t p : {3, 5, 7}) {
        const io::Context ctx = context(p);
        for (int trial = 0; trial < 40; ++trial) {
            const oracle::Laurent a = rng.laurent(p, -8, 8, -3, 4);
            const LaurentSeries s = oracle::to_series(a, p, ctx.rel);
            const json once = io::emit_series(s);
            const LaurentSeries back = io::parse_series(once, ctx, "/s");
            CHECK(oracle::matches(back, a));
            CHECK(io::emit_series(back) == once);
            CHECK(back.below_bound() == s.below_bound());
            CHECK(back.above_bound() == s.above_bound());
        }
    }
}

TEST_CASE("absent terms inside a window are exact zeros") {
    const io::Context ctx = context(5);
    const LaurentSeries s = io::parse_series(json::parse(R"({"terms": [[-2, "1"]], "window": [-2, 3], "below": 6})"), ctx, "/s");
    CHECK(s.lo() == -2);
    // trailing exact zeros are trimmed away
    CHECK(s.hi() == -2);
    CHECK(s.coeff(1).is_exact_zero());
    CHECK(s.coeff(-5).is_inexact_zero());
    CHECK(s.coeff(-5).abs_prec() == 6);
    CHECK(s.coeff(9).is_exact_zero());

    // a bare scalar is a constant series
    const LaurentSeries c = io::parse_series(json("2"), ctx, "/s");
    CHECK(c.lo() == 0);
    CHECK(c.hi() == 0);
    CHECK(oracle::matches(c, oracle::Laurent{{0, mpq_class(2)}}));
}

TEST_CASE("malformed series name the offending path") {
    const io::Context ctx = context(3);
    auto detail = [&](const char* text) {
        const Error e = raised([&] { io::parse_series(json::parse(text), ctx, "/Phi/0/1"); });
        CHECK(e.code() == ErrorCode::ParseError);
        return e.detail();
    };
    CHECK(contains(detail(R"({"terms": [[1, "1"], [1, "2"]]})"), "/Phi/0/1/terms/1"));
    CHECK(contains(detail(R"({"terms": [[1, "1"], [1, "2"]]})"), "twice"));
    CHECK(contains(detail(R"({"terms": [[4, "1"]], "window": [0, 2]})"), "outside the window"));
    CHECK(contains(detail(R"({"terms": [], "tails": 3})"), "unknown series field 'tails'"));
    CHECK(contains(detail(R"({"terms": [[0]]})"), "/Phi/0/1/terms/0"));
    CHECK(contains(detail(R"({"terms": [[0, "1"]], "window": [2, 0]})"), "/Phi/0/1/window"));
    CHECK(contains(detail(R"({"terms": [[0, "1/3 mod"]]})"), "/Phi/0/1/terms/0/1"));
}

TEST_CASE("series wider than the cap overflow") {
    const json wide = json::parse(R"({"terms": [[-6, "1"], [6, "1"]]})");
    CHECK_NOTHROW(io::parse_series(wide, context(5, 13), "/s"));
    const Error e = raised([&] { io::parse_series(wide, context(5, 12), "/s"); });
    CHECK(e.code() == ErrorCode::WindowOverflow);
    CHECK(contains(e.detail(), "width 13"));
}

TEST_CASE("syntax errors carry line and column") {
    const Error e = raised([] { io::parse_document("{\n  \"p\": 3,\n  \"x\": [1, 2,,]\n}"); });
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(contains(e.detail(), "line 3"));
    CHECK(contains(e.detail(), "column"));
    CHECK(io::parse_document("{\"a\": 1}")["a"] == 1);
}

TEST_CASE("integers accept numbers and decimal strings") {
    CHECK(io::get_int(json(17), "/n") == 17);
    CHECK(io::get_int(json("-17"), "/n") == -17);
    CHECK(io::get_mpz(json("123456789012345678901234567890"), "/n") == mpz_class("123456789012345678901234567890"));
    CHECK(raised([] { io::get_int(json("12a"), "/n"); }).code() == ErrorCode::ParseError);
    CHECK(raised([] { io::get_int(json(1.5), "/n"); }).code() == ErrorCode::ParseError);
    CHECK(io::emit_int(mpz_class(42)) == json("42"));
    CHECK(contains(raised([] { io::member(json::object(), "q", "/module"); }).detail(), "/module"));
}

TEST_CASE("modules round-trip") {
    const io::Context ctx = context(3);
    const json doc = json::parse(R"({
        "ring": "E", "q": "3", "rank": 2,
        "Phi": [[{"terms": [[0, "1"]]}, "0"], ["0", {"terms": [[0, "3"]]}]],
        "N": [["0", "0"], ["0", {"terms": [[-1, "1"]]}]]
    })");
    const SigmaNablaModule m = io::parse_module(doc, ctx, "/module");
    CHECK(m.rank() == 2);
    CHECK(m.q == 3);
    CHECK(!m.B);
    const json once = io::emit_module(m);
    CHECK(io::emit_module(io::parse_module(once, ctx, "/module")) == once);

    json wrong_rank = doc;
    wrong_rank["rank"] = 3;
    CHECK(contains(raised([&] { io::parse_module(wrong_rank, ctx, "/module"); }).detail(), "/module/rank"));
    json ragged = doc;
    ragged["N"][1] = json::array({"0"});
    CHECK(contains(raised([&] { io::parse_module(ragged, ctx, "/module"); }).detail(), "/module/N/1"));
    json no_ring = doc;
    no_ring.erase("ring");
    CHECK(raised([&] { io::parse_module(no_ring, ctx, "/module"); }).code() == ErrorCode::ParseError);
}

TEST_CASE("rings with explicit parameters") {
    const RingLabel r = io::parse_ring(json::parse(R"({"kind": "EDagger", "lambda": "1/3", "c": "2"})"), "/ring");
    CHECK(r.lambda == mpq_class(1, 3));
    CHECK(r.c == 2);
    const json back = io::emit_ring(r);
    CHECK(back["lambda"] == "1/3");
    CHECK(io::emit_ring(io::parse_ring(json("EDagger"), "/ring")) == json("EDagger"));
    CHECK(raised([] { io::parse_ring(json::parse(R"({"kind": "EDagger", "lambda": "0", "c": "0"})"), "/ring"); }).code() ==
          ErrorCode::ParseError);
    CHECK(raised([] { io::parse_ring(json("Q"), "/ring"); }).code() == ErrorCode::ParseError);
}

TEST_CASE("polynomials and tables round-trip") {
    const IntPolynomial P = io::parse_poly(json::parse(R"(["1", -3, "4"])"), "/P");
    CHECK(P == IntPolynomial({1, -3, 4}));
    CHECK(io::emit_poly(P) == json::parse(R"(["1", "-3", "4"])"));

    const json doc = json::parse(R"({
        "q": 4, "places": ["a", "b"],
        "points": [{"id": "x", "degree": 1}, {"id": "y", "degree": 2}],
        "polys": {"a": {"x": [1, -3, 4], "y": [1, 0, -1, 0, 16]},
                  "b": {"x": [1, -3, 4], "y": [1, 0, -1, 0, 16]}}
    })");
    const CharPolyTable t = io::parse_table(doc, "/table");
    CHECK(t.places.size() == 2);
    CHECK(t.points[1].degree == 2);
    const json once = io::emit_table(t);
    CHECK(io::emit_table(io::parse_table(once, "/table")) == once);

    json bad_point = doc;
    bad_point["points"][0]["id"] = 5;
    CHECK(contains(raised([&] { io::parse_table(bad_point, "/table"); }).detail(), "/table/points/0/id"));
    json bad_poly = doc;
    bad_poly["polys"]["b"]["y"][2] = "x";
    CHECK(contains(raised([&] { io::parse_table(bad_poly, "/table"); }).detail(), "/table/polys/b/y/2"));
}
