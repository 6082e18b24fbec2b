#include "commands.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace sigmod {

using io::json;

namespace {

int parse_small(const std::string& key, const std::string& value) {
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size() || v < -(1LL << 40) || v > (1LL << 40))
        fail(ErrorCode::InvalidArgument, key + " expects an integer, got '" + value + "'");
    return int(std::clamp<long long>(v, INT32_MIN, INT32_MAX));
}

}  // namespace

void JobConfig::set(const std::string& key, const std::string& value) {
    if (key == "p") {
        p = parse_small(key, value);
    } else if (key == "f") {
        f = parse_small(key, value);
    } else if (key == "prec") {
        rel = parse_small(key, value);
    } else if (key == "window") {
        max_window = parse_small(key, value);
    } else if (key == "kmax") {
        k_max = parse_small(key, value);
    } else if (key == "nmax") {
        n_max = parse_small(key, value);
    } else if (key == "tol") {
        size_t used = 0;
        try {
            tol = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size() || !(tol > 0)) fail(ErrorCode::InvalidArgument, "tol expects a positive number, got '" + value + "'");
    } else if (key == "mode") {
        mode = value;
    } else {
        fail(ErrorCode::InvalidArgument, "unknown configuration key '" + key + "'");
    }
}

void JobConfig::validate() const {
    if (p && !detail::is_prime(*p)) fail(ErrorCode::InvalidArgument, "p=" + std::to_string(*p) + " is not prime");
    if (f && *f < 1) fail(ErrorCode::InvalidArgument, "f must be positive");
    if (rel && *rel < 1) fail(ErrorCode::InvalidArgument, "prec must be at least 1");
    if (max_window < 8) fail(ErrorCode::InvalidArgument, "window must be at least 8");
    if (k_max < 0) fail(ErrorCode::InvalidArgument, "kmax must be nonnegative");
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "nmax must be positive");
}

namespace {

struct Verdict {
    std::string name;
    int exit_code = 0;
    json body = json::object();
};

class Job {
public:
    // Commands on integer tables never touch p-adic numbers; for them p may be absent.
    Job(const JobConfig& cfg, const std::string& input, bool needs_p) : cfg_(cfg) {
        cfg.validate();
        doc_ = io::parse_document(input);
        if (!doc_.is_object()) fail(ErrorCode::ParseError, "/: the document must be an object");
        if (doc_.contains("format_version") && io::get_int(doc_["format_version"], "/format_version") != io::kFormatVersion)
            fail(ErrorCode::ParseError, "/format_version: unsupported version");

        if (cfg.p) {
            ctx_.p = *cfg.p;
        } else if (doc_.contains("p")) {
            ctx_.p = io::get_int(doc_["p"], "/p");
        } else if (needs_p) {
            fail(ErrorCode::InvalidArgument, "p is set neither in the configuration nor in the input");
        }
        if (ctx_.p != 0 && !detail::is_prime(ctx_.p)) fail(ErrorCode::InvalidArgument, "p=" + std::to_string(ctx_.p) + " is not prime");
        ctx_.f = cfg.f ? *cfg.f : doc_.contains("f") ? int(io::get_int(doc_["f"], "/f")) : 1;
        ctx_.rel = cfg.rel ? *cfg.rel : doc_.contains("prec") ? int(io::get_int(doc_["prec"], "/prec")) : 12;
        ctx_.max_width = cfg.max_window;
        if (ctx_.f < 1) fail(ErrorCode::InvalidArgument, "f must be positive");
        if (ctx_.rel < 1) fail(ErrorCode::InvalidArgument, "prec must be at least 1");
        if (ctx_.p != 0 && ctx_.rel > PadicNumber::max_rel(ctx_.p))
            fail(ErrorCode::InvalidArgument, "prec " + std::to_string(ctx_.rel) + " exceeds the limit " + std::to_string(PadicNumber::max_rel(ctx_.p)) +
                                                 " for p=" + std::to_string(ctx_.p));
    }

    const JobConfig& cfg() const { return cfg_; }
    const io::Context& ctx() const { return ctx_; }
    bool has(const std::string& key) const { return doc_.contains(key) && !doc_[key].is_null(); }
    const json& need(const std::string& key) const { return io::member(doc_, key, ""); }
    int64_t integer(const std::string& key) const { return io::get_int(need(key), "/" + key); }
    int64_t integer_or(const std::string& key, int64_t fallback) const { return has(key) ? integer(key) : fallback; }
    std::string text(const std::string& key) const {
        if (!need(key).is_string()) fail(ErrorCode::ParseError, "/" + key + ": expected a string");
        return need(key).get<std::string>();
    }

    SigmaNablaModule module(const std::string& key) const { return io::parse_module(need(key), ctx_, "/" + key); }
    SeriesMatrix series_matrix(const std::string& key) const { return io::parse_series_matrix(need(key), ctx_, "/" + key); }
    Matrix<PadicNumber> scalar_matrix(const std::string& key) const { return io::parse_scalar_matrix(need(key), ctx_, "/" + key); }
    PointMatrix point_matrix(const std::string& key) { return io::parse_point_matrix(need(key), field(), ctx_, "/" + key); }
    IntPolynomial poly(const std::string& key) const { return io::parse_poly(need(key), "/" + key); }
    CharPolyTable table() const { return io::parse_table(need("table"), "/table"); }

    const FieldPtr& field() {
        if (!field_) field_ = UnramifiedField::create(ctx_.p, ctx_.f, ctx_.rel);
        return field_;
    }

    std::string place(const CharPolyTable& t) const {
        if (has("place")) return text("place");
        if (t.places.empty()) fail(ErrorCode::InvalidArgument, "the table has no places");
        return *std::min_element(t.places.begin(), t.places.end());
    }

private:
    const JobConfig& cfg_;
    json doc_;
    io::Context ctx_;
    FieldPtr field_;
};

Verdict holds_if(bool ok, json body) { return Verdict{ok ? "Holds" : "Fails", ok ? 0 : 1, std::move(body)}; }

json emit_series_list(const TruncatedSeries& s) {
    json out = json::array();
    for (const auto& c : s) out.push_back(io::emit_rational(c));
    return out;
}

void require_same_shape(const SeriesMatrix& a, const SeriesMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorCode::InvalidArgument, std::string(what) + " have different shapes");
}

// ---------------------------------------------------------------- sigma-nabla modules

Verdict cmd_check_module(Job& job) {
    const SigmaNablaModule m = job.module("module");
    json body;
    bool ok = true;
    json memb = json::object();
    auto member_check = [&](const char* name, const SeriesMatrix& M) {
        if (auto bad = matrix_membership(M, m.ring)) {
            ok = false;
            memb[name] = json{{"verdict", "Inconsistent"},
                              {"entry", json::array({bad->first.first + 1, bad->first.second + 1})},
                              {"exponent", bad->second}};
        } else {
            memb[name] = json{{"verdict", "Consistent"}};
        }
    };
    member_check("Phi", m.Phi);
    member_check("N", m.N);
    if (m.B) member_check("B", *m.B);
    body["membership"] = memb;
    const ZeroCheck compat = check_compat(m);
    ok = ok && compat.holds;
    body["compat"] = io::emit_zero_check(compat);
    if (m.B) {
        const ZeroCheck v = check_compat_v(m), fv = check_fv(m);
        ok = ok && v.holds && fv.holds;
        body["compat_v"] = io::emit_zero_check(v);
        body["fv"] = io::emit_zero_check(fv);
    }
    return holds_if(ok, std::move(body));
}

Verdict cmd_factor(Job& job) {
    std::string mode = job.cfg().mode;
    if (mode.empty() && job.has("mode")) mode = job.text("mode");
    if (mode.empty()) mode = "gamma";
    const SeriesMatrix X = job.series_matrix("matrix");
    json body;
    body["mode"] = mode;
    body["matrix"] = io::emit_series_matrix(X);
    if (mode == "gamma") {
        const GammaFactorization g = matfact_gamma(X);
        body["Y"] = io::emit_series_matrix(g.Y);
        body["Z"] = io::emit_scalar_matrix(g.Z);
        body["det_valuation"] = g.det_valuation;
        body["exponents"] = g.exponents;
        body["floor"] = io::emit_valuation(g.floor);
    } else if (mode == "robba") {
        const RobbaFactorization r = matfact_robba(X, job.integer_or("half_width", 0));
        body["Y"] = io::emit_series_matrix(r.Y);
        body["Y_inv"] = io::emit_series_matrix(r.Y_inv);
        body["Z"] = io::emit_series_matrix(r.Z);
        body["iterations"] = r.iterations;
        body["floor"] = io::emit_valuation(r.floor);
    } else {
        fail(ErrorCode::InvalidArgument, "factor mode must be gamma or robba, got '" + mode + "'");
    }
    return Verdict{"Factored", 0, std::move(body)};
}

Verdict cmd_check_product(Job& job) {
    const SeriesMatrix Y = job.series_matrix("Y"), Z = job.series_matrix("Z"), X = job.series_matrix("matrix");
    if (Y.cols() != Z.rows()) fail(ErrorCode::InvalidArgument, "Y and Z cannot be multiplied");
    const SeriesMatrix YZ = Y * Z;
    require_same_shape(YZ, X, "Y Z and the matrix");
    const ZeroCheck z = check_zero(YZ - X);
    json body;
    body["product"] = io::emit_zero_check(z);
    return holds_if(z.holds, std::move(body));
}

Verdict cmd_descend(Job& job) {
    const DescentResult r = descend_to_eplus(job.module("module"), job.series_matrix("matrix"));
    json body;
    body["module"] = io::emit_module(r.module);
    body["Y"] = io::emit_series_matrix(r.factors.Y);
    body["Y_inv"] = io::emit_series_matrix(r.factors.Y_inv);
    body["Z"] = io::emit_series_matrix(r.factors.Z);
    body["iterations"] = r.factors.iterations;
    body["compat"] = io::emit_zero_check(r.compat);
    return holds_if(r.compat.holds, std::move(body));
}

Verdict cmd_glue(Job& job) {
    const GlueResult r = glue_dieudonne(job.module("module"), job.module("module2"), job.series_matrix("matrix"));
    json body;
    body["module"] = io::emit_module(r.module);
    body["Y"] = io::emit_series_matrix(r.factors.Y);
    body["Z"] = io::emit_scalar_matrix(r.factors.Z);
    body["compat"] = io::emit_zero_check(r.compat);
    body["compat_v"] = io::emit_zero_check(r.compat_v);
    body["fv"] = io::emit_zero_check(r.fv);
    return holds_if(r.compat.holds && r.compat_v.holds && r.fv.holds, std::move(body));
}

Verdict cmd_horizontal(Job& job) {
    const int k_max = job.cfg().k_max;
    const HorizontalResult h = job.has("module") ? horizontal_basis(job.module("module"), k_max) : horizontal_basis(job.series_matrix("N"), k_max);
    json body;
    body["requested_degree"] = k_max;
    body["achieved_degree"] = h.achieved_degree;
    body["floor"] = io::emit_valuation(h.floor);
    body["residual_valuation"] = io::emit_valuation(h.residual_valuation);
    json coeffs = json::array();
    for (const auto& c : h.coeffs) coeffs.push_back(io::emit_scalar_matrix(c));
    body["coeffs"] = std::move(coeffs);
    return Verdict{h.exhausted ? "Exhausted" : "Complete", 0, std::move(body)};
}

Verdict cmd_probe(Job& job) {
    const ProbeReport r = quasi_nilpotence_probe(job.module("module"), job.cfg().n_max, job.integer_or("v_target", 2));
    json body;
    body["step"] = r.step;
    json profile = json::array();
    for (int64_t v : r.profile) profile.push_back(io::emit_valuation(v));
    body["profile"] = std::move(profile);
    return Verdict{probe_verdict_name(r.verdict), r.verdict == ProbeVerdict::Refuted ? 1 : 0, std::move(body)};
}

// ---------------------------------------------------------------- frobenius at a point

Verdict cmd_slopes(Job& job) {
    const Matrix<PadicNumber> F = job.scalar_matrix("F");
    const FrobSlopes s = newton_slopes_frob(F);
    json body;
    json cp = json::array();
    for (const auto& c : char_coeffs(F)) cp.push_back(io::emit_scalar(c));
    body["char_poly"] = std::move(cp);
    json slopes = json::array();
    for (const auto& sl : s.polygon.slopes) slopes.push_back(json{{"slope", io::emit_rational(sl.value)}, {"multiplicity", sl.multiplicity}});
    body["slopes"] = std::move(slopes);
    body["zero_roots"] = s.polygon.zero_roots;
    return Verdict{s.unit_root ? "UnitRoot" : "NotUnitRoot", 0, std::move(body)};
}

Verdict cmd_average_projector(Job& job) {
    const PointMatrix pi = job.point_matrix("pi");
    ProjectorResult r;
    if (job.has("cocycle")) {
        std::vector<PointMatrix> iota;
        const json& list = job.need("cocycle");
        if (!list.is_array()) fail(ErrorCode::ParseError, "/cocycle: expected a list of matrices");
        for (size_t i = 0; i < list.size(); ++i)
            iota.push_back(io::parse_point_matrix(list[i], job.field(), job.ctx(), "/cocycle/" + std::to_string(i)));
        std::vector<std::vector<size_t>> table;
        const json& gt = job.need("group_table");
        if (!gt.is_array()) fail(ErrorCode::ParseError, "/group_table: expected a list of rows");
        for (size_t i = 0; i < gt.size(); ++i) {
            if (!gt[i].is_array()) fail(ErrorCode::ParseError, "/group_table/" + std::to_string(i) + ": expected a list");
            std::vector<size_t> row;
            for (size_t k = 0; k < gt[i].size(); ++k) {
                const int64_t v = io::get_int(gt[i][k], "/group_table/" + std::to_string(i) + "/" + std::to_string(k));
                if (v < 0) fail(ErrorCode::InvalidArgument, "group table entries are nonnegative");
                row.push_back(size_t(v));
            }
            table.push_back(std::move(row));
        }
        r = average_projector_group(pi, iota, table);
    } else {
        r = average_projector(pi, job.point_matrix("F"), job.integer("n"));
    }
    json body;
    body["projector"] = io::emit_point_matrix(r.projector);
    body["idempotent"] = r.idempotent;
    body["equivariant"] = r.equivariant;
    body["same_image"] = r.same_image;
    return holds_if(r.idempotent && r.equivariant && r.same_image, std::move(body));
}

Verdict cmd_companion(Job& job) {
    const PointMatrix FG = job.point_matrix("F");
    const int64_t n = job.integer("n");
    const PointMatrix C = block_companion(FG, n);
    const PointMatrix iterate = frob_iterate(C, n);
    const PointMatrix expected = block_diagonal(companion_diagonal(FG, n), UnramifiedScalar::zero(job.field()));
    json body;
    body["companion"] = io::emit_point_matrix(C);
    body["iterate"] = io::emit_point_matrix(iterate);
    body["block_diagonal"] = io::emit_point_matrix(expected);
    return holds_if(point_matrices_agree(iterate, expected), std::move(body));
}

// ---------------------------------------------------------------- L-functions

Verdict cmd_lfunction(Job& job) {
    const CharPolyTable t = job.table();
    const std::string place = job.place(t);
    const int64_t T = job.integer_or("T", 8);
    if (T < 0) fail(ErrorCode::InvalidArgument, "T must be nonnegative");
    json body;
    body["place"] = place;
    body["T"] = T;
    body["coefficients"] = emit_series_list(lfunction_truncated(t, place, int(T)));
    return Verdict{"Computed", 0, std::move(body)};
}

Verdict cmd_trace_check(Job& job) {
    const CharPolyTable t = job.table();
    const std::string place = job.place(t);
    const int64_t T = job.integer_or("T", 12);
    if (T < 0) fail(ErrorCode::InvalidArgument, "T must be nonnegative");
    const TraceCheck r = trace_formula_check(t, place, job.poly("P0"), job.poly("P1"), job.poly("P2"), int(T));
    json body;
    body["place"] = place;
    body["degree"] = r.degree;
    body["euler"] = emit_series_list(r.euler);
    body["cohomological"] = emit_series_list(r.cohomological);
    return Verdict{r.consistent ? "Consistent" : "Inconsistent", r.consistent ? 0 : 1, std::move(body)};
}

Verdict cmd_compat(Job& job) {
    const Compatibility c = check_compatible(job.table());
    json body;
    if (!c.compatible) body["mismatch"] = json{{"point", c.point}, {"place1", c.place1}, {"place2", c.place2}};
    return Verdict{c.compatible ? "Compatible" : "Mismatch", c.compatible ? 0 : 1, std::move(body)};
}

json emit_purity(const PurityReport& r) {
    json out{{"verdict", r.pure ? "Pure" : "Impure"}, {"target", r.target}, {"magnitudes", r.magnitudes}};
    if (r.witness) out["witness"] = *r.witness;
    return out;
}

Verdict cmd_purity(Job& job) {
    const int64_t w = job.integer("w");
    const double tol = job.cfg().tol;
    json body;
    body["weight"] = w;
    body["tol"] = tol;
    bool pure = true;
    if (job.has("table")) {
        const PuritySummary s = check_pure_system(job.table(), w, tol);
        json entries = json::array();
        for (const auto& e : s.entries) {
            json x = emit_purity(e.report);
            x["place"] = e.place;
            x["point"] = e.point;
            entries.push_back(std::move(x));
        }
        body["entries"] = std::move(entries);
        pure = s.all_pure;
    } else {
        const PurityReport r = purity_check(job.poly("poly"), job.integer("q"), job.integer_or("deg", 1), w, tol);
        body["target"] = r.target;
        body["magnitudes"] = r.magnitudes;
        if (r.witness) body["witness"] = *r.witness;
        pure = r.pure;
    }
    return Verdict{pure ? "Pure" : "Impure", pure ? 0 : 1, std::move(body)};
}

Verdict cmd_pole_order(Job& job) {
    const int64_t q = job.integer("q"), d = job.integer("d");
    json body;
    body["q"] = io::emit_int(q);
    body["d"] = d;
    body["order"] = pole_order_at(job.poly("poly"), q, d);
    return Verdict{"Computed", 0, std::move(body)};
}

struct Handler {
    std::function<Verdict(Job&)> run;
    bool needs_p = true;
};

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"check-module", {cmd_check_module}},
        {"factor", {cmd_factor}},
        {"check-product", {cmd_check_product}},
        {"descend", {cmd_descend}},
        {"glue", {cmd_glue}},
        {"horizontal", {cmd_horizontal}},
        {"slopes", {cmd_slopes}},
        {"probe-nilpotence", {cmd_probe}},
        {"average-projector", {cmd_average_projector}},
        {"companion", {cmd_companion}},
        {"lfunction", {cmd_lfunction, false}},
        {"trace-check", {cmd_trace_check, false}},
        {"compat", {cmd_compat, false}},
        {"purity", {cmd_purity, false}},
        {"pole-order", {cmd_pole_order, false}},
    };
    return table;
}

int exit_code_for(ErrorCode code) { return code == ErrorCode::ParseError || code == ErrorCode::InvalidArgument ? 2 : 1; }

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, h] : handlers()) out.push_back(name);
        return out;
    }();
    return names;
}

CommandOutcome run_command(const std::string& command, const JobConfig& config, const std::string& input) {
    CommandOutcome out;
    json head;
    head["format_version"] = io::kFormatVersion;
    head["command"] = command;
    auto finish_error = [&](ErrorCode code, const std::string& detail) {
        out.error = code;
        out.verdict = error_name(code);
        out.exit_code = exit_code_for(code);
        out.report = head;
        out.report["verdict"] = out.verdict;
        out.report["exit_code"] = out.exit_code;
        out.report["error"] = error_name(code);
        out.report["detail"] = detail;
    };
    try {
        auto it = handlers().find(command);
        if (it == handlers().end()) fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
        Job job(config, input, it->second.needs_p);
        head["p"] = job.ctx().p ? io::emit_int(job.ctx().p) : json(nullptr);
        head["f"] = io::emit_int(job.ctx().f);
        head["prec"] = io::emit_int(job.ctx().rel);
        head["window"] = io::emit_int(job.ctx().max_width);
        Verdict v = it->second.run(job);
        out.verdict = v.name;
        out.exit_code = v.exit_code;
        out.report = head;
        out.report["verdict"] = v.name;
        out.report["exit_code"] = v.exit_code;
        for (auto& [key, value] : v.body.items()) out.report[key] = std::move(value);
    } catch (const Error& e) {
        finish_error(e.code(), e.detail());
    } catch (const json::exception& e) {
        finish_error(ErrorCode::ParseError, e.what());
    } catch (const std::bad_alloc&) {
        finish_error(ErrorCode::NumericalFailure, "out of memory");
    }
    return out;
}

}  // namespace sigmod
