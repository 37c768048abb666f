#pragma once

// Report builders behind the pftl command-line tool.  Each command returns
// ordered JSON (top-level "schema": 1) or headered CSV; the tool only parses
// flags and writes the result.

#include <json.hpp>

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pftl/bounds.hpp"
#include "pftl/enumerate.hpp"
#include "pftl/primes.hpp"

namespace pftl::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 2, kResourceError = 3, kRigorError = 4 };

/// Exit code for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e)) return kConfigError;
    if (dynamic_cast<const ResourceError*>(&e)) return kResourceError;
    return kRigorError;
}

inline Json integer_json(const Integer& n) {
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

inline Json integers_json(const std::vector<Integer>& v) {
    Json out = Json::array();
    for (const auto& n : v) out.push_back(integer_json(n));
    return out;
}

inline Json rational_json(const Rational& q) { return q.get_den() == 1 ? integer_json(q.get_num()) : Json(q.get_str()); }

/// Outward-rounded doubles, plus the exact value when the enclosure is a point.
inline Json enclosure_json(const RealEnclosure& e) {
    Json j{{"lo", e.lo_double()}, {"hi", e.hi_double()}};
    if (e.is_exact()) j["exact"] = rational_json(e.lo());
    return j;
}

inline Json header(const std::string& command) { return Json{{"schema", kSchemaVersion}, {"command", command}}; }

inline Json field_json(const PureField& f) {
    Json disc{{"lower", integer_json(f.disc().lower)}, {"upper", integer_json(f.disc().upper)}};
    if (f.disc().exact) disc["exact"] = integer_json(*f.disc().exact);
    disc["poly_disc_modulus"] = integer_json(f.disc().poly_disc_modulus);
    return Json{{"d", f.d()}, {"a", integer_json(f.a())}, {"parts", integers_json(f.dec().parts())}, {"disc", disc}};
}

inline Json cmd_field(int d, const Integer& a) {
    const PureField f = new_field(d, a);
    Json j = header("field");
    j["field"] = field_json(f);
    j["theta"] = enclosure_json(f.theta());
    j["index_bound"] = integer_json(index_bound(f));
    const auto r = ramified_primes(f);
    j["ramified_primes"] = integers_json(r.ramified);
    j["flagged_primes"] = integers_json(r.flagged);
    Json subs = Json::array();
    for (const auto& s : subfield_degrees(f)) subs.push_back(Json{{"degree", s.degree}, {"support", s.support}});
    j["radical_subfields"] = subs;
    return j;
}

inline Json exponent_json(const ExponentEntry& e) {
    return Json{{"label", e.label}, {"exponent", enclosure_json(e.exponent)}, {"note", e.note}};
}

inline Json cmd_bounds(int d, const Integer& a, int ell) {
    const PureField f = new_field(d, a);
    const auto r = torsion_exponents(f, ell);
    Json j = header("bounds");
    j["field"] = field_json(f);
    j["ell"] = ell;
    Json ex = Json::array();
    ex.push_back(exponent_json(r.ev));
    ex.push_back(exponent_json(r.silhb));
    if (r.hb) ex.push_back(exponent_json(*r.hb));
    if (r.hbd) ex.push_back(exponent_json(*r.hbd));
    ex.push_back(exponent_json(r.gb));
    j["exponents"] = ex;
    Json factors = Json::array();
    for (const auto& fe : r.a_factor_exponents)
        factors.push_back(Json{{"bound", fe.label},
                               {"symbol", fe.symbol},
                               {"base", integer_json(fe.base)},
                               {"exponent", rational_json(fe.exponent)}});
    j["a_factor_exponents"] = factors;
    j["gamma"] = Json{{"value", enclosure_json(r.gamma.gamma)}, {"degenerate", r.gamma.degenerate}};
    j["argmin_m"] = r.argmin_m;
    j["silverman_lower"] = enclosure_json(silverman_lower(f.disc(), d));
    j["dubickas_lower"] = enclosure_json(dubickas_lower(f.dec()));
    if (2 * ell >= d) j["f_value"] = rational_json(f_value(ell, d));
    j["epsilon_note"] = r.epsilon_note;
    return j;
}

struct FdlRow {
    Integer a_top;  // A_{d-1}
    Integer a1;
    Integer a;
    Integer disc_lower, disc_upper;
    Integer eta_ub;        // H_K(theta / A_{d-1}), verified exact
    RealEnclosure ratio;   // log(A_1) / (ell log D) over [disc_lower, disc_upper]
    RealEnclosure envelope;  // sqrt(2) D_lower^(1/(2(d-1)))
    bool envelope_ok = false;
};

/// One row per squarefree A_{d-1} <= a_max: the least squarefree A_1 in
/// [A_{d-1}, 2 A_{d-1}] coprime to it, and the field a = A_1 A_{d-1}^(d-1).
inline std::vector<FdlRow> fdl_family(int d, int ell, long a_max, mpfr_prec_t prec = 128) {
    check_degree(d);
    f_value(ell, d);  // enforces ell >= d/2
    if (a_max < 1) throw PreconditionError("A_max must be >= 1");
    std::vector<FdlRow> rows;
    for (long top = 1; top <= a_max; ++top) {
        if (!is_squarefree(Integer(top))) continue;
        std::optional<long> a1;
        for (long c = top; c <= 2 * top && !a1; ++c)
            if (std::gcd(c, top) == 1 && is_squarefree(Integer(c))) a1 = c;
        if (!a1) throw RigorError("no squarefree A_1 coprime to " + std::to_string(top) + " in range");
        if (*a1 == 1) continue;  // A_{d-1} = 1 gives a = 1
        FdlRow r;
        r.a_top = top;
        r.a1 = *a1;
        r.a = r.a1 * ipow(r.a_top, static_cast<unsigned long>(d - 1));
        const auto field = make_field(d, r.a);
        if (field->dec().part(1) != r.a1 || field->dec().part(d - 1) != r.a_top)
            throw RigorError("unexpected decomposition for a = " + r.a.get_str());
        r.disc_lower = field->disc().lower;
        r.disc_upper = field->disc().upper;
        std::vector<Integer> num(static_cast<std::size_t>(d), Integer(0));
        num[1] = 1;
        const FieldElement w(field, num, r.a_top);
        const RealEnclosure h = weil_height(w, prec);
        if (!h.is_exact() || h.lo() != Rational(r.a1))
            throw RigorError("height of (A_1/A_{d-1})^(1/d) is not A_1 for a = " + r.a.get_str());
        r.eta_ub = r.a1;
        const Interval log_a1 = log(Interval(r.a1, prec));
        const Interval el(Integer(ell), prec);
        const Interval lo = log_a1 / (el * log(Interval(r.disc_upper, prec)));
        const Interval hi = log_a1 / (el * log(Interval(r.disc_lower, prec)));
        r.ratio = RealEnclosure(hull(lo, hi));
        const Interval env = sqrt(Interval(Integer(2), prec)) *
                             rootn(Interval(r.disc_lower, prec), static_cast<unsigned long>(2 * (d - 1)));
        r.envelope = RealEnclosure(env);
        // A_1 <= sqrt(2) D^(1/(2(d-1)))  <=>  A_1^(2(d-1)) <= 2^(d-1) D
        r.envelope_ok = ipow(r.a1, static_cast<unsigned long>(2 * (d - 1))) <=
                        ipow(Integer(2), static_cast<unsigned long>(d - 1)) * r.disc_lower;
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string fdl_csv(int d, int ell, const std::vector<FdlRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    const Rational target = f_value(ell, d);
    out << "A_top,A_1,a,disc_lower,disc_upper,eta_ub,ratio_lo,ratio_hi,target,envelope,envelope_ok\n";
    for (const auto& r : rows)
        out << r.a_top << ',' << r.a1 << ',' << r.a << ',' << r.disc_lower << ',' << r.disc_upper << ',' << r.eta_ub
            << ',' << r.ratio.lo_double() << ',' << r.ratio.hi_double() << ',' << format_rational(target) << ','
            << r.envelope.lo_double() << ',' << (r.envelope_ok ? "true" : "false") << '\n';
    return out.str();
}

inline Json fdl_json(int d, int ell, const std::vector<FdlRow>& rows) {
    Json j = header("fdl-family");
    j["d"] = d;
    j["ell"] = ell;
    j["target"] = rational_json(f_value(ell, d));
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back(Json{{"A_top", integer_json(r.a_top)},
                           {"A_1", integer_json(r.a1)},
                           {"a", integer_json(r.a)},
                           {"disc_lower", integer_json(r.disc_lower)},
                           {"disc_upper", integer_json(r.disc_upper)},
                           {"eta_ub", integer_json(r.eta_ub)},
                           {"ratio", enclosure_json(r.ratio)},
                           {"envelope", enclosure_json(r.envelope)},
                           {"envelope_ok", r.envelope_ok}});
    j["rows"] = arr;
    return j;
}

/// Growth table over several radicands; with a single radicand the header is
/// exactly X,count,ambiguous, otherwise an a column leads.
inline std::string cmd_growth_csv(int d, const std::vector<Integer>& as, const std::vector<Rational>& xs,
                                  const EnumerateOptions& opts) {
    if (as.empty()) throw PreconditionError("growth needs at least one radicand");
    if (xs.empty()) throw PreconditionError("growth needs at least one X");
    if (as.size() == 1) return growth_csv(growth_curve(make_field(d, as[0]), xs, opts));
    std::string out = "a,X,count,ambiguous\n";
    for (const auto& a : as)
        for (const auto& r : growth_curve(make_field(d, a), xs, opts))
            out += a.get_str() + "," + format_rational(r.X) + "," + std::to_string(r.count) + "," +
                   std::to_string(r.ambiguous) + "\n";
    return out;
}

inline Json cmd_growth_json(int d, const std::vector<Integer>& as, const std::vector<Rational>& xs,
                            const EnumerateOptions& opts) {
    if (as.empty()) throw PreconditionError("growth needs at least one radicand");
    if (xs.empty()) throw PreconditionError("growth needs at least one X");
    Json j = header("growth");
    Json fields = Json::array();
    for (const auto& a : as) {
        const auto field = make_field(d, a);
        Json rows = Json::array();
        for (const auto& r : growth_curve(field, xs, opts))
            rows.push_back(Json{{"X", rational_json(r.X)}, {"count", r.count}, {"ambiguous", r.ambiguous}});
        fields.push_back(Json{{"field", field_json(*field)}, {"rows", rows}});
    }
    j["fields"] = fields;
    return j;
}

inline Json cmd_primes(int d, const Integer& a, const Rational& delta, const Rational& eps, DiscChoice choice) {
    const PureField f = new_field(d, a);
    const auto r = good_prime_count_report(f, delta, eps, choice);
    Json j = header("primes");
    j["field"] = field_json(f);
    j["disc_used"] = integer_json(r.disc);
    j["delta"] = rational_json(delta);
    j["epsilon"] = rational_json(eps);
    j["bound_floor"] = integer_json(r.bound_floor);
    j["bound_exact"] = r.bound_exact;
    j["count"] = r.primes.size();
    Json ps = Json::array();
    for (const auto& g : r.primes) ps.push_back(Json{{"p", g.p}, {"root", g.root}});
    j["primes"] = ps;
    j["ratio"] = enclosure_json(r.ratio);
    return j;
}

inline std::string primes_csv(const Json& report) {
    std::string out = "p,root\n";
    for (const auto& g : report["primes"])
        out += std::to_string(g["p"].get<std::uint64_t>()) + "," + std::to_string(g["root"].get<std::uint64_t>()) + "\n";
    return out;
}

inline Json witness_json(const Witness& w) {
    return Json{{"element", w.element.to_string()}, {"height", enclosure_json(w.height)}, {"tau", integer_json(w.tau)}};
}

inline Json cmd_enumerate(int d, const Integer& a, const Rational& X, const EnumerateOptions& opts) {
    const auto field = make_field(d, a);
    const auto r = count_primitive(field, X, opts);
    Json j = header("enumerate");
    j["field"] = field_json(*field);
    j["X"] = rational_json(X);
    j["count"] = r.count;
    j["ambiguous"] = r.ambiguous;
    j["box"] = Json{{"q_max", integer_json(r.box.q_max)},
                    {"coeff_bounds", integers_json(r.box.coeff_bounds)},
                    {"s_max", integer_json(r.box.s_max)},
                    {"certified", r.box.certified},
                    {"residue_classes", r.box.residue_classes},
                    {"rows", r.box.rows}};
    Json ws = Json::array();
    for (const auto& w : r.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = ws;
    Json amb = Json::array();
    for (const auto& w : r.ambiguous_elements) amb.push_back(witness_json(w));
    j["ambiguous_elements"] = amb;
    return j;
}

/// Witness table, one element per row in the element text format.
inline std::string witnesses_csv(const Json& report) {
    std::ostringstream out;
    out.precision(17);
    out << "element,height_lo,height_hi,tau,ambiguous\n";
    auto rows = [&](const Json& list, bool ambiguous) {
        for (const auto& w : list)
            out << w["element"].get<std::string>() << ',' << w["height"]["lo"].get<double>() << ','
                << w["height"]["hi"].get<double>() << ',' << w["tau"].dump() << ',' << (ambiguous ? "true" : "false")
                << '\n';
    };
    rows(report["witnesses"], false);
    rows(report["ambiguous_elements"], true);
    return out.str();
}

inline Json cmd_mkl(int d, const Integer& a, int ell, const std::vector<Rational>& grid, const EnumerateOptions& opts,
                    const Rational& eta_cap = Rational(10000)) {
    const auto field = make_field(d, a);
    std::optional<RealEnclosure> eta;
    Json eta_json;
    const auto mg = min_generator(field, eta_cap, opts);
    if (const auto* found = std::get_if<MinGenerator>(&mg)) {
        eta = found->eta;
        eta_json = Json{{"value", enclosure_json(found->eta)},
                        {"witness", found->witness.to_string()},
                        {"certified_minimal", found->certified_minimal}};
    } else {
        eta_json = Json{{"above", rational_json(std::get<AboveCap>(mg).lower_bound)}};
    }
    const auto r = empirical_mkl(field, ell, grid, opts, eta);
    Json j = header("mkl");
    j["field"] = field_json(*field);
    j["ell"] = ell;
    j["eta"] = eta_json;
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"X", rational_json(row.X)},
                            {"count", row.count},
                            {"ambiguous", row.ambiguous},
                            {"value", enclosure_json(row.value)}});
    j["rows"] = rows;
    j["value"] = enclosure_json(r.value);
    j["argmin_X"] = rational_json(r.argmin_X);
    if (r.floor) j["floor"] = enclosure_json(*r.floor);
    return j;
}

}  // namespace pftl::cli
