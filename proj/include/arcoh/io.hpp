#ifndef ARCOH_IO_HPP
#define ARCOH_IO_HPP

// Descriptor files for fields, divisors and ghost-spaces (JSON).
//
// Field:   "rational" | "quadratic:<d>" shorthand, or a file holding
//          {"type": "rational"}, {"type": "quadratic", "d": -1}, or a custom
//          descriptor {degree, r1, r2, abs_discriminant, embeddings,
//          different_basis}.
// Divisor: {"finite": [{"p", "index", "exponent"}...] or
//          {"ideal": {"numerator_basis", "denominator"}}, "infinite": [...]}.
// Ghost:   {"cyclic_orders": [...], "u": [...]} and/or "mu": [...].

#include "arcoh/arakelov.hpp"
#include "arcoh/errors.hpp"
#include "arcoh/ghost.hpp"
#include "arcoh/numfield.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace arcoh {

using Json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(what + ": malformed JSON: " + e.what());
    }
}

namespace detail {

inline Integer json_integer(const Json& v, const std::string& what)
{
    if (v.is_number_integer())
        return Integer(v.get<long long>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        const bool ok = !s.empty() && s.find_first_not_of("-0123456789") == std::string::npos &&
                        s.find('-', 1) == std::string::npos && s != "-";
        if (!ok)
            throw InvalidFieldSpec(what + ": not an integer: '" + s + "'");
        return Integer(s);
    }
    throw InvalidFieldSpec(what + ": expected an integer");
}

inline ZMatrix json_integer_matrix(const Json& v, std::size_t n, const std::string& what)
{
    if (!v.is_array() || v.size() != n)
        throw InvalidFieldSpec(what + ": expected " + std::to_string(n) + " rows");
    ZMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!v[i].is_array() || v[i].size() != n)
            throw InvalidFieldSpec(what + ": row " + std::to_string(i) + " must have " + std::to_string(n) +
                                   " entries");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = json_integer(v[i][j], what);
    }
    return m;
}

inline std::vector<double> json_reals(const Json& v, const std::string& what)
{
    if (!v.is_array())
        throw InvalidArgument(what + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number())
            throw InvalidArgument(what + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

template <class T>
T json_get(const Json& obj, const char* key, const std::string& what)
{
    if (!obj.contains(key))
        throw InvalidFieldSpec(what + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidFieldSpec(what + ": key '" + key + "' has the wrong type");
    }
}

} // namespace detail

/// Parses "rational" or "quadratic:<d>".
inline std::optional<NumberField> field_from_shorthand(const std::string& spec)
{
    if (spec == "rational" || spec == "Q")
        return make_rational_field();
    const std::string prefix = "quadratic:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string tail = spec.substr(prefix.size());
        std::size_t used = 0;
        long long d = 0;
        try {
            d = std::stoll(tail, &used);
        } catch (const std::exception&) {
            throw InvalidFieldSpec("quadratic field: cannot parse d from '" + tail + "'");
        }
        if (used != tail.size())
            throw InvalidFieldSpec("quadratic field: cannot parse d from '" + tail + "'");
        return make_quadratic_field(d);
    }
    return std::nullopt;
}

inline FieldDescriptor parse_custom_descriptor(const Json& j)
{
    const std::string what = "field descriptor";
    FieldDescriptor desc;
    desc.degree = detail::json_get<std::size_t>(j, "degree", what);
    desc.r1 = detail::json_get<std::size_t>(j, "r1", what);
    desc.r2 = detail::json_get<std::size_t>(j, "r2", what);
    if (desc.degree == 0 || desc.degree > 64)
        throw InvalidFieldSpec(what + ": degree must be in [1, 64]");
    if (!j.contains("abs_discriminant"))
        throw InvalidFieldSpec(what + ": missing key 'abs_discriminant'");
    desc.abs_discriminant = detail::json_integer(j.at("abs_discriminant"), what + " abs_discriminant");
    if (!j.contains("embeddings"))
        throw InvalidFieldSpec(what + ": missing key 'embeddings'");
    const Json& e = j.at("embeddings");
    // Accept row-major flat or nested rows.
    if (e.is_array() && !e.empty() && e[0].is_array()) {
        for (const auto& row : e)
            for (double v : detail::json_reals(row, what + " embeddings"))
                desc.embeddings.push_back(v);
    } else {
        desc.embeddings = detail::json_reals(e, what + " embeddings");
    }
    if (!j.contains("different_basis"))
        throw InvalidFieldSpec(what + ": missing key 'different_basis'");
    desc.different_basis = detail::json_integer_matrix(j.at("different_basis"), desc.degree, what + " different_basis");
    return desc;
}

inline NumberField field_from_json(const Json& j, bool validate = true)
{
    if (j.is_string()) {
        if (auto f = field_from_shorthand(j.get<std::string>()))
            return *f;
        throw InvalidFieldSpec("unknown field '" + j.get<std::string>() + "'");
    }
    if (!j.is_object())
        throw InvalidFieldSpec("field descriptor must be a JSON object");
    const std::string type = j.contains("type") ? detail::json_get<std::string>(j, "type", "field") : "custom";
    if (type == "rational")
        return make_rational_field();
    if (type == "quadratic")
        return make_quadratic_field(detail::json_get<long long>(j, "d", "quadratic field"));
    if (type == "custom")
        return make_custom_field(parse_custom_descriptor(j), validate);
    throw InvalidFieldSpec("unknown field type '" + type + "'");
}

/// A shorthand, or a path to a descriptor file.
inline NumberField load_field(const std::string& spec, bool validate = true)
{
    if (!std::filesystem::exists(spec))
        if (auto f = field_from_shorthand(spec))
            return *f;
    return field_from_json(parse_json(read_text_file(spec), "field file '" + spec + "'"), validate);
}

inline ArakelovDivisor divisor_from_json(const NumberField& field, const Json& j)
{
    if (!j.is_object())
        throw InvalidArgument("divisor descriptor must be a JSON object");
    ArakelovDivisor d = ArakelovDivisor::zero(field);
    if (j.contains("infinite")) {
        d.infinite = detail::json_reals(j.at("infinite"), "divisor infinite");
        if (d.infinite.size() != field.places())
            throw InvalidArgument("divisor: expected " + std::to_string(field.places()) +
                                  " infinite components, got " + std::to_string(d.infinite.size()));
    }
    if (!j.contains("finite"))
        return d;
    const Json& f = j.at("finite");
    if (f.is_array()) {
        std::vector<PrimeExponent> exps;
        for (const auto& e : f) {
            if (!e.is_object())
                throw InvalidArgument("divisor finite entries must be objects");
            try {
                exps.push_back({e.at("p").get<long long>(), e.value("index", 0), e.at("exponent").get<long long>()});
            } catch (const nlohmann::json::exception&) {
                throw InvalidArgument("divisor finite entry needs integer 'p', 'exponent' and optional 'index'");
            }
        }
        d.finite = std::move(exps);
        // Resolve primes now so bad entries fail at load time.
        (void)associated_ideal(field, d);
    } else if (f.is_object() && f.contains("ideal")) {
        const Json& ideal = f.at("ideal");
        const ZMatrix num = detail::json_integer_matrix(ideal.at("numerator_basis"), field.degree(), "ideal basis");
        const Integer den = ideal.contains("denominator") ? detail::json_integer(ideal.at("denominator"), "denominator")
                                                         : Integer(1);
        if (den <= 0)
            throw InvalidArgument("ideal denominator must be positive");
        d.finite = FractionalIdeal(num, den);
    } else {
        throw InvalidArgument("divisor 'finite' must be a list of prime exponents or {\"ideal\": ...}");
    }
    return d;
}

inline ArakelovDivisor load_divisor(const NumberField& field, const std::string& path)
{
    return divisor_from_json(field, parse_json(read_text_file(path), "divisor file '" + path + "'"));
}

struct GhostDescriptor {
    FiniteAbelianGroup group;
    std::optional<std::vector<double>> u;
    std::optional<std::vector<double>> mu;
};

inline GhostDescriptor ghost_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("cyclic_orders"))
        throw InvalidArgument("ghost descriptor needs 'cyclic_orders'");
    std::vector<int> orders;
    try {
        orders = j.at("cyclic_orders").get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument("ghost descriptor: 'cyclic_orders' must be a list of integers");
    }
    GhostDescriptor g{FiniteAbelianGroup(orders), std::nullopt, std::nullopt};
    if (j.contains("u"))
        g.u = detail::json_reals(j.at("u"), "ghost u");
    if (j.contains("mu"))
        g.mu = detail::json_reals(j.at("mu"), "ghost mu");
    if (!g.u && !g.mu)
        throw InvalidArgument("ghost descriptor needs 'u' or 'mu'");
    for (const auto* f : {&g.u, &g.mu})
        if (*f && (*f)->size() != g.group.order())
            throw InvalidArgument("ghost descriptor: expected " + std::to_string(g.group.order()) + " values");
    return g;
}

inline GhostDescriptor load_ghost(const std::string& path)
{
    return ghost_from_json(parse_json(read_text_file(path), "ghost file '" + path + "'"));
}

inline Json ideal_to_json(const FractionalIdeal& ideal)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < ideal.degree(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < ideal.degree(); ++k)
            row.push_back(ideal.basis()(i, k).str());
        rows.push_back(std::move(row));
    }
    return Json{{"numerator_basis", std::move(rows)}, {"denominator", ideal.denominator().str()}};
}

} // namespace arcoh

#endif // ARCOH_IO_HPP
