#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "altmod/embed.hpp"

namespace altmod {

/// Any malformed or invalid input document raises this; the CLI maps it to
/// its parse-error exit code. Messages carry field-level locations.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

namespace detail {

inline long long json_ll(const Int& v, const char* what) {
    if (v > Int(std::numeric_limits<long long>::max()) ||
        v < Int(std::numeric_limits<long long>::min()))
        throw std::logic_error(std::string(what) + ": value exceeds the serializable range");
    return v.template convert_to<long long>();
}

inline Int int_field(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
    return Int(j.get<long long>());
}

}  // namespace detail

inline json module_to_json(const AlternateModule& m) {
    json orders = json::array();
    for (const auto& d : m.group().orders) orders.push_back(detail::json_ll(d, "orders"));
    json gram = json::array();
    for (std::size_t i = 0; i < m.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.rank(); ++j) row.push_back(m.gram()(i, j).str());
        gram.push_back(std::move(row));
    }
    return json{{"orders", std::move(orders)}, {"gram", std::move(gram)}};
}

inline AlternateModule module_from_json(const json& j) {
    if (!j.is_object() || !j.contains("orders") || !j.contains("gram"))
        throw ParseError("module: expected an object with \"orders\" and \"gram\"");
    const json& jo = j["orders"];
    const json& jg = j["gram"];
    if (!jo.is_array()) throw ParseError("orders: expected an array of integers");
    std::vector<Int> orders;
    orders.reserve(jo.size());
    for (std::size_t i = 0; i < jo.size(); ++i) {
        Int d = detail::int_field(jo[i], "orders[" + std::to_string(i) + "]");
        if (d < 2)
            throw ParseError("orders[" + std::to_string(i) + "]: must be at least 2");
        orders.push_back(std::move(d));
    }
    const std::size_t r = orders.size();
    if (!jg.is_array() || jg.size() != r)
        throw ParseError("gram: expected " + std::to_string(r) + " rows");
    Mat<QZ> gram(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        const json& row = jg[i];
        if (!row.is_array() || row.size() != r)
            throw ParseError("gram[" + std::to_string(i) + "]: expected " + std::to_string(r) +
                             " entries");
        for (std::size_t k = 0; k < r; ++k) {
            const std::string where =
                "gram[" + std::to_string(i) + "][" + std::to_string(k) + "]";
            if (!row[k].is_string()) throw ParseError(where + ": expected a fraction string");
            try {
                gram(i, k) = QZ::parse(row[k].get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ParseError(where + ": " + e.what());
            }
        }
    }
    try {
        return AlternateModule(FinAbGroup(std::move(orders)), std::move(gram));
    } catch (const std::invalid_argument& e) {
        // constructor messages already name the violated invariant and cell
        throw ParseError(e.what());
    }
}

inline AlternateModule parse_module(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return module_from_json(j);
}

inline std::string serialize_module(const AlternateModule& m) {
    return module_to_json(m).dump(2) + "\n";
}

inline json matrix_to_json(const IntMat& m, const char* what = "matrix") {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(detail::json_ll(m(i, j), what));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json element_to_json(const GroupElement& x) {
    json a = json::array();
    for (const auto& c : x) a.push_back(detail::json_ll(c, "element"));
    return a;
}

inline json subgroup_to_json(const Subgroup& s) {
    json gens = json::array();
    for (const auto& g : s.gens()) gens.push_back(element_to_json(g));
    json inv = json::array();
    for (const auto& o : s.canonical_orders()) inv.push_back(detail::json_ll(o, "orders"));
    return json{{"generators", std::move(gens)},
                {"invariant_factors", std::move(inv)},
                {"cardinality", detail::json_ll(s.cardinality(), "cardinality")}};
}

namespace detail {

inline json step_to_json(const ExtensionStep& s) {
    json rec{{"kind", step_kind_name(s.kind)},
             {"prime", json_ll(s.prime, "prime")}};
    json in_orders = json::array(), out_orders = json::array();
    for (const auto& d : s.input.group().orders) in_orders.push_back(json_ll(d, "orders"));
    for (const auto& d : s.output.group().orders) out_orders.push_back(json_ll(d, "orders"));
    rec["input_orders"] = std::move(in_orders);
    rec["output_orders"] = std::move(out_orders);
    rec["inclusion"] = matrix_to_json(s.inclusion.images(), "inclusion");
    json sp = json::array();
    for (auto i : s.sort_perm) sp.push_back(i);
    rec["sort_perm"] = std::move(sp);
    json w;
    switch (s.kind) {
        case StepKind::case1_adjoin_zp:
            w["k0"] = element_to_json(s.kernel_drop_witness);
            w["i0"] = s.case1_i0;
            break;
        case StepKind::case2_stretch_generator: {
            w["index"] = s.stretch_index;
            json roots = json::array();
            for (const auto& q : s.stretch_roots) roots.push_back(q.str());
            w["roots"] = std::move(roots);
            if (!s.stretch_a0.empty()) {
                w["a0"] = element_to_json(s.stretch_a0);
                w["pk"] = json_ll(s.stretch_pk, "pk");
                w["kernel_element"] = element_to_json(s.kernel_drop_witness);
            }
            break;
        }
        case StepKind::case2_split_symplectic:
            w["pair"] =
                json::array({element_to_json(s.split_pair[0]), element_to_json(s.split_pair[1])});
            w["kernel_element"] = element_to_json(s.kernel_drop_witness);
            if (s.split_inner) w["inner"] = step_to_json(*s.split_inner);
            break;
    }
    rec["witness"] = std::move(w);
    return rec;
}

}  // namespace detail

inline json certificate_to_json(const EmbeddingCertificate& c) {
    json b = json::array();
    for (const auto& v : c.b_orders) b.push_back(detail::json_ll(v, "b_orders"));
    json trace = json::array();
    for (const auto& s : c.trace) trace.push_back(detail::step_to_json(s));
    return json{{"source", module_to_json(c.source)},
                {"b_orders", std::move(b)},
                {"map", matrix_to_json(c.embedding.images(), "map")},
                {"trace", std::move(trace)}};
}

/// Parsed certificate document: everything verification needs, with the
/// trace kept verbatim so canonical documents round-trip byte-identically.
struct CertificateDocument {
    AlternateModule source;
    std::vector<Int> b_orders;
    IntMat map;
    json trace;
};

inline CertificateDocument certificate_from_json(const json& j) {
    if (!j.is_object() || !j.contains("source") || !j.contains("b_orders") || !j.contains("map"))
        throw ParseError(
            "certificate: expected an object with \"source\", \"b_orders\" and \"map\"");
    AlternateModule source = module_from_json(j["source"]);
    const json& jb = j["b_orders"];
    if (!jb.is_array()) throw ParseError("b_orders: expected an array of integers");
    std::vector<Int> b_orders;
    b_orders.reserve(jb.size());
    for (std::size_t i = 0; i < jb.size(); ++i)
        b_orders.push_back(detail::int_field(jb[i], "b_orders[" + std::to_string(i) + "]"));
    const json& jm = j["map"];
    if (!jm.is_array()) throw ParseError("map: expected a matrix of integers");
    const std::size_t rows = jm.size();
    std::size_t cols = source.rank();
    if (rows > 0) {
        if (!jm[0].is_array()) throw ParseError("map[0]: expected a row of integers");
        cols = jm[0].size();
    }
    IntMat map(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = jm[i];
        if (!row.is_array() || row.size() != cols)
            throw ParseError("map[" + std::to_string(i) + "]: ragged row");
        for (std::size_t k = 0; k < cols; ++k)
            map(i, k) =
                detail::int_field(row[k], "map[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    json trace = json::array();
    if (j.contains("trace")) {
        if (!j["trace"].is_array()) throw ParseError("trace: expected an array");
        trace = j["trace"];
    }
    return {std::move(source), std::move(b_orders), std::move(map), std::move(trace)};
}

inline CertificateDocument parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return certificate_from_json(j);
}

inline json certificate_document_to_json(const CertificateDocument& d) {
    json b = json::array();
    for (const auto& v : d.b_orders) b.push_back(detail::json_ll(v, "b_orders"));
    return json{{"source", module_to_json(d.source)},
                {"b_orders", std::move(b)},
                {"map", matrix_to_json(d.map, "map")},
                {"trace", d.trace}};
}

inline std::string serialize_certificate(const EmbeddingCertificate& c) {
    return certificate_to_json(c).dump(2) + "\n";
}

}  // namespace altmod
