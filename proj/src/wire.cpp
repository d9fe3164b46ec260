#include "histforce/wire.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "histforce/errors.hpp"

namespace histforce {

using nlohmann::ordered_json;

namespace {

std::uint64_t require_uint(const ordered_json& v, const char* what, std::uint64_t max) {
    if (!v.is_number_unsigned()) {
        throw format_error(std::string(what) + " must be a non-negative integer");
    }
    const auto n = v.get<std::uint64_t>();
    if (n > max) throw format_error(std::string(what) + " is out of range");
    return n;
}

void require_only_keys(const ordered_json& obj, std::initializer_list<const char*> keys,
                       const char* what) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw format_error(std::string(what) + ": unknown key \"" + it.key() + "\"");
        }
    }
    for (const char* k : keys) {
        if (!obj.contains(k)) {
            throw format_error(std::string(what) + ": missing key \"" + k + "\"");
        }
    }
}

std::vector<gen_index> decode_index_list(const ordered_json& v, const char* what) {
    if (!v.is_array()) throw format_error(std::string(what) + " must be an array");
    std::vector<gen_index> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        out.push_back(static_cast<gen_index>(
            require_uint(e, what, std::numeric_limits<gen_index>::max())));
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (out[i] >= out[i + 1]) {
            throw format_error(std::string(what) + " must be strictly ascending");
        }
    }
    return out;
}

condition_ptr decode_node(const ordered_json& v, std::uint32_t width) {
    if (!v.is_object() || v.size() != 1) {
        throw format_error("node must be an object with exactly one key");
    }
    if (v.contains("atomic")) {
        const auto idx = require_uint(v["atomic"], "atomic index",
                                      std::numeric_limits<gen_index>::max());
        return condition::atomic(width, static_cast<gen_index>(idx));
    }
    if (!v.contains("amalgam")) {
        throw format_error("node must hold \"atomic\" or \"amalgam\"");
    }
    const ordered_json& a = v["amalgam"];
    if (!a.is_object()) throw format_error("amalgam must be an object");
    require_only_keys(a, {"zeta_star", "tau_star", "heart", "parts"}, "amalgam");
    const auto zeta = require_uint(a["zeta_star"], "zeta_star",
                                   std::numeric_limits<std::uint32_t>::max());
    term_ptr tau = decode_term(a["tau_star"]);
    std::vector<gen_index> heart = decode_index_list(a["heart"], "heart");
    if (!a["parts"].is_array()) throw format_error("parts must be an array");
    std::vector<condition::part> parts;
    parts.reserve(a["parts"].size());
    for (const auto& pj : a["parts"]) {
        if (!pj.is_object()) throw format_error("part must be an object");
        require_only_keys(pj, {"node", "v"}, "part");
        condition::part part;
        part.child = decode_node(pj["node"], width);
        part.v = decode_index_list(pj["v"], "v");
        parts.push_back(std::move(part));
    }
    return condition::amalgamate(static_cast<std::uint32_t>(zeta), std::move(tau),
                                 std::move(heart), std::move(parts));
}

ordered_json encode_node(const condition& c) {
    ordered_json node = ordered_json::object();
    if (c.is_atomic()) {
        node["atomic"] = c.atom_index();
        return node;
    }
    ordered_json a = ordered_json::object();
    a["zeta_star"] = c.zeta_star();
    a["tau_star"] = encode_term(*c.tau_star());
    a["heart"] = c.heart();
    ordered_json parts = ordered_json::array();
    for (const auto& part : c.parts()) {
        ordered_json pj = ordered_json::object();
        pj["node"] = encode_node(*part.child);
        pj["v"] = part.v;
        parts.push_back(std::move(pj));
    }
    a["parts"] = std::move(parts);
    node["amalgam"] = std::move(a);
    return node;
}

} // namespace

ordered_json encode_term(const term& t) {
    switch (t.node_kind()) {
    case term::kind::const0:
        return ordered_json::array({"const", 0});
    case term::kind::const1:
        return ordered_json::array({"const", 1});
    case term::kind::var:
        return ordered_json::array({"var", t.slot()});
    case term::kind::negation:
        return ordered_json::array({"not", encode_term(*t.lhs())});
    case term::kind::conjunction:
        return ordered_json::array({"and", encode_term(*t.lhs()), encode_term(*t.rhs())});
    case term::kind::disjunction:
        return ordered_json::array({"or", encode_term(*t.lhs()), encode_term(*t.rhs())});
    }
    throw internal_error("encode_term: unreachable term kind");
}

term_ptr decode_term(const ordered_json& doc) {
    if (!doc.is_array() || doc.empty() || !doc[0].is_string()) {
        throw format_error("term must be a tagged array");
    }
    const std::string tag = doc[0].get<std::string>();
    if (tag == "const") {
        if (doc.size() != 2) throw format_error("const term takes one argument");
        const auto b = require_uint(doc[1], "const value", 1);
        return b == 0 ? term::const0() : term::const1();
    }
    if (tag == "var") {
        if (doc.size() != 2) throw format_error("var term takes one argument");
        const auto k = require_uint(doc[1], "var slot", kMaxDomain - 1);
        return term::var(static_cast<std::uint32_t>(k));
    }
    if (tag == "not") {
        if (doc.size() != 2) throw format_error("not term takes one argument");
        return term::negation_of(decode_term(doc[1]));
    }
    if (tag == "and" || tag == "or") {
        if (doc.size() != 3) throw format_error(tag + " term takes two arguments");
        term_ptr l = decode_term(doc[1]);
        term_ptr r = decode_term(doc[2]);
        return tag == "and" ? term::conjunction_of(std::move(l), std::move(r))
                            : term::disjunction_of(std::move(l), std::move(r));
    }
    throw format_error("unknown term tag \"" + tag + "\"");
}

ordered_json encode(const condition& p) {
    ordered_json doc = ordered_json::object();
    doc["width"] = p.width();
    doc["node"] = encode_node(p);
    return doc;
}

std::string encode_string(const condition& p) { return encode(p).dump(); }

condition_ptr decode(const ordered_json& doc) {
    if (!doc.is_object()) throw format_error("document must be an object");
    require_only_keys(doc, {"width", "node"}, "document");
    const auto width =
        require_uint(doc["width"], "width", std::numeric_limits<std::uint32_t>::max());
    if (width < 2) throw format_error("width must be at least 2");
    return decode_node(doc["node"], static_cast<std::uint32_t>(width));
}

condition_ptr decode_string(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw format_error(std::string("invalid JSON: ") + e.what());
    }
    return decode(doc);
}

std::string condition_id(const condition& p) {
    const std::string text = encode_string(p);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace histforce
