#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyfun/abelian.hpp"
#include "polyfun/complexes.hpp"
#include "polyfun/linalg.hpp"
#include "polyfun/matrix.hpp"
#include "polyfun/report.hpp"
#include "polyfun/simplicial.hpp"

namespace polyfun {

using Json = nlohmann::json;

namespace detail {

/* largest magnitude that survives a round trip through a double-based reader */
inline const Int& json_int_limit() {
    static const Int limit = Int(1) << 53;
    return limit;
}

inline const Json& expect_field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string(what) + ": missing field '" + key + "'");
    return j.at(key);
}

inline int small_int(const Json& j, const char* what) {
    if (!j.is_number_integer())
        throw std::invalid_argument(std::string(what) + ": expected an integer");
    return j.get<int>();
}

}  // namespace detail

inline Json int_to_json(const Int& v) {
    if (v >= -detail::json_int_limit() && v <= detail::json_int_limit())
        return static_cast<long long>(v);
    return v.str();
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw std::invalid_argument("entry: '" + j.get<std::string>() +
                                        "' is not a decimal integer");
        }
    }
    throw std::invalid_argument("entry: expected an integer or a decimal string");
}

/* {"rows": r, "cols": c, "entries": [[..], ..]}; entries exceeding 2^53 are
 * emitted as decimal strings so nothing silently loses precision */
inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(rows)}};
}

/* accepts the full object form or a bare array of rows */
inline IntMatrix matrix_from_json(const Json& j) {
    const Json* entries = &j;
    int rows = -1;
    int cols = -1;
    if (j.is_object()) {
        rows = detail::small_int(detail::expect_field(j, "rows", "matrix"), "matrix rows");
        cols = detail::small_int(detail::expect_field(j, "cols", "matrix"), "matrix cols");
        entries = &detail::expect_field(j, "entries", "matrix");
    }
    if (!entries->is_array()) throw std::invalid_argument("matrix: entries must be an array");
    if (rows < 0) {
        rows = static_cast<int>(entries->size());
        cols = 0;
        if (rows > 0) {
            if (!(*entries)[0].is_array())
                throw std::invalid_argument("matrix: each row must be an array");
            cols = static_cast<int>((*entries)[0].size());
        }
    }
    if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative shape");
    if (static_cast<int>(entries->size()) != rows)
        throw std::invalid_argument("matrix: row count mismatch");
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = (*entries)[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (int k = 0; k < cols; ++k) m.at(i, k) = int_from_json(row[k]);
    }
    return m;
}

inline Json group_to_json(const FgAbGroup& g) {
    Json factors = Json::array();
    for (const auto& d : g.invariant_factors) factors.push_back(int_to_json(d));
    return Json{{"free_rank", g.free_rank}, {"invariant_factors", std::move(factors)}};
}

inline FgAbGroup group_from_json(const Json& j) {
    FgAbGroup g;
    g.free_rank = detail::small_int(detail::expect_field(j, "free_rank", "group"), "group");
    const Json& f = detail::expect_field(j, "invariant_factors", "group");
    if (!f.is_array()) throw std::invalid_argument("group: invariant_factors must be an array");
    for (const auto& d : f) g.invariant_factors.push_back(int_from_json(d));
    validate_group(g);
    return g;
}

inline Json pgroup_to_json(const PresentedGroup& g) {
    return Json{{"gens", g.gens}, {"rels", matrix_to_json(g.rels)}};
}

inline PresentedGroup pgroup_from_json(const Json& j) {
    PresentedGroup g;
    g.gens = detail::small_int(detail::expect_field(j, "gens", "presented group"), "gens");
    g.rels = matrix_from_json(detail::expect_field(j, "rels", "presented group"));
    if (g.rels.rows != g.gens)
        throw std::invalid_argument("presented group: rels must have one row per generator");
    return g;
}

inline Json complex_to_json(const FreeChainComplex& c) {
    Json diffs = Json::array();
    for (const auto& d : c.diffs) diffs.push_back(matrix_to_json(d));
    return Json{{"top", c.top}, {"ranks", c.ranks}, {"diffs", std::move(diffs)}};
}

inline FreeChainComplex complex_from_json(const Json& j) {
    FreeChainComplex c;
    c.top = detail::small_int(detail::expect_field(j, "top", "complex"), "complex top");
    const Json& ranks = detail::expect_field(j, "ranks", "complex");
    if (!ranks.is_array()) throw std::invalid_argument("complex: ranks must be an array");
    c.ranks.clear();
    for (const auto& r : ranks) c.ranks.push_back(detail::small_int(r, "complex rank"));
    const Json& diffs = detail::expect_field(j, "diffs", "complex");
    if (!diffs.is_array()) throw std::invalid_argument("complex: diffs must be an array");
    c.diffs.clear();
    for (const auto& d : diffs) c.diffs.push_back(matrix_from_json(d));
    validate_complex(c);
    return c;
}

inline Json gen_complex_to_json(const GenChainComplex& c) {
    Json groups = Json::array();
    for (const auto& g : c.groups) groups.push_back(pgroup_to_json(g));
    Json maps = Json::array();
    for (const auto& m : c.maps) maps.push_back(matrix_to_json(m));
    return Json{{"top", c.top}, {"groups", std::move(groups)}, {"maps", std::move(maps)}};
}

inline GenChainComplex gen_complex_from_json(const Json& j) {
    GenChainComplex c;
    c.top = detail::small_int(detail::expect_field(j, "top", "gen complex"), "gen complex top");
    const Json& groups = detail::expect_field(j, "groups", "gen complex");
    if (!groups.is_array()) throw std::invalid_argument("gen complex: groups must be an array");
    c.groups.clear();
    for (const auto& g : groups) c.groups.push_back(pgroup_from_json(g));
    const Json& maps = detail::expect_field(j, "maps", "gen complex");
    if (!maps.is_array()) throw std::invalid_argument("gen complex: maps must be an array");
    c.maps.clear();
    for (const auto& m : maps) c.maps.push_back(matrix_from_json(m));
    validate_complex(c);
    return c;
}

inline Json simplicial_to_json(const SimplicialModule& s) {
    Json faces = Json::array();
    for (const auto& level : s.faces) {
        Json fs = Json::array();
        for (const auto& d : level) fs.push_back(matrix_to_json(d));
        faces.push_back(std::move(fs));
    }
    Json degens = Json::array();
    for (const auto& level : s.degens) {
        Json ss = Json::array();
        for (const auto& d : level) ss.push_back(matrix_to_json(d));
        degens.push_back(std::move(ss));
    }
    return Json{{"cap", s.cap},
                {"ranks", s.ranks},
                {"faces", std::move(faces)},
                {"degens", std::move(degens)}};
}

inline SimplicialModule simplicial_from_json(const Json& j) {
    SimplicialModule s;
    s.cap = detail::small_int(detail::expect_field(j, "cap", "simplicial"), "simplicial cap");
    const Json& ranks = detail::expect_field(j, "ranks", "simplicial");
    if (!ranks.is_array()) throw std::invalid_argument("simplicial: ranks must be an array");
    s.ranks.clear();
    for (const auto& r : ranks) s.ranks.push_back(detail::small_int(r, "simplicial rank"));
    auto levels = [](const Json& arr, const char* what) {
        if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
        std::vector<std::vector<IntMatrix>> out;
        for (const auto& level : arr) {
            if (!level.is_array())
                throw std::invalid_argument(std::string(what) + " levels must be arrays");
            std::vector<IntMatrix> ms;
            for (const auto& m : level) ms.push_back(matrix_from_json(m));
            out.push_back(std::move(ms));
        }
        return out;
    };
    s.faces = levels(detail::expect_field(j, "faces", "simplicial"), "simplicial: faces");
    s.degens = levels(detail::expect_field(j, "degens", "simplicial"), "simplicial: degens");
    validate_simplicial(s);
    return s;
}

/* witness keys repeat when one check records several samples of the same kind;
 * repeats get a " #k" suffix so the object keeps every entry */
inline Json report_to_json(const CheckReport& rep) {
    Json w = Json::object();
    for (const auto& [k, v] : rep.witness) {
        std::string key = k;
        int n = 2;
        while (w.contains(key)) key = k + " #" + std::to_string(n++);
        w[key] = v;
    }
    return Json{{"check", rep.check}, {"pass", rep.pass}, {"witness", std::move(w)}};
}

inline Json snf_to_json(const SnfDecomposition& s) {
    return Json{{"d", matrix_to_json(s.d)},
                {"u", matrix_to_json(s.u)},
                {"v", matrix_to_json(s.v)},
                {"rank", s.rank}};
}

}  // namespace polyfun
