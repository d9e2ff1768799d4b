#pragma once

#include "twistk/bredon.hpp"
#include "twistk/cyclotomic.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace twistk::io {

using nlohmann::json;

// I/O and schema problems throw std::runtime_error / nlohmann exceptions;
// domain problems keep throwing twistk::Error so callers can tell them apart.
inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

inline json cyc_to_json(const CycNum& v) {
    json coeffs = json::array();
    for (const auto& c : v.coeffs())
        coeffs.push_back(json::array({numerator(c).str(), denominator(c).str()}));
    return json{{"conductor", v.conductor()}, {"coeffs", coeffs}};
}

inline CycNum cyc_from_json(const json& j) {
    long conductor = j.at("conductor").get<long>();
    if (conductor < 1) throw std::runtime_error("conductor must be positive");
    const auto& coeffs = j.at("coeffs");
    CycNum out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Rational c(Int(coeffs[k].at(0).get<std::string>()),
                   Int(coeffs[k].at(1).get<std::string>()));
        if (c == 0) continue;
        out += CycNum(c) * CycNum::root_of_unity(conductor, static_cast<long>(k));
    }
    return out;
}

inline GroupPtr group_from_json(const json& j) {
    if (j.contains("table")) {
        std::vector<std::vector<int>> table = j.at("table").get<std::vector<std::vector<int>>>();
        if (j.contains("order") &&
            j.at("order").get<std::size_t>() != table.size())
            throw std::runtime_error("declared order does not match the table");
        return make_group(table);
    }
    if (j.contains("generators"))
        return make_group(j.at("degree").get<int>(),
                          j.at("generators").get<std::vector<std::vector<int>>>());
    throw std::runtime_error("group file needs a table or permutation generators");
}

inline json group_to_json(const GroupPtr& g) {
    return json{{"order", g->order()}, {"table", g->table()}};
}

inline CocycleTable cocycle_from_json(const json& j, const GroupPtr& g) {
    CocycleTable c{g, j.at("modulus").get<long>(),
                   j.at("entries").get<std::vector<std::vector<long>>>()};
    validate_cocycle(c);
    return c;
}

inline json cocycle_to_json(const CocycleTable& c) {
    return json{{"modulus", c.modulus}, {"entries", c.entries}};
}

inline GCWComplex complex_from_json(const json& j, const GroupPtr& g) {
    std::vector<RawCell> cells;
    for (const auto& c : j.at("cells")) {
        RawCell rc;
        rc.id = c.at("id").get<std::string>();
        rc.dim = c.at("dim").get<int>();
        rc.isotropy = c.at("isotropy").get<std::vector<int>>();
        if (c.contains("boundary"))
            for (const auto& t : c.at("boundary"))
                rc.boundary.push_back(IncidenceTerm{t.at("cell").get<std::string>(),
                                                    t.at("g").get<int>(),
                                                    Int(t.at("m").get<long long>())});
        cells.push_back(std::move(rc));
    }
    std::vector<std::string> sub;
    if (j.contains("subcomplex")) sub = j.at("subcomplex").get<std::vector<std::string>>();
    return make_complex(g, cells, std::move(sub));
}

inline json complex_to_json(const GCWComplex& x) {
    json cells = json::array();
    for (const auto& cell : x.cells) {
        json boundary = json::array();
        for (const auto& term : cell.boundary)
            boundary.push_back(json{{"cell", term.cell},
                                    {"g", term.translate},
                                    {"m", term.degree.convert_to<long long>()}});
        cells.push_back(json{{"id", cell.id},
                             {"dim", cell.dim},
                             {"isotropy", cell.isotropy.elements()},
                             {"boundary", boundary}});
    }
    json out{{"cells", cells}};
    if (!x.subcomplex.empty()) out["subcomplex"] = x.subcomplex;
    return out;
}

inline json matrix_to_json(const IntMat& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.convert_to<long long>());
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json basis_to_json(const AlphaCharBasis& basis) {
    json irr = json::array();
    for (const auto& chi : basis.irreducibles) {
        json values = json::array();
        for (const auto& v : chi.values) values.push_back(cyc_to_json(v));
        irr.push_back(json{{"degree", chi.degree().convert_to<long long>()},
                           {"values", values}});
    }
    return irr;
}

inline json cohomology_to_json(const CohomologyResult& r) {
    json degrees = json::array();
    for (std::size_t p = 0; p < r.degrees.size(); ++p) {
        json torsion = json::array();
        for (const auto& t : r.degrees[p].torsion) torsion.push_back(t.convert_to<long long>());
        degrees.push_back(json{{"p", p},
                               {"free_rank", r.degrees[p].free_rank.convert_to<long long>()},
                               {"torsion", torsion}});
    }
    return degrees;
}

} // namespace twistk::io
