// twistk: exact computations with twisted representation rings, Bredon
// cohomology and the rational K-theory spectral sequence of finite G-CW
// complexes. Inputs are JSON files; output is JSON (default) or TSV on
// standard output. Domain errors exit 1 with {"error", "detail"}; file and
// parse problems exit 2.

#include "twistk/twistk.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kSchema = "twistk/1";

using twistk::io::json;

struct Options {
    std::string group_path;
    std::string cocycle_path;
    std::string complex_path;
    std::string subgroup_spec;
    std::string rel_spec;
    std::string modulus_spec;
    std::string format = "json";
    int max_group = 512;
    bool verbose = false;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> parse_elements(const std::string& s) {
    std::vector<int> out;
    for (const auto& part : split_commas(s)) out.push_back(std::stoi(part));
    return out;
}

void note(const Options& opt, const std::string& message) {
    if (opt.verbose) std::cerr << "twistk: " << message << "\n";
}

void emit_json(const json& body) {
    json out = body;
    out["schema"] = kSchema;
    std::cout << out.dump(2) << "\n";
}

void emit_tsv(const std::vector<std::vector<std::string>>& rows) {
    std::cout << "#schema\t" << kSchema << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << row[i];
        std::cout << "\n";
    }
}

std::string int_str(const twistk::Int& v) { return v.str(); }

twistk::GroupPtr require_group(const Options& opt) {
    if (opt.group_path.empty()) throw std::runtime_error("--group is required");
    return twistk::io::group_from_json(twistk::io::load_file(opt.group_path));
}

twistk::CocycleTable require_cocycle(const Options& opt, const twistk::GroupPtr& g) {
    if (opt.cocycle_path.empty()) throw std::runtime_error("--cocycle is required");
    return twistk::io::cocycle_from_json(twistk::io::load_file(opt.cocycle_path), g);
}

twistk::GCWComplex require_complex(const Options& opt, const twistk::GroupPtr& g) {
    if (opt.complex_path.empty()) throw std::runtime_error("--complex is required");
    return twistk::io::complex_from_json(twistk::io::load_file(opt.complex_path), g);
}

int run_validate(const Options& opt) {
    json body;
    twistk::GroupPtr g = require_group(opt);
    body["group"] = {{"order", g->order()},
                     {"classes", g->classes().size()},
                     {"exponent", g->exponent()}};
    if (!opt.cocycle_path.empty()) {
        twistk::CocycleTable c = require_cocycle(opt, g);
        body["cocycle"] = {{"modulus", c.modulus}, {"class_order", twistk::class_order(c)}};
    }
    if (!opt.complex_path.empty()) {
        twistk::GCWComplex x = require_complex(opt, g);
        body["complex"] = {{"cells", x.cells.size()}, {"dimension", x.dimension}};
    }
    body["valid"] = true;
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"valid", "1"});
        emit_tsv(rows);
    } else {
        emit_json(body);
    }
    return 0;
}

int run_h2(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    if (opt.modulus_spec.empty()) throw std::runtime_error("--modulus is required");
    long modulus = std::stol(opt.modulus_spec);
    twistk::H2Description h2 = twistk::h2_group(g, modulus);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> factors{"invariant_factors"};
        for (long f : h2.invariant_factors) factors.push_back(std::to_string(f));
        rows.push_back(factors);
        rows.push_back({"order", int_str(h2.order)});
        for (std::size_t i = 0; i < h2.generators.size(); ++i) {
            std::vector<std::string> row{"generator", std::to_string(i),
                                         std::to_string(h2.generators[i].modulus)};
            for (const auto& r : h2.generators[i].entries)
                for (long v : r) row.push_back(std::to_string(v));
            rows.push_back(row);
        }
        emit_tsv(rows);
        return 0;
    }
    json gens = json::array();
    for (const auto& c : h2.generators) gens.push_back(twistk::io::cocycle_to_json(c));
    emit_json(json{{"invariant_factors", h2.invariant_factors},
                   {"order", h2.order.convert_to<long long>()},
                   {"generators", gens}});
    return 0;
}

int run_normalize(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    twistk::NormalizedCocycle norm = twistk::normalize_cocycle(c);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"order", std::to_string(norm.order)});
        std::vector<std::string> wit{"witness", std::to_string(norm.witness.modulus)};
        for (long v : norm.witness.values) wit.push_back(std::to_string(v));
        rows.push_back(wit);
        for (const auto& row : norm.cocycle.entries) {
            std::vector<std::string> r{"entries"};
            for (long v : row) r.push_back(std::to_string(v));
            rows.push_back(r);
        }
        emit_tsv(rows);
        return 0;
    }
    emit_json(json{{"cocycle", twistk::io::cocycle_to_json(norm.cocycle)},
                   {"witness",
                    {{"modulus", norm.witness.modulus}, {"values", norm.witness.values}}},
                   {"order", norm.order}});
    return 0;
}

int run_ralpha(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    twistk::BasisPtr basis = twistk::alpha_character_basis(g, c);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& chi : basis->irreducibles) {
            std::vector<std::string> row{int_str(chi.degree())};
            for (const auto& v : chi.values) row.push_back(v.str());
            rows.push_back(row);
        }
        emit_tsv(rows);
        return 0;
    }
    emit_json(json{{"rank", basis->rank()},
                   {"irreducibles", twistk::io::basis_to_json(*basis)}});
    return 0;
}

int run_mackey(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    note(opt, "verifying Mackey structure over all subgroup pairs");
    twistk::Report report = twistk::verify_mackey(g, c, opt.max_group);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"passed", report.passed ? "1" : "0"});
        rows.push_back({"checks", std::to_string(report.checks)});
        for (const auto& f : report.failures) rows.push_back({"failure", f});
        emit_tsv(rows);
        return 0;
    }
    emit_json(json{{"passed", report.passed},
                   {"checks", report.checks},
                   {"failures", report.failures}});
    return 0;
}

int run_bredon(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    twistk::GCWComplex x = require_complex(opt, g);
    std::vector<std::string> rel = split_commas(opt.rel_spec);
    twistk::CoefficientSystem system(g, c, twistk::isotropy_family(x));
    twistk::BredonComplex cochains = twistk::bredon_cochains(x, system, rel);
    twistk::CohomologyResult result = twistk::integral_cohomology(cochains);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t p = 0; p < result.degrees.size(); ++p) {
            std::vector<std::string> row{std::to_string(p),
                                         int_str(result.degrees[p].free_rank)};
            for (const auto& t : result.degrees[p].torsion) row.push_back(int_str(t));
            rows.push_back(row);
        }
        emit_tsv(rows);
        return 0;
    }
    json deltas = json::array();
    for (const auto& d : cochains.deltas) deltas.push_back(twistk::io::matrix_to_json(d));
    emit_json(json{{"cohomology", twistk::io::cohomology_to_json(result)},
                   {"deltas", deltas}});
    return 0;
}

int run_kranks(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    twistk::GCWComplex x = require_complex(opt, g);
    twistk::E2Page page = twistk::e2_page(x, c);
    twistk::KRanks ranks = twistk::rational_k_ranks(x, c);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"k0_rank", int_str(ranks.k0_rank)});
        rows.push_back({"k1_rank", int_str(ranks.k1_rank)});
        rows.push_back({"torsion", ranks.torsion});
        emit_tsv(rows);
        return 0;
    }
    emit_json(json{{"e2", twistk::io::cohomology_to_json(page.cohomology)},
                   {"k0_rank", ranks.k0_rank.convert_to<long long>()},
                   {"k1_rank", ranks.k1_rank.convert_to<long long>()},
                   {"torsion", ranks.torsion}});
    return 0;
}

int run_orbitk(const Options& opt) {
    twistk::GroupPtr g = require_group(opt);
    twistk::CocycleTable c = require_cocycle(opt, g);
    if (opt.subgroup_spec.empty()) throw std::runtime_error("--subgroup is required");
    twistk::Subgroup h(g, parse_elements(opt.subgroup_spec));
    twistk::OrbitK result = twistk::orbit_k(g, c, h);
    if (opt.format == "tsv") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"k0_rank", int_str(result.k0_rank)});
        rows.push_back({"k1_rank", int_str(result.k1_rank)});
        for (const auto& chi : result.k0_basis->irreducibles) {
            std::vector<std::string> row{int_str(chi.degree())};
            for (const auto& v : chi.values) row.push_back(v.str());
            rows.push_back(row);
        }
        emit_tsv(rows);
        return 0;
    }
    emit_json(json{{"k0_rank", result.k0_rank.convert_to<long long>()},
                   {"k1_rank", result.k1_rank.convert_to<long long>()},
                   {"k0_basis", twistk::io::basis_to_json(*result.k0_basis)}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    if (const char* env = std::getenv("TWISTK_MAX_GROUP")) opt.max_group = std::atoi(env);

    CLI::App app{"exact twisted representation rings, Bredon cohomology and K-theory ranks"};
    app.require_subcommand(1);

    std::string command;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--group", opt.group_path, "group JSON file");
        sub->add_option("--cocycle", opt.cocycle_path, "cocycle JSON file");
        sub->add_option("--format", opt.format, "output format: json or tsv")
            ->check(CLI::IsMember({"json", "tsv"}));
        sub->add_option("--max-group", opt.max_group, "subgroup enumeration bound");
        sub->add_flag("--verbose", opt.verbose, "progress notes on standard error");
        sub->callback([&command, sub] { command = sub->get_name(); });
    };

    CLI::App* validate = app.add_subcommand("validate", "validate input files");
    add_common(validate);
    validate->add_option("--complex", opt.complex_path, "complex JSON file");
    CLI::App* h2 = app.add_subcommand("h2", "H^2(G, Z/N) with generator cocycles");
    add_common(h2);
    h2->add_option("--modulus", opt.modulus_spec, "coefficient modulus N");
    add_common(app.add_subcommand("normalize", "normalized cocycle, witness and class order"));
    add_common(app.add_subcommand("ralpha", "twisted irreducible section characters"));
    add_common(app.add_subcommand("mackey-check", "verify the Mackey structure"));
    CLI::App* bredon = app.add_subcommand("bredon", "twisted Bredon cohomology of a complex");
    add_common(bredon);
    bredon->add_option("--complex", opt.complex_path, "complex JSON file");
    bredon->add_option("--rel", opt.rel_spec, "comma-separated subcomplex cell ids");
    CLI::App* kranks = app.add_subcommand("kranks", "rational twisted K-theory ranks");
    add_common(kranks);
    kranks->add_option("--complex", opt.complex_path, "complex JSON file");
    CLI::App* orbitk = app.add_subcommand("orbitk", "K-theory of a single orbit G/H");
    add_common(orbitk);
    orbitk->add_option("--subgroup", opt.subgroup_spec, "comma-separated subgroup elements");
    add_common(app.add_subcommand("help-formats", "describe file formats"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (command == "validate") return run_validate(opt);
        if (command == "h2") return run_h2(opt);
        if (command == "normalize") return run_normalize(opt);
        if (command == "ralpha") return run_ralpha(opt);
        if (command == "mackey-check") return run_mackey(opt);
        if (command == "bredon") return run_bredon(opt);
        if (command == "kranks") return run_kranks(opt);
        if (command == "orbitk") return run_orbitk(opt);
        if (command == "help-formats") {
            std::cout << "group: {\"order\": m, \"table\": [[...]]} or {\"degree\": d, "
                         "\"generators\": [[image lists]]}\n"
                         "cocycle: {\"modulus\": N, \"entries\": [[exponents]]}\n"
                         "complex: {\"cells\": [{\"id\", \"dim\", \"isotropy\": [elements], "
                         "\"boundary\": [{\"cell\", \"g\", \"m\"}]}], \"subcomplex\": [ids]}\n"
                         "cyclotomic value: {\"conductor\": N, \"coeffs\": [[num, den], ...]} "
                         "or TSV cell c:N:a0/b0,a1/b1,...\n";
            return 0;
        }
        throw std::runtime_error("unknown command");
    } catch (const twistk::Error& e) {
        json err{{"error", e.code()}, {"detail", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", "io"}, {"detail", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
