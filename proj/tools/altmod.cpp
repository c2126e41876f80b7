#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "CLI11.hpp"

#include "altmod/json_io.hpp"
#include "altmod/oracle.hpp"

using namespace altmod;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
}

json run_kernel(const AlternateModule& m) { return subgroup_to_json(kernel(m)); }

json run_lagrangian(const AlternateModule& m) {
    Subgroup l = find_lagrangian(m);
    return json{{"lagrangian", subgroup_to_json(l)},
                {"lagrangian_cardinal", detail::json_ll(lagrangian_cardinal(m), "n")}};
}

json run_classify(const AlternateModule& m) {
    Classification c = classify(m);
    json b = json::array();
    for (const auto& v : c.b_orders) b.push_back(detail::json_ll(v, "b_orders"));
    return json{{"b_orders", std::move(b)},
                {"isometry", matrix_to_json(c.isometry.images(), "isometry")}};
}

json run_embed(const AlternateModule& m) { return certificate_to_json(embed(m)); }

json run_verify(const CertificateDocument& doc) {
    VerifyResult res = verify_embedding(doc.source, doc.b_orders, doc.map);
    if (res.ok()) return json{{"verdict", "ok"}};
    json v = json::array();
    for (const auto& s : res.violations) v.push_back(s);
    return json{{"verdict", "invalid"}, {"violations", std::move(v)}};
}

json run_check(const AlternateModule& m, long long bound) {
    OracleLimits limits;
    limits.bound = Int(bound);
    limits.isometry_bound = Int(bound);
    Subgroup fast = kernel(m);
    Subgroup brute = brute_kernel(m, limits);
    Subgroup lag = find_lagrangian(m);
    SubgroupCensus census = enumerate_subgroups(m, limits);

    const Int n = lagrangian_cardinal(m);
    bool lag_maximal = false;
    bool sizes_ok = true;
    for (const auto& s : census.maximal_isotropic) {
        if (s == lag) lag_maximal = true;
        if (s.cardinality() != n) sizes_ok = false;
    }
    json kf = json::array();
    for (const auto& o : fast.canonical_orders()) kf.push_back(detail::json_ll(o, "orders"));
    json lf = json::array();
    for (const auto& o : lag.canonical_orders()) lf.push_back(detail::json_ll(o, "orders"));
    return json{{"cardinality", detail::json_ll(m.cardinality(), "cardinality")},
                {"kernel_invariant_factors", std::move(kf)},
                {"kernel_matches_oracle", fast == brute},
                {"lagrangian_cardinal", detail::json_ll(n, "n")},
                {"lagrangian_invariant_factors", std::move(lf)},
                {"lagrangian_is_maximal_isotropic", lag_maximal},
                {"subgroup_count", census.subgroups.size()},
                {"maximal_isotropic_count", census.maximal_isotropic.size()},
                {"maximal_isotropic_sizes_equal_n", sizes_ok}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic for finite alternate modules over Q/Z"};
    app.require_subcommand(1);

    std::string input, out_path;
    long long bound = 512;

    auto* kernel_cmd = app.add_subcommand("kernel", "kernel subgroup of a module");
    auto* lagrangian_cmd = app.add_subcommand("lagrangian", "one Lagrangian and its cardinal");
    auto* classify_cmd =
        app.add_subcommand("classify", "standard form of a symplectic module");
    auto* embed_cmd = app.add_subcommand("embed", "embedding certificate into B x B*");
    auto* verify_cmd = app.add_subcommand("verify", "verify an embedding certificate");
    auto* check_cmd = app.add_subcommand("check", "oracle cross-validation of a small module");
    for (auto* cmd :
         {kernel_cmd, lagrangian_cmd, classify_cmd, embed_cmd, verify_cmd, check_cmd}) {
        cmd->add_option("input", input, "input JSON document")->required();
        cmd->add_option("-o,--output", out_path, "also write the JSON result to this file");
    }
    check_cmd->add_option("--bound", bound, "oracle size bound (default 512, ceiling 4096)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::string text = read_file(input);
        json result;
        if (verify_cmd->parsed()) {
            result = run_verify(parse_certificate(text));
        } else {
            const AlternateModule m = parse_module(text);
            if (kernel_cmd->parsed()) result = run_kernel(m);
            else if (lagrangian_cmd->parsed()) result = run_lagrangian(m);
            else if (classify_cmd->parsed()) result = run_classify(m);
            else if (embed_cmd->parsed()) result = run_embed(m);
            else result = run_check(m, bound);
        }
        emit(result, out_path);
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
