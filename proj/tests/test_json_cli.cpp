#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace altmod;
using Catch::Matchers::ContainsSubstring;
using testutil::fixture_path;
using testutil::ints;
using testutil::read_file;
using testutil::reference_module;

namespace {

/// Runs the CLI with the given argument string, captures stdout (and stderr
/// when merge_stderr is set), returns the exit code.
int run_cli(const std::string& args, std::string* output = nullptr,
            bool merge_stderr = false) {
    std::string cmd = std::string("'") + ALTMOD_CLI_PATH + "' " + args;
    if (merge_stderr) cmd += " 2>&1";
    else cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string captured;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) captured.append(buf, got);
    int status = pclose(pipe);
    if (output) *output = captured;
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

}  // namespace

TEST_CASE("parse_module reads the documented example") {
    const std::string text =
        "{\"orders\":[2,4,8],\"gram\":[[\"0/1\",\"1/2\",\"1/2\"],"
        "[\"1/2\",\"0/1\",\"-1/4\"],[\"1/2\",\"1/4\",\"0/1\"]]}";
    AlternateModule m = parse_module(text);
    CHECK(m == reference_module());
    // fractions are normalized into [0, 1) on output
    std::string out = serialize_module(m);
    CHECK_THAT(out, ContainsSubstring("\"3/4\""));
    CHECK(out.find("-1/4") == std::string::npos);
}

TEST_CASE("parse_module diagnostics name the offending field") {
    CHECK_THROWS_WITH(parse_module("{\"orders\":[2],\"gram\":\"x\"}"),
                      ContainsSubstring("gram"));
    CHECK_THROWS_WITH(parse_module("{\"orders\":[2,1],\"gram\":[[],[]]}"),
                      ContainsSubstring("orders[1]: must be at least 2"));
    CHECK_THROWS_WITH(parse_module("{\"orders\":[2,\"x\"],\"gram\":[[],[]]}"),
                      ContainsSubstring("orders[1]: expected an integer"));
    CHECK_THROWS_WITH(
        parse_module("{\"orders\":[2],\"gram\":[[\"0/1\"],[\"0/1\"]]}"),
        ContainsSubstring("gram: expected 1 rows"));
    CHECK_THROWS_WITH(parse_module("{\"orders\":[2],\"gram\":[[7]]}"),
                      ContainsSubstring("gram[0][0]: expected a fraction string"));
    CHECK_THROWS_WITH(parse_module("{\"orders\":[2],\"gram\":[[\"1/0\"]]}"),
                      ContainsSubstring("gram[0][0]"));
    CHECK_THROWS_WITH(parse_module("{\"gram\":[]}"), ContainsSubstring("module"));
    CHECK_THROWS_WITH(parse_module("not json at all"),
                      ContainsSubstring("malformed JSON"));
    // form invariants surface through the same error channel
    CHECK_THROWS_WITH(
        parse_module("{\"orders\":[2,2],\"gram\":[[\"1/2\",\"0/1\"],[\"0/1\",\"0/1\"]]}"),
        ContainsSubstring("alternate"));
    CHECK_THROWS_WITH(
        parse_module(
            "{\"orders\":[4,4],\"gram\":[[\"0/1\",\"1/4\"],[\"1/4\",\"0/1\"]]}"),
        ContainsSubstring("antisymmetry"));
    CHECK_THROWS_WITH(
        parse_module(
            "{\"orders\":[2,4],\"gram\":[[\"0/1\",\"1/4\"],[\"3/4\",\"0/1\"]]}"),
        ContainsSubstring("order-compatibility"));
    // ParseError is a runtime_error so the CLI can map it to exit code 2
    CHECK_THROWS_AS(parse_module("{}"), std::runtime_error);
}

TEST_CASE("serialization round-trips") {
    std::vector<AlternateModule> mods = {
        reference_module(), testutil::trivial_module({2, 4}),
        standard_symplectic(ints({2, 4})), testutil::trivial_module({})};
    for (const auto& m : mods) {
        std::string s = serialize_module(m);
        AlternateModule back = parse_module(s);
        REQUIRE(back == m);
        REQUIRE(serialize_module(back) == s);
    }
}

TEST_CASE("module fixtures are canonical") {
    for (const char* name : {"module_248.json", "trivial_z2z4.json"}) {
        std::string text = read_file(fixture_path(name));
        AlternateModule m = parse_module(text);
        REQUIRE(serialize_module(m) == text);
    }
    // the signed spelling parses to the same module but is not canonical
    std::string signed_text = read_file(fixture_path("module_248_signed.json"));
    CHECK(parse_module(signed_text) == reference_module());
    CHECK(serialize_module(parse_module(signed_text)) != signed_text);
}

TEST_CASE("certificate fixtures are canonical and round-trip") {
    for (const char* name : {"cert_block.json", "cert_cyclic.json", "cert_corrupted.json"}) {
        std::string text = read_file(fixture_path(name));
        CertificateDocument doc = parse_certificate(text);
        REQUIRE(certificate_document_to_json(doc).dump(2) + "\n" == text);
    }
    CertificateDocument good = parse_certificate(read_file(fixture_path("cert_cyclic.json")));
    CHECK(verify_embedding(good.source, good.b_orders, good.map).ok());
    CertificateDocument bad = parse_certificate(read_file(fixture_path("cert_corrupted.json")));
    CHECK_FALSE(verify_embedding(bad.source, bad.b_orders, bad.map).ok());
}

TEST_CASE("generated certificates survive a serialization round-trip") {
    EmbeddingCertificate cert = embed(reference_module());
    std::string text = serialize_certificate(cert);
    CertificateDocument doc = parse_certificate(text);
    CHECK(doc.source == cert.source);
    CHECK(doc.b_orders == cert.b_orders);
    CHECK(doc.map == cert.embedding.images());
    CHECK(verify_embedding(doc.source, doc.b_orders, doc.map).ok());
    CHECK(certificate_document_to_json(doc).dump(2) + "\n" == text);
}

TEST_CASE("cli kernel command") {
    std::string out;
    int rc = run_cli("kernel " + quoted(fixture_path("module_248.json")), &out);
    REQUIRE(rc == 0);
    json j = json::parse(out);
    CHECK(j["cardinality"] == 4);
    CHECK(j["invariant_factors"] == json::array({4}));
}

TEST_CASE("cli lagrangian command") {
    std::string out;
    int rc = run_cli("lagrangian " + quoted(fixture_path("module_248.json")), &out);
    REQUIRE(rc == 0);
    json j = json::parse(out);
    CHECK(j["lagrangian_cardinal"] == 16);
    CHECK(j["lagrangian"]["cardinality"] == 16);
}

TEST_CASE("cli embed command produces a verifiable certificate") {
    std::string out;
    int rc = run_cli("embed " + quoted(fixture_path("module_248.json")), &out);
    REQUIRE(rc == 0);
    CertificateDocument doc = parse_certificate(out);
    Int prod = 1;
    for (const auto& b : doc.b_orders) prod *= b;
    CHECK(prod == 16);
    CHECK(verify_embedding(doc.source, doc.b_orders, doc.map).ok());

    // feed the output straight back into verify
    const std::string tmp = "/tmp/altmod_cli_cert.json";
    std::ofstream(tmp, std::ios::binary) << out;
    std::string verdict;
    rc = run_cli("verify " + quoted(tmp), &verdict);
    REQUIRE(rc == 0);
    CHECK_THAT(verdict, ContainsSubstring("\"verdict\": \"ok\""));
}

TEST_CASE("cli verify command on stored certificates") {
    std::string out;
    int rc = run_cli("verify " + quoted(fixture_path("cert_cyclic.json")), &out);
    REQUIRE(rc == 0);
    CHECK_THAT(out, ContainsSubstring("\"verdict\": \"ok\""));

    rc = run_cli("verify " + quoted(fixture_path("cert_corrupted.json")), &out);
    REQUIRE(rc == 0);
    CHECK_THAT(out, ContainsSubstring("invalid"));
    CHECK_THAT(out, ContainsSubstring("well-definedness"));
}

TEST_CASE("cli classify rejects a degenerate module with exit code 1") {
    std::string out;
    int rc = run_cli("classify " + quoted(fixture_path("module_248.json")), &out, true);
    CHECK(rc == 1);
    CHECK_THAT(out, ContainsSubstring("kernel"));
    CHECK_THAT(out, ContainsSubstring("nontrivial"));
}

TEST_CASE("cli classify on a symplectic input") {
    const std::string tmp = "/tmp/altmod_cli_sym.json";
    std::ofstream(tmp, std::ios::binary)
        << serialize_module(standard_symplectic(ints({2, 4})));
    std::string out;
    int rc = run_cli("classify " + quoted(tmp), &out);
    REQUIRE(rc == 0);
    json j = json::parse(out);
    CHECK(j["b_orders"] == json::array({2, 4}));
}

TEST_CASE("cli parse failures exit with code 2") {
    std::string out;
    int rc = run_cli("kernel " + quoted(fixture_path("invalid_diagonal.json")), &out, true);
    CHECK(rc == 2);
    CHECK_THAT(out, ContainsSubstring("parse error"));
    CHECK_THAT(out, ContainsSubstring("alternate"));

    rc = run_cli("kernel " + quoted(fixture_path("not_json.json")), &out, true);
    CHECK(rc == 2);
    CHECK_THAT(out, ContainsSubstring("malformed JSON"));

    rc = run_cli("kernel /tmp/no_such_file_altmod.json", &out, true);
    CHECK(rc == 2);
    CHECK_THAT(out, ContainsSubstring("cannot open input file"));
}

TEST_CASE("cli check command cross-checks against the oracle") {
    std::string out;
    int rc = run_cli(
        "check " + quoted(fixture_path("trivial_z2z4.json")) + " --bound 64", &out);
    REQUIRE(rc == 0);
    json j = json::parse(out);
    CHECK(j["cardinality"] == 8);
    CHECK(j["kernel_matches_oracle"] == true);
    CHECK(j["kernel_invariant_factors"] == json::array({2, 4}));
    CHECK(j["lagrangian_cardinal"] == 8);
    CHECK(j["lagrangian_is_maximal_isotropic"] == true);
    CHECK(j["subgroup_count"] == 8);
    CHECK(j["maximal_isotropic_count"] == 1);
    CHECK(j["maximal_isotropic_sizes_equal_n"] == true);
}

TEST_CASE("cli -o writes the same bytes as stdout") {
    const std::string tmp = "/tmp/altmod_cli_out.json";
    std::remove(tmp.c_str());
    std::string out;
    int rc = run_cli(
        "kernel " + quoted(fixture_path("module_248.json")) + " -o " + quoted(tmp), &out);
    REQUIRE(rc == 0);
    CHECK(read_file(tmp) == out);
}

TEST_CASE("cli usage errors") {
    std::string out;
    CHECK(run_cli("", &out, true) != 0);           // missing subcommand
    CHECK(run_cli("kernel", &out, true) != 0);     // missing input
    CHECK(run_cli("frobnicate x", &out, true) != 0);
}
