#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

using namespace altmod;
using testutil::elem;
using testutil::ints;

namespace {

int failures = 0;

/// Runs one criterion, times it, and prints a single PASS/FAIL line.
/// The body signals failure by throwing; budget_s == 0 disables the timer.
void criterion(int idx, const std::string& label, double budget_s,
               const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty() && budget_s > 0 && secs > budget_s)
        error = "exceeded the time budget of " + std::to_string(budget_s) + " s";
    if (error.empty()) {
        std::printf("PASS  criterion %d: %s (%.2f s)\n", idx, label.c_str(), secs);
    } else {
        std::printf("FAIL  criterion %d: %s (%.2f s): %s\n", idx, label.c_str(), secs,
                    error.c_str());
        ++failures;
    }
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

AlternateModule fixture_248() { return testutil::load_fixture_module("module_248.json"); }

Int product(const std::vector<Int>& xs) {
    Int p = 1;
    for (const auto& x : xs) p *= x;
    return p;
}

/// All multisets of integers >= 2 (non-decreasing) whose product is at most
/// `bound`, including the empty one.
void multisets_up_to(const Int& bound, const Int& from, std::vector<Int>& cur,
                     std::vector<std::vector<Int>>& out) {
    out.push_back(cur);
    for (Int d = from; d <= bound; ++d) {
        cur.push_back(d);
        multisets_up_to(bound / d, d, cur, out);
        cur.pop_back();
    }
}

}  // namespace

int main() {
    criterion(1, "kernel of the [2,4,8] fixture is cyclic of order 4", 1.0, [] {
        AlternateModule m = fixture_248();
        Subgroup k = kernel(m);
        require(k == subgroup_generated(m.group(), {elem({1, 2, 2})}),
                "kernel differs from <(1,2,2)>");
        require(subgroup_invariant_factors(k) == ints({4}), "kernel is not cyclic of order 4");
    });

    criterion(2, "Lagrangian cardinal 16, census confirms all maximal isotropic sizes",
              30.0, [] {
        AlternateModule m = fixture_248();
        require(lagrangian_cardinal(m) == 16, "lagrangian_cardinal is not 16");
        SubgroupCensus c = enumerate_subgroups(m);
        std::set<std::vector<Int>> types;
        for (const auto& s : c.maximal_isotropic) {
            require(s.cardinality() == 16, "a maximal isotropic subgroup has order != 16");
            types.insert(subgroup_invariant_factors(s));
        }
        require(types.count(ints({2, 8})) == 1, "no maximal isotropic of type [2,8]");
        require(types.count(ints({2, 2, 4})) == 1, "no maximal isotropic of type [2,2,4]");
    });

    criterion(3, "embed on the fixture yields a verified certificate with product 16",
              1.0, [] {
        EmbeddingCertificate cert = embed(fixture_248());
        require(product(cert.b_orders) == 16, "product of b_orders is not 16");
        VerifyResult v = verify_certificate(cert);
        require(v.ok(), v.ok() ? "" : "verify rejected: " + v.violations.front());
    });

    criterion(4, "both stored certificates for trivially-formed Z/2 x Z/4 verify", 0, [] {
        AlternateModule source = testutil::trivial_module({2, 4});
        CertificateDocument block =
            parse_certificate(testutil::read_file(testutil::fixture_path("cert_block.json")));
        CertificateDocument cyclic =
            parse_certificate(testutil::read_file(testutil::fixture_path("cert_cyclic.json")));
        require(block.source == source && cyclic.source == source,
                "stored certificates do not start at trivially-formed Z/2 x Z/4");
        require(verify_embedding(block.source, block.b_orders, block.map).ok(),
                "the block-diagonal certificate was rejected");
        require(verify_embedding(cyclic.source, cyclic.b_orders, cyclic.map).ok(),
                "the cyclic certificate was rejected");
        require(block.b_orders != cyclic.b_orders,
                "the two certificates should exhibit different groups B");
    });

    criterion(5, "1000 random modules: certificates verify with exact Lagrangian product",
              300.0, [] {
        std::mt19937 rng(20260823);
        for (int t = 0; t < 1000; ++t) {
            AlternateModule m = testutil::random_module(rng, {2, 3, 5}, 1024, 4);
            EmbeddingCertificate cert = embed(m);
            VerifyResult v = verify_certificate(cert);
            require(v.ok(), v.ok() ? "" : "rejected certificate: " + v.violations.front());
            require(product(cert.b_orders) ==
                        exact_sqrt(m.cardinality() * kernel(m).cardinality()),
                    "product of b_orders differs from sqrt(|A| |K|)");
        }
    });

    criterion(6, "200 random modules: kernel and Lagrangian agree with the oracle",
              600.0, [] {
        std::mt19937 rng(20260824);
        for (int t = 0; t < 200; ++t) {
            AlternateModule m = testutil::random_module(rng, {2, 3, 5}, 256, 3);
            require(kernel(m) == brute_kernel(m), "kernel disagrees with brute_kernel");
            Subgroup l = find_lagrangian(m);
            SubgroupCensus c = enumerate_subgroups(m);
            bool found = false;
            for (const auto& s : c.maximal_isotropic) found |= s == l;
            require(found, "find_lagrangian is not among the census maximal isotropic");
        }
    });

    criterion(7, "100 random symplectic modules: |B| |Bperp| = |A| and Bperpperp = B",
              0, [] {
        // alternate between random quotient presentations and standard
        // modules of random shape, so both skewed Gram matrices and large
        // subgroup lattices (up to (Z/2)^6 with 2825 subgroups) are exercised
        std::vector<std::vector<Int>> shapes;
        std::vector<Int> cur;
        multisets_up_to(Int(8), Int(2), cur, shapes);
        std::mt19937 rng(20260825);
        for (int t = 0; t < 100; ++t) {
            AlternateModule m =
                (t % 2 == 0)
                    ? standard_symplectic(shapes[1 + rng() % (shapes.size() - 1)])
                    : testutil::random_symplectic(rng, {2, 3, 5}, 256, 4);
            SubgroupCensus c = enumerate_subgroups(m);
            for (const auto& b : c.subgroups) {
                Subgroup perp = orthogonal(m, b);
                require(b.cardinality() * perp.cardinality() == m.cardinality(),
                        "|B| |Bperp| != |A|");
                require(orthogonal(m, perp) == b, "(Bperp)perp != B");
            }
        }
    });

    criterion(8, "classification round-trips every standard module of order up to 64^2",
              0, [] {
        std::vector<std::vector<Int>> shapes;
        std::vector<Int> cur;
        multisets_up_to(Int(64), Int(2), cur, shapes);
        std::mt19937 rng(20260826);
        for (auto L : shapes) {
            // also exercise arbitrary generator orderings
            std::shuffle(L.begin(), L.end(), rng);
            AlternateModule m = standard_symplectic(L);
            Classification c = classify(m);
            require(c.b_orders ==
                        subgroup_invariant_factors(Subgroup::whole(FinAbGroup(L))),
                    "b_orders differ from the invariant factors of B");
            require(is_isometry(m, standard_symplectic(c.b_orders), c.isometry),
                    "returned morphism is not an isometry onto the standard module");
        }
    });

    std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "OK" : "NOT OK", failures);
    return failures;
}
