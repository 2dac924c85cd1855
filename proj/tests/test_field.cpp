#include <doctest.h>

#include <json.hpp>

#include "ppinv/field.hpp"

using namespace ppinv;

TEST_CASE("canonical irreducible polynomials") {
    CHECK(find_irreducible(2, 1) == std::vector<uint32_t>{0, 1});          // x
    CHECK(find_irreducible(2, 2) == std::vector<uint32_t>{1, 1, 1});       // x^2+x+1
    CHECK(find_irreducible(2, 4) == std::vector<uint32_t>{1, 1, 0, 0, 1}); // x^4+x+1
    CHECK(find_irreducible(3, 2) == std::vector<uint32_t>{1, 0, 1});       // x^2+1
    CHECK_THROWS_AS(find_irreducible(4, 2), std::invalid_argument);
}

TEST_CASE("context construction") {
    auto f4 = mk_field(2, 2);
    CHECK(f4->order() == 4);
    CHECK(f4->modulus() == std::vector<uint32_t>{1, 1, 1});
    CHECK(f4->primitive().enc == 2);

    auto f3 = mk_field(3, 1);
    CHECK(f3->order() == 3);
    CHECK(f3->primitive().enc == 2);

    // x^2+x = x(x+1) is reducible
    CHECK_THROWS_AS(mk_field(2, 2, {0, 1, 1}), std::invalid_argument);
    // non-monic
    CHECK_THROWS_AS(mk_field(3, 1, {1, 2}), std::invalid_argument);
    // above the default order cap of 2^20
    CHECK_THROWS_AS(mk_field(2, 21), std::invalid_argument);
}

TEST_CASE("construction is deterministic") {
    auto a = mk_field(2, 4);
    auto b = mk_field(2, 4);
    CHECK(a->modulus() == b->modulus());
    CHECK(a->primitive().enc == b->primitive().enc);
    auto c = mk_field(3, 2);
    auto d = mk_field(3, 2);
    CHECK(c->modulus() == d->modulus());
    CHECK(c->primitive().enc == d->primitive().enc);
}

TEST_CASE("basic arithmetic in GF(4) and GF(3)") {
    auto f4 = mk_field(2, 2);
    auto w = f4->elem(2);
    CHECK(f4->mul(w, w) == f4->elem(3));  // w^2 = w+1
    CHECK(f4->add(w, w) == f4->zero());
    CHECK(f4->mul(w, f4->elem(3)) == f4->one());  // w * w^2 = w^3 = 1
    CHECK(f4->inv(w) == f4->elem(3));

    auto f3 = mk_field(3, 1);
    CHECK(f3->inv(f3->elem(2)) == f3->elem(2));
    CHECK(f3->add(f3->elem(2), f3->elem(2)) == f3->one());
    CHECK(f3->neg(f3->elem(1)) == f3->elem(2));
    CHECK(f3->sub(f3->elem(1), f3->elem(2)) == f3->elem(2));
}

TEST_CASE("error paths") {
    auto f4 = mk_field(2, 2);
    auto f8 = mk_field(2, 3);
    CHECK_THROWS_AS(f4->inv(f4->zero()), std::domain_error);
    CHECK_THROWS_AS(f4->elem(4), std::invalid_argument);
    CHECK_THROWS_AS(f4->add(f4->one(), f8->one()), std::invalid_argument);
    CHECK_THROWS_AS(f8->trace_rel(f8->one(), 1), std::invalid_argument);
    CHECK_THROWS_AS(f8->norm_rel(f8->one(), 2), std::invalid_argument);
}

TEST_CASE("big-exponent powering") {
    auto f4 = mk_field(2, 2);
    auto w = f4->elem(2);
    CHECK(f4->pow_big(w, 5) == f4->elem(3));  // 5 mod 3 = 2
    CHECK(f4->pow_big(f4->zero(), 11) == f4->zero());
    CHECK(f4->pow_big(w, 0) == f4->one());
    CHECK(f4->pow_big(f4->zero(), 0) == f4->one());

    BigInt huge("123456789012345678901234567890");
    uint64_t r = mpz_fdiv_ui(huge.get_mpz_t(), 3);
    CHECK(f4->pow_big(w, huge) == f4->pow_u64(w, r));

    // negative exponents on nonzero bases are inverse powers
    CHECK(f4->pow_big(w, BigInt(-1)) == f4->inv(w));
    CHECK_THROWS_AS(f4->pow_big(f4->zero(), BigInt(-2)), std::domain_error);
}

TEST_CASE("frobenius") {
    auto f4 = mk_field(2, 2);
    auto w = f4->elem(2);
    CHECK(f4->frobenius(w, 1) == f4->elem(3));
    CHECK(f4->frobenius(w, 2) == w);
    CHECK(f4->frobenius(w, 0) == w);

    auto f16 = mk_field(2, 4);
    for (uint64_t a = 0; a < 16; ++a)
        for (uint64_t b = 0; b < 16; ++b) {
            auto x = f16->elem(a), y = f16->elem(b);
            CHECK(f16->frobenius(f16->mul(x, y), 1) ==
                  f16->mul(f16->frobenius(x, 1), f16->frobenius(y, 1)));
            CHECK(f16->frobenius(f16->add(x, y), 3) ==
                  f16->add(f16->frobenius(x, 3), f16->frobenius(y, 3)));
        }
}

TEST_CASE("relative trace") {
    auto f4 = mk_field(2, 2);
    CHECK(f4->trace_rel(f4->elem(2), 1) == f4->one());  // w + w^2 = 1
    CHECK(f4->trace_rel(f4->one(), 1) == f4->zero());

    auto f9 = mk_field(3, 2);
    for (uint64_t a = 0; a < 9; ++a) {
        auto x = f9->elem(a);
        auto t = f9->trace_rel(x, 1);
        CHECK(t == f9->add(x, f9->frobenius(x, 1)));
        CHECK(f9->in_subfield_deg(t, 1));
    }

    // additive and F_q-linear over GF(16)
    auto f16 = mk_field(2, 4);
    for (uint64_t a = 0; a < 16; ++a)
        for (uint64_t b = 0; b < 16; ++b)
            CHECK(f16->trace_rel(f16->add(f16->elem(a), f16->elem(b)), 2) ==
                  f16->add(f16->trace_rel(f16->elem(a), 2), f16->trace_rel(f16->elem(b), 2)));
    for (auto lam : f16->subfield_elements(2))
        for (uint64_t a = 0; a < 16; ++a)
            CHECK(f16->trace_rel(f16->mul(lam, f16->elem(a)), 2) ==
                  f16->mul(lam, f16->trace_rel(f16->elem(a), 2)));
}

TEST_CASE("relative norm") {
    auto f9 = mk_field(3, 2);
    auto g = f9->primitive();
    CHECK(f9->norm_rel(g, 1) == f9->pow_u64(g, 4));
    CHECK(f9->norm_rel(f9->one(), 1) == f9->one());
    CHECK(f9->norm_rel(f9->zero(), 1) == f9->zero());

    auto f16 = mk_field(2, 4);
    for (uint32_t d : {1u, 2u})
        for (uint64_t a = 0; a < 16; ++a)
            for (uint64_t b = 0; b < 16; ++b)
                CHECK(f16->norm_rel(f16->mul(f16->elem(a), f16->elem(b)), d) ==
                      f16->mul(f16->norm_rel(f16->elem(a), d), f16->norm_rel(f16->elem(b), d)));
    for (uint64_t a = 0; a < 16; ++a)
        CHECK(f16->in_subfield_deg(f16->norm_rel(f16->elem(a), 2), 2));
}

TEST_CASE("subfield enumeration") {
    auto f4 = mk_field(2, 2);
    auto s2 = f4->subfield_elements(1);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0] == f4->zero());
    CHECK(s2[1] == f4->one());

    auto f9 = mk_field(3, 2);
    auto s3 = f9->subfield_elements(1);
    REQUIRE(s3.size() == 3);
    CHECK(s3[0].enc == 0);
    CHECK(s3[1].enc == 1);
    CHECK(s3[2].enc == 2);

    auto f16 = mk_field(2, 4);
    auto s4 = f16->subfield_elements(2);
    REQUIRE(s4.size() == 4);
    for (auto a : s4)
        for (auto b : s4) {
            CHECK(f16->in_subfield_deg(f16->add(a, b), 2));
            CHECK(f16->in_subfield_deg(f16->mul(a, b), 2));
        }
}

TEST_CASE("multiplicative group properties") {
    for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{2, 4}, {3, 2}, {5, 2}}) {
        auto f = mk_field(p, n);
        for (uint64_t a = 1; a < f->order(); ++a) {
            auto x = f->elem(a);
            CHECK(f->mul(x, f->inv(x)) == f->one());
            CHECK(f->pow_u64(x, f->order() - 1) == f->one());
        }
    }
}

TEST_CASE("descriptor document") {
    auto f4 = mk_field(2, 2);
    auto j = nlohmann::json::parse(f4->descriptor_json());
    CHECK(j["p"] == 2);
    CHECK(j["n"] == 2);
    CHECK(j["modulus"] == nlohmann::json::array({1, 1, 1}));
    CHECK(j["primitive"] == 2);
}
