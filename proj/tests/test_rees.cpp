#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "skein/rees.hpp"

using namespace skein;

namespace {

Rees random_rees(std::mt19937& rng, Variant var) {
  std::uniform_int_distribution<int> nterms(0, 4), coeff(-5, 5), small(0, 3),
      qexp(-3, 3);
  TermMap raw;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exps e;
    e.dq = qexp(rng);
    e.dv = var == Variant::framed ? qexp(rng) : 0;
    e.dz = small(rng);
    e.dh = small(rng);
    e.du = small(rng);
    detail::add_term(raw, e, coeff(rng));
  }
  return Rees::normalize(raw, var);
}

}  // namespace

TEST_CASE("h*u rewrites to q^{-1}-q") {
  Rees hu = Rees::h() * Rees::u();
  Rees expected = Rees::q(-1) - Rees::q(1);
  REQUIRE(hu == expected);
  // hu - (q^{-1}-q) normalizes to zero
  REQUIRE((hu - expected).is_zero());
}

TEST_CASE("additive inverse gives the empty term set") {
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    Rees x = random_rees(rng, Variant::oriented);
    REQUIRE((x + (-x)).is_zero());
  }
}

TEST_CASE("h^2*u rewrites once") {
  Rees x = Rees::h() * Rees::h() * Rees::u();
  Rees expected = (Rees::q(-1) - Rees::q(1)) * Rees::h();
  REQUIRE(x == expected);
}

TEST_CASE("normalize examples") {
  TermMap raw;
  detail::add_term(raw, Exps{0, 0, 0, 1, 1}, 3);
  Rees x = Rees::normalize(raw, Variant::oriented);
  REQUIRE(x == Rees::integer(3) * (Rees::q(-1) - Rees::q(1)));
  REQUIRE(x.str() == "3*q^-1 - 3*q");

  Rees z2 = Rees::integer(2) * Rees::z();
  REQUIRE(z2.str() == "2*z");

  TermMap fraw;
  detail::add_term(fraw, Exps{0, 0, 0, 1, 1}, 1);
  Rees f = Rees::normalize(fraw, Variant::framed);
  REQUIRE(f == Rees::v_pow(-1) - Rees::v_pow(1));
}

TEST_CASE("variant mismatch is rejected") {
  REQUIRE_THROWS_AS(Rees::h(Variant::oriented) * Rees::h(Variant::framed), input_error);
  REQUIRE_THROWS_AS(Rees::monomial(1, 0, 1, 0, 0, 0, Variant::oriented), input_error);
}

TEST_CASE("embedding examples") {
  Laurent eu = Rees::u().embed_h_inverted();
  Laurent expected = Laurent::term(1, {-1, 0, 0, -1, 0}) + Laurent::term(-1, {1, 0, 0, -1, 0});
  REQUIRE(eu == expected);

  // z_to_h acts on the representative: z*u -> h*u
  Laurent zu = (Rees::z() * Rees::u()).specialize_z_to_h();
  REQUIRE(zu == Laurent::term(1, {0, 0, 0, 1, 1}));
  REQUIRE(zu.str() == "h*u");

  // homomorphism property of the h-inverted embedding on a sample
  Laurent lhs = (Rees::h() * Rees::u()).embed_h_inverted();
  Laurent rhs = Rees::h().embed_h_inverted() * Rees::u().embed_h_inverted();
  REQUIRE(lhs == rhs);
}

TEST_CASE("embedding is a ring homomorphism on random pairs") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    Rees a = random_rees(rng, Variant::oriented);
    Rees b = random_rees(rng, Variant::oriented);
    REQUIRE((a * b).embed_h_inverted() == a.embed_h_inverted() * b.embed_h_inverted());
    REQUIRE((a + b).embed_h_inverted() == a.embed_h_inverted() + b.embed_h_inverted());
  }
}

TEST_CASE("truncation examples") {
  Rees x = Rees::q(1) + Rees::h() * Rees::h() * Rees::z();
  TruncatedSeries s = truncate_h(x, 1);
  REQUIRE(s.coeffs[0] == Laurent::term(1, {1, 0, 0, 0, 0}));
  REQUIRE(s.coeffs[1].is_zero());

  TruncatedSeries t = truncate_h(Rees::u() * Rees::h(), 2);
  REQUIRE(t.coeffs[0] ==
          Laurent::term(1, {-1, 0, 0, 0, 0}) + Laurent::term(-1, {1, 0, 0, 0, 0}));
  REQUIRE(t.coeffs[1].is_zero());
  REQUIRE(t.coeffs[2].is_zero());

  REQUIRE_THROWS_AS(truncate_h(Rees::u(), 2), input_error);
}

TEST_CASE("truncation is a ring map modulo h^{N+1}") {
  std::mt19937 rng(13);
  int done = 0;
  while (done < 30) {
    Rees a = random_rees(rng, Variant::oriented);
    Rees b = random_rees(rng, Variant::oriented);
    if (a.embed_h_inverted().min_h_degree() < 0) continue;
    if (b.embed_h_inverted().min_h_degree() < 0) continue;
    REQUIRE(truncate_h(a * b, 4) == truncate_h(a, 4) * truncate_h(b, 4));
    REQUIRE(truncate_h(a + b, 4) == truncate_h(a, 4) + truncate_h(b, 4));
    ++done;
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(17);
  for (int i = 0; i < 60; ++i) {
    Variant var = i % 2 ? Variant::framed : Variant::oriented;
    Rees a = random_rees(rng, var), b = random_rees(rng, var), c = random_rees(rng, var);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a * b == b * a);
    REQUIRE(a + b == b + a);
  }
}

TEST_CASE("normal-form uniqueness and embedding injectivity") {
  std::mt19937 rng(19);
  std::vector<Rees> elems;
  for (int i = 0; i < 200; ++i) elems.push_back(random_rees(rng, Variant::oriented));
  for (const auto& x : elems) {
    // normalize is idempotent
    REQUIRE(Rees::normalize(x.terms(), Variant::oriented) == x);
  }
  std::set<std::string> reprs, images;
  for (const auto& x : elems) {
    bool fresh = reprs.insert(x.str()).second;
    bool fresh_image = images.insert(x.embed_h_inverted().str()).second;
    REQUIRE(fresh == fresh_image);
  }
}

TEST_CASE("serialization round trip") {
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    Variant var = i % 2 ? Variant::framed : Variant::oriented;
    Rees x = random_rees(rng, var);
    REQUIRE(Rees::parse(x.str(), var) == x);
  }
  // parsing normalizes representatives that mix h and u
  REQUIRE(Rees::parse("q^2*u + q^3*h*u^2 + q^2*h*z*u", Variant::oriented).str() ==
          "2*q^2*u - q^4*u + q*z - q^3*z");
  REQUIRE(Rees::parse("-q^-1*h", Variant::oriented).str() == "-q^-1*h");
  REQUIRE(Rees::parse("0", Variant::oriented).is_zero());
}
