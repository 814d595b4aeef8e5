#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skein/jonesq.hpp"

using namespace skein;

namespace {
TwistSystem two_letters() {
  TwistSystem t;
  t.eps["s"] = 1;
  t.eps["t"] = 1;
  return t;
}
PotentialTable simple_pot() {
  PotentialTable p;
  p.values["s"] = {{"as", Rees::one()}};
  p.values["t"] = {{"at", Rees::one()}};
  return p;
}
}  // namespace

TEST_CASE("twist homomorphism") {
  TwistSystem t = two_letters();
  REQUIRE(t.of(MorWord{{"s", +1}, {"s", -1}}) == 0);
  REQUIRE(t.of(MorWord{{"s", +1}, {"t", +1}}) == 2);
  REQUIRE(t.of(MorWord{}) == 0);
  REQUIRE(t.of(MorLetter{"s", -1}) == -1);
}

TEST_CASE("deform tracks the target power") {
  TwistSystem t = two_letters();
  QWord q = deform(MorWord{{"s", +1}}, 0, t);
  REQUIRE(q.source_power == 0);
  REQUIRE(q.target_power() == -2);

  // p_q inverts i_q on random words
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(0, 6), which(0, 1), sgn(0, 1);
  for (int i = 0; i < 100; ++i) {
    MorWord w;
    int n = len(rng);
    for (int k = 0; k < n; ++k)
      w.push_back({which(rng) ? "s" : "t", sgn(rng) ? +1 : -1});
    REQUIRE(p_q(i_q(w, t)) == w);
  }

  // equivariance: shifting the initial power shifts every power by the same
  MorWord w{{"s", +1}, {"t", -1}, {"s", +1}};
  QWord a = deform(w, 0, t), b = deform(w, 2, t);
  for (size_t i = 0; i < a.powers.size(); ++i) REQUIRE(b.powers[i] == a.powers[i] + 2);

  // parity violation on composition
  QWord c = deform(MorWord{{"s", +1}}, 1, t);
  REQUIRE_THROWS_AS(compose(a, c), input_error);
  // matching powers compose
  QWord d = deform(MorWord{{"t", +1}}, a.target_power(), t);
  QWord e = compose(d, a);
  REQUIRE(e.word.size() == 4);
  REQUIRE(e.target_power() == d.target_power());
}

TEST_CASE("a_q evaluation matches the displayed formula") {
  TwistSystem t = two_letters();
  PotentialTable pot = simple_pot();

  auto single_plus = a_q_eval(MorWord{{"s", +1}}, t, pot);
  REQUIRE(single_plus.at("as") == Rees::q(-1));

  auto single_minus = a_q_eval(MorWord{{"s", -1}}, t, pot);
  REQUIRE(single_minus.at("as") == -Rees::q(1));

  auto pair = a_q_eval(MorWord{{"s", +1}, {"t", -1}}, t, pot);
  REQUIRE(pair.at("as") == Rees::q(-1));
  REQUIRE(pair.at("at") == -Rees::q(1));
}

TEST_CASE("formula equals the power-ledger evaluation on random words") {
  TwistSystem t;
  t.eps["s"] = 1;
  t.eps["t"] = 2;
  t.eps["r"] = -1;
  PotentialTable pot;
  pot.values["s"] = {{"x", Rees::one()}, {"y", Rees::z()}};
  pot.values["t"] = {{"y", Rees::h()}};
  pot.values["r"] = {{"x", Rees::q(1)}};
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(1, 6), which(0, 2), sgn(0, 1);
  const char* names[] = {"s", "t", "r"};
  for (int i = 0; i < 200; ++i) {
    MorWord w;
    int n = len(rng);
    for (int k = 0; k < n; ++k) w.push_back({names[which(rng)], sgn(rng) ? +1 : -1});
    auto direct = a_q_eval(w, t, pot);
    auto ledger = a_q_eval_via_deform(deform(w, 0, t), pot);
    REQUIRE(direct == ledger);
    // equivariance of the ledger route
    auto shifted = a_q_eval_via_deform(deform(w, 4, t), pot);
    REQUIRE(shifted == direct);
  }
}

TEST_CASE("loop event words match delta prime") {
  BraidWord w;
  w.strands = 2;
  w.letters = {{1, 1}, {1, 1}, {1, 1}};
  Link base = Link::disk(braid_closure_diagram(w));
  for (int eps : {+1, -1}) {
    auto l = kink_loop(base, eps);
    auto word = loop_event_word(l);
    auto twists = loop_twists(l);
    REQUIRE(twists.of(word) == delta_prime(l));
  }
  auto ld = differentiability_loop(Link::disk(braid_closure_diagram(w)), 0, 1);
  REQUIRE(loop_twists(ld).of(loop_event_word(ld)) == delta_prime(ld));
}

TEST_CASE("kinks exist and normalize powers") {
  // every presentation admits a kink word with twist one
  BraidWord w;
  w.strands = 2;
  w.letters = {{1, 1}};
  for (auto base : {Link::disk(braid_closure_diagram(w)), Link::annulus(w)}) {
    auto k = kink_loop(base, +1);
    REQUIRE(replay_validate(k).ok);
    REQUIRE(delta_prime(k) == 1);
  }
  // composing with kink powers lands the twist in {-i, -i-1}
  for (int e = -3; e <= 3; ++e) {
    for (int i = -2; i <= 2; ++i) {
      int j1 = -i - e, j2 = -i - 1 - e;
      REQUIRE((e + j1 == -i || e + j1 == -i - 1));
      REQUIRE((e + j2 == -i || e + j2 == -i - 1));
    }
  }
}
