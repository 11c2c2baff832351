#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qent/ttp.hpp"

using namespace qent;

TEST_CASE("conditional_bell_map reproduces the shared-state table") {
  const auto map = ttp::conditional_bell_map();

  // outcome 00 -> (|00> - |11>)/sqrt(2)
  const PureState m00(2, {std::sqrt(0.5), 0.0, 0.0, -std::sqrt(0.5)});
  // outcome 01 -> (|10> - |01>)/sqrt(2)
  const PureState m01(2, {0.0, -std::sqrt(0.5), std::sqrt(0.5), 0.0});
  // outcome 10 -> (|10> + |01>)/sqrt(2)
  const PureState m10(2, {0.0, std::sqrt(0.5), std::sqrt(0.5), 0.0});
  // outcome 11 -> (|00> + |11>)/sqrt(2)
  const PureState m11(2, {std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5)});

  CHECK(equal_up_to_global_phase(map[0].state, m00, 1e-10).equal);
  CHECK(equal_up_to_global_phase(map[1].state, m01, 1e-10).equal);
  CHECK(equal_up_to_global_phase(map[2].state, m10, 1e-10).equal);
  CHECK(equal_up_to_global_phase(map[3].state, m11, 1e-10).equal);

  for (const auto& c : map)
    CHECK(c.probability == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("correction_catalog: pinned entries and completeness") {
  const auto catalog = ttp::correction_catalog();

  // Alice 11 leaves the standard |Phi+> channel: outcome (0,0) needs nothing.
  CHECK(catalog[3][0].str() == "I");
  // Alice 00 leaves (|00> - |11>)/sqrt(2) = (I (x) Z)|Phi+>: outcome (0,0)
  // needs a Z.
  CHECK(catalog[0][0].str() == "Z");

  int entries = 0;
  for (int ab = 0; ab < 4; ++ab)
    for (int zx = 0; zx < 4; ++zx) {
      ++entries;
      CHECK_FALSE(catalog[ab][zx].letters.empty());
    }
  CHECK(entries == 16);
}

TEST_CASE("run_protocol: seeded runs reach fidelity 1") {
  const ttp::Transcript zero_run = ttp::run_protocol(PureState::basis(1, 0), 3);
  CHECK(zero_run.fidelity >= 1.0 - 1e-10);

  const PureState plus(1, {std::sqrt(0.5), std::sqrt(0.5)});
  const ttp::Transcript plus_run = ttp::run_protocol(plus, 7);
  CHECK(plus_run.fidelity >= 1.0 - 1e-10);
  CHECK(plus_run.events.size() >= 4);
  for (std::size_t i = 1; i < plus_run.events.size(); ++i)
    CHECK(plus_run.events[i].seq > plus_run.events[i - 1].seq);

  // The correction may only happen after the disclosure.
  CHECK(plus_run.seq_of("correction") > plus_run.seq_of("alice_disclose"));
  CHECK(plus_run.seq_of("alice_disclose") > plus_run.seq_of("bob_bell_measure"));

  const std::string lines = plus_run.to_json_lines();
  CHECK(std::count(lines.begin(), lines.end(), '\n') ==
        static_cast<long>(plus_run.events.size()));
}

TEST_CASE("run_protocol_forced: every payload and outcome combination works") {
  RngStream rng(kDefaultSeed, 91);
  for (int rep = 0; rep < 25; ++rep) {
    const PureState payload = oracle::random_state(1, rng);
    for (int alice = 0; alice < 4; ++alice)
      for (int bob = 0; bob < 4; ++bob) {
        const ttp::Transcript t =
            ttp::run_protocol_forced(payload, alice, bob, alice);
        CHECK(t.fidelity >= 1.0 - 1e-10);
      }
  }
}

TEST_CASE("outcome distribution is exactly uniform") {
  const auto map = ttp::conditional_bell_map();
  for (const auto& c : map)
    CHECK(std::abs(c.probability - 0.25) <= 1e-12);

  // Bob's Bell outcomes are uniform as well, for any payload.
  RngStream rng(kDefaultSeed, 92);
  const PureState payload = oracle::random_state(1, rng);
  for (int alice = 0; alice < 4; ++alice) {
    const PureState joint = tensor(payload, map[alice].state);
    for (int zx = 0; zx < 4; ++zx) {
      const PureState branch = partial_inner(joint, QubitSubset{1, 2},
                                             bell_state((zx >> 1) & 1, zx & 1));
      CHECK(std::pow(branch.norm(), 2) == Catch::Approx(0.25).margin(1e-12));
    }
  }
}

TEST_CASE("wrong disclosure degrades fidelity") {
  RngStream rng(kDefaultSeed, 93);
  double sum = 0.0;
  int count = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const PureState payload = oracle::random_state(1, rng);
    const int alice = static_cast<int>(rng.integer(4));
    const int bob = static_cast<int>(rng.integer(4));
    int wrong = static_cast<int>(rng.integer(4));
    if (wrong == alice) wrong = (wrong + 1) % 4;
    const ttp::Transcript t = ttp::run_protocol_forced(payload, alice, bob, wrong);
    sum += t.fidelity;
    ++count;
  }
  // The disclosure genuinely carries information.
  CHECK(sum / count < 0.95);
}
