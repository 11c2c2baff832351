#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qent/rng.hpp"
#include "qent/state.hpp"
#include "qent/statelib.hpp"
#include "qent/teleport.hpp"

namespace qent {
namespace ttp {

// Fixed roles: Alice keeps qubits (A, B) = (1, 2) of chi00 and sends qubit C
// (3) to Bob and qubit D (4) to Charlie. Bob holds the payload and
// Bell-measures it against C; Charlie corrects D, but only after Alice
// discloses her (A, B) outcome.

struct ConditionalState {
  std::string outcome;  // Alice's two bits, "00".."11"
  PureState state = PureState::basis(2, 0);  // renormalized (C, D) remainder
  double probability = 0.0;
};

inline PureState chi00_state() {
  const auto reg = table1_registry();
  for (const auto& row : reg)
    if (row.id == "psi5") return row.build();
  throw NotFound("psi5 missing from registry");
}

// Projects Alice's qubits onto each computational outcome. All four outcomes
// carry probability exactly 1/4 and leave a maximally entangled (C, D) pair.
inline std::array<ConditionalState, 4> conditional_bell_map() {
  const PureState chi = chi00_state();
  std::array<ConditionalState, 4> out;
  for (int ab = 0; ab < 4; ++ab) {
    const PureState bra = PureState::basis(2, ab);
    const PureState remainder = partial_inner(chi, QubitSubset{1, 2}, bra);
    ConditionalState c;
    c.outcome = std::string{ab & 2 ? '1' : '0', ab & 1 ? '1' : '0'};
    c.probability = std::pow(remainder.norm(), 2);
    c.state = remainder.normalized_copy();
    out[ab] = std::move(c);
  }
  return out;
}

// Complete correction catalog: Alice outcome x Bob Bell outcome -> a
// single-qubit Pauli word on Charlie's qubit, each entry verified against
// random payloads.
inline std::array<std::array<PauliWord, 4>, 4> correction_catalog(
    std::uint64_t seed = kDefaultSeed, int n_test_payloads = 20) {
  const auto conditionals = conditional_bell_map();

  std::vector<PureState> payloads;
  for (int t = 0; t < n_test_payloads; ++t) {
    RngStream rng(seed, 7000 + static_cast<std::uint64_t>(t));
    std::vector<cplx> amps = {cplx{rng.gaussian(), rng.gaussian()},
                              cplx{rng.gaussian(), rng.gaussian()}};
    payloads.push_back(PureState::normalized(1, std::move(amps)));
  }

  std::array<std::array<PauliWord, 4>, 4> catalog;
  std::vector<std::string> failures;
  for (int ab = 0; ab < 4; ++ab) {
    for (int zx = 0; zx < 4; ++zx) {
      const int z = (zx >> 1) & 1, x = zx & 1;
      bool found = false;
      for (const auto& letters : pauli_vocab()) {
        PauliWord w;
        w.letters = {letters};
        const CMatrix op = w.matrix();
        bool ok = true;
        for (const auto& payload : payloads) {
          const PureState joint = tensor(payload, conditionals[ab].state);
          const PureState branch =
              partial_inner(joint, QubitSubset{1, 2}, bell_state(z, x));
          const PureState corrected =
              apply_unitary(branch.normalized_copy(), op, QubitSubset{1});
          if (fidelity(payload, corrected) < 1.0 - 1e-10) {
            ok = false;
            break;
          }
        }
        if (ok) {
          catalog[ab][zx] = w;
          found = true;
          break;
        }
      }
      if (!found)
        failures.push_back("alice=" + conditionals[ab].outcome +
                           " bob=" + std::to_string(z) + std::to_string(x));
    }
  }
  if (!failures.empty()) {
    std::string msg = "protocol soundness failure, no correction for:";
    for (const auto& f : failures) msg += " " + f;
    throw NoCorrectionExists(msg);
  }
  return catalog;
}

struct Event {
  int seq = 0;
  std::string kind;
  nlohmann::json data;
};

struct Transcript {
  std::vector<Event> events;
  int alice_outcome = 0;  // 0..3
  int bob_outcome = 0;    // 0..3 as (z, x)
  int disclosed_outcome = 0;
  std::string correction;
  double fidelity = 0.0;

  // One JSON object per line, in event order.
  std::string to_json_lines() const {
    std::string out;
    for (const auto& e : events) {
      nlohmann::json j = e.data;
      j["seq"] = e.seq;
      j["kind"] = e.kind;
      out += j.dump() + "\n";
    }
    return out;
  }

  int seq_of(const std::string& kind) const {
    for (const auto& e : events)
      if (e.kind == kind) return e.seq;
    return -1;
  }
};

inline std::string two_bits(int v) {
  return std::string{v & 2 ? '1' : '0', v & 1 ? '1' : '0'};
}

// Full five-qubit run with forced outcomes. `disclosed` is what Alice
// announces; passing a value different from `alice` models a dishonest or
// garbled disclosure, and the correction is then looked up under the wrong
// key. The correction event is emitted strictly after the disclosure event.
inline Transcript run_protocol_forced(const PureState& payload, int alice, int bob,
                                      int disclosed) {
  if (payload.n_qubits() != 1) throw BadDim("payload must be a single qubit");
  if (!payload.is_normalized()) throw Unnormalized("payload must be normalized");

  static const auto catalog = correction_catalog();
  const auto conditionals = conditional_bell_map();

  Transcript t;
  int seq = 0;
  t.events.push_back({++seq, "prepare", {{"state", "chi00"}, {"qubits", "ABCD"}}});
  t.events.push_back({++seq, "distribute", {{"bob", "C"}, {"charlie", "D"}}});

  t.alice_outcome = alice;
  t.events.push_back({++seq, "alice_measure", {{"outcome", two_bits(alice)}}});

  // Sender's Bell measurement between the payload and qubit C.
  const PureState joint = tensor(payload, conditionals[alice].state);
  const int z = (bob >> 1) & 1, x = bob & 1;
  const PureState branch = partial_inner(joint, QubitSubset{1, 2}, bell_state(z, x));
  t.bob_outcome = bob;
  t.events.push_back({++seq,
                      "bob_bell_measure",
                      {{"outcome", two_bits(bob)},
                       {"probability", std::pow(branch.norm(), 2)}}});

  t.disclosed_outcome = disclosed;
  t.events.push_back({++seq, "alice_disclose", {{"outcome", two_bits(disclosed)}}});

  const PauliWord& w = catalog[disclosed][bob];
  const PureState corrected =
      apply_unitary(branch.normalized_copy(), w.matrix(), QubitSubset{1});
  t.correction = w.str();
  t.events.push_back({++seq,
                      "correction",
                      {{"word", w.str()}, {"key", two_bits(disclosed) + "," + two_bits(bob)}}});

  t.fidelity = fidelity(payload, corrected);
  t.events.push_back({++seq, "fidelity", {{"value", t.fidelity}}});
  return t;
}

// Honest seeded run: Alice's outcome is sampled from the exact 1/4
// distribution, Bob's from the branch norms.
inline Transcript run_protocol(const PureState& payload, std::uint64_t seed) {
  if (payload.n_qubits() != 1) throw BadDim("payload must be a single qubit");
  if (!payload.is_normalized()) throw Unnormalized("payload must be normalized");

  RngStream rng(seed, 1);
  const auto conditionals = conditional_bell_map();
  double u = rng.uniform();
  int alice = 0;
  double acc = 0.0;
  for (int ab = 0; ab < 4; ++ab) {
    acc += conditionals[ab].probability;
    if (u < acc) {
      alice = ab;
      break;
    }
    alice = ab;
  }

  const PureState joint = tensor(payload, conditionals[alice].state);
  std::array<double, 4> branch_prob{};
  for (int zx = 0; zx < 4; ++zx) {
    const PureState branch = partial_inner(joint, QubitSubset{1, 2},
                                           bell_state((zx >> 1) & 1, zx & 1));
    branch_prob[zx] = std::pow(branch.norm(), 2);
  }
  u = rng.uniform();
  int bob = 0;
  acc = 0.0;
  for (int zx = 0; zx < 4; ++zx) {
    acc += branch_prob[zx];
    if (u < acc) {
      bob = zx;
      break;
    }
    bob = zx;
  }

  return run_protocol_forced(payload, alice, bob, alice);
}

}  // namespace ttp
}  // namespace qent
