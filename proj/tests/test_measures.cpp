#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qent/measures.hpp"
#include "qent/statelib.hpp"

using namespace qent;

namespace {

// (sqrt(2)-1)/2: negativity of (1/2)|00><00| + (1/2)|psi+><psi+|, from the
// negative eigenvalue (a - sqrt(a^2 + b^2))/2 of the PT block with a = b = 1/2.
constexpr double kW4PairNegativity = 0.20710678118654752;

// 8/9 - 2((sqrt(5)-1)/3)^2 = (4 sqrt(5) - 4)/9: each W3 residual component.
constexpr double kW3Component = 0.54936354555546200;

// 3/4 - 3((sqrt(2)-1)/2)^2: each W4 residual component (= pi4 of W4, since
// the geometric mean of equal values is the value itself).
constexpr double kW4Component = 0.62132034355964257;

}  // namespace

TEST_CASE("negativity: pinned values and errors") {
  CHECK(negativity(DensityMatrix::from_pure(ghz_state(2)), QubitSubset{1}) ==
        Catch::Approx(1.0).margin(1e-10));
  CHECK(negativity(DensityMatrix::from_pure(PureState::basis(2, 0)), QubitSubset{1}) ==
        Catch::Approx(0.0).margin(1e-10));

  const DensityMatrix w_pair = partial_trace(w_state(4), QubitSubset{1, 2});
  CHECK(negativity(w_pair, QubitSubset{1}) ==
        Catch::Approx(kW4PairNegativity).margin(1e-12));

  CHECK_THROWS_AS(
      negativity(DensityMatrix::from_pure(PureState::basis(1, 0)), QubitSubset{1}),
      BadDim);
  const DensityMatrix tagged = partial_transpose(w_pair, QubitSubset{1});
  CHECK_THROWS_AS(negativity(tagged, QubitSubset{1}), Unnormalized);
}

TEST_CASE("one-vs-rest negativity squared") {
  CHECK(one_vs_rest_negativity_sq(ghz_state(4), 1) == Catch::Approx(1.0).margin(1e-12));
  CHECK(one_vs_rest_negativity_sq(PureState::basis(4, 0), 3) ==
        Catch::Approx(0.0).margin(1e-12));
  // W4 marginal is diag(3/4, 1/4): purity 5/8, so N^2 = 3/4.
  CHECK(partial_trace(w_state(4), QubitSubset{1}).purity() ==
        Catch::Approx(0.625).margin(1e-12));
  CHECK(one_vs_rest_negativity_sq(w_state(4), 1) == Catch::Approx(0.75).margin(1e-12));
  CHECK_THROWS_AS(one_vs_rest_negativity_sq(w_state(4), 5), BadTargets);
}

TEST_CASE("pi3: pinned values") {
  CHECK(pi3(ghz_state(3)).value == Catch::Approx(1.0).margin(1e-10));
  CHECK(pi3(PureState::basis(3, 0)).value == Catch::Approx(0.0).margin(1e-12));
  const Pi3Result w3 = pi3(w_state(3));
  for (double c : w3.components)
    CHECK(c == Catch::Approx(kW3Component).margin(1e-12));
  CHECK(w3.value == Catch::Approx(kW3Component).margin(1e-12));
  CHECK_THROWS_AS(pi3(ghz_state(4)), BadDim);
}

TEST_CASE("pi4: pinned values") {
  CHECK(pi4(ghz_state(4)).value == Catch::Approx(1.0).margin(1e-9));

  const auto reg = table1_registry();
  const auto find = [&](const std::string& id) {
    for (const auto& row : reg)
      if (row.id == id) return row.build();
    throw std::runtime_error("missing registry row");
  };

  CHECK(pi4(find("psi1")).value == 0.0);  // Bell (x) |+> (x) |+>
  CHECK(pi4(find("psi5")).value == Catch::Approx(1.0).margin(1e-9));

  // W4: every component is 3/4 - 3 N^2 with the pair negativity above. The
  // registry's reference value 0.14903 is not what these formulas give; the
  // CLI table reports both numbers side by side rather than forcing a match.
  const Pi4Result w4 = pi4(w_state(4));
  for (int q = 0; q < 4; ++q) {
    CHECK(w4.components.raw[q] == Catch::Approx(kW4Component).margin(1e-12));
    CHECK_FALSE(w4.components.flagged[q]);
  }
  CHECK(w4.value == Catch::Approx(kW4Component).margin(1e-12));
  for (double n : w4.negativities.pairwise)
    CHECK(n == Catch::Approx(kW4PairNegativity).margin(1e-12));
  for (double n2 : w4.negativities.one_vs_rest_sq)
    CHECK(n2 == Catch::Approx(0.75).margin(1e-12));

  CHECK_THROWS_AS(pi4(ghz_state(3)), BadDim);
}

TEST_CASE("vidal-werner negativity alias") {
  CHECK(vidal_werner_negativity(DensityMatrix::from_pure(ghz_state(2))) ==
        Catch::Approx(1.0).margin(1e-10));
  CHECK(vidal_werner_negativity(DensityMatrix::from_pure(PureState::basis(2, 2))) ==
        Catch::Approx(0.0).margin(1e-10));

  // Equal mixture of two Bell states is PPT: all PT eigenvalues >= 0.
  CMatrix mix(4, 4);
  const PureState phi_plus = ghz_state(2);
  const PureState psi_plus(2, {0.0, 0.7071067811865475244, 0.7071067811865475244, 0.0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      mix(i, j) = 0.5 * (phi_plus.amp(i) * std::conj(phi_plus.amp(j)) +
                         psi_plus.amp(i) * std::conj(psi_plus.amp(j)));
  CHECK(vidal_werner_negativity(DensityMatrix::from_matrix(mix)) ==
        Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("pi4 property: local-unitary invariance") {
  RngStream rng(kDefaultSeed, 31);
  const PureState psi = w_state(4);
  const double base = pi4(psi).value;
  for (int rep = 0; rep < 20; ++rep) {
    PureState rotated = psi;
    for (int q = 1; q <= 4; ++q)
      rotated = apply_unitary(rotated, oracle::random_su2(rng), QubitSubset{q});
    CHECK(std::abs(pi4(rotated).value - base) <= 1e-8);
  }
}

TEST_CASE("pi4 property: permutation covariance") {
  RngStream rng(kDefaultSeed, 32);
  for (int rep = 0; rep < 6; ++rep) {
    const PureState psi = oracle::random_state(4, rng);
    const Pi4Result base = pi4(psi);
    const std::vector<int> perm = {3, 1, 4, 2};  // new qubit k = old perm[k-1]
    const Pi4Result permuted = pi4(permute_qubits(psi, perm).normalized_copy());
    for (int q = 0; q < 4; ++q)
      CHECK(permuted.components.raw[q] ==
            Catch::Approx(base.components.raw[perm[q] - 1]).margin(1e-10));
    CHECK(permuted.value == Catch::Approx(base.value).margin(1e-10));
  }
}

TEST_CASE("pi4 property: geometric mean annihilates single-qubit factors") {
  RngStream rng(kDefaultSeed, 33);
  for (int rep = 0; rep < 10; ++rep) {
    const PureState sigma = oracle::random_state(3, rng);
    const PureState e = oracle::random_state(1, rng);
    CHECK(pi4(tensor(sigma, e).normalized_copy()).value == 0.0);
    CHECK(pi4(tensor(e, sigma).normalized_copy()).value == 0.0);
  }
}

TEST_CASE("pi4 property: range on random states") {
  RngStream rng(kDefaultSeed, 34);
  for (int rep = 0; rep < 1000; ++rep) {
    const Pi4Result r = pi4(oracle::random_state(4, rng));
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0 + 1e-9);
    for (double n : r.negativities.pairwise) {
      CHECK(n >= 0.0 - 1e-12);
      CHECK(n <= 1.0 + 1e-9);
    }
    for (double n2 : r.negativities.one_vs_rest_sq) {
      CHECK(n2 >= 0.0 - 1e-12);
      CHECK(n2 <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("pairwise negativity agrees with the eigenvalue-sum oracle") {
  RngStream rng(kDefaultSeed, 35);
  auto check_state = [](const PureState& psi) {
    const auto& order = NegativityReport::pair_order();
    const Pi4Result r = pi4(psi);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const DensityMatrix pair =
          partial_trace(psi, QubitSubset{order[i].first, order[i].second});
      const CMatrix pt = partial_transpose(pair, QubitSubset{1}).matrix();
      CHECK(r.negativities.pairwise[i] ==
            Catch::Approx(oracle::negativity_from_negative_eigenvalues(pt))
                .margin(1e-10));
    }
  };
  for (int rep = 0; rep < 10; ++rep) check_state(oracle::random_state(4, rng));
  for (const auto& row : table1_registry()) check_state(row.build());
}
