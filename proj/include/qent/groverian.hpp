#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qent/errors.hpp"
#include "qent/rng.hpp"
#include "qent/state.hpp"

namespace qent {

// Product of single-qubit states |e_i> = cos(theta_i)|0> + e^{i phi_i}
// sin(theta_i)|1>, with theta in [0, pi/2] and phi in [0, 2 pi).
struct ProductAnsatz {
  std::vector<double> theta;
  std::vector<double> phi;

  explicit ProductAnsatz(int n) : theta(n, 0.0), phi(n, 0.0) {}
  ProductAnsatz(std::vector<double> t, std::vector<double> p)
      : theta(std::move(t)), phi(std::move(p)) {
    if (theta.size() != phi.size()) throw ArityMismatch("angle vector size mismatch");
  }

  int arity() const { return static_cast<int>(theta.size()); }

  std::array<cplx, 2> qubit_vector(int i) const {
    return {cplx{std::cos(theta[i]), 0.0},
            std::polar(std::sin(theta[i]), phi[i])};
  }

  // Canonical angles for an arbitrary two-component vector: the |0>
  // coefficient is made real and non-negative (global phase dropped).
  static void angles_from_vector(const cplx& v0, const cplx& v1, double& theta,
                                 double& phi) {
    theta = std::atan2(std::abs(v1), std::abs(v0));
    phi = std::arg(v1) - std::arg(v0);
    if (std::abs(v1) < 1e-300) phi = 0.0;
    const double two_pi = 6.283185307179586476925;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
  }

  void canonicalize() {
    for (int i = 0; i < arity(); ++i) {
      const cplx v0{std::cos(theta[i]), 0.0};
      const cplx v1 = std::polar(std::sin(theta[i]), phi[i]);
      angles_from_vector(v0, v1, theta[i], phi[i]);
    }
  }

  // theta = arccos(sqrt(u)) with u uniform gives Haar-uniform single-qubit
  // states; phi uniform over the circle.
  static ProductAnsatz random(int n, RngStream& rng) {
    ProductAnsatz a(n);
    for (int i = 0; i < n; ++i) {
      a.theta[i] = std::acos(std::sqrt(rng.uniform()));
      a.phi[i] = rng.uniform(0.0, 6.283185307179586476925);
    }
    return a;
  }

  // Ansatz matching the largest-magnitude computational basis amplitude;
  // guarantees an ascent starting value of at least 2^-n.
  static ProductAnsatz basis_aligned(const PureState& psi) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < psi.dim(); ++k)
      if (std::abs(psi.amp(k)) > std::abs(psi.amp(best))) best = k;
    ProductAnsatz a(psi.n_qubits());
    for (int q = 1; q <= psi.n_qubits(); ++q)
      a.theta[q - 1] = psi.bit(best, q) ? 1.5707963267948966 : 0.0;
    return a;
  }
};

struct GaConfig {
  int population = 64;
  int generations = 200;
  int elite_count = 2;
  int tournament_size = 3;
  double mutation_sigma_initial = 0.3;
  double mutation_decay = 0.985;
  double crossover_rate = 0.8;
};

struct OptimizerConfig {
  int restarts = 50;
  long max_iterations = 10000;  // coordinate updates per restart
  double convergence_delta = 1e-12;
  std::uint64_t rng_seed = kDefaultSeed;
  GaConfig ga{};
};

struct OptimizationResult {
  double p_max = 0.0;
  ProductAnsatz best_ansatz{0};
  long iterations_used = 0;
  int restarts_used = 0;
  std::vector<double> restart_best_p;  // best P per restart (per generation for the GA)
};

namespace detail {

// Contracts <e_q| onto qubit q of the amplitude tensor, qubit by qubit.
// Processing least-significant qubits first keeps the gathers contiguous.
inline void contract_last(std::vector<cplx>& cur, std::size_t& m, const cplx& c0,
                          const cplx& c1) {
  const std::size_t half = m >> 1;
  for (std::size_t y = 0; y < half; ++y)
    cur[y] = c0 * cur[2 * y] + c1 * cur[2 * y + 1];
  m = half;
}

inline void contract_first(std::vector<cplx>& cur, std::size_t& m, const cplx& c0,
                           const cplx& c1) {
  const std::size_t half = m >> 1;
  for (std::size_t y = 0; y < half; ++y) cur[y] = c0 * cur[y] + c1 * cur[y + half];
  m = half;
}

// <e_1 ... e_n | psi> in O(2^n).
inline cplx product_overlap_amplitude(const PureState& psi,
                                      const std::vector<std::array<cplx, 2>>& e) {
  std::vector<cplx> cur = psi.amps();
  std::size_t m = cur.size();
  for (int q = psi.n_qubits(); q >= 1; --q)
    contract_last(cur, m, std::conj(e[q - 1][0]), std::conj(e[q - 1][1]));
  return cur[0];
}

// Two-component contraction <e_1 ... skip ... e_n | psi>, leaving `skip` free.
inline std::array<cplx, 2> contract_all_but(const PureState& psi,
                                            const std::vector<std::array<cplx, 2>>& e,
                                            int skip) {
  std::vector<cplx> cur = psi.amps();
  std::size_t m = cur.size();
  for (int q = psi.n_qubits(); q > skip; --q)
    contract_last(cur, m, std::conj(e[q - 1][0]), std::conj(e[q - 1][1]));
  for (int q = 1; q < skip; ++q)
    contract_first(cur, m, std::conj(e[q - 1][0]), std::conj(e[q - 1][1]));
  return {cur[0], cur[1]};
}

inline std::vector<std::array<cplx, 2>> ansatz_vectors(const ProductAnsatz& a) {
  std::vector<std::array<cplx, 2>> e(a.arity());
  for (int i = 0; i < a.arity(); ++i) e[i] = a.qubit_vector(i);
  return e;
}

}  // namespace detail

// |<e_1 ... e_n | psi>|^2 for the given ansatz.
inline double overlap_probability(const PureState& psi, const ProductAnsatz& ansatz) {
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");
  if (ansatz.arity() != psi.n_qubits())
    throw ArityMismatch("ansatz arity does not match qubit count");
  return std::norm(detail::product_overlap_amplitude(psi, detail::ansatz_vectors(ansatz)));
}

struct AscentOutcome {
  double p = 0.0;
  ProductAnsatz ansatz{0};
  long iterations = 0;
  std::vector<double> p_trace;  // P after every coordinate update
};

// One coordinate-ascent run. Fixing all factors but qubit i, the contraction
// v_i = <e_1 ... e_i-hat ... e_n | psi> is a single-qubit vector, the optimal
// |e_i> is v_i / ||v_i||, and the new overlap is ||v_i||^2 -- so P never
// decreases. Near-zero contractions keep the previous factor and move on.
inline AscentOutcome ascend_from(const PureState& psi, ProductAnsatz start,
                                 const OptimizerConfig& cfg) {
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");
  if (cfg.convergence_delta <= 0.0)
    throw Error("convergence delta must be positive");
  const int n = psi.n_qubits();
  if (start.arity() != n) throw ArityMismatch("start arity does not match qubit count");
  start.canonicalize();

  AscentOutcome out;
  out.ansatz = start;
  auto e = detail::ansatz_vectors(out.ansatz);
  double p = std::norm(detail::product_overlap_amplitude(psi, e));
  double sweep_start_p = p;
  for (long it = 0; it < cfg.max_iterations;) {
    for (int q = 1; q <= n; ++q, ++it) {
      const auto v = detail::contract_all_but(psi, e, q);
      const double v2 = std::norm(v[0]) + std::norm(v[1]);
      if (v2 >= 1e-28) {
        double theta, phi;
        ProductAnsatz::angles_from_vector(v[0], v[1], theta, phi);
        out.ansatz.theta[q - 1] = theta;
        out.ansatz.phi[q - 1] = phi;
        e[q - 1] = out.ansatz.qubit_vector(q - 1);
        p = v2;
      }
      out.p_trace.push_back(p);
    }
    out.iterations = static_cast<long>(out.p_trace.size());
    if (p - sweep_start_p < cfg.convergence_delta) break;
    sweep_start_p = p;
  }
  out.p = p;
  return out;
}

// Coordinate ascent with restarts; restart 0 uses the provided start, the
// rest draw fresh uniform product states from substreams of the seed.
inline OptimizationResult coordinate_ascent(const PureState& psi,
                                            const ProductAnsatz& start,
                                            const OptimizerConfig& cfg) {
  OptimizationResult res;
  res.best_ansatz = start;
  const int restarts = std::max(1, cfg.restarts);
  for (int r = 0; r < restarts; ++r) {
    ProductAnsatz init = start;
    if (r > 0) {
      RngStream rng(cfg.rng_seed, static_cast<std::uint64_t>(r));
      init = ProductAnsatz::random(psi.n_qubits(), rng);
    }
    AscentOutcome run = ascend_from(psi, init, cfg);
    res.restart_best_p.push_back(run.p);
    res.iterations_used += run.iterations;
    if (run.p > res.p_max) {
      res.p_max = run.p;
      res.best_ansatz = run.ansatz;
    }
  }
  res.restarts_used = restarts;
  return res;
}

// Genetic search over the 2n angles: tournament selection, blend crossover,
// Gaussian mutation with decaying sigma, elitism, and a final coordinate
// ascent polish of the champion. Deterministic for a fixed seed.
inline OptimizationResult ga_maximize(const PureState& psi, const OptimizerConfig& cfg) {
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");
  const int n = psi.n_qubits();
  const GaConfig& ga = cfg.ga;
  if (ga.population < 4) throw BadArity("GA population must be at least 4");

  // Individual 0 starts basis-aligned so the champion can never fall below
  // the best computational-basis overlap (>= 2^-n).
  std::vector<ProductAnsatz> pop;
  pop.reserve(ga.population);
  pop.push_back(ProductAnsatz::basis_aligned(psi));
  for (int i = 1; i < ga.population; ++i) {
    RngStream rng(cfg.rng_seed, 1000 + static_cast<std::uint64_t>(i));
    pop.push_back(ProductAnsatz::random(n, rng));
  }
  RngStream evo(cfg.rng_seed, 999);

  std::vector<double> fitness(ga.population);
  std::vector<int> order(ga.population);
  OptimizationResult res;
  res.best_ansatz = pop[0];

  auto evaluate = [&]() {
    for (int i = 0; i < ga.population; ++i)
      fitness[i] = overlap_probability(psi, pop[i]);
    for (int i = 0; i < ga.population; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fitness[a] > fitness[b]; });
  };

  auto tournament = [&]() -> const ProductAnsatz& {
    int best = static_cast<int>(evo.integer(ga.population));
    for (int t = 1; t < ga.tournament_size; ++t) {
      const int c = static_cast<int>(evo.integer(ga.population));
      if (fitness[c] > fitness[best]) best = c;
    }
    return pop[best];
  };

  double sigma = ga.mutation_sigma_initial;
  for (int gen = 0; gen < ga.generations; ++gen) {
    evaluate();
    res.restart_best_p.push_back(fitness[order[0]]);
    if (fitness[order[0]] > res.p_max) {
      res.p_max = fitness[order[0]];
      res.best_ansatz = pop[order[0]];
    }

    std::vector<ProductAnsatz> next;
    next.reserve(ga.population);
    for (int e = 0; e < ga.elite_count; ++e) next.push_back(pop[order[e]]);
    while (static_cast<int>(next.size()) < ga.population) {
      ProductAnsatz child = tournament();
      if (evo.uniform() < ga.crossover_rate) {
        const ProductAnsatz& other = tournament();
        for (int g = 0; g < n; ++g) {
          const double u = evo.uniform();
          child.theta[g] += u * (other.theta[g] - child.theta[g]);
          child.phi[g] += u * (other.phi[g] - child.phi[g]);
        }
      }
      for (int g = 0; g < n; ++g) {
        child.theta[g] += evo.gaussian(sigma);
        child.phi[g] += evo.gaussian(sigma);
      }
      child.canonicalize();
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    sigma *= ga.mutation_decay;
    res.iterations_used += ga.population;
  }
  evaluate();
  if (fitness[order[0]] > res.p_max) {
    res.p_max = fitness[order[0]];
    res.best_ansatz = pop[order[0]];
  }

  AscentOutcome polish = ascend_from(psi, res.best_ansatz, cfg);
  res.iterations_used += polish.iterations;
  if (polish.p > res.p_max) {
    res.p_max = polish.p;
    res.best_ansatz = polish.ansatz;
  }
  res.restarts_used = 1;
  return res;
}

// E_G = sqrt(1 - P_max), with P_max taken as the better of the two engines.
inline double groverian_measure(const PureState& psi, const OptimizerConfig& cfg = {}) {
  const OptimizationResult ca =
      coordinate_ascent(psi, ProductAnsatz::basis_aligned(psi), cfg);
  const OptimizationResult ga = ga_maximize(psi, cfg);
  const double p = std::clamp(std::max(ca.p_max, ga.p_max), 0.0, 1.0);
  return std::sqrt(1.0 - p);
}

// Closed form for W states: E_G(W_n) = sqrt(1 - ((n-1)/n)^(n-1)).
inline double groverian_w_analytic(int n) {
  if (n < 2) throw BadArity("W state needs at least 2 qubits");
  const double p = std::pow((n - 1.0) / n, n - 1.0);
  return std::sqrt(1.0 - p);
}

}  // namespace qent
