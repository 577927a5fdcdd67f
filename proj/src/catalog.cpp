#include "symdom/runner.hpp"

namespace symdom {

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries{
        {"rademacher-tail", ExperimentKind::tail, "exact Rademacher tail oracle",
         "Tail of eps_1 + eps_2 + eps_3 by enumeration.",
         R"(kind: tail
seed: 1
law: {iid: {type: rademacher}, copies: 3}
norms:
  list:
    - {type: lp, dim: 1, p: 2}
thresholds: [0, 1, 2, 3]
)"},
        {"gaussian-peakedness", ExperimentKind::domination, "Gaussian peakedness (Anderson)",
         "N(0,1) against N(0,4) on dilates of |.|, closed-form tails.",
         R"(kind: domination
seed: 2
x: [{type: gaussian, sigma: 1}]
y: [{type: gaussian, sigma: 2}]
kappa: 1
lambda: 1
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.25, 0.5, 1, 2, 4, 8]
)"},
        {"tensorize-gaussian", ExperimentKind::tensorize, "sum-domination tensorisation",
         "Three (1,1)-dominated Gaussian pairs in the plane; sums checked at (16, 2).",
         R"(kind: tensorize
seed: 3
gaussian_pairs: {count: 3, dim: 2}
kappa: 1
lambda: 1
alpha: 1
norms:
  random: {dim: 2, size: 50, scale_min: 0.5, scale_max: 2}
estimator: {mode: mc, samples: 100000, confidence: 0.99}
)"},
        {"reduction-split", ExperimentKind::tensorize, "reduction to kappa = 1 by splitting",
         "Finite pairs with kappa = 2 checked at (ceil(kappa) 16/alpha, ceil(kappa) (1+alpha) lambda).",
         R"(kind: tensorize
seed: 4
route: split
kappa: 2
lambda: 1
alpha: 1
pairs:
  - x: {type: finite, dim: 1, half: [{at: [1], p: 0.5}]}
    y: {type: finite, dim: 1, half: [{at: [1], p: 0.25}], zero_mass: 0.5}
  - x: {type: finite, dim: 1, half: [{at: [2], p: 0.25}], zero_mass: 0.5}
    y: {type: finite, dim: 1, half: [{at: [2], p: 0.125}], zero_mass: 0.75}
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.5, 1, 2, 3]
)"},
        {"reduction-thin", ExperimentKind::tensorize, "reduction to kappa = 1 by Bernoulli thinning",
         "Same pairs as reduction-split, checked at (64 kappa/alpha, 2 (1+alpha) kappa lambda).",
         R"(kind: tensorize
seed: 5
route: thin
kappa: 2
lambda: 1
alpha: 1
pairs:
  - x: {type: finite, dim: 1, half: [{at: [1], p: 0.5}]}
    y: {type: finite, dim: 1, half: [{at: [1], p: 0.25}], zero_mass: 0.5}
  - x: {type: finite, dim: 1, half: [{at: [2], p: 0.25}], zero_mass: 0.5}
    y: {type: finite, dim: 1, half: [{at: [2], p: 0.125}], zero_mass: 0.75}
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.5, 1, 2, 3]
)"},
        {"wb-pareto", ExperimentKind::wb, "weak Borell inequality",
         "Pareto tail with exponent 2 satisfies WB(1, 2, 0.9) with equality.",
         R"(kind: wb
seed: 6
law: [{type: pareto, exponent: 2}]
C: 1
delta: 2
theta: 0.9
lambdas: [1, 2, 4]
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.25, 0.5, 1]
)"},
        {"wb-sum-pareto", ExperimentKind::wb_sum, "weak Borell tensorisation",
         "Three iid Pareto(2) summands; the sum is checked against WB(972, 2, 1/7776).",
         R"(kind: wb-sum
seed: 7
components: {iid: {type: pareto, exponent: 2}, copies: 3}
C: 1
delta: 2
theta: 0.5
lambdas: [1, 3, 9, 27]
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.003, 0.005]
estimator: {samples: 1000000}
)"},
        {"tail-recursion", ExperimentKind::recursion, "tail recursion and induction threshold",
         "p_k recursion against its closed form for C = 1, delta = 2.",
         R"(kind: recursion
seed: 8
p0: 0.0001
C: 1
delta: 2
theta: 0.5
K: 10
)"},
        {"majorize-uniform", ExperimentKind::majorize, "majorised weights domination",
         "Permutation mixture for (1/2, 1/2) < (1, 0) and the weighted-sum domination check.",
         R"(kind: majorize
seed: 9
a: [0.5, 0.5]
b: [1, 0]
domination:
  source: {type: pareto, exponent: 2}
  C: 1
  delta: 2
  theta: 0.9
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.5, 1, 2]
estimator: {samples: 1000000}
)"},
        {"schur-rademacher", ExperimentKind::schur, "convex combination over permutations",
         "E(||sum a_i X_i|| - 1)_+ <= E(||sum b_i X_i|| - 1)_+ for +/-3 atoms.",
         R"(kind: schur
seed: 10
a: [0.5, 0.5]
b: [1, 0]
source: {type: rademacher, magnitude: 3}
norms:
  list:
    - {type: lp, dim: 1, p: 2}
  scales: [0.5, 1, 2]
)"},
        {"stable-counterexample", ExperimentKind::counterexample, "heavy-tail counterexample for delta < 1",
         "Half-stable averages against X_1 with kappa = 100, lambda = 2; a witness is expected.",
         R"(kind: counterexample
seed: 11
delta: 0.5
n_grid: [4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576]
kappa: 100
lambda: 2
expected_violation: true
)"},
        {"inequality-suite", ExperimentKind::inequality_suite, "classical Rademacher and sum inequalities",
         "Kahane, L1-L2, Paley-Zygmund, contraction, Levy, Hoffmann-Jorgensen, proxy sandwich, thinning lemma.",
         R"(kind: inequality-suite
seed: 12
sign_instances: 200
max_n: 12
max_dim: 3
sum_laws: 100
max_components: 4
sandwich_laws: 50
removedelta_instances: 50
)"},
    };
    return entries;
}

}  // namespace symdom
