#pragma once

// Random instance generators shared by the inequality-suite experiment, the
// unit tests and the acceptance harness. Coordinates are drawn half the time
// from the quarter-integer grid in [-2, 2] so that ties and boundary cases
// (||S|| exactly equal to a level) occur often.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "symdom/distributions.hpp"
#include "symdom/dominance.hpp"
#include "symdom/geometry.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/rng.hpp"

namespace symdom::fixtures {

std::size_t uniform_index(RandomStream& rs, std::size_t count);
double coordinate(RandomStream& rs);

/// Symmetric law on R^dim with 1..max_pairs atom pairs and possibly an atom at the origin.
FiniteSupportDist random_finite(RandomStream& rs, std::size_t dim, std::size_t max_pairs);

/// 1..max_n independent components, dimension 1..max_dim, each finite.
ProductLaw random_finite_law(RandomStream& rs, std::size_t max_n, std::size_t max_dim, std::size_t max_pairs);

/// A norm on R^dim picked from a small random family (l2, l1, linf, ellipsoids, polytopes, ...).
Norm random_norm(RandomStream& rs, std::size_t dim);

SignInstance random_sign_instance(RandomStream& rs, std::size_t max_n, std::size_t max_dim);

/// b random, a an average of random permutations of b, so a is majorised by b.
std::pair<std::vector<double>, std::vector<double>> random_majorised_pair(RandomStream& rs, std::size_t max_n);

/// Random SPD matrix with eigenvalues in [lo, hi].
Eigen::MatrixXd random_spd(RandomStream& rs, std::size_t dim, double lo, double hi);

/// Pairs (N(0, S), N(0, S + P)) with P positive semidefinite; each pair is (1,1)-dominated.
std::vector<SourcePair> gaussian_pairs(RandomStream& rs, std::size_t count, std::size_t dim);

}  // namespace symdom::fixtures
