#pragma once

#include "tame/cells.hpp"
#include "tame/set.hpp"

namespace tame {

// Dimension of a semilinear set: the largest band count over the cells of
// a decomposition lying inside the set; -1 for the empty set.
int dimension(const SemilinearSet& s, const QeOptions& opts = {});

// Point of S whose every neighborhood meets S in full dimension: the
// lexicographically least center among maximal-dimension cells inside S.
// Throws DomainError on the empty set.
Point local_dim_point(const SemilinearSet& s, const QeOptions& opts = {});

// For X inside C x P with dim pi(X) = dim P (pi forgetting the C block),
// a point (c,p) of X with dim pi(X cut to W) = dim P for every open box W
// around it. Throws DomainError when the dimension precondition fails.
Point proj_dim_point(const SemilinearSet& X, const SemilinearSet& C,
                     const SemilinearSet& P, const QeOptions& opts = {});

// Points of the domain at which the function with the given graph is
// discontinuous. graph lives in M^{k+1} with the value in the last
// coordinate; domain lives in M^k. Throws DomainError when the graph is
// not a total single-valued function on the domain.
SemilinearSet discontinuity_set(const SemilinearSet& graph,
                                const SemilinearSet& domain,
                                const QeOptions& opts = {});

// True when the set is the graph of a total single-valued function on the
// domain (value in the last coordinate); decided by elimination.
bool is_function_graph(const SemilinearSet& graph, const SemilinearSet& domain,
                       const QeOptions& opts = {});

// pi(X) as a set over the last `keep` coordinates.
SemilinearSet project_last(const SemilinearSet& X, int keep,
                           const QeOptions& opts = {});

}  // namespace tame
