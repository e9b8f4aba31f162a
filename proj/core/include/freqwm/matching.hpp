#pragma once

#include <cstdint>
#include <vector>

namespace freqwm {

// An undirected weighted edge for max_weight_matching. Endpoints are
// zero-based vertex ids; parallel edges and self-loops are rejected.
struct MatchEdge {
    std::int32_t u = 0;
    std::int32_t v = 0;
    std::int64_t weight = 0;
};

// Computes a maximum-weight matching of the given graph (not necessarily of
// maximum cardinality) with Galil's primal-dual blossom method. Runs in
// O(V^3) time with exact integer arithmetic, so results are deterministic
// and optimal, never approximate. The returned vector has one entry per
// vertex: the mate's vertex id, or -1 if the vertex is unmatched.
//
// The dual solution is verified against the complementary-slackness
// conditions before returning; a violation (which would indicate a bug, not
// bad input) throws std::logic_error.
std::vector<std::int32_t> max_weight_matching(std::int32_t vertex_count,
                                              const std::vector<MatchEdge>& edges);

}  // namespace freqwm
