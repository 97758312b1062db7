#pragma once

#include <vector>

namespace fsrlab {

// Adjacency lists of a directed graph on nodes 0..n-1. Parallel arcs are
// allowed and harmless.
using Adjacency = std::vector<std::vector<int>>;

// Shortest directed cycle (self-loops have length 1). Among cycles of minimum
// length the one through the smallest node index wins, and its node list
// starts at that node; ties inside a start are broken by BFS order over
// ascending successors. Empty when the graph is acyclic.
std::vector<int> shortest_cycle(const Adjacency& succ);

// Shortest cycle through `start`, or empty.
std::vector<int> shortest_cycle_through(const Adjacency& succ, int start);

// Number of arcs on a longest path; the graph must be acyclic.
int longest_path(const Adjacency& succ);

// Per-node number of arcs on the longest path starting there; acyclic only.
std::vector<int> longest_path_from(const Adjacency& succ);

}  // namespace fsrlab
