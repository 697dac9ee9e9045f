#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace skewlab {

// A closed edge-list on canonically labeled vertices: the walk
// nu_1 -> nu_2 -> ... -> nu_k -> nu_1. Labels satisfy the restricted-growth
// condition (first occurrence of j precedes first occurrence of j+1), so
// nu_1 = 1 and {nu} = {1..l}.
struct Exploration {
    int k = 0;
    int l = 0;
    std::vector<int> nu; // 1-based labels, length k

    std::vector<std::pair<int, int>> edges() const; // ((nu1,nu2),...,(nuk,nu1))
};

// Directed multigraph traced by an exploration; the edge list in traversal
// order is an Eulerian circuit of the graph.
struct ExplorationGraph {
    int l = 0;
    std::vector<std::pair<int, int>> edges; // 1-based (tail, head), traversal order
    std::vector<int> nu;                    // provenance

    int k() const { return static_cast<int>(edges.size()); }
    std::string to_json() const;
};

// All canonical nu-sequences on k edges, lexicographic. Count = Bell(k).
std::vector<Exploration> enumerate_explorations(int k); // 1 <= k <= 8

// First-occurrence relabeling of an arbitrary index list.
Exploration canonicalize(std::span<const int> indices);

ExplorationGraph exploration_graph(const Exploration& e);

// Undirected multigraph with stable vertex ids; parallel edges and loops are
// distinct by index.
struct Multigraph {
    std::vector<int> vertices;              // sorted ids
    std::vector<std::pair<int, int>> edges; // unordered endpoints by id

    int degree(int v) const; // loops count twice
    bool has_vertex(int v) const;
    bool is_point() const { return vertices.size() == 1 && edges.empty(); }
    std::string to_string() const;
};

Multigraph to_multigraph(const ExplorationGraph& g);

struct PreprocessStep {
    enum class Kind { RemoveLoop, DeleteIsolated, ShortCircuit };
    Kind kind;
    int vertex = 0;
    std::pair<int, int> new_edge{0, 0}; // short-circuit replacement edge
    std::string to_string() const;
};

// Iterates: remove all self-loops; delete isolated vertices (keeping a lone
// final vertex); short-circuit the lowest-indexed degree-2 vertex. Throws on
// odd-degree input.
std::pair<Multigraph, std::vector<PreprocessStep>> preprocess(const Multigraph& g);

// Test support: applies one uniformly random applicable step at a time.
Multigraph preprocess_randomized(const Multigraph& g, std::uint64_t seed);

bool is_fully_reducible(const Multigraph& g);

// Max-flow (unit capacities) >= 4 between v1 and v2.
bool has_four_edge_disjoint_paths(const Multigraph& g, int v1, int v2);

// Closed walk over a fixed multigraph: edge i runs verts[i] -> verts[i+1];
// forward[i] says whether that matches the stored endpoint order.
struct CycleWalk {
    std::vector<int> edge_ids;
    std::vector<char> forward;
    std::vector<int> verts; // length edges+1, verts.front() == verts.back()

    int length() const { return static_cast<int>(edge_ids.size()); }
    bool is_simple(const Multigraph& g) const;
    int count_edge(int edge_id) const;
};

// Every simple cycle (loops are length-1 cycles, parallel pairs length-2),
// sorted by length then by edge-id set. Intended for graphs with <= ~12 edges.
std::vector<CycleWalk> enumerate_simple_cycles(const Multigraph& g);

struct GoodCycle {
    CycleWalk cycle;
    std::vector<std::pair<int, CycleWalk>> witnesses; // edge id -> cycle meeting C in exactly it
};

// First (shortest) simple cycle C such that each edge e of C lies on a cycle
// meeting C exactly in e. nullopt for the single point; any other fully
// preprocessed graph must yield one.
std::optional<GoodCycle> find_good_cycle(const Multigraph& g);

// Reduces a closed walk to a simple cycle through the anchor edge (which must
// appear exactly once). Throws on degenerate input.
CycleWalk loop_erase(const CycleWalk& walk, int anchor_edge);

// Given simple cycles C (containing e and ep) and Cp (containing ep but not
// e), returns a simple cycle containing e, avoiding ep, with edges in C u Cp.
CycleWalk bypass(const CycleWalk& C, const CycleWalk& Cp, int e, int ep);

// Given a closed walk using e1 exactly once and e2 an even number of times,
// returns a closed walk using e1 once and e2 never, with edges from the input.
CycleWalk even_bypass(const CycleWalk& walk, int e1, int e2);

struct CycleBasis {
    int k = 0;
    int dim = 0;                                // = k - l + 1 for connected graphs
    std::vector<std::vector<int>> vectors;      // entries in {0, +-1}, one per basis cycle
};

// Spanning-tree fundamental cycle basis of the directed exploration graph.
CycleBasis cycle_basis(const ExplorationGraph& g);

enum class CurrentMode { BruteForce, Basis };

// Streams every j in {1..N}^k satisfying the Kirchhoff current law at each
// vertex (basis route). Returns the count.
std::int64_t for_each_admissible_current(const ExplorationGraph& g, int N,
                                         const std::function<void(const std::vector<int>&)>& fn);

std::vector<std::vector<int>> enumerate_admissible_currents(const ExplorationGraph& g, int N,
                                                            CurrentMode mode);
std::int64_t count_admissible_currents(const ExplorationGraph& g, int N, CurrentMode mode);

// Lexicographically smallest edge multiset over all vertex relabelings;
// equal canonical forms <=> isomorphic multigraphs. Brute force, l <= 8.
std::vector<std::pair<int, int>> canonical_form(const Multigraph& g);

} // namespace skewlab
