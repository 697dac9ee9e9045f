#include "skewlab/graphs.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

#include "json.hpp"

namespace skewlab {

// ---------------------------------------------------------------------------
// Explorations
// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> Exploration::edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(k);
    for (int i = 0; i < k; ++i) e.emplace_back(nu[i], nu[(i + 1) % k]);
    return e;
}

std::vector<Exploration> enumerate_explorations(int k) {
    if (k < 1 || k > 8) throw size_error("enumerate_explorations: k must be in 1..8");
    std::vector<Exploration> out;
    std::vector<int> nu(k, 1);
    // Restricted-growth sequences in lexicographic order.
    std::function<void(int, int)> rec = [&](int pos, int maxlabel) {
        if (pos == k) {
            Exploration e;
            e.k = k;
            e.l = maxlabel;
            e.nu = nu;
            out.push_back(std::move(e));
            return;
        }
        for (int v = 1; v <= maxlabel + 1; ++v) {
            nu[pos] = v;
            rec(pos + 1, std::max(maxlabel, v));
        }
    };
    nu[0] = 1;
    rec(1, 1);
    return out;
}

Exploration canonicalize(std::span<const int> indices) {
    if (indices.empty()) throw std::domain_error("canonicalize: empty index list");
    std::map<int, int> relabel;
    Exploration e;
    e.k = static_cast<int>(indices.size());
    e.nu.reserve(indices.size());
    for (int idx : indices) {
        auto [it, inserted] = relabel.emplace(idx, static_cast<int>(relabel.size()) + 1);
        e.nu.push_back(it->second);
    }
    e.l = static_cast<int>(relabel.size());
    return e;
}

ExplorationGraph exploration_graph(const Exploration& e) {
    ExplorationGraph g;
    g.l = e.l;
    g.edges = e.edges();
    g.nu = e.nu;
    return g;
}

std::string ExplorationGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = l;
    nlohmann::json edge_list = nlohmann::json::array();
    for (const auto& [u, v] : edges) edge_list.push_back({u, v});
    j["edges"] = edge_list;
    j["nu"] = nu;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Multigraphs and preprocessing
// ---------------------------------------------------------------------------

Multigraph to_multigraph(const ExplorationGraph& g) {
    Multigraph m;
    for (int v = 1; v <= g.l; ++v) m.vertices.push_back(v);
    m.edges = g.edges;
    return m;
}

int Multigraph::degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges) {
        if (a == v) ++d;
        if (b == v) ++d;
    }
    return d;
}

bool Multigraph::has_vertex(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::string Multigraph::to_string() const {
    std::ostringstream os;
    os << "V={";
    for (std::size_t i = 0; i < vertices.size(); ++i) os << (i ? "," : "") << vertices[i];
    os << "} E=[";
    for (std::size_t i = 0; i < edges.size(); ++i)
        os << (i ? "," : "") << "(" << edges[i].first << "," << edges[i].second << ")";
    os << "]";
    return os.str();
}

std::string PreprocessStep::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::RemoveLoop: os << "remove loop at v" << vertex; break;
        case Kind::DeleteIsolated: os << "delete isolated v" << vertex; break;
        case Kind::ShortCircuit:
            os << "short-circuit v" << vertex << " -> edge (" << new_edge.first << ","
               << new_edge.second << ")";
            break;
    }
    return os.str();
}

namespace {

void check_even_degrees(const Multigraph& g) {
    for (int v : g.vertices)
        if (g.degree(v) % 2 != 0)
            throw std::invalid_argument("preprocess: vertex " + std::to_string(v) +
                                        " has odd degree");
}

void remove_vertex(Multigraph& g, int v) {
    g.vertices.erase(std::remove(g.vertices.begin(), g.vertices.end(), v), g.vertices.end());
}

// Applies one step; returns false if nothing applies.
bool apply_one_fixed_step(Multigraph& g, std::vector<PreprocessStep>* log) {
    // 1. loops first
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (g.edges[i].first == g.edges[i].second) {
            if (log) log->push_back({PreprocessStep::Kind::RemoveLoop, g.edges[i].first, {0, 0}});
            g.edges.erase(g.edges.begin() + i);
            return true;
        }
    }
    // 2. isolated vertices (keep the final point)
    if (g.vertices.size() > 1) {
        for (int v : g.vertices) {
            if (g.degree(v) == 0) {
                if (log) log->push_back({PreprocessStep::Kind::DeleteIsolated, v, {0, 0}});
                remove_vertex(g, v);
                return true;
            }
        }
    }
    // 3. short-circuit the lowest-indexed degree-2 vertex
    for (int v : g.vertices) {
        if (g.degree(v) != 2) continue;
        int e1 = -1, e2 = -1;
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            if (g.edges[i].first == v || g.edges[i].second == v) {
                if (e1 < 0)
                    e1 = static_cast<int>(i);
                else
                    e2 = static_cast<int>(i);
            }
        }
        int w1 = g.edges[e1].first == v ? g.edges[e1].second : g.edges[e1].first;
        int w2 = g.edges[e2].first == v ? g.edges[e2].second : g.edges[e2].first;
        if (log) log->push_back({PreprocessStep::Kind::ShortCircuit, v, {w1, w2}});
        g.edges.erase(g.edges.begin() + e2);
        g.edges.erase(g.edges.begin() + e1);
        remove_vertex(g, v);
        g.edges.emplace_back(w1, w2);
        return true;
    }
    return false;
}

} // namespace

std::pair<Multigraph, std::vector<PreprocessStep>> preprocess(const Multigraph& g) {
    check_even_degrees(g);
    Multigraph cur = g;
    std::vector<PreprocessStep> log;
    while (apply_one_fixed_step(cur, &log)) {
    }
    return {cur, log};
}

Multigraph preprocess_randomized(const Multigraph& g, std::uint64_t seed) {
    check_even_degrees(g);
    Multigraph cur = g;
    CounterRng rng(seed);
    std::uint64_t counter = 0;
    while (true) {
        // Collect every applicable move.
        struct Move {
            PreprocessStep::Kind kind;
            int arg; // edge index for loops, vertex id otherwise
        };
        std::vector<Move> moves;
        for (std::size_t i = 0; i < cur.edges.size(); ++i)
            if (cur.edges[i].first == cur.edges[i].second)
                moves.push_back({PreprocessStep::Kind::RemoveLoop, static_cast<int>(i)});
        for (int v : cur.vertices) {
            if (cur.degree(v) == 0 && cur.vertices.size() > 1)
                moves.push_back({PreprocessStep::Kind::DeleteIsolated, v});
            if (cur.degree(v) == 2) {
                bool has_loop = false;
                for (const auto& [a, b] : cur.edges)
                    if (a == v && b == v) has_loop = true;
                if (!has_loop) moves.push_back({PreprocessStep::Kind::ShortCircuit, v});
            }
        }
        if (moves.empty()) return cur;
        const Move& mv = moves[rng.bits(counter++) % moves.size()];
        switch (mv.kind) {
            case PreprocessStep::Kind::RemoveLoop:
                cur.edges.erase(cur.edges.begin() + mv.arg);
                break;
            case PreprocessStep::Kind::DeleteIsolated:
                remove_vertex(cur, mv.arg);
                break;
            case PreprocessStep::Kind::ShortCircuit: {
                int v = mv.arg;
                int e1 = -1, e2 = -1;
                for (std::size_t i = 0; i < cur.edges.size(); ++i)
                    if (cur.edges[i].first == v || cur.edges[i].second == v)
                        (e1 < 0 ? e1 : e2) = static_cast<int>(i);
                int w1 = cur.edges[e1].first == v ? cur.edges[e1].second : cur.edges[e1].first;
                int w2 = cur.edges[e2].first == v ? cur.edges[e2].second : cur.edges[e2].first;
                cur.edges.erase(cur.edges.begin() + e2);
                cur.edges.erase(cur.edges.begin() + e1);
                remove_vertex(cur, v);
                cur.edges.emplace_back(w1, w2);
                break;
            }
        }
    }
}

bool is_fully_reducible(const Multigraph& g) {
    return preprocess(g).first.is_point();
}

// ---------------------------------------------------------------------------
// Edge-disjoint paths (Edmonds-Karp on the doubled digraph)
// ---------------------------------------------------------------------------

bool has_four_edge_disjoint_paths(const Multigraph& g, int v1, int v2) {
    if (v1 == v2) throw std::invalid_argument("has_four_edge_disjoint_paths: v1 == v2");
    std::map<int, int> idx;
    for (int v : g.vertices) idx.emplace(v, static_cast<int>(idx.size()));
    if (!idx.count(v1) || !idx.count(v2)) return false;
    int n = static_cast<int>(idx.size());

    struct Arc {
        int to, cap;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> adj(n);
    auto add_pair = [&](int u, int v) {
        adj[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, 1});
        adj[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, 1});
    };
    for (const auto& [a, b] : g.edges) {
        if (a == b) continue; // loops never lie on a v1-v2 path
        add_pair(idx[a], idx[b]);
    }
    int s = idx[v1], t = idx[v2], flow = 0;
    while (flow < 4) {
        std::vector<int> pre_arc(n, -1);
        std::deque<int> q{s};
        std::vector<char> seen(n, 0);
        seen[s] = 1;
        while (!q.empty() && !seen[t]) {
            int u = q.front();
            q.pop_front();
            for (int ai : adj[u]) {
                if (arcs[ai].cap > 0 && !seen[arcs[ai].to]) {
                    seen[arcs[ai].to] = 1;
                    pre_arc[arcs[ai].to] = ai;
                    q.push_back(arcs[ai].to);
                }
            }
        }
        if (!seen[t]) break;
        for (int v = t; v != s;) {
            int ai = pre_arc[v];
            arcs[ai].cap -= 1;
            arcs[ai ^ 1].cap += 1;
            v = arcs[ai ^ 1].to;
        }
        ++flow;
    }
    return flow >= 4;
}

// ---------------------------------------------------------------------------
// Cycles and walks
// ---------------------------------------------------------------------------

bool CycleWalk::is_simple(const Multigraph&) const {
    if (edge_ids.empty() || verts.front() != verts.back()) return false;
    std::set<int> es(edge_ids.begin(), edge_ids.end());
    if (es.size() != edge_ids.size()) return false;
    std::set<int> vs(verts.begin(), verts.end() - 1);
    return vs.size() == verts.size() - 1;
}

int CycleWalk::count_edge(int edge_id) const {
    return static_cast<int>(std::count(edge_ids.begin(), edge_ids.end(), edge_id));
}

namespace {

int other_endpoint(const Multigraph& g, int edge_id, int v) {
    const auto& [a, b] = g.edges[edge_id];
    return a == v ? b : a;
}

struct IncidenceList {
    // vertex id -> list of (edge id, neighbor)
    std::map<int, std::vector<std::pair<int, int>>> inc;
    explicit IncidenceList(const Multigraph& g) {
        for (int v : g.vertices) inc[v];
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            const auto& [a, b] = g.edges[i];
            inc[a].emplace_back(static_cast<int>(i), b);
            if (a != b) inc[b].emplace_back(static_cast<int>(i), a);
        }
    }
};

CycleWalk walk_from_path(const Multigraph& g, const std::vector<int>& edge_path, int start) {
    CycleWalk w;
    w.verts.push_back(start);
    int cur = start;
    for (int eid : edge_path) {
        const auto& [a, b] = g.edges[eid];
        w.edge_ids.push_back(eid);
        w.forward.push_back(a == cur);
        cur = (a == cur) ? b : a;
        w.verts.push_back(cur);
    }
    return w;
}

} // namespace

std::vector<CycleWalk> enumerate_simple_cycles(const Multigraph& g) {
    IncidenceList inc(g);
    std::set<std::vector<int>> seen; // sorted edge-id sets
    std::vector<CycleWalk> cycles;

    auto record = [&](const CycleWalk& w) {
        std::vector<int> key(w.edge_ids);
        std::sort(key.begin(), key.end());
        if (seen.insert(key).second) cycles.push_back(w);
    };

    // Loops are length-1 cycles.
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].first == g.edges[i].second) {
            CycleWalk w;
            w.edge_ids = {static_cast<int>(i)};
            w.forward = {1};
            w.verts = {g.edges[i].first, g.edges[i].first};
            record(w);
        }

    // DFS from each base edge e0, requiring e0 to be the minimum edge id.
    for (std::size_t e0 = 0; e0 < g.edges.size(); ++e0) {
        const auto& [u0, v0] = g.edges[e0];
        if (u0 == v0) continue;
        std::vector<int> path{static_cast<int>(e0)};
        std::set<int> on_path_vertices{u0};
        std::function<void(int)> dfs = [&](int cur) {
            for (const auto& [eid, nxt] : inc.inc.at(cur)) {
                // e0 must be the minimum edge id on the cycle
                if (eid <= static_cast<int>(e0)) continue;
                if (std::find(path.begin(), path.end(), eid) != path.end()) continue;
                if (g.edges[eid].first == g.edges[eid].second) continue; // loop inside a path
                if (nxt == u0) {
                    path.push_back(eid);
                    record(walk_from_path(g, path, u0));
                    path.pop_back();
                    continue;
                }
                if (on_path_vertices.count(nxt)) continue;
                path.push_back(eid);
                on_path_vertices.insert(nxt);
                dfs(nxt);
                on_path_vertices.erase(nxt);
                path.pop_back();
            }
        };
        // Closing edges may have any id > e0; intermediate ones likewise.
        dfs(v0);
    }

    std::sort(cycles.begin(), cycles.end(), [](const CycleWalk& a, const CycleWalk& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        std::vector<int> ka(a.edge_ids), kb(b.edge_ids);
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        return ka < kb;
    });
    return cycles;
}

namespace {

// BFS path from u to v avoiding a set of forbidden edges; returns edge ids.
std::optional<std::vector<int>> bfs_path_avoiding(const Multigraph& g, int u, int v,
                                                  const std::set<int>& forbidden) {
    IncidenceList inc(g);
    std::map<int, std::pair<int, int>> pred; // vertex -> (prev vertex, via edge)
    std::deque<int> q{u};
    std::set<int> seen{u};
    while (!q.empty()) {
        int cur = q.front();
        q.pop_front();
        if (cur == v) break;
        for (const auto& [eid, nxt] : inc.inc.at(cur)) {
            if (forbidden.count(eid) || seen.count(nxt)) continue;
            seen.insert(nxt);
            pred[nxt] = {cur, eid};
            q.push_back(nxt);
        }
    }
    if (!seen.count(v)) return std::nullopt;
    std::vector<int> path;
    for (int cur = v; cur != u;) {
        auto [prev, eid] = pred.at(cur);
        path.push_back(eid);
        cur = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

std::optional<GoodCycle> find_good_cycle(const Multigraph& g) {
    if (g.is_point()) return std::nullopt;
    auto cycles = enumerate_simple_cycles(g);
    for (const auto& C : cycles) {
        std::set<int> cycle_edges(C.edge_ids.begin(), C.edge_ids.end());
        GoodCycle result;
        result.cycle = C;
        bool good = true;
        for (std::size_t step = 0; step < C.edge_ids.size() && good; ++step) {
            int eid = C.edge_ids[step];
            int u = C.verts[step], v = C.verts[step + 1];
            if (u == v) { // loop edge: witness would have to be the loop itself
                good = false;
                break;
            }
            auto path = bfs_path_avoiding(g, u, v, cycle_edges);
            if (!path) {
                good = false;
                break;
            }
            // witness = path u->v, then e back from v to u
            CycleWalk w = walk_from_path(g, *path, u);
            w.edge_ids.push_back(eid);
            w.forward.push_back(g.edges[eid].first == v);
            w.verts.push_back(u);
            result.witnesses.emplace_back(eid, std::move(w));
        }
        if (good) return result;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Loop erasure and bypasses
// ---------------------------------------------------------------------------

namespace {

CycleWalk rotate_to_anchor(const CycleWalk& walk, int anchor_edge) {
    auto it = std::find(walk.edge_ids.begin(), walk.edge_ids.end(), anchor_edge);
    if (it == walk.edge_ids.end())
        throw std::invalid_argument("walk does not contain the anchor edge");
    std::size_t shift = static_cast<std::size_t>(it - walk.edge_ids.begin());
    CycleWalk out;
    std::size_t n = walk.edge_ids.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (shift + i) % n;
        out.edge_ids.push_back(walk.edge_ids[j]);
        out.forward.push_back(walk.forward[j]);
        out.verts.push_back(walk.verts[j]);
    }
    out.verts.push_back(out.verts.front());
    return out;
}

void validate_closed(const CycleWalk& w, const char* who) {
    if (w.edge_ids.empty() || w.verts.size() != w.edge_ids.size() + 1 ||
        w.verts.front() != w.verts.back())
        throw std::invalid_argument(std::string(who) + ": not a closed walk");
}

} // namespace

CycleWalk loop_erase(const CycleWalk& walk, int anchor_edge) {
    validate_closed(walk, "loop_erase");
    if (walk.count_edge(anchor_edge) != 1)
        throw std::invalid_argument("loop_erase: anchor edge must appear exactly once");
    CycleWalk w = rotate_to_anchor(walk, anchor_edge);
    // Scan; on a repeated vertex cut everything between its first and final
    // appearance.
    for (std::size_t p = 1; p < w.verts.size() - 1; ++p) {
        std::size_t last = p;
        for (std::size_t q = p + 1; q < w.verts.size(); ++q)
            if (w.verts[q] == w.verts[p]) last = q;
        if (last != p) {
            w.verts.erase(w.verts.begin() + p + 1, w.verts.begin() + last + 1);
            w.edge_ids.erase(w.edge_ids.begin() + p, w.edge_ids.begin() + last);
            w.forward.erase(w.forward.begin() + p, w.forward.begin() + last);
        }
    }
    if (w.edge_ids.size() < 2 && w.verts.front() != w.verts[1])
        throw std::invalid_argument("loop_erase: walk degenerated");
    if (w.edge_ids.size() == 2 && w.edge_ids[0] == w.edge_ids[1])
        throw std::invalid_argument("loop_erase: walk reduced to a trivial back-and-forth");
    return w;
}

CycleWalk bypass(const CycleWalk& C, const CycleWalk& Cp, int e, int ep) {
    validate_closed(C, "bypass");
    validate_closed(Cp, "bypass");
    if (e == ep) throw std::invalid_argument("bypass: e and e' must differ");
    if (C.count_edge(e) != 1 || C.count_edge(ep) != 1)
        throw std::invalid_argument("bypass: C must contain e and e' once");
    if (Cp.count_edge(ep) != 1 || Cp.count_edge(e) != 0)
        throw std::invalid_argument("bypass: C' must contain e' but not e");

    CycleWalk base = rotate_to_anchor(C, e);
    CycleWalk detour = rotate_to_anchor(Cp, ep);
    // Position of e' in the rotated base walk.
    std::size_t p = static_cast<std::size_t>(
        std::find(base.edge_ids.begin(), base.edge_ids.end(), ep) - base.edge_ids.begin());
    int a = base.verts[p], b = base.verts[p + 1]; // e' traversed a -> b in C

    // detour without its first step (= e', traversed c -> d) is a path d -> c.
    std::vector<int> ids(detour.edge_ids.begin() + 1, detour.edge_ids.end());
    std::vector<char> fwd(detour.forward.begin() + 1, detour.forward.end());
    std::vector<int> vts(detour.verts.begin() + 1, detour.verts.end()); // d ... c
    int c = detour.verts[0];
    if (c == a) {
        // path runs b -> a; reverse it to run a -> b
        std::reverse(ids.begin(), ids.end());
        std::reverse(vts.begin(), vts.end());
        std::reverse(fwd.begin(), fwd.end());
        for (auto& f : fwd) f = !f;
    }

    CycleWalk spliced;
    spliced.edge_ids.assign(base.edge_ids.begin(), base.edge_ids.begin() + p);
    spliced.forward.assign(base.forward.begin(), base.forward.begin() + p);
    spliced.verts.assign(base.verts.begin(), base.verts.begin() + p + 1);
    spliced.edge_ids.insert(spliced.edge_ids.end(), ids.begin(), ids.end());
    spliced.forward.insert(spliced.forward.end(), fwd.begin(), fwd.end());
    spliced.verts.insert(spliced.verts.end(), vts.begin() + 1, vts.end());
    spliced.edge_ids.insert(spliced.edge_ids.end(), base.edge_ids.begin() + p + 1,
                            base.edge_ids.end());
    spliced.forward.insert(spliced.forward.end(), base.forward.begin() + p + 1,
                           base.forward.end());
    spliced.verts.insert(spliced.verts.end(), base.verts.begin() + p + 2, base.verts.end());

    return loop_erase(spliced, e);
}

CycleWalk even_bypass(const CycleWalk& walk, int e1, int e2) {
    validate_closed(walk, "even_bypass");
    if (walk.count_edge(e1) != 1)
        throw std::invalid_argument("even_bypass: e1 must appear exactly once");
    if (walk.count_edge(e2) % 2 != 0)
        throw std::invalid_argument("even_bypass: e2 must appear an even number of times");

    CycleWalk w = rotate_to_anchor(walk, e1);
    while (w.count_edge(e2) > 0) {
        // first and final appearance of e2 (the anchor occupies index 0)
        std::size_t i = 0, f = 0;
        bool found = false;
        for (std::size_t p = 1; p < w.edge_ids.size(); ++p)
            if (w.edge_ids[p] == e2) {
                if (!found) i = p;
                f = p;
                found = true;
            }

        bool opposite = (w.forward[i] != w.forward[f]) || (w.verts[i] == w.verts[i + 1]);
        CycleWalk next;
        if (opposite) {
            // skip from the tail of step i straight to the head of step f
            next.edge_ids.assign(w.edge_ids.begin(), w.edge_ids.begin() + i);
            next.forward.assign(w.forward.begin(), w.forward.begin() + i);
            next.verts.assign(w.verts.begin(), w.verts.begin() + i + 1);
            next.edge_ids.insert(next.edge_ids.end(), w.edge_ids.begin() + f + 1,
                                 w.edge_ids.end());
            next.forward.insert(next.forward.end(), w.forward.begin() + f + 1, w.forward.end());
            next.verts.insert(next.verts.end(), w.verts.begin() + f + 2, w.verts.end());
        } else {
            // same direction: reverse the enclosed segment
            next.edge_ids.assign(w.edge_ids.begin(), w.edge_ids.begin() + i);
            next.forward.assign(w.forward.begin(), w.forward.begin() + i);
            next.verts.assign(w.verts.begin(), w.verts.begin() + i + 1);
            for (std::size_t p = f; p-- > i + 1;) {
                next.edge_ids.push_back(w.edge_ids[p]);
                next.forward.push_back(!w.forward[p]);
                next.verts.push_back(w.verts[p]);
            }
            next.edge_ids.insert(next.edge_ids.end(), w.edge_ids.begin() + f + 1,
                                 w.edge_ids.end());
            next.forward.insert(next.forward.end(), w.forward.begin() + f + 1, w.forward.end());
            next.verts.insert(next.verts.end(), w.verts.begin() + f + 2, w.verts.end());
        }
        w = std::move(next);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Cycle space and admissible currents
// ---------------------------------------------------------------------------

namespace {

struct SpanningTree {
    std::vector<int> parent_edge; // per vertex (1-based), -1 for root / unset
    std::vector<int> order;       // vertices in BFS order
    std::vector<int> non_tree;    // edge indices
    std::vector<char> is_tree;
};

SpanningTree build_tree(const ExplorationGraph& g) {
    int l = g.l, k = g.k();
    SpanningTree t;
    t.parent_edge.assign(l + 1, -1);
    t.is_tree.assign(k, 0);
    std::vector<char> visited(l + 1, 0);
    std::deque<int> q{1};
    visited[1] = 1;
    t.order.push_back(1);
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e = 0; e < k; ++e) {
            const auto& [a, b] = g.edges[e];
            int nxt = (a == v) ? b : (b == v ? a : 0);
            if (nxt == 0 || visited[nxt] || t.is_tree[e]) continue;
            if (a == b) continue;
            visited[nxt] = 1;
            t.is_tree[e] = 1;
            t.parent_edge[nxt] = e;
            t.order.push_back(nxt);
            q.push_back(nxt);
        }
    }
    for (int v = 1; v <= l; ++v)
        if (!visited[v]) throw std::domain_error("cycle_basis: graph is disconnected");
    for (int e = 0; e < k; ++e)
        if (!t.is_tree[e]) t.non_tree.push_back(e);
    return t;
}

} // namespace

CycleBasis cycle_basis(const ExplorationGraph& g) {
    SpanningTree t = build_tree(g);
    int k = g.k();
    CycleBasis basis;
    basis.k = k;
    basis.dim = static_cast<int>(t.non_tree.size());
    for (int f : t.non_tree) {
        std::vector<int> vec(k, 0);
        vec[f] = 1;
        const auto& [u, v] = g.edges[f];
        if (u != v) {
            // tree path from v up to u: walk both to the root, recording signed steps
            auto path_to_root = [&](int start) {
                std::vector<std::pair<int, int>> steps; // (edge, direction sign toward root)
                int cur = start;
                while (t.parent_edge[cur] >= 0) {
                    int e = t.parent_edge[cur];
                    const auto& [a, b] = g.edges[e];
                    // traversing from cur to its parent
                    steps.emplace_back(e, a == cur ? +1 : -1);
                    cur = (a == cur) ? b : a;
                }
                return steps;
            };
            auto pv = path_to_root(v), pu = path_to_root(u);
            // strip the common tail (beyond the meeting point)
            while (!pv.empty() && !pu.empty() && pv.back().first == pu.back().first) {
                pv.pop_back();
                pu.pop_back();
            }
            // cycle direction: f traversed u->v, then v -> meeting point -> u
            for (const auto& [e, s] : pv) vec[e] += s;
            for (const auto& [e, s] : pu) vec[e] -= s;
        }
        basis.vectors.push_back(std::move(vec));
    }
    return basis;
}

std::int64_t for_each_admissible_current(const ExplorationGraph& g, int N,
                                         const std::function<void(const std::vector<int>&)>& fn) {
    const int k = g.k(), l = g.l;
    SpanningTree t = build_tree(g);
    const int d = static_cast<int>(t.non_tree.size());
    double cost = std::pow(double(N), d) * k;
    if (cost > 1e8) throw size_error("admissible currents: N^{k-l+1} * k exceeds 1e8");

    // Incidence with signs: +1 edge into v, -1 out of v; loops contribute 0.
    std::vector<std::vector<std::pair<int, int>>> inc(l + 1); // v -> (edge, sign)
    for (int e = 0; e < k; ++e) {
        const auto& [a, b] = g.edges[e];
        if (a == b) continue;
        inc[a].emplace_back(e, -1);
        inc[b].emplace_back(e, +1);
    }

    std::vector<int> j(k, 0);
    std::vector<int> free_val(d, 1);
    std::int64_t count = 0;

    auto solve_tree = [&]() -> bool {
        // leaves first: reverse BFS order; each non-root vertex fixes its parent edge
        for (std::size_t oi = t.order.size(); oi-- > 1;) {
            int v = t.order[oi];
            int pe = t.parent_edge[v];
            int balance = 0, psign = 0;
            for (const auto& [e, s] : inc[v]) {
                if (e == pe)
                    psign = s;
                else
                    balance += s * j[e];
            }
            // psign * j[pe] + balance = 0
            int val = -balance * psign; // psign in {+-1}
            if (val < 1 || val > N) return false;
            j[pe] = val;
        }
        return true;
    };

    while (true) {
        for (int i = 0; i < d; ++i) j[t.non_tree[i]] = free_val[i];
        if (solve_tree()) {
            ++count;
            if (fn) fn(j);
        }
        int pos = d - 1;
        while (pos >= 0 && free_val[pos] == N) {
            free_val[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++free_val[pos];
    }
    return count;
}

std::vector<std::vector<int>> enumerate_admissible_currents(const ExplorationGraph& g, int N,
                                                            CurrentMode mode) {
    std::vector<std::vector<int>> out;
    if (mode == CurrentMode::Basis) {
        for_each_admissible_current(g, N, [&](const std::vector<int>& j) { out.push_back(j); });
        std::sort(out.begin(), out.end());
        return out;
    }
    const int k = g.k(), l = g.l;
    if (std::pow(double(N), k) > 1e7)
        throw size_error("enumerate_admissible_currents: N^k exceeds 1e7");
    std::vector<std::vector<std::pair<int, int>>> inc(l + 1);
    for (int e = 0; e < k; ++e) {
        const auto& [a, b] = g.edges[e];
        if (a == b) continue;
        inc[a].emplace_back(e, -1);
        inc[b].emplace_back(e, +1);
    }
    std::vector<int> j(k, 1);
    while (true) {
        bool ok = true;
        for (int v = 1; v <= l && ok; ++v) {
            int bal = 0;
            for (const auto& [e, s] : inc[v]) bal += s * j[e];
            ok = (bal == 0);
        }
        if (ok) out.push_back(j);
        int pos = k - 1;
        while (pos >= 0 && j[pos] == N) {
            j[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++j[pos];
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t count_admissible_currents(const ExplorationGraph& g, int N, CurrentMode mode) {
    if (mode == CurrentMode::Basis) return for_each_admissible_current(g, N, nullptr);
    return static_cast<std::int64_t>(enumerate_admissible_currents(g, N, mode).size());
}

std::vector<std::pair<int, int>> canonical_form(const Multigraph& g) {
    int n = static_cast<int>(g.vertices.size());
    if (n > 8) throw size_error("canonical_form: too many vertices");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::map<int, int> pos;
    for (int i = 0; i < n; ++i) pos[g.vertices[i]] = i;

    std::vector<std::pair<int, int>> best;
    bool first = true;
    do {
        std::vector<std::pair<int, int>> relabeled;
        relabeled.reserve(g.edges.size());
        for (const auto& [a, b] : g.edges) {
            int u = perm[pos[a]], v = perm[pos[b]];
            relabeled.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(relabeled.begin(), relabeled.end());
        if (first || relabeled < best) {
            best = std::move(relabeled);
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace skewlab
