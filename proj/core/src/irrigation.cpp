#include "branchlight/irrigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "branchlight/numerics.hpp"

namespace branchlight {

void validate(const irrigation_tree& t) {
    const int n = static_cast<int>(t.nodes.size());
    if (n == 0) throw std::runtime_error("tree: no nodes");
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    for (const auto& [p, c] : t.edges) {
        if (p < 0 || p >= n || c < 0 || c >= n) throw std::runtime_error("tree: dangling edge");
        if (c == 0) throw std::runtime_error("tree: origin cannot be a child");
        if (parent[static_cast<std::size_t>(c)] != -1)
            throw std::runtime_error("tree: node with two parents");
        parent[static_cast<std::size_t>(c)] = p;
    }
    // every non-root node must reach the origin without cycles
    for (int v = 1; v < n; ++v) {
        int steps = 0, cur = v;
        while (cur != 0) {
            cur = parent[static_cast<std::size_t>(cur)];
            if (cur == -1) throw std::runtime_error("tree: node disconnected from the origin");
            if (++steps > n) throw std::runtime_error("tree: cycle detected");
        }
    }
    for (const auto& [node, mass] : t.sinks) {
        if (node < 0 || node >= n) throw std::runtime_error("tree: sink at unknown node");
        if (!(mass >= 0.0)) throw std::runtime_error("tree: negative sink mass");
    }
}

namespace {

// sink mass in the subtree hanging below each node
std::vector<double> subtree_masses(const irrigation_tree& t) {
    const std::size_t n = t.nodes.size();
    std::vector<std::vector<int>> children(n);
    for (const auto& [p, c] : t.edges) children[static_cast<std::size_t>(p)].push_back(c);
    std::vector<double> mass(n, 0.0);
    for (const auto& [node, m] : t.sinks) mass[static_cast<std::size_t>(node)] += m;
    // children precede parents in a reverse topological sweep
    std::vector<int> order;
    order.reserve(n);
    std::function<void(int)> dfs = [&](int v) {
        for (int c : children[static_cast<std::size_t>(v)]) dfs(c);
        order.push_back(v);
    };
    dfs(0);
    for (int v : order)
        for (int c : children[static_cast<std::size_t>(v)])
            mass[static_cast<std::size_t>(v)] += mass[static_cast<std::size_t>(c)];
    return mass;
}

} // namespace

double edge_flux(const irrigation_tree& t, std::size_t edge_index) {
    validate(t);
    if (edge_index >= t.edges.size()) throw std::runtime_error("edge_flux: no such edge");
    const auto masses = subtree_masses(t);
    return masses[static_cast<std::size_t>(t.edges[edge_index].second)];
}

double tree_cost(const irrigation_tree& t, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("tree_cost: alpha must lie in [0, 1]");
    validate(t);
    const auto masses = subtree_masses(t);
    compensated_sum s;
    for (const auto& [p, c] : t.edges) {
        const double flux = masses[static_cast<std::size_t>(c)];
        if (flux <= 0.0) continue; // pruned
        const double len = (t.nodes[static_cast<std::size_t>(p)] - t.nodes[static_cast<std::size_t>(c)]).norm();
        s.add(std::pow(flux, alpha) * len);
    }
    return s.value();
}

void validate(const ray_density_plan& p) {
    if (!(p.ell > 0.0)) throw std::invalid_argument("ray plan: ell must be positive");
    if (p.u.empty()) throw std::invalid_argument("ray plan: empty density");
    for (double v : p.u)
        if (!(v >= 0.0)) throw std::invalid_argument("ray plan: negative density");
}

std::vector<double> ray_density_plan::tail_z() const {
    const std::size_t n = u.size();
    const double h = ell / static_cast<double>(n);
    std::vector<double> z(n + 1, 0.0);
    compensated_sum tail;
    for (std::size_t i = n; i-- > 0;) {
        tail.add(u[i] * h);
        z[i] = tail.value();
    }
    return z;
}

double ray_cost(const ray_density_plan& p, double alpha, double c) {
    validate(p);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("ray_cost: alpha must lie in (0, 1]");
    if (!(c > 0.0)) throw std::domain_error("ray_cost: c must be positive");
    const auto z = p.tail_z();
    const double h = p.ell / static_cast<double>(p.u.size());
    compensated_sum s;
    for (std::size_t i = 0; i < p.u.size(); ++i)
        s.add(linear_power_integral(z[i], z[i + 1], p.u[i], h, alpha));
    return c * s.value();
}

double ray_cost_quadrature(const ray_density_plan& p, double alpha, double c) {
    validate(p);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("ray_cost: alpha must lie in (0, 1]");
    const auto z = p.tail_z();
    const std::size_t n = p.u.size();
    const double h = p.ell / static_cast<double>(n);
    auto z_at = [&](std::size_t i, double frac) {
        return z[i] - p.u[i] * h * frac; // linear within the cell
    };
    // adaptive quadrature per cell; bisection absorbs the vertical tangent of
    // z^alpha where the tail mass runs out
    compensated_sum s;
    for (std::size_t i = 0; i < n; ++i) {
        s.add(integrate([&](double frac) { return std::pow(z_at(i, frac), alpha); },
                        0.0, 1.0, 1e-13));
    }
    return c * h * s.value();
}

// ---------------------------------------------------------------------------
// brute-force optimal trees
// ---------------------------------------------------------------------------

namespace {

struct topo_node {
    int atom = -1;   // leaf: index into the atom list
    int left = -1;   // internal: children in the node array
    int right = -1;
};

struct topology {
    std::vector<topo_node> nodes; // node 0 is the top (attached to the origin)
    std::string encoding;
};

std::string encode(const std::vector<topo_node>& nodes, int v) {
    const topo_node& nd = nodes[static_cast<std::size_t>(v)];
    if (nd.atom >= 0) return "a" + std::to_string(nd.atom);
    std::string l = encode(nodes, nd.left);
    std::string r = encode(nodes, nd.right);
    if (r < l) std::swap(l, r);
    return "(" + l + "," + r + ")";
}

// all full binary topologies over the given leaf set (unordered children)
void enumerate_topologies(const std::vector<int>& leaves, std::vector<topology>& out) {
    std::function<std::vector<std::vector<topo_node>>(const std::vector<int>&)> gen =
        [&](const std::vector<int>& set) -> std::vector<std::vector<topo_node>> {
        std::vector<std::vector<topo_node>> result;
        if (set.size() == 1) {
            result.push_back({{set[0], -1, -1}});
            return result;
        }
        const int first = set[0];
        const std::size_t rest = set.size() - 1;
        // the subset containing the first leaf ranges over all splits
        for (unsigned long mask = 0; mask + 1 < (1ul << rest); ++mask) {
            std::vector<int> with_first{first}, without;
            for (std::size_t i = 0; i < rest; ++i)
                (mask & (1ul << i) ? with_first : without).push_back(set[i + 1]);
            for (const auto& lt : gen(with_first))
                for (const auto& rt : gen(without)) {
                    std::vector<topo_node> nodes;
                    nodes.push_back({-1, -1, -1}); // top internal node
                    const int off_l = 1;
                    for (const auto& nd : lt) {
                        topo_node shifted = nd;
                        if (shifted.left >= 0) shifted.left += off_l;
                        if (shifted.right >= 0) shifted.right += off_l;
                        nodes.push_back(shifted);
                    }
                    const int off_r = static_cast<int>(nodes.size());
                    for (const auto& nd : rt) {
                        topo_node shifted = nd;
                        if (shifted.left >= 0) shifted.left += off_r;
                        if (shifted.right >= 0) shifted.right += off_r;
                        nodes.push_back(shifted);
                    }
                    nodes[0].left = off_l;
                    nodes[0].right = off_r;
                    result.push_back(std::move(nodes));
                }
        }
        return result;
    };

    for (auto& nodes : gen(leaves)) {
        topology t;
        t.encoding = encode(nodes, 0);
        t.nodes = std::move(nodes);
        out.push_back(std::move(t));
    }
    // dedupe mirrored splits that encode identically
    std::sort(out.begin(), out.end(),
              [](const topology& a, const topology& b) { return a.encoding < b.encoding; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const topology& a, const topology& b) {
                              return a.encoding == b.encoding;
                          }),
              out.end());
}

// working geometry for one topology: positions of internal nodes are free
struct relax_state {
    const topology* topo = nullptr;
    std::span<const atom> atoms;
    std::vector<double> weight;    // per topo node: subtree sink mass
    std::vector<vec2> pos;         // per topo node
    std::vector<int> parent;       // per topo node (-1 for node 0 = origin child)
};

relax_state init_state(const topology& topo, std::span<const atom> atoms) {
    relax_state st;
    st.topo = &topo;
    st.atoms = atoms;
    const std::size_t n = topo.nodes.size();
    st.weight.assign(n, 0.0);
    st.pos.assign(n, {});
    st.parent.assign(n, -1);
    // subtree masses and leaf positions bottom-up (children have larger indices)
    for (std::size_t i = n; i-- > 0;) {
        const topo_node& nd = topo.nodes[i];
        if (nd.atom >= 0) {
            st.weight[i] = atoms[static_cast<std::size_t>(nd.atom)].mass;
            st.pos[i] = atoms[static_cast<std::size_t>(nd.atom)].pos;
        } else {
            st.weight[i] = st.weight[static_cast<std::size_t>(nd.left)] +
                           st.weight[static_cast<std::size_t>(nd.right)];
            st.parent[static_cast<std::size_t>(nd.left)] = static_cast<int>(i);
            st.parent[static_cast<std::size_t>(nd.right)] = static_cast<int>(i);
        }
    }
    // internal nodes start between their subtree centroid and the origin
    for (std::size_t i = n; i-- > 0;) {
        const topo_node& nd = topo.nodes[i];
        if (nd.atom < 0) {
            const vec2 mid = 0.5 * (st.pos[static_cast<std::size_t>(nd.left)] +
                                    st.pos[static_cast<std::size_t>(nd.right)]);
            st.pos[i] = 0.75 * mid; // pulled toward the origin
        }
    }
    return st;
}

double state_cost(const relax_state& st, double alpha) {
    compensated_sum s;
    const std::size_t n = st.topo->nodes.size();
    auto wpow = [&](double w) { return alpha == 0.0 ? 1.0 : std::pow(w, alpha); };
    s.add(wpow(st.weight[0]) * st.pos[0].norm()); // origin -> top node
    for (std::size_t i = 0; i < n; ++i) {
        const topo_node& nd = st.topo->nodes[i];
        if (nd.atom >= 0) continue;
        for (int ch : {nd.left, nd.right})
            s.add(wpow(st.weight[static_cast<std::size_t>(ch)]) *
                  (st.pos[i] - st.pos[static_cast<std::size_t>(ch)]).norm());
    }
    return s.value();
}

// neighbor list of an internal node: (position, edge weight)
std::vector<std::pair<vec2, double>> neighbors(const relax_state& st, std::size_t i, double alpha) {
    auto wpow = [&](double w) { return alpha == 0.0 ? 1.0 : std::pow(w, alpha); };
    const topo_node& nd = st.topo->nodes[i];
    std::vector<std::pair<vec2, double>> nb;
    if (st.parent[i] == -1)
        nb.push_back({{0.0, 0.0}, wpow(st.weight[i])});
    else
        nb.push_back({st.pos[static_cast<std::size_t>(st.parent[i])], wpow(st.weight[i])});
    nb.push_back({st.pos[static_cast<std::size_t>(nd.left)],
                  wpow(st.weight[static_cast<std::size_t>(nd.left)])});
    nb.push_back({st.pos[static_cast<std::size_t>(nd.right)],
                  wpow(st.weight[static_cast<std::size_t>(nd.right)])});
    return nb;
}

// Gauss-Seidel weighted-midpoint sweeps with oscillation damping
void relax(relax_state& st, double alpha, int max_sweeps = 10000, double tol = 1e-10) {
    const std::size_t n = st.topo->nodes.size();
    std::vector<vec2> last_move(n, vec2{0.0, 0.0});
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (st.topo->nodes[i].atom >= 0) continue;
            const auto nb = neighbors(st, i, alpha);
            vec2 num{};
            double den = 0.0;
            bool at_vertex = false;
            for (const auto& [p, w] : nb) {
                const double d = (p - st.pos[i]).norm();
                if (d < 1e-13) {
                    at_vertex = true;
                    continue;
                }
                num = num + (w / d) * p;
                den += w / d;
            }
            if (den <= 0.0 || at_vertex) continue; // stuck on a vertex: handled by snapping
            vec2 target = (1.0 / den) * num;
            vec2 move = target - st.pos[i];
            if (move.dot(last_move[i]) < 0.0) {
                target = st.pos[i] + 0.5 * move; // damp oscillation
                move = 0.5 * move;
            }
            st.pos[i] = target;
            last_move[i] = move;
            worst = std::max(worst, move.norm());
        }
        if (worst < tol) return;
    }
}

// exact optimality test for pinning a branch point onto a neighbor vertex:
// the resultant pull of the other edges must not exceed the edge weight
void snap_to_vertices(relax_state& st, double alpha) {
    const std::size_t n = st.topo->nodes.size();
    for (int round = 0; round < 8; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (st.topo->nodes[i].atom >= 0) continue;
            const auto nb = neighbors(st, i, alpha);
            // nearest neighbor candidate
            std::size_t best = 0;
            double bd = (nb[0].first - st.pos[i]).norm();
            for (std::size_t k = 1; k < nb.size(); ++k) {
                const double d = (nb[k].first - st.pos[i]).norm();
                if (d < bd) {
                    bd = d;
                    best = k;
                }
            }
            const vec2 v = nb[best].first;
            if ((st.pos[i] - v).norm() == 0.0) continue;
            vec2 pull{};
            bool degenerate = false;
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (k == best) continue;
                const vec2 d = nb[k].first - v;
                const double dn = d.norm();
                if (dn < 1e-13) {
                    degenerate = true;
                    break;
                }
                pull = pull + (nb[k].second / dn) * d;
            }
            if (degenerate) continue;
            if (pull.norm() <= nb[best].second * (1.0 + 1e-12)) {
                st.pos[i] = v;
                changed = true;
            }
        }
        if (!changed) return;
        relax(st, alpha);
    }
}

relax_state solve_topology(const topology& topo, std::span<const atom> atoms, double alpha) {
    relax_state st = init_state(topo, atoms);
    relax(st, alpha);
    snap_to_vertices(st, alpha);

    // collapse-retry: also try pinning each branch point onto each neighbor
    // outright and re-relaxing; keeps whichever variant costs least
    double best_cost = state_cost(st, alpha);
    const std::size_t n = topo.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (topo.nodes[i].atom >= 0) continue;
        const auto nb = neighbors(st, i, alpha);
        for (const auto& [p, w] : nb) {
            (void)w;
            relax_state trial = st;
            trial.pos[i] = p;
            relax(trial, alpha);
            snap_to_vertices(trial, alpha);
            const double cost = state_cost(trial, alpha);
            if (cost < best_cost - 1e-15) {
                best_cost = cost;
                st = std::move(trial);
            }
        }
    }
    return st;
}

irrigation_tree state_to_tree(const relax_state& st, int& out_steiner) {
    const topology& topo = *st.topo;
    const std::size_t n = topo.nodes.size();
    irrigation_tree t;
    t.nodes.push_back({0.0, 0.0});

    // map topo nodes to output nodes, merging branch points that landed on a
    // neighbor (within the collapse radius)
    std::vector<int> out_index(n, -1);
    constexpr double kCollapse = 1e-9;

    // leaves first
    for (std::size_t i = 0; i < n; ++i) {
        if (topo.nodes[i].atom >= 0) {
            out_index[i] = static_cast<int>(t.nodes.size());
            t.nodes.push_back(st.pos[i]);
            t.sinks[out_index[i]] =
                st.atoms[static_cast<std::size_t>(topo.nodes[i].atom)].mass;
        }
    }
    // internal nodes: reuse any existing output node at the same position
    out_steiner = 0;
    for (std::size_t i = n; i-- > 0;) {
        if (topo.nodes[i].atom >= 0) continue;
        int found = -1;
        for (std::size_t k = 0; k < t.nodes.size(); ++k)
            if ((t.nodes[k] - st.pos[i]).norm() < kCollapse) {
                found = static_cast<int>(k);
                break;
            }
        if (found == -1) {
            found = static_cast<int>(t.nodes.size());
            t.nodes.push_back(st.pos[i]);
            ++out_steiner;
        }
        out_index[i] = found;
    }
    // edges, skipping self-loops created by merges
    auto add_edge = [&](int p, int c) {
        if (p != c) t.edges.push_back({p, c});
    };
    add_edge(0, out_index[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const topo_node& nd = topo.nodes[i];
        if (nd.atom >= 0) continue;
        add_edge(out_index[i], out_index[static_cast<std::size_t>(nd.left)]);
        add_edge(out_index[i], out_index[static_cast<std::size_t>(nd.right)]);
    }
    return t;
}

} // namespace

bruteforce_result optimal_tree_bruteforce(std::span<const atom> atoms, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("optimal_tree_bruteforce: alpha must lie in [0, 1]");
    std::vector<atom> live;
    for (const auto& a : atoms)
        if (a.mass > 0.0) live.push_back(a);
    if (live.empty() || live.size() > 5)
        throw std::invalid_argument("optimal_tree_bruteforce: need between 1 and 5 atoms with mass");

    if (live.size() == 1) {
        bruteforce_result r;
        r.tree.nodes = {{0.0, 0.0}, live[0].pos};
        r.tree.edges = {{0, 1}};
        r.tree.sinks[1] = live[0].mass;
        r.cost = (alpha == 0.0 ? 1.0 : std::pow(live[0].mass, alpha)) * live[0].pos.norm();
        r.topology = "a0";
        return r;
    }

    std::vector<int> leaves(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) leaves[i] = static_cast<int>(i);
    std::vector<topology> topos;
    enumerate_topologies(leaves, topos);

    struct scored {
        double cost;
        int steiner;
        std::string encoding;
        irrigation_tree tree;
    };
    std::vector<scored> results(topos.size());
    parallel_for(topos.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            relax_state st = solve_topology(topos[k], live, alpha);
            int steiner = 0;
            irrigation_tree tree = state_to_tree(st, steiner);
            results[k] = {state_cost(st, alpha), steiner, topos[k].encoding, std::move(tree)};
        }
    });

    const scored* best = &results[0];
    for (const auto& r : results) {
        const auto key = std::tie(r.cost, r.steiner, r.encoding);
        const auto best_key = std::tie(best->cost, best->steiner, best->encoding);
        if (key < best_key) best = &r;
    }
    bruteforce_result out;
    out.tree = best->tree;
    out.cost = best->cost;
    out.steiner_points = best->steiner;
    out.topology = best->encoding;
    return out;
}

monotone_report check_monotone_structure(const irrigation_tree& t, double theta0) {
    validate(t);
    const vec2 n{std::cos(theta0), std::sin(theta0)};
    monotone_report rep;
    for (const auto& [p, c] : t.edges) {
        const double zp = t.nodes[static_cast<std::size_t>(p)].dot(n);
        const double zc = t.nodes[static_cast<std::size_t>(c)].dot(n);
        const double drop = zp - zc; // positive = moving against the light
        if (drop > 1e-12 && drop > rep.worst_decrease) {
            rep.pass = false;
            rep.worst_node = c;
            rep.worst_decrease = drop;
        }
    }
    return rep;
}

namespace {

irrigation_tree tree_from_obj(const nlohmann::json& j) {
    irrigation_tree t;
    for (const auto& jn : j.at("nodes"))
        t.nodes.push_back({jn.at(0).get<double>(), jn.at(1).get<double>()});
    for (const auto& je : j.at("edges"))
        t.edges.push_back({je.at(0).get<int>(), je.at(1).get<int>()});
    if (j.contains("sinks"))
        for (const auto& [key, val] : j.at("sinks").items())
            t.sinks[std::stoi(key)] = val.get<double>();
    validate(t);
    return t;
}

} // namespace

irrigation_tree tree_from_json(const std::string& text) {
    return tree_from_obj(nlohmann::json::parse(text));
}

std::string tree_to_json(const irrigation_tree& t) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& p : t.nodes) j["nodes"].push_back({p.x, p.y});
    j["edges"] = nlohmann::json::array();
    for (const auto& [p, c] : t.edges) j["edges"].push_back({p, c});
    j["sinks"] = nlohmann::json::object();
    for (const auto& [node, mass] : t.sinks) j["sinks"][std::to_string(node)] = mass;
    return j.dump(2);
}

irrigation_tree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tree file: " + path);
    nlohmann::json j;
    in >> j;
    return tree_from_obj(j);
}

} // namespace branchlight
