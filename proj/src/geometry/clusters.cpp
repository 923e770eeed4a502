#include "rfa/clusters.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rfa {

bool DirectionStore::insert(NodeId origin, Tag tag, const UnitVector& direction)
{
    if (contains(origin, tag)) return false;
    entries_.push_back({origin, tag, direction, next_order_++});
    return true;
}

bool DirectionStore::contains(NodeId origin, Tag tag) const { return find(origin, tag) != nullptr; }

const TaggedDirection* DirectionStore::find(NodeId origin, Tag tag) const
{
    for (const auto& e : entries_) {
        if (e.origin == origin && e.tag == tag) return &e;
    }
    return nullptr;
}

std::size_t DirectionStore::count(TagSet tags) const
{
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [&](const auto& e) { return tags.contains(e.tag); }));
}

std::vector<NodeId> DirectionCluster::origins() const
{
    std::vector<NodeId> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.origin);
    return out;
}

namespace {

using Mask = std::uint64_t;

int popcount(Mask m) { return std::popcount(m); }

/// For equal-size sets: is the sorted index sequence of a lexicographically smaller than b's?
bool lex_less(Mask a, Mask b)
{
    const Mask d = a ^ b;
    if (d == 0) return false;
    return (a & (d & (~d + 1))) != 0;
}

/// Compatibility graph over the tag-eligible entries, sorted by (origin, tag).
struct Graph {
    std::vector<TaggedDirection> vertices;
    std::vector<Mask> adj;
};

Graph build_graph(std::span<const TaggedDirection> store, TagSet allowed, double param)
{
    Graph g;
    for (const auto& e : store) {
        if (allowed.contains(e.tag)) g.vertices.push_back(e);
    }
    if (g.vertices.size() > kMaxClusterCandidates) {
        throw std::invalid_argument("find_cluster: more than 64 eligible directions");
    }
    std::sort(g.vertices.begin(), g.vertices.end(), [](const auto& a, const auto& b) {
        return a.origin != b.origin ? a.origin < b.origin : a.tag < b.tag;
    });
    const std::size_t k = g.vertices.size();
    g.adj.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (g.vertices[i].origin == g.vertices[j].origin) continue;
            if (distance(g.vertices[i].direction, g.vertices[j].direction) <= param) {
                g.adj[i] |= Mask{1} << j;
                g.adj[j] |= Mask{1} << i;
            }
        }
    }
    return g;
}

/// Bron-Kerbosch with Tomita pivoting. Visits every maximal clique that can still reach
/// `floor()` members; branches that cannot are pruned.
template <class Visit, class Floor>
void expand(const Graph& g, Mask r, int rsize, Mask p, Mask x, Visit& visit, Floor& floor)
{
    if (p == 0) {
        if (x == 0) visit(r, rsize);
        return;
    }
    if (rsize + popcount(p) < floor()) return;

    int pivot = -1, best = -1;
    for (Mask px = p | x; px != 0; px &= px - 1) {
        const int u = std::countr_zero(px);
        const int c = popcount(p & g.adj[static_cast<std::size_t>(u)]);
        if (c > best) {
            best = c;
            pivot = u;
        }
    }
    Mask cand = p & ~g.adj[static_cast<std::size_t>(pivot)];
    while (cand != 0) {
        const int v = std::countr_zero(cand);
        const Mask bit = Mask{1} << v;
        cand &= ~bit;
        const Mask nv = g.adj[static_cast<std::size_t>(v)];
        expand(g, r | bit, rsize + 1, p & nv, x & nv, visit, floor);
        p &= ~bit;
        x |= bit;
        if (rsize + popcount(p) < floor()) return;
    }
}

std::optional<DirectionCluster> make_cluster(const Graph& g, Mask m, TagSet allowed, double param)
{
    DirectionCluster c;
    c.diameter_param = param;
    c.allowed_tags = allowed;
    std::vector<UnitVector> dirs;
    for (Mask b = m; b != 0; b &= b - 1) {
        const auto& v = g.vertices[static_cast<std::size_t>(std::countr_zero(b))];
        c.members.push_back(v);
        dirs.push_back(v.direction);
    }
    try {
        c.center = cluster_center(dirs);
    } catch (const DegenerateMean&) {
        return std::nullopt;
    }
    return c;
}

Mask all_vertices(const Graph& g)
{
    const std::size_t k = g.vertices.size();
    return k == 64 ? ~Mask{0} : ((Mask{1} << k) - 1);
}

} // namespace

std::optional<DirectionCluster> find_cluster(std::span<const TaggedDirection> store, TagSet allowed_tags,
                                             double diameter_param, std::size_t min_size)
{
    if (min_size == 0) throw std::invalid_argument("find_cluster: min_size must be at least 1");
    const Graph g = build_graph(store, allowed_tags, diameter_param);
    if (g.vertices.size() < min_size) return std::nullopt;

    int best_size = static_cast<int>(min_size);
    Mask best_mask = 0;
    bool found = false;
    auto visit = [&](Mask r, int rsize) {
        if (rsize > best_size || (rsize == best_size && (!found || lex_less(r, best_mask)))) {
            best_size = rsize;
            best_mask = r;
            found = true;
        }
    };
    auto floor = [&] { return best_size; };
    expand(g, 0, 0, all_vertices(g), 0, visit, floor);
    if (!found) return std::nullopt;
    return make_cluster(g, best_mask, allowed_tags, diameter_param);
}

std::vector<DirectionCluster> maximal_clusters(std::span<const TaggedDirection> store, TagSet allowed_tags,
                                               double diameter_param, std::size_t min_size)
{
    if (min_size == 0) throw std::invalid_argument("maximal_clusters: min_size must be at least 1");
    const Graph g = build_graph(store, allowed_tags, diameter_param);
    std::vector<std::pair<int, Mask>> found;
    if (g.vertices.size() >= min_size) {
        auto visit = [&](Mask r, int rsize) {
            if (rsize >= static_cast<int>(min_size)) found.emplace_back(rsize, r);
        };
        const int threshold = static_cast<int>(min_size);
        auto floor = [&] { return threshold; };
        expand(g, 0, 0, all_vertices(g), 0, visit, floor);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : lex_less(a.second, b.second);
    });
    std::vector<DirectionCluster> out;
    for (const auto& [size, mask] : found) {
        if (auto c = make_cluster(g, mask, allowed_tags, diameter_param)) out.push_back(std::move(*c));
    }
    return out;
}

} // namespace rfa
