#pragma once

#include "rfa/geometry.hpp"
#include "rfa/tags.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rfa {

/// Largest store find_cluster accepts (eligible entries are packed into a 64-bit set).
inline constexpr std::size_t kMaxClusterCandidates = 64;

/// A received direction with its classical tag, in the receiver's local frame.
struct TaggedDirection {
    NodeId origin = 0;
    Tag tag = Tag::init;
    UnitVector direction = UnitVector::z_axis();
    std::uint64_t arrival_order = 0;
};

/// Received directions of one protocol instance, at most one per (origin, tag).
class DirectionStore {
public:
    /// Returns false (and stores nothing) if (origin, tag) is already present.
    bool insert(NodeId origin, Tag tag, const UnitVector& direction);
    bool contains(NodeId origin, Tag tag) const;
    const TaggedDirection* find(NodeId origin, Tag tag) const;
    std::size_t count(TagSet tags) const;

    std::span<const TaggedDirection> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<TaggedDirection> entries_;
    std::uint64_t next_order_ = 0;
};

/// A diameter-bounded set of tagged directions: every pair of members is within
/// diameter_param, members carry distinct origins, and center is their normalised mean.
struct DirectionCluster {
    std::vector<TaggedDirection> members; // sorted by (origin, tag)
    double diameter_param = 0.0;
    UnitVector center = UnitVector::z_axis();
    TagSet allowed_tags;

    std::size_t size() const { return members.size(); }
    std::vector<NodeId> origins() const;
};

/// Exact maximum-cardinality cluster among the entries whose tag is in `allowed_tags`,
/// or nullopt if it has fewer than `min_size` members. Ties between maximum clusters go
/// to the lexicographically smallest sorted (origin, tag) sequence. Two entries with the
/// same origin never share a cluster.
std::optional<DirectionCluster> find_cluster(std::span<const TaggedDirection> store, TagSet allowed_tags,
                                             double diameter_param, std::size_t min_size);

/// Every maximal cluster with at least `min_size` members, ordered by decreasing size and
/// then lexicographically. Clusters whose mean is degenerate are left out.
std::vector<DirectionCluster> maximal_clusters(std::span<const TaggedDirection> store, TagSet allowed_tags,
                                               double diameter_param, std::size_t min_size);

} // namespace rfa
