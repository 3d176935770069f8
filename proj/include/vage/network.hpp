#pragma once

#include "vage/distributions.hpp"
#include "vage/error.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vage {

enum class Topology { Path, Tree, General };

std::string_view to_string(Topology t);

struct LinkDescription {
    std::string from;
    std::string to;
    DistributionSpec dist;
    std::optional<int> priority; // defaults to declaration index
};

/// Unvalidated network as written in a config file.
struct NetworkDescription {
    std::vector<std::string> nodes;
    std::string source;
    DistributionSpec source_dist;
    std::vector<LinkDescription> links;
};

struct Violation {
    ErrorKind kind;
    std::string message;
};

/// All problems with a description, in a stable order. Empty means valid.
std::vector<Violation> find_violations(const NetworkDescription& desc);

struct Link {
    std::size_t from = 0;
    std::size_t to = 0;
    DistributionSpec dist;
    int priority = 0;
    std::uint64_t stream_id = 0;
};

/// Validated, immutable cache network. Node indices follow declaration
/// order; random stream ids are derived from node names so they do not
/// depend on how links are ordered in the file.
class CacheNetwork {
public:
    /// Throws Error carrying the first violation's kind; the message lists
    /// every violation.
    explicit CacheNetwork(NetworkDescription desc);

    std::size_t node_count() const { return names_.size(); }
    const std::string& name(std::size_t node) const { return names_.at(node); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require_node(std::string_view name) const;

    std::size_t source() const { return source_; }
    const DistributionSpec& source_dist() const { return source_dist_; }
    std::uint64_t source_stream_id() const { return source_stream_id_; }

    const std::vector<Link>& links() const { return links_; }
    const std::vector<std::size_t>& incoming(std::size_t node) const { return incoming_.at(node); }
    const std::vector<std::size_t>& outgoing(std::size_t node) const { return outgoing_.at(node); }

    /// Shortest hop distance from the source.
    std::size_t depth(std::size_t node) const { return depth_.at(node); }

    Topology topology() const { return topology_; }

    /// Nodes with no outgoing links, in declaration order. For a network
    /// that is just the source, returns the source.
    std::vector<std::size_t> leaves() const;

    /// Description equivalent to this network with every priority resolved.
    NetworkDescription describe() const;

private:
    std::vector<std::string> names_;
    std::size_t source_ = 0;
    DistributionSpec source_dist_;
    std::uint64_t source_stream_id_ = 0;
    std::vector<Link> links_;
    std::vector<std::vector<std::size_t>> incoming_;
    std::vector<std::vector<std::size_t>> outgoing_;
    std::vector<std::size_t> depth_;
    Topology topology_ = Topology::General;
};

/// Classification of a description; throws like the CacheNetwork constructor.
Topology validate(const NetworkDescription& desc);

/// Link indices from the source down to `node`, in hop order. Throws
/// NotATree on a GENERAL network.
std::vector<std::size_t> path_to_source(const CacheNetwork& net, std::size_t node);

} // namespace vage
