#include "vage/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace vage {

namespace {

std::uint64_t name_stream_id(std::string_view tag) { return fnv1a(tag.data(), tag.size()); }

std::uint64_t link_stream_id(std::string_view from, std::string_view to) {
    return name_stream_id("link:" + std::string(from) + "->" + std::string(to));
}

} // namespace

std::string_view to_string(Topology t) {
    switch (t) {
    case Topology::Path: return "PATH";
    case Topology::Tree: return "TREE";
    case Topology::General: return "GENERAL";
    }
    return "UNKNOWN";
}

std::vector<Violation> find_violations(const NetworkDescription& desc) {
    std::vector<Violation> out;
    auto add = [&](ErrorKind kind, std::string message) { out.push_back({kind, std::move(message)}); };

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
        if (!index.emplace(desc.nodes[i], i).second) {
            add(ErrorKind::DuplicateNode, "node '" + desc.nodes[i] + "' declared twice");
        }
    }
    if (!index.contains(desc.source)) {
        add(ErrorKind::UnknownNode, "source '" + desc.source + "' is not a declared node");
        return out;
    }

    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, std::set<int>> priorities;
    std::vector<std::vector<std::size_t>> adjacency(desc.nodes.size());
    std::vector<std::string> into_source;
    for (std::size_t k = 0; k < desc.links.size(); ++k) {
        const auto& l = desc.links[k];
        const std::string label = "link " + l.from + "->" + l.to;
        const bool known_from = index.contains(l.from);
        const bool known_to = index.contains(l.to);
        if (!known_from) add(ErrorKind::UnknownNode, label + ": unknown node '" + l.from + "'");
        if (!known_to) add(ErrorKind::UnknownNode, label + ": unknown node '" + l.to + "'");
        if (!known_from || !known_to) continue;
        if (l.from == l.to) {
            add(ErrorKind::SelfLoop, label + ": self-loop");
            continue;
        }
        if (!seen.emplace(l.from, l.to).second) {
            add(ErrorKind::DuplicateLink, label + ": declared twice");
            continue;
        }
        const int priority = l.priority.value_or(static_cast<int>(k));
        if (!priorities[l.to].insert(priority).second) {
            add(ErrorKind::DuplicatePriority,
                label + ": priority " + std::to_string(priority) + " already used by another link into '" + l.to + "'");
        }
        if (l.to == desc.source) {
            add(ErrorKind::SourceHasIncoming, label + ": the source cannot receive updates");
            into_source.push_back(l.from);
            continue;
        }
        adjacency[index.at(l.from)].push_back(index.at(l.to));
    }

    std::vector<bool> reached(desc.nodes.size(), false);
    std::deque<std::size_t> queue{index.at(desc.source)};
    reached[queue.front()] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : adjacency[u]) {
            if (!reached[v]) {
                reached[v] = true;
                queue.push_back(v);
            }
        }
    }
    for (const auto& from : into_source) {
        if (reached[index.at(from)]) {
            add(ErrorKind::CycleThroughSource, "link " + from + "->" + desc.source + " closes a cycle through the source");
        }
    }
    for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
        if (!reached[i] && index.at(desc.nodes[i]) == i) {
            add(ErrorKind::UnreachableNode, "node '" + desc.nodes[i] + "' is not reachable from the source");
        }
    }
    return out;
}

CacheNetwork::CacheNetwork(NetworkDescription desc) : source_dist_(desc.source_dist) {
    const auto violations = find_violations(desc);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "invalid network:";
        for (const auto& v : violations) os << "\n  [" << to_string(v.kind) << "] " << v.message;
        throw Error(violations.front().kind, os.str());
    }

    names_ = std::move(desc.nodes);
    source_ = *index_of(desc.source);
    source_stream_id_ = name_stream_id("source:" + desc.source);
    incoming_.resize(names_.size());
    outgoing_.resize(names_.size());
    for (std::size_t k = 0; k < desc.links.size(); ++k) {
        auto& l = desc.links[k];
        Link link{*index_of(l.from), *index_of(l.to), l.dist, l.priority.value_or(static_cast<int>(k)),
                  link_stream_id(l.from, l.to)};
        incoming_[link.to].push_back(links_.size());
        outgoing_[link.from].push_back(links_.size());
        links_.push_back(std::move(link));
    }

    depth_.assign(names_.size(), 0);
    std::vector<bool> reached(names_.size(), false);
    std::deque<std::size_t> queue{source_};
    reached[source_] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t k : outgoing_[u]) {
            const std::size_t v = links_[k].to;
            if (!reached[v]) {
                reached[v] = true;
                depth_[v] = depth_[u] + 1;
                queue.push_back(v);
            }
        }
    }

    bool tree = true;
    bool path = true;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (i != source_ && incoming_[i].size() != 1) tree = false;
        if (outgoing_[i].size() > 1) path = false;
    }
    topology_ = !tree ? Topology::General : (path ? Topology::Path : Topology::Tree);
}

std::optional<std::size_t> CacheNetwork::index_of(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t CacheNetwork::require_node(std::string_view name) const {
    if (auto idx = index_of(name)) return *idx;
    throw Error(ErrorKind::UnknownNode, "unknown node '" + std::string(name) + "'");
}

std::vector<std::size_t> CacheNetwork::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (outgoing_[i].empty() && i != source_) out.push_back(i);
    }
    if (out.empty()) out.push_back(source_);
    return out;
}

NetworkDescription CacheNetwork::describe() const {
    NetworkDescription desc{names_, names_[source_], source_dist_, {}};
    for (const auto& l : links_) {
        desc.links.push_back(LinkDescription{names_[l.from], names_[l.to], l.dist, l.priority});
    }
    return desc;
}

Topology validate(const NetworkDescription& desc) { return CacheNetwork(desc).topology(); }

std::vector<std::size_t> path_to_source(const CacheNetwork& net, std::size_t node) {
    if (net.topology() == Topology::General) {
        throw Error(ErrorKind::NotATree, "closed form requires tree: node '" + net.name(node) +
                                             "' has no unique path to the source");
    }
    std::vector<std::size_t> path;
    for (std::size_t cur = node; cur != net.source();) {
        const std::size_t k = net.incoming(cur).front();
        path.push_back(k);
        cur = net.links()[k].from;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace vage
