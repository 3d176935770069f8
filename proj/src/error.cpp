#include "vage/error.hpp"

namespace vage {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InfiniteMoment: return "InfiniteMoment";
    case ErrorKind::NoFutureEvent: return "NoFutureEvent";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::DuplicateNode: return "DuplicateNode";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateLink: return "DuplicateLink";
    case ErrorKind::DuplicatePriority: return "DuplicatePriority";
    case ErrorKind::SourceHasIncoming: return "SourceHasIncoming";
    case ErrorKind::CycleThroughSource: return "CycleThroughSource";
    case ErrorKind::UnreachableNode: return "UnreachableNode";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::ConfigParse: return "ConfigParse";
    }
    return "Unknown";
}

} // namespace vage
