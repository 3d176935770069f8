#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vage {

enum class ErrorKind {
    InvalidParameter,
    InfiniteMoment,
    NoFutureEvent,
    UnknownNode,
    DuplicateNode,
    SelfLoop,
    DuplicateLink,
    DuplicatePriority,
    SourceHasIncoming,
    CycleThroughSource,
    UnreachableNode,
    NotATree,
    ConfigParse,
};

std::string_view to_string(ErrorKind kind);

// Every module reports failures through this type; `kind()` lets callers
// branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace vage
