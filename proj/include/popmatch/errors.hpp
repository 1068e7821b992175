#pragma once

#include <stdexcept>
#include <string>

namespace popmatch {

// Error taxonomy, one class per CLI exit code.
//
//   ValidationError -> exit 1   malformed or inconsistent input
//   InfeasibleError -> exit 2   no perfect matching can exist
//   NotPopularError -> exit 3   verdict-style failure (verify/lift)
//   InternalError   -> exit 4   a runtime invariant of the algorithms broke;
//                               always a bug, never a property of the input
//   EnumLimitError  -> exit 5   enumeration exceeded POPMATCH_MAX_ENUM

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct NotPopularError : std::runtime_error {
    explicit NotPopularError(const std::string& what) : std::runtime_error(what) {}
};

struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

struct EnumLimitError : std::runtime_error {
    explicit EnumLimitError(const std::string& what) : std::runtime_error(what) {}
};

inline void internal_check(bool ok, const char* what) {
    if (!ok) throw InternalError(what);
}

} // namespace popmatch
