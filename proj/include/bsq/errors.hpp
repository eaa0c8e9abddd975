#pragma once

#include <stdexcept>
#include <string>

namespace bsq {

/** Raised when any parser rejects its input. */
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/** Raised when a construction would exceed an explicit budget
 *  (state counts, materialization bounds, search depths). */
struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/** Raised when two objects with distinct base parameters q are combined. */
struct q_mismatch : std::runtime_error {
    explicit q_mismatch(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bsq
