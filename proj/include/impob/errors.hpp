#pragma once

#include <stdexcept>
#include <string>

namespace impob {

// Base for all recoverable input-level failures. CLI maps these to exit 2.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_mismatch : error {
    using error::error;
};

// det(sE - A) is the zero polynomial; no unique solution theory applies.
struct irregular_pencil : error {
    using error::error;
};

struct singular_matrix : error {
    using error::error;
};

struct not_nilpotent : error {
    using error::error;
};

struct invalid_argument : error {
    using error::error;
};

// A witness failed re-verification inside a transform that must preserve it.
struct invalid_witness : error {
    using error::error;
};

struct parse_error : error {
    using error::error;
};

// Internal consistency broken (e.g. the per-order checks disagree with each
// other). Never triggered by bad input; indicates a bug.
struct internal_defect : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace impob
