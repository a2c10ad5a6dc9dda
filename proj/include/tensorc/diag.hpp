// Copyright (c) 2026 The tensorc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Source locations and diagnostic errors shared by all compiler stages.

#pragma once

#include <stdexcept>
#include <string>

namespace tensorc {

struct SrcLoc {
    int line = 0;  // 1-based; 0 = unknown
    int col = 0;
    std::string to_string() const {
        if (line == 0) return "<unknown>";
        return std::to_string(line) + ":" + std::to_string(col);
    }
};

enum class ErrKind {
    SyntaxError,
    DuplicateName,
    UnknownLayerKind,
    UnboundName,
    ArityError,
    ShapeMismatch,
    NonPositiveExtent,
    NotDifferentiable,
    InvalidSlot,
    CycleDetected,
    PassBudgetExceeded,
    Internal,
};

const char* err_kind_name(ErrKind k);

// Compile-time diagnostic. The CLI prints these as file:line:col: kind: message
// and exits with status 1.
class CompileError : public std::runtime_error {
public:
    CompileError(ErrKind kind, SrcLoc loc, const std::string& msg)
        : std::runtime_error(msg), kind(kind), loc(loc) {}
    ErrKind kind;
    SrcLoc loc;
};

// Runtime I/O failure (missing file, unwritable dir). CLI exit status 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed binary input (snapshot or IDX file).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(ErrKind kind, SrcLoc loc, const std::string& msg) {
    throw CompileError(kind, loc, msg);
}

[[noreturn]] inline void fail(ErrKind kind, const std::string& msg) {
    throw CompileError(kind, SrcLoc{}, msg);
}

}  // namespace tensorc
