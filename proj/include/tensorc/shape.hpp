// Copyright (c) 2026 The tensorc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tensorc {

// Concrete tensor shape, batch-major (NCHW for rank 4). All extents >= 1
// once inference has run; the element count must fit a 63-bit integer.
struct Shape {
    std::vector<std::int64_t> dims;

    Shape() = default;
    Shape(std::initializer_list<std::int64_t> d) : dims(d) {}
    explicit Shape(std::vector<std::int64_t> d) : dims(std::move(d)) {}

    int rank() const { return static_cast<int>(dims.size()); }

    std::int64_t count() const {
        std::int64_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }

    // f32 element size; Fig-style tables always account in 4-byte elements.
    std::int64_t bytes() const { return 4 * count(); }

    bool operator==(const Shape& o) const { return dims == o.dims; }
    bool operator!=(const Shape& o) const { return dims != o.dims; }

    // "500 1 28 28" — the dimensions column format.
    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < dims.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(dims[i]);
        }
        return s;
    }
};

}  // namespace tensorc
