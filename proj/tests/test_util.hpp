// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "authentree/bytes.hpp"

namespace authentree::test {

inline std::string source_dir() { return AUTHENTREE_SOURCE_DIR; }

struct HashVector {
    Bytes input;
    std::string digest_hex;
};

/// Parses the plain hex-pair vector format: input_hex whitespace digest_hex
/// per line, "-" for the empty input, "#" comments.
inline std::vector<HashVector> load_hash_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vector file: " + path);
    std::vector<HashVector> vectors;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string input_hex, digest_hex;
        fields >> input_hex >> digest_hex;
        HashVector v;
        if (input_hex != "-") v.input = from_hex(input_hex);
        v.digest_hex = digest_hex;
        vectors.push_back(std::move(v));
    }
    return vectors;
}

inline Bytes ascii(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace authentree::test
