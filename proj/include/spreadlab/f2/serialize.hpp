#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "set.hpp"
#include "subspace.hpp"

namespace spreadlab::f2 {

using nlohmann::json;

inline json set_to_json(const F2Set& s) {
    return json{{"n", s.ambient_dim()}, {"members", s.members()}};
}

inline int json_dim(const json& j, const char* what) {
    require(j.is_object() && j.contains("n") && j["n"].is_number_integer(),
            std::string(what) + " JSON needs an integer field \"n\"");
    int n = j["n"].get<int>();
    check_dim(n);
    return n;
}

inline std::uint32_t json_point(const json& v, int n, const char* what) {
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
            std::string(what) + " must be a nonnegative integer");
    auto x = v.get<std::uint64_t>();
    require(x < universe_size(n), std::string(what) + " " + std::to_string(x) +
                                      " outside F_2^" + std::to_string(n));
    return static_cast<std::uint32_t>(x);
}

inline F2Set set_from_json(const json& j) {
    const int n = json_dim(j, "set");
    require(j.contains("members") && j["members"].is_array(), "set JSON needs a \"members\" array");
    F2Set s(n);
    std::int64_t previous = -1;
    for (const auto& m : j["members"]) {
        auto v = json_point(m, n, "member");
        require(static_cast<std::int64_t>(v) > previous, "set members must be strictly ascending");
        previous = v;
        s.insert(v);
    }
    return s;
}

inline json subspace_to_json(const AffineSubspace& V) {
    return json{{"n", V.ambient_dim()}, {"offset", V.offset()}, {"basis", V.basis()}};
}

// Any independent basis is accepted; the result is canonicalized.
inline AffineSubspace subspace_from_json(const json& j) {
    const int n = json_dim(j, "subspace");
    std::uint32_t offset = 0;
    if (j.contains("offset")) offset = json_point(j["offset"], n, "offset");
    std::vector<std::uint32_t> basis;
    if (j.contains("basis")) {
        require(j["basis"].is_array(), "subspace \"basis\" must be an array");
        for (const auto& b : j["basis"]) basis.push_back(json_point(b, n, "basis vector"));
    }
    return AffineSubspace::from_independent(n, basis, offset);
}

// Binary form: u64 little-endian bit length 2^n, then the bitset LSB-first, ceil(2^n / 8) bytes.
inline void write_set_binary(std::ostream& out, const F2Set& s) {
    const std::uint64_t bits = s.universe();
    for (int k = 0; k < 8; ++k) out.put(static_cast<char>((bits >> (8 * k)) & 0xFF));
    const std::uint64_t bytes = (bits + 7) / 8;
    auto words = s.words();
    for (std::uint64_t b = 0; b < bytes; ++b)
        out.put(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFF));
}

inline F2Set read_set_binary(std::istream& in) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) {
        int c = in.get();
        require(c != EOF, "truncated binary set header");
        bits |= static_cast<std::uint64_t>(c & 0xFF) << (8 * k);
    }
    require(bits >= 2 && (bits & (bits - 1)) == 0, "binary set length must be a power of two >= 2");
    const int n = std::countr_zero(bits);
    check_dim(n);
    std::vector<std::uint64_t> words(F2Set::word_count(n), 0);
    const std::uint64_t bytes = (bits + 7) / 8;
    for (std::uint64_t b = 0; b < bytes; ++b) {
        int c = in.get();
        require(c != EOF, "truncated binary set body");
        words[b / 8] |= static_cast<std::uint64_t>(c & 0xFF) << (8 * (b % 8));
    }
    return F2Set::from_words(n, std::move(words));
}

} // namespace spreadlab::f2
