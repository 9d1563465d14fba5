// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/json_fields.hpp"

#include <cmath>

#include "forecal/error.hpp"

namespace forecal::json_fields {

void fail(const std::string& path, const std::string& message) {
    throw Error(ErrorKind::config, (path.empty() ? std::string("/") : path) + ": " + message);
}

std::string child(const std::string& path, std::string_view key) {
    return path + "/" + std::string(key);
}

std::string child(const std::string& path, std::size_t index) {
    return path + "/" + std::to_string(index);
}

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    require_object(j, path);
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || item.key() == a;
        if (!known) fail(child(path, item.key()), "unknown key");
    }
}

const Json& required(const Json& j, const std::string& path, std::string_view key) {
    auto it = j.find(std::string(key));
    if (it == j.end()) fail(child(path, key), "missing required field");
    return *it;
}

double as_real(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

std::int64_t as_int(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(INT64_MAX)) fail(path, "integer out of range");
        return static_cast<std::int64_t>(v);
    }
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::uint64_t as_uint64(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    fail(path, "expected a nonnegative integer");
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double get_real(const Json& j, const std::string& path, std::string_view key) {
    return as_real(required(j, path, key), child(path, key));
}

std::int64_t get_int(const Json& j, const std::string& path, std::string_view key) {
    return as_int(required(j, path, key), child(path, key));
}

std::uint64_t get_uint64(const Json& j, const std::string& path, std::string_view key) {
    return as_uint64(required(j, path, key), child(path, key));
}

std::string get_string(const Json& j, const std::string& path, std::string_view key) {
    return as_string(required(j, path, key), child(path, key));
}

std::optional<double> opt_real(const Json& j, const std::string& path, std::string_view key) {
    if (!j.contains(std::string(key))) return std::nullopt;
    return get_real(j, path, key);
}

std::optional<std::int64_t> opt_int(const Json& j, const std::string& path, std::string_view key) {
    if (!j.contains(std::string(key))) return std::nullopt;
    return get_int(j, path, key);
}

std::optional<std::uint64_t> opt_uint64(const Json& j, const std::string& path,
                                        std::string_view key) {
    if (!j.contains(std::string(key))) return std::nullopt;
    return get_uint64(j, path, key);
}

}  // namespace forecal::json_fields
