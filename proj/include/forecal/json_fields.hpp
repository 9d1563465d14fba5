// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Strict field access for JSON descriptors. Every failure is an
// Error(config) whose message starts with the JSON pointer of the field.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace forecal {

using Json = nlohmann::json;

namespace json_fields {

[[noreturn]] void fail(const std::string& path, const std::string& message);

std::string child(const std::string& path, std::string_view key);
std::string child(const std::string& path, std::size_t index);

void require_object(const Json& j, const std::string& path);
/// Rejects keys outside `allowed`.
void check_keys(const Json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed);

const Json& required(const Json& j, const std::string& path, std::string_view key);

double as_real(const Json& j, const std::string& path);
std::int64_t as_int(const Json& j, const std::string& path);
std::uint64_t as_uint64(const Json& j, const std::string& path);
std::string as_string(const Json& j, const std::string& path);

double get_real(const Json& j, const std::string& path, std::string_view key);
std::int64_t get_int(const Json& j, const std::string& path, std::string_view key);
std::uint64_t get_uint64(const Json& j, const std::string& path, std::string_view key);
std::string get_string(const Json& j, const std::string& path, std::string_view key);

std::optional<double> opt_real(const Json& j, const std::string& path, std::string_view key);
std::optional<std::int64_t> opt_int(const Json& j, const std::string& path, std::string_view key);
std::optional<std::uint64_t> opt_uint64(const Json& j, const std::string& path, std::string_view key);

}  // namespace json_fields
}  // namespace forecal
