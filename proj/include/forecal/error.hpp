// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace forecal {

enum class ErrorKind {
    config,            // malformed configuration or parameters
    input,             // malformed or exhausted input data
    invalid_forecast,  // a forecaster produced a value outside [0,1]
    prior_contradicted,
    cap_exceeded,      // player-2 turn ran past its termination bound
    io,
};

/// Process exit code associated with an error kind (0 is reserved for success).
int exit_code(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void throw_invalid_forecast(double value, std::int64_t day);

}  // namespace forecal
