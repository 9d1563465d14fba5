// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/error.hpp"

#include <cstdio>

namespace forecal {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config:
        case ErrorKind::input:
            return 2;
        case ErrorKind::invalid_forecast:
        case ErrorKind::prior_contradicted:
            return 3;
        case ErrorKind::cap_exceeded:
            return 4;
        case ErrorKind::io:
            return 5;
    }
    return 1;
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config: return "config error";
        case ErrorKind::input: return "input error";
        case ErrorKind::invalid_forecast: return "invalid forecast";
        case ErrorKind::prior_contradicted: return "prior contradicted";
        case ErrorKind::cap_exceeded: return "cap exceeded";
        case ErrorKind::io: return "I/O error";
    }
    return "unknown error";
}

void throw_invalid_forecast(double value, std::int64_t day) {
    char buf[96];
    if (day > 0) {
        std::snprintf(buf, sizeof buf, "invalid forecast at day %lld: %.17g",
                      static_cast<long long>(day), value);
    } else {
        std::snprintf(buf, sizeof buf, "invalid forecast: %.17g", value);
    }
    throw Error(ErrorKind::invalid_forecast, buf);
}

}  // namespace forecal
