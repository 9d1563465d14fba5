// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/core.hpp"

#include <algorithm>
#include <cstdio>

#include "forecal/error.hpp"

namespace forecal {

Prefix::Prefix(std::vector<Bit> bits) : bits_(std::move(bits)) {
    ones_ = std::count(bits_.begin(), bits_.end(), Bit::one);
}

void Prefix::push_back(Bit b) {
    bits_.push_back(b);
    ones_ += to_int(b);
}

void Prefix::append(const Prefix& tail) {
    bits_.insert(bits_.end(), tail.bits_.begin(), tail.bits_.end());
    ones_ += tail.ones_;
}

Prefix Prefix::head(std::size_t n) const {
    n = std::min(n, bits_.size());
    return Prefix(std::vector<Bit>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool Prefix::starts_with(const Prefix& other) const noexcept {
    return other.size() <= size() && std::equal(other.bits_.begin(), other.bits_.end(), bits_.begin());
}

Prefix parse_prefix(std::string_view text) {
    std::vector<Bit> bits;
    bits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '0' && c != '1') {
            throw Error(ErrorKind::input,
                        "invalid character in bit string at index " + std::to_string(i));
        }
        bits.push_back(bit_from(c == '1'));
    }
    return Prefix(std::move(bits));
}

std::string render_prefix(const Prefix& prefix) {
    std::string out;
    out.reserve(prefix.size());
    for (Bit b : prefix.bits()) out.push_back(b == Bit::one ? '1' : '0');
    return out;
}

Forecast::Forecast(double p) : p_(p) {
    if (!valid(p)) throw_invalid_forecast(p, 0);
}

Forecast Forecast::checked(double p, Day day) {
    if (!valid(p)) throw_invalid_forecast(p, day);
    return Forecast(p, Unchecked{});
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace forecal
