#include "pmcvol/io/number_format.hpp"

#include "pmcvol/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace pmcvol::io {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput("not a number: '" + std::string(text) + "'");
    }
    return value;
}

long long parse_integer(std::string_view text) {
    text = trim(text);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace pmcvol::io
