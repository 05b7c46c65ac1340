#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace uavnet::toml {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::string source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Reads the subset of TOML that scenario files use: comments, [tables], [[arrays of tables]],
/// bare or dotted keys, strings, integers, floats, booleans, arrays and inline tables.
/// Dates and multi-line strings are rejected.
nlohmann::json parse(std::istream& in, const std::string& source = "<input>");
nlohmann::json parse(const std::string& text, const std::string& source = "<input>");

/// Inverse of parse for JSON trees made of objects, arrays and scalars (no nulls).
/// Floats are written with enough digits to read back bit-identical.
std::string dump(const nlohmann::json& doc);

} // namespace uavnet::toml
