#pragma once

#include <stdexcept>
#include <string>

#include "neurogate/planner/domain.hpp"

namespace neurogate::planner {

// Parse failure with the source position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error("parse error at line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

DomainDef parse_domain(const std::string& text);
ProblemDef parse_problem(const std::string& text);

DomainDef load_domain(const std::string& path);
ProblemDef load_problem(const std::string& path);

// Canonical text form; parse(print(d)) reproduces d exactly.
std::string print_domain(const DomainDef& d);
std::string print_problem(const ProblemDef& p);

// Content hash of the canonical form, independent of the source layout.
std::uint64_t domain_hash(const DomainDef& d);

}  // namespace neurogate::planner
