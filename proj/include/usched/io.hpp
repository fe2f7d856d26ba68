#pragma once

#include <string>
#include <string_view>

#include "usched/model.hpp"

namespace usched {

/// Malformed instance or schedule text. `line()` is 1-based, 0 when the
/// problem is not tied to one line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Instance text:
//   jobs <n>
//   machines <m>
//   edge <u> <v>     (zero or more, u ≺ v)
// Lines starting with '#' and blank lines are ignored.
Instance parse_instance(std::string_view text);
/// Canonical form: covering edges only, sorted.
std::string emit_instance(const Instance& inst);

// Schedule text:
//   makespan <T'>
//   job <j> <t>      (one per scheduled job)
Schedule parse_schedule(std::string_view text);
std::string emit_schedule(const Schedule& sched);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace usched
