#pragma once

#include <string>

#include "rtmkit/lts.hpp"
#include "rtmkit/rtm.hpp"

namespace rtmkit {

// Parse errors carry 1-based line (and column where meaningful) positions.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_ = 0)
        : std::runtime_error(msg + " at line " + std::to_string(line_) +
                             (column_ ? ", column " + std::to_string(column_) : std::string{})),
          line(line_),
          column(column_) {}
};

// .rtm text format
Rtm parse_rtm(const std::string& text);
std::string write_rtm(const Rtm& m);

// Extended Aldebaran .lts format, bit-exact:
//   des (<initial>, <#transitions>, <#states>)
//   (<src>, "<label>", <dst>)
//   final: <id> ...
//   frontier: <id> ...
FiniteLts parse_lts(const std::string& text);
std::string write_lts(const FiniteLts& lts);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace rtmkit
