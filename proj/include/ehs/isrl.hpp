#pragma once

// Text format for interpreted systems:
//
//   agent env                 # first agent is the environment
//     states l0
//     init l0
//     actions a1 a2
//     protocol l0: a1 a2
//     trans l0 (a1,*) l0      # one slot per agent, * matches anything
//   config g1 = (l0,l1)
//   label p = g1 (g1+g2)* g3
//
// Labels may use aliases or inline tuples as symbols.

#include <string>
#include <string_view>

#include "ehs/system.hpp"

namespace ehs {

// Throws ParseError (position is the column; the message names the line).
SystemDescription parse_isrl(std::string_view text);
InterpretedSystem load_isrl(std::string_view text);
InterpretedSystem load_isrl_file(const std::string& path);

std::string write_isrl(const SystemDescription& desc);

// The reachable part of t^G.
std::string tg_to_dot(const InterpretedSystem& sys);

std::string read_text_file(const std::string& path);

}  // namespace ehs
