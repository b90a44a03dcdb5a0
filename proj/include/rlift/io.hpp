#pragma once

#include <iosfwd>
#include <string>

#include "rlift/graph.hpp"

namespace rlift {

// Text format: first line "h m", then m lines "u v" (0-based).
BaseGraph read_base_graph_text(std::istream& in);
BaseGraph read_base_graph_file(const std::string& path);
void write_base_graph_text(std::ostream& out, const BaseGraph& g);

// JSON: {"base": {"h":..,"edges":[[u,v],..]}, "n":.., "perms": {"u-v": [..], ..}}
std::string lift_to_json(const Lift& lift);
Lift lift_from_json(const std::string& text);
void save_lift(const std::string& path, const Lift& lift);
Lift load_lift(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rlift
