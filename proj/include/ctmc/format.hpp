#pragma once

#include <string>
#include <string_view>

namespace ctmc {

// Shortest decimal form that round-trips to the same double.
std::string format_shortest(double v);

// 17 significant digits, as used by the JSON report emitters.
std::string format_sig17(double v);

std::string json_escape(std::string_view s);

}  // namespace ctmc
