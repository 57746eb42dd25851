#pragma once

#include <string>

namespace chebplan {

// Shortest decimal string that parses back to exactly the same double.
// Keeps config echoes and CSV logs readable and byte-reproducible.
std::string format_double(double v);

}  // namespace chebplan
