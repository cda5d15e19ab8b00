#pragma once

#include <string>

namespace swblow {

// Renders v with 17 significant digits, '.' as the
// decimal point and no locale. nan and inf are written as "nan", "inf", "-inf".
std::string format_number(double v);

}  // namespace swblow
