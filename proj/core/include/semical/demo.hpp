#pragma once

// Built-in demonstration fields, generated as commented CALFIELD text.

#include "semical/calfield.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace semical {

/// Names accepted by demo_calfield, in display order.
const std::vector<std::string>& demo_names();

/// CALFIELD text of the named demo. Throws Error for an unknown name.
///
///   standard        g = I_4, omega = dx1^dx2 + dx3^dx4 on a 3x3 grid
///   scaled          g = I_4, omega = dx1^dx2 + 0.5 dx3^dx4, 3 points
///   rank-deficient  g = I_4, omega = dx1^dx2, 3 points
///   odd3            g = I_3, omega = cos t dx1^dx2 + sin t dx2^dx3
///   ramp            omega = dx1^dx2 + s dx3^dx4, s = 0.6 ... 1.0
///   ramp-gap        omega = dx1^dx2 + s dx3^dx4, s = 0.6 ... 0.1
std::string demo_calfield(std::string_view name);

}  // namespace semical
