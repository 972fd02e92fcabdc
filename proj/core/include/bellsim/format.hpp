// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace bellsim {

/// Shortest %.{sig}g rendering of v.
std::string format_sig(double v, int significant = 12);

/// v rounded to `significant` decimal digits (format + parse back).
double round_sig(double v, int significant = 12);

}  // namespace bellsim
