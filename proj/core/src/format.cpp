// SPDX-License-Identifier: Apache-2.0
#include "bellsim/format.hpp"

#include <cstdio>
#include <cstdlib>

namespace bellsim {

std::string format_sig(double v, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

double round_sig(double v, int significant) {
    return std::strtod(format_sig(v, significant).c_str(), nullptr);
}

}  // namespace bellsim
