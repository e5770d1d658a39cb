#pragma once

#include <gmpxx.h>

#include "rtmkit/rtm.hpp"

namespace rtmkit {

// Injective machine coding: rules as 6-tuples under an iterated Cantor
// pairing over integer-coded alphabets. 0 is not a valid code.
mpz_class godel_encode(const Rtm& m);

// Inverse; states come back canonically renumbered (s0, s1, ...). Throws
// "not an RTM code" on invalid input.
Rtm godel_decode(const mpz_class& code);

std::string godel_encode_str(const Rtm& m);
Rtm godel_decode_str(const std::string& code);

}  // namespace rtmkit
