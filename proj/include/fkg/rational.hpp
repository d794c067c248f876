#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fkg {

// Exact arithmetic: unbounded integers and rationals. No floating point
// anywhere in the core; every identity check is an exact equality.
using Int = mpz_class;
using Rat = mpq_class;

// Canonical rational with q > 0 in lowest terms.
Rat make_rat(long num, long den);

// Serialized form is always the explicit "p/q" (q > 0, lowest terms),
// so integers render as "3/1" and zero as "0/1".
std::string rat_to_string(const Rat& q);

// Accepts "p/q" or a bare integer "p". Throws InputError on garbage or q = 0.
Rat rat_from_string(std::string_view text);

Int factorial(unsigned n);

// q^e for e >= 0.
Rat rat_pow(const Rat& base, unsigned exp);

} // namespace fkg
