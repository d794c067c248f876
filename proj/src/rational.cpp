#include "fkg/rational.hpp"

#include "fkg/errors.hpp"

#include <cctype>

namespace fkg {

Rat make_rat(long num, long den) {
    if (den == 0) throw InputError("rational: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

bool looks_like_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rat rat_from_string(std::string_view text) {
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos
                               ? std::string_view("1")
                               : text.substr(slash + 1);
    if (!looks_like_integer(num) || !looks_like_integer(den))
        throw InputError("rational: cannot parse \"" + std::string(text) + "\"");
    Int n(std::string(num), 10);
    Int d(std::string(den), 10);
    if (d == 0) throw InputError("rational: zero denominator in \"" + std::string(text) + "\"");
    Rat q(n);
    q /= Rat(d);
    return q;
}

Int factorial(unsigned n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

Rat rat_pow(const Rat& base, unsigned exp) {
    Rat r(1);
    Rat b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

} // namespace fkg
